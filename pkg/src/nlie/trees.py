"""Bracket trees over a generating set, with a sign-carrying canonical form.

A tree is either a generator (a positive int, 1-based) or a tuple of exactly
n subtrees standing for one application of the n-ary bracket.  Antisymmetry
of the bracket is normalized away structurally: the canonical form of a tree
has the children at every node sorted strictly ascending under the total
tree order, and carries the sign of the sorting permutation (0 when two
children coincide, since the bracket kills repeated arguments).
"""

from __future__ import annotations

from typing import Union

Tree = Union[int, tuple]

_KEY_CACHE: dict[Tree, tuple] = {}
_WEIGHT_CACHE: dict[Tree, int] = {}


def is_generator(tree: Tree) -> bool:
    return isinstance(tree, int)


def check_tree(tree: Tree, n: int, d: int | None = None) -> None:
    """Validate shape: every internal node has exactly n children and
    generator indices are in range."""
    if is_generator(tree):
        if tree < 1 or (d is not None and tree > d):
            raise ValueError(f"generator index {tree} out of range")
        return
    if not isinstance(tree, tuple):
        raise ValueError(f"not a tree node: {tree!r}")
    if len(tree) != n:
        raise ValueError(f"bracket with {len(tree)} children, expected {n}")
    for child in tree:
        check_tree(child, n, d)


def leaf_count(tree: Tree) -> int:
    if is_generator(tree):
        return 1
    return sum(leaf_count(child) for child in tree)


def weight(tree: Tree) -> int:
    """Grading weight: generators have weight 1; a bracket of subtrees with
    weights w_1..w_n has weight sum(w_i) - n + 2."""
    if is_generator(tree):
        return 1
    cached = _WEIGHT_CACHE.get(tree)
    if cached is None:
        cached = sum(weight(child) for child in tree) - len(tree) + 2
        _WEIGHT_CACHE[tree] = cached
    return cached


def order_key(tree: Tree) -> tuple:
    """Sort key realizing the total tree order: generators by index, every
    generator below every bracket, brackets by (weight, children lexicographically)."""
    if is_generator(tree):
        return (1, tree)
    cached = _KEY_CACHE.get(tree)
    if cached is None:
        cached = (weight(tree),) + tuple(order_key(child) for child in tree)
        _KEY_CACHE[tree] = cached
    return cached


def compare_trees(a: Tree, b: Tree) -> int:
    """Total tree order as a three-way comparison (-1, 0, or +1)."""
    ka, kb = order_key(a), order_key(b)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def _permutation_sign(order: list[int]) -> int:
    seen = [False] * len(order)
    sign = 1
    for start in range(len(order)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def canonicalize(tree: Tree) -> tuple[int, Tree]:
    """Canonical form with sign.

    Returns ``(sign, canonical_tree)`` where sign is +1/-1 for the parity of
    the child-sorting permutations, or 0 when some node has two equal
    children.  Idempotent: canonical trees come back unchanged with sign +1.
    """
    if is_generator(tree):
        return 1, tree
    sign = 1
    kids = []
    for child in tree:
        s, c = canonicalize(child)
        if s == 0:
            return 0, tree
        sign *= s
        kids.append(c)
    keys = [order_key(c) for c in kids]
    order = sorted(range(len(kids)), key=keys.__getitem__)
    sorted_keys = [keys[i] for i in order]
    for a, b in zip(sorted_keys, sorted_keys[1:]):
        if a == b:
            return 0, tuple(kids[i] for i in order)
    sign *= _permutation_sign(order)
    return sign, tuple(kids[i] for i in order)


def tree_to_str(tree: Tree) -> str:
    if is_generator(tree):
        return f"x{tree}"
    return "[" + ",".join(tree_to_str(child) for child in tree) + "]"


def tree_to_json(tree: Tree):
    if is_generator(tree):
        return tree
    return [tree_to_json(child) for child in tree]


def tree_from_json(obj) -> Tree:
    if isinstance(obj, int):
        return obj
    if isinstance(obj, list):
        return tuple(tree_from_json(item) for item in obj)
    raise ValueError(f"not a serialized tree: {obj!r}")
