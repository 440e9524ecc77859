import random
from fractions import Fraction
from math import comb

import pytest
from sympy import divisors, mobius

from nlie.algebra import heisenberg, lower_central_series
from nlie.free_algebra import (
    ResourceLimitError,
    canon_trees,
    filippov_relations,
    free_nilpotent,
    graded_component,
    graded_dimension,
)
from nlie.linalg import Subspace
from nlie.trees import canonicalize, weight


def witt(d, w):
    """Necklace/Witt count of the weight-w layer of a free Lie algebra."""
    return sum(int(mobius(e)) * d ** (w // e) for e in divisors(w)) // w


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("w", [1, 2, 3, 4, 5])
def test_binary_layers_match_witt(d, w):
    assert graded_dimension(2, d, w) == witt(d, w)


@pytest.mark.parametrize("d,w", [(2, 6), (2, 7), (3, 6), (4, 6)])
def test_binary_layers_match_witt_higher_weights(d, w):
    assert graded_dimension(2, d, w) == witt(d, w)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_weight_two_layer_is_binomial(n, d):
    component = graded_component(n, d, 2)
    assert component.dim == comb(d, n)
    assert component.relations.dim == 0


def test_degenerate_generator_count():
    assert graded_dimension(3, 2, 1) == 2
    for w in (2, 3):
        assert graded_dimension(3, 2, w) == 0


def test_relation_examples():
    rows = filippov_relations(2, 2, 3)
    trees = canon_trees(2, 2, 3)
    rank = Subspace.from_vectors(
        [{k: v for k, v in row.items()} for row in rows], len(trees)
    ).dim
    assert len(trees) - rank == 2

    rows = filippov_relations(2, 3, 3)
    trees = canon_trees(2, 3, 3)
    rank = Subspace.from_vectors(rows, len(trees)).dim
    assert len(trees) - rank == 8

    assert filippov_relations(3, 3, 2) == []


def test_weight_three_rank_oracle():
    assert graded_dimension(2, 4, 3) == 20  # (4^3 - 4) / 3


def test_canon_trees_sorted_and_weighted():
    trees = canon_trees(2, 3, 4)
    assert all(weight(t) == 4 for t in trees)
    from nlie.trees import order_key

    keys = [order_key(t) for t in trees]
    assert keys == sorted(keys)
    assert all(canonicalize(t) == (1, t) for t in trees)


def test_free_nilpotent_smallest_is_heisenberg():
    built = free_nilpotent(2, 2, 2)
    assert built.dim == 3
    assert built.algebra.table == heisenberg(2, 1).table


def test_free_nilpotent_dims():
    assert free_nilpotent(2, 2, 4).dim == 2 + 1 + 2 + 3
    assert free_nilpotent(3, 3, 2).dim == 3 + 1


@pytest.mark.parametrize("n,d,k", [(2, 2, 3), (2, 2, 4), (2, 3, 2), (3, 3, 2), (3, 3, 3)])
def test_free_nilpotent_satisfies_filippov(n, d, k):
    assert free_nilpotent(n, d, k).algebra.validate().valid


@pytest.mark.parametrize("n,d,k", [(2, 2, 4), (2, 3, 3), (3, 3, 3)])
def test_lower_series_layers_match_oracle(n, d, k):
    built = free_nilpotent(n, d, k)
    chain = lower_central_series(built.algebra)
    dims = [s.dim for s in chain]
    for i, dim_i in enumerate(dims[:-1], start=1):
        expected = sum(graded_dimension(n, d, w) for w in range(i, k + 1))
        assert dim_i == expected
    assert dims[-1] == 0


def _random_identity_instance(rng, n, d, w):
    """A Jacobi instance with arbitrary (repeated, unsorted) canonical-tree
    arguments of total weight w."""
    pools = {v: canon_trees(n, d, v) for v in range(1, w)}
    while True:
        u = rng.randint(2, w - 1)
        t_weights = _random_composition(rng, u + n - 2, n)
        s_weights = _random_composition(rng, w - u + n - 2, n - 1)
        if t_weights is None or s_weights is None:
            continue
        if any(not pools[v] for v in t_weights + s_weights):
            continue
        ts = [rng.choice(pools[v]) for v in t_weights]
        ss = tuple(rng.choice(pools[v]) for v in s_weights)
        terms = [(1, (tuple(ts),) + ss)]
        for i in range(n):
            replaced = list(ts)
            replaced[i] = (ts[i],) + ss
            terms.append((-1, tuple(replaced)))
        return terms


def _random_composition(rng, total, parts):
    if total < parts:
        return None
    weights = [1] * parts
    for _ in range(total - parts):
        weights[rng.randrange(parts)] += 1
    return weights


@pytest.mark.parametrize("n,d,w", [(2, 2, 4), (2, 3, 4), (3, 3, 3), (2, 4, 4)])
def test_relation_span_is_saturated(n, d, w):
    """Extra identity instances and re-wrapped relations never grow the span."""
    component = graded_component(n, d, w)
    index_of = component.tree_index
    rng = random.Random(10 * n + d + w)

    def reduces_to_zero(terms):
        vec = {}
        for coeff, tree in terms:
            sign, ct = canonicalize(tree)
            if sign == 0:
                continue
            idx = index_of[ct]
            vec[idx] = vec.get(idx, Fraction(0)) + coeff * sign
        return not component.reduce(vec)

    for _ in range(30):
        assert reduces_to_zero(_random_identity_instance(rng, n, d, w))

    # wrap lower-weight relations in a non-leading slot
    for v in range(3, w):
        lower = graded_component(n, d, v)
        payload_weight = w - v + n - 2
        if lower.relations.dim == 0 or payload_weight < n - 1:
            continue
        payload_pool = canon_trees(n, d, 1)
        if payload_weight != n - 1 or not payload_pool:
            continue
        for row in lower.relations.basis[:3]:
            payload = tuple(rng.choice(payload_pool) for _ in range(n - 1))
            terms = []
            for col, val in enumerate(row):
                if val:
                    wrapped = (payload[0], lower.trees[col]) + payload[1:]
                    terms.append((val, wrapped))
            assert reduces_to_zero(terms)


@pytest.mark.parametrize("n,d,w", [(2, 3, 4), (3, 3, 3)])
def test_doubling_instances_fixes_rank(n, d, w):
    rows = filippov_relations(n, d, w)
    trees = canon_trees(n, d, w)
    once = Subspace.from_vectors(rows, len(trees)).dim
    twice = Subspace.from_vectors(rows + rows, len(trees)).dim
    assert once == twice == graded_component(n, d, w).relations.dim


def test_resource_guard():
    from nlie import free_algebra

    free_algebra.clear_caches()
    with pytest.raises(ResourceLimitError):
        canon_trees(2, 4, 5, max_trees=10)


def test_component_reduce_is_stable():
    component = graded_component(2, 3, 3)
    for idx in range(len(component.trees)):
        residue = component.reduce({idx: Fraction(1)})
        assert set(residue) <= set(component.basis_indices)
        again = component.reduce(residue)
        assert again == residue
