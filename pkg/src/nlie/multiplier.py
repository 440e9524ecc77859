"""c-nilpotent multipliers of nilpotent n-Lie algebras.

For a nilpotent algebra L of class m on d generators, the engine works in
the free nilpotent cover E of class m + c on d generators (truncation is
harmless: both the numerator and the denominator of the multiplier contain
every bracket of weight above m + c).  With phi : E -> L the evaluation map
and Rbar its kernel,

    multiplier dim  =  dim( gamma_{c+1}(E) /\\ Rbar )  -  dim gamma_{c+1}(Rbar, E, ..., E)

and the c-th star centre of L is the image under phi of the c-th centre of
E / gamma_{c+1}(Rbar, E, ..., E); L is c-capable exactly when that image is
zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .algebra import (
    AlgebraSubspace,
    NotNilpotentError,
    StructureAlgebra,
    bracket_product,
    gamma_term,
    nilpotency_class,
    quotient_algebra,
    z_term,
)
from .free_algebra import (
    DEFAULT_MAX_TREES,
    FreeNilpotentAlgebra,
    free_nilpotent,
    graded_dimension,
)
from .linalg import (
    Subspace,
    Vector,
    apply_rows,
    left_kernel,
    subspace_intersect,
    unit_vector,
)
from .trees import Tree, is_generator

_F1 = Fraction(1)

_HOM_SPOT_CHECKS = 25
_TRUNCATION_CHECK_LIMIT = 12


@dataclass(frozen=True)
class Presentation:
    """Truncated free presentation of a nilpotent algebra."""

    algebra: StructureAlgebra
    c: int
    nil_class: int
    free: FreeNilpotentAlgebra
    lifts: tuple[Vector, ...]
    phi: tuple[Vector, ...]
    kernel: AlgebraSubspace


def present(
    algebra: StructureAlgebra,
    c: int,
    lifts: tuple[Vector, ...] | None = None,
    extra_class: int = 0,
    max_trees: int | None = DEFAULT_MAX_TREES,
) -> Presentation:
    """Build the class-(m + c) free presentation of a nilpotent algebra.

    Generator lifts default to the unit vectors at the echelon complement of
    the derived subalgebra; any other complement basis may be supplied.
    """
    if c < 1:
        raise ValueError("c must be at least 1")
    m = nilpotency_class(algebra)
    if m is None:
        raise NotNilpotentError("free presentation requires a nilpotent algebra")
    gamma2 = gamma_term(algebra, 2)
    comp = gamma2.space.complement_coords()
    d = len(comp)
    if lifts is None:
        lifts = tuple(unit_vector(algebra.dim, j) for j in comp)
    else:
        lifts = tuple(tuple(Fraction(x) for x in row) for row in lifts)
        if len(lifts) != d or any(len(row) != algebra.dim for row in lifts):
            raise ValueError(f"expected {d} lift vectors of length {algebra.dim}")
        residues = [gamma2.space.reduce(row) for row in lifts]
        if Subspace.from_vectors(residues, algebra.dim).dim != d:
            raise ValueError("lift vectors do not project onto a basis modulo the derived subalgebra")
    free = free_nilpotent(algebra.n, d, max(m + c + extra_class, 1), max_trees)
    phi = _evaluate_basis(algebra, free.basis_trees, lifts)
    if Subspace.from_vectors(phi, algebra.dim).dim != algebra.dim:
        raise AssertionError("presentation map is not surjective")
    _check_homomorphism(algebra, free, phi)
    kernel = AlgebraSubspace(free.algebra, left_kernel(phi, algebra.dim))
    for i in range(free.dim):
        if free.weights[i] > m and not kernel.space.contains_vector(unit_vector(free.dim, i)):
            raise AssertionError("kernel misses a layer above the nilpotency class")
    return Presentation(algebra, c, m, free, lifts, phi, kernel)


def _evaluate_basis(
    algebra: StructureAlgebra, basis_trees: tuple[Tree, ...], lifts: tuple[Vector, ...]
) -> tuple[Vector, ...]:
    cache: dict[Tree, dict[int, Fraction]] = {}

    def ev(tree: Tree) -> dict[int, Fraction]:
        if is_generator(tree):
            return {i: c for i, c in enumerate(lifts[tree - 1]) if c}
        got = cache.get(tree)
        if got is None:
            got = algebra.bracket(*[ev(child) for child in tree])
            cache[tree] = got
        return got

    rows = []
    for tree in basis_trees:
        value = ev(tree)
        rows.append(tuple(value.get(i, Fraction(0)) for i in range(algebra.dim)))
    return tuple(rows)


def _check_homomorphism(
    algebra: StructureAlgebra, free: FreeNilpotentAlgebra, phi: tuple[Vector, ...]
) -> None:
    """Spot-check that evaluation intertwines the brackets."""
    for args in list(free.algebra.table)[:_HOM_SPOT_CHECKS]:
        image = free.algebra.table[args]
        lhs = apply_rows(image, phi, algebra.dim)
        rhs = algebra.bracket(*[phi[i] for i in args])
        dense_rhs = tuple(rhs.get(i, Fraction(0)) for i in range(algebra.dim))
        if lhs != dense_rhs:
            raise AssertionError(f"bracket not respected on basis tuple {args}")


def gamma_ideal_chain(p: Presentation) -> list[AlgebraSubspace]:
    """The chain U_1 = Rbar, U_{j+1} = [U_j, E, ..., E], up to U_{c+1}."""
    full = p.free.algebra.full_subspace()
    chain = [p.kernel]
    for _ in range(p.c):
        chain.append(bracket_product(chain[-1], *([full] * (p.free.n - 1))))
    return chain


@dataclass(frozen=True)
class MultiplierReport:
    """All quantities of one multiplier computation."""

    c: int
    algebra_dim: int
    nil_class: int
    free_dim: int
    kernel_dim: int
    gamma_dim: int
    gamma_cap_kernel_dim: int
    chain_dim: int
    multiplier_dim: int
    zstar_dim: int
    capable: bool

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "algebra_dim": self.algebra_dim,
            "nilpotency_class": self.nil_class,
            "dim_E": self.free_dim,
            "dim_Rbar": self.kernel_dim,
            "dim_gamma_c1_E": self.gamma_dim,
            "dim_gamma_c1_E_cap_Rbar": self.gamma_cap_kernel_dim,
            "dim_U": self.chain_dim,
            "multiplier_dim": self.multiplier_dim,
            "zcstar_dim": self.zstar_dim,
            "capable_c": self.capable,
        }


_ANALYSIS_CACHE: dict[tuple, tuple[MultiplierReport, Subspace]] = {}


def _analyze(
    algebra: StructureAlgebra,
    c: int,
    lifts: tuple[Vector, ...] | None = None,
    extra_class: int = 0,
    max_trees: int | None = DEFAULT_MAX_TREES,
) -> tuple[MultiplierReport, Subspace]:
    cache_key = (algebra.canonical_key(), c)
    if lifts is None and extra_class == 0:
        cached = _ANALYSIS_CACHE.get(cache_key)
        if cached is not None:
            return cached
    p = present(algebra, c, lifts, extra_class, max_trees)
    free_alg = p.free.algebra
    chain = gamma_ideal_chain(p)
    bottom = chain[-1]
    gamma = gamma_term(free_alg, c + 1)
    numerator = subspace_intersect(gamma.space, p.kernel.space)
    if not numerator.contains_subspace(bottom.space):
        raise AssertionError("denominator escaped the numerator subspace")
    quotient, comp = quotient_algebra(free_alg, bottom)
    zq = z_term(quotient, c)
    rows = [p.phi[j] for j in comp]
    star = Subspace.from_vectors(
        [apply_rows(z_row, rows, algebra.dim) for z_row in zq.space.basis],
        algebra.dim,
    )
    report = MultiplierReport(
        c=c,
        algebra_dim=algebra.dim,
        nil_class=p.nil_class,
        free_dim=p.free.dim,
        kernel_dim=p.kernel.dim,
        gamma_dim=gamma.dim,
        gamma_cap_kernel_dim=numerator.dim,
        chain_dim=bottom.dim,
        multiplier_dim=numerator.dim - bottom.space.dim,
        zstar_dim=star.dim,
        capable=star.dim == 0,
    )
    if lifts is None and extra_class == 0:
        # re-check the class-(m+c) truncation against a wider cover while
        # that is cheap
        if p.free.dim <= _TRUNCATION_CHECK_LIMIT:
            wider, _ = _analyze(algebra, c, extra_class=1, max_trees=max_trees)
            if (wider.multiplier_dim, wider.zstar_dim) != (
                report.multiplier_dim,
                report.zstar_dim,
            ):
                raise AssertionError("truncated cover disagrees with a wider cover")
        _ANALYSIS_CACHE[cache_key] = (report, star)
    return report, star


def multiplier_report(
    algebra: StructureAlgebra,
    c: int,
    lifts: tuple[Vector, ...] | None = None,
    max_trees: int | None = DEFAULT_MAX_TREES,
) -> MultiplierReport:
    """Full multiplier computation for a nilpotent algebra."""
    return _analyze(algebra, c, lifts, 0, max_trees)[0]


def multiplier_dim(algebra: StructureAlgebra, c: int) -> int:
    return multiplier_report(algebra, c).multiplier_dim


def z_star(algebra: StructureAlgebra, c: int) -> tuple[AlgebraSubspace, bool]:
    """The c-th star centre of L (image of the c-th centre of the free
    c-central extension) and the c-capability flag (capable iff zero)."""
    _, star = _analyze(algebra, c)
    return AlgebraSubspace(algebra, star), star.dim == 0


def is_capable(algebra: StructureAlgebra, c: int) -> bool:
    return z_star(algebra, c)[1]


def heisenberg_multiplier_dim(n: int, m: int, c: int) -> int:
    """Closed-form multiplier dimension of the Heisenberg algebra H(n, m).

    For c = 1 this is n when m = 1 and C(mn, n) - 1 otherwise; for c >= 2 it
    is the weight-(c+1) plus weight-(c+2) layer dimensions of the free
    algebra on n generators when m = 1, and the weight-(c+1) layer dimension
    on mn generators when m >= 2.  Layer dimensions come from the rank
    oracle.
    """
    if n < 2 or m < 1 or c < 1:
        raise ValueError("need n >= 2, m >= 1, c >= 1")
    if c == 1:
        return n if m == 1 else comb(m * n, n) - 1
    if m == 1:
        return graded_dimension(n, n, c + 1) + graded_dimension(n, n, c + 2)
    return graded_dimension(n, m * n, c + 1)


def random_lifts(algebra: StructureAlgebra, seed: int) -> tuple[Vector, ...]:
    """A randomized (but seeded, hence reproducible) complement basis for
    the derived subalgebra, for presentation-invariance checks."""
    gamma2 = gamma_term(algebra, 2)
    comp = gamma2.space.complement_coords()
    rng = random.Random(seed)
    d = len(comp)
    rows = []
    for pos, j in enumerate(comp):
        row = [Fraction(0)] * algebra.dim
        row[j] = _F1
        for other in comp[pos + 1 :]:
            row[other] = Fraction(rng.randint(-3, 3))
        for vec in gamma2.space.basis:
            f = Fraction(rng.randint(-3, 3))
            if f:
                row = [a + f * b for a, b in zip(row, vec)]
        rows.append(tuple(row))
    assert len(rows) == d
    return tuple(rows)


def truncation_consistent(algebra: StructureAlgebra, c: int) -> bool:
    """Spot-check that enlarging the presentation class by one does not
    change the reported dimensions."""
    base, _ = _analyze(algebra, c)
    wider, _ = _analyze(algebra, c, extra_class=1)
    return (
        base.multiplier_dim == wider.multiplier_dim
        and base.zstar_dim == wider.zstar_dim
    )


def clear_cache() -> None:
    _ANALYSIS_CACHE.clear()
