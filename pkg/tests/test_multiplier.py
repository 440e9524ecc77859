import os

import pytest

from nlie.algebra import (
    NotNilpotentError,
    StructureAlgebra,
    abelian,
    direct_sum,
    gamma_term,
    heisenberg,
    z_term,
)
from nlie.free_algebra import free_nilpotent, graded_dimension
from nlie.multiplier import (
    gamma_ideal_chain,
    heisenberg_multiplier_dim,
    is_capable,
    multiplier_report,
    present,
    random_lifts,
    truncation_consistent,
    z_star,
)
from fractions import Fraction


def test_present_abelian():
    p = present(abelian(3, 2), 1)
    assert p.free.dim == 3 + 3  # generators + weight-2 layer
    # kernel is exactly the bracket layers
    assert p.kernel.space == p.free.layer_span(2)


def test_present_heisenberg():
    p = present(heisenberg(2, 1), 1)
    assert p.free.dim == 5
    assert p.kernel.dim == 2
    assert p.kernel.space == p.free.layer_span(3)


def test_present_free_quotient_is_isomorphism_below_kernel():
    built = free_nilpotent(2, 2, 2)
    p = present(built.algebra, 1)
    # the cover restricted to weights <= 2 reproduces the algebra itself
    assert p.kernel.space == p.free.layer_span(3)
    for i in range(built.dim):
        assert p.phi[i] == tuple(
            Fraction(1) if j == i else Fraction(0) for j in range(built.dim)
        )


def test_present_rejects_non_nilpotent():
    solvable = StructureAlgebra(2, 2, table={(0, 1): {0: Fraction(1)}})
    with pytest.raises(NotNilpotentError):
        present(solvable, 1)


def test_gamma_chain_examples():
    # minimal (class m+c) cover of an abelian algebra: the chain bottoms out
    p = present(abelian(2, 2), 1)
    chain = gamma_ideal_chain(p)
    assert chain[0].space == p.free.layer_span(2)
    assert chain[1].dim == 0

    # one class higher, the chain drop is the whole weight-3 layer
    p = present(abelian(2, 2), 1, extra_class=1)
    chain = gamma_ideal_chain(p)
    assert chain[0].space == p.free.layer_span(2)
    assert chain[1].space == p.free.layer_span(3)
    assert chain[1].dim == graded_dimension(2, 2, 3)

    p = present(heisenberg(2, 1), 1)
    chain = gamma_ideal_chain(p)
    assert chain[1].dim == 0


def test_chain_contained_in_gamma():
    for alg, c in ((heisenberg(2, 1), 1), (heisenberg(2, 1), 2), (abelian(3, 2), 2)):
        p = present(alg, c)
        chain = gamma_ideal_chain(p)
        top = gamma_term(p.free.algebra, c + 1)
        assert top.space.contains_subspace(chain[-1].space)
        assert p.kernel.space.contains_subspace(chain[-1].space)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("c", [1, 2])
def test_abelian_multiplier_equals_oracle(d, c):
    assert multiplier_report(abelian(d, 2), c).multiplier_dim == graded_dimension(2, d, c + 1)


def test_abelian_multiplier_ternary():
    assert multiplier_report(abelian(3, 3), 1).multiplier_dim == graded_dimension(3, 3, 2)
    assert multiplier_report(abelian(3, 3), 2).multiplier_dim == graded_dimension(3, 3, 3)


def test_schur_multiplier_of_heisenbergs():
    assert multiplier_report(heisenberg(2, 1), 1).multiplier_dim == 2
    assert multiplier_report(heisenberg(2, 2), 1).multiplier_dim == 5
    assert multiplier_report(heisenberg(3, 1), 1).multiplier_dim == 3


def test_closed_form_matches_engine():
    assert heisenberg_multiplier_dim(2, 1, 1) == 2
    assert heisenberg_multiplier_dim(2, 2, 1) == 5
    assert heisenberg_multiplier_dim(2, 1, 2) == 5
    from math import comb

    assert heisenberg_multiplier_dim(3, 2, 1) == comb(6, 3) - 1
    for n, m, c in ((2, 1, 1), (2, 2, 1), (3, 1, 1), (2, 1, 2), (2, 2, 2), (3, 1, 2)):
        engine = multiplier_report(heisenberg(n, m), c).multiplier_dim
        assert engine == heisenberg_multiplier_dim(n, m, c)


@pytest.mark.parametrize(
    "n,d,k,c",
    [
        (2, 2, 2, 1),
        (2, 2, 2, 2),
        (2, 2, 3, 1),
        (2, 2, 3, 2),
        (2, 3, 2, 1),
        (3, 3, 2, 1),
        (3, 3, 2, 2),
    ],
)
def test_free_quotient_multiplier_is_layer_slice(n, d, k, c):
    """For L the free nilpotent quotient of class k, the defining kernel is
    exactly the weight > k tail, so the c-multiplier is the direct sum of
    the weight k+1 .. k+c layers of the free algebra."""
    built = free_nilpotent(n, d, k)
    got = multiplier_report(built.algebra, c).multiplier_dim
    want = sum(graded_dimension(n, d, w) for w in range(k + 1, k + c + 1))
    assert got == want


def test_direct_sum_multiplier_matches_kunneth_style_oracle():
    """For c = 1 and binary algebras, the multiplier of a direct sum is
    M(A) + M(B) + dim A^ab * dim B^ab; an independent classical value."""
    cases = [
        (heisenberg(2, 1), abelian(1, 2), 2 + 0 + 2 * 1),
        (heisenberg(2, 1), abelian(2, 2), 2 + 1 + 2 * 2),
        (abelian(2, 2), abelian(2, 2), 1 + 1 + 2 * 2),
    ]
    for left, right, want in cases:
        got = multiplier_report(direct_sum(left, right), 1).multiplier_dim
        assert got == want


def test_quaternary_heisenberg_multiplier():
    assert multiplier_report(heisenberg(4, 1), 1).multiplier_dim == 4
    assert heisenberg_multiplier_dim(4, 1, 1) == 4


@pytest.mark.skipif(
    not os.environ.get("NLIE_SLOW_TESTS"),
    reason="set NLIE_SLOW_TESTS=1 to run (about a minute)",
)
def test_heisenberg_c3_multiplier_closed_form():
    got = multiplier_report(heisenberg(2, 2), 3).multiplier_dim
    assert got == heisenberg_multiplier_dim(2, 2, 3) == 60


def test_free_quotients_are_capable():
    for n, d, k in ((2, 2, 2), (2, 2, 3), (3, 3, 2)):
        built = free_nilpotent(n, d, k)
        star, capable = z_star(built.algebra, 1)
        assert capable and star.dim == 0


def test_capability_of_heisenbergs():
    star, capable = z_star(heisenberg(2, 1), 1)
    assert capable and star.dim == 0

    h22 = heisenberg(2, 2)
    star, capable = z_star(h22, 1)
    assert not capable
    assert star.space == gamma_term(h22, 2).space


def test_star_centre_sits_in_centre_chain():
    for alg, c in ((heisenberg(2, 1), 1), (heisenberg(2, 2), 1), (heisenberg(2, 2), 2),
                   (abelian(3, 2), 2)):
        star, _ = z_star(alg, c)
        assert z_term(alg, c).space.contains_subspace(star.space)


def test_abelian_algebras_are_capable_for_c1_d_ge_2():
    assert is_capable(abelian(2, 2), 1)
    assert is_capable(abelian(3, 2), 1)


def test_presentation_invariance_under_lifts():
    for alg, c in ((heisenberg(2, 1), 1), (heisenberg(2, 2), 1),
                   (direct_sum(heisenberg(2, 1), abelian(1, 2)), 1)):
        base = multiplier_report(alg, c)
        for seed in (1, 2, 5):
            other = multiplier_report(alg, c, lifts=random_lifts(alg, seed))
            assert other.multiplier_dim == base.multiplier_dim
            assert other.zstar_dim == base.zstar_dim


def test_truncation_spot_checks():
    assert truncation_consistent(heisenberg(2, 1), 1)
    assert truncation_consistent(abelian(2, 2), 2)
    assert truncation_consistent(heisenberg(3, 1), 1)


def test_equivalence_of_star_membership_and_dimension_identity():
    """Central ideal M sits inside the c-th star centre iff the quotient
    multiplier dimension splits additively."""
    from nlie.algebra import quotient_algebra
    from nlie.linalg import subspace_intersect, unit_vector

    a3 = abelian(3, 2)
    cases = [
        (heisenberg(2, 2), gamma_term(heisenberg(2, 2), 2), 2),  # in the star centre
        (heisenberg(2, 1), gamma_term(heisenberg(2, 1), 2), 1),  # star centre is zero
        (a3, a3.subspace([unit_vector(3, 0)]), 1),               # capable abelian
    ]
    for alg, m, c in cases:
        assert z_term(alg, c).space.contains_subspace(m.space)
        star, _ = z_star(alg, c)
        member = star.space.contains_subspace(m.space)
        quotient, _ = quotient_algebra(alg, m)
        lhs = multiplier_report(quotient, c).multiplier_dim
        cap = subspace_intersect(m.space, gamma_term(alg, c + 1).space).dim
        rhs = multiplier_report(alg, c).multiplier_dim + cap
        assert member == (lhs == rhs)


def test_report_fields_are_consistent():
    rep = multiplier_report(heisenberg(2, 1), 2)
    assert rep.free_dim == free_nilpotent(2, 2, 4).dim
    assert rep.multiplier_dim == rep.gamma_cap_kernel_dim - rep.chain_dim
    assert rep.multiplier_dim >= 0
    d = rep.to_dict()
    assert d["multiplier_dim"] == 5
    assert d["capable_c"] in (True, False)
