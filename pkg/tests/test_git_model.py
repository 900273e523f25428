import itertools
from fractions import Fraction

import pytest

from conftest import XI2, XI3

from lagstab.errors import NonGenericXi, NotInShell, XiOutOfWindow
from lagstab.laurent import FieldSpec, LaurentMatrix, LaurentPoly
from lagstab.lattices import (
    ShellSpec,
    enumerate_shell,
    lattice_from_matrix,
    standard_lattice,
    translate,
)
from lagstab.gitstab import (
    GradedSubspace,
    TorusData,
    closed_form_subset_test,
    eg1_check,
    is_torus_semistable,
    is_torus_stable,
    isogeny_determinant,
    mu_one_param,
    pluecker_support,
    rho,
    rho_perp,
    torus_from_xi,
)
from lagstab.stability import is_xi_stable, proper_subsets


def eps(p, k=1):
    return LaurentPoly.eps(p, k)


def zero(p):
    return LaurentPoly.zero(p)


def skew_lattice(p=2):
    return lattice_from_matrix(
        LaurentMatrix(p, [[eps(p, 1), eps(p, -1)], [zero(p), eps(p, -1)]])
    )


SHELL21 = ShellSpec(2, 1)


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------


def test_rho_standard_lattice():
    V = rho(standard_lattice(2, 2), SHELL21)
    assert V.k == 2
    assert V.rows == ((0, 1, 0, 0), (0, 0, 0, 1))


def test_rho_dimension_is_nd(shells):
    for key in ((2, 1, 3), (2, 2, 2), (3, 1, 2)):
        d, n, p = key
        shell = ShellSpec(d, n)
        for L in shells[key][::5]:
            assert rho(L, shell).k == n * d


def test_rho_rejects_outside_shell():
    with pytest.raises(NotInShell):
        rho(translate(standard_lattice(2, 2), (1, 1)), SHELL21)
    with pytest.raises(NotInShell):
        rho(lattice_from_matrix(LaurentMatrix.diag_powers(2, (2, -2))), SHELL21)


def test_rho_perp_dimensions(shells):
    for key in ((2, 1, 2), (2, 2, 2), (3, 1, 2)):
        d, n, p = key
        shell = ShellSpec(d, n)
        for L in shells[key][::7]:
            V = rho(L, shell)
            W = rho_perp(L, shell)
            assert W.k == n * d * (d - 1)
            assert V.k + W.k == n * d * d


def test_rho_perp_worked_dims():
    # standard lattice: complement meets E_1 in one dimension
    W0 = rho_perp(standard_lattice(2, 2), SHELL21)
    assert W0.intersection_dim({1}) == 1
    # fixed point diag(eps, eps^-1): complement is all of E_1
    D = lattice_from_matrix(LaurentMatrix.diag_powers(2, (1, -1)))
    assert rho_perp(D, SHELL21).intersection_dim({1}) == 2
    # skew lattice: complement misses E_1 entirely
    assert rho_perp(skew_lattice(), SHELL21).intersection_dim({1}) == 0


# ---------------------------------------------------------------------------
# the dimension identity
# ---------------------------------------------------------------------------


def test_eg1_worked_examples():
    assert eg1_check(standard_lattice(2, 2), SHELL21, {1})
    assert eg1_check(skew_lattice(), SHELL21, {1})
    assert eg1_check(skew_lattice(), SHELL21, {1, 2})


def test_eg1_exhaustive_smallest(shells):
    for L in shells[(2, 1, 2)]:
        for S in ({1}, {2}, {1, 2}):
            assert eg1_check(L, SHELL21, S)


def test_direct_embedding_dimension_identity(shells):
    """dim(rho(L) cap E_S) = n|S| - ind(L cap F^S): the F_p-rank computation
    gives a route to intersection indices independent of the kernel engine."""
    from lagstab.lattices import intersect_coordinate

    for key in ((2, 1, 2), (2, 1, 3), (3, 1, 2)):
        d, n, p = key
        shell = ShellSpec(d, n)
        for L in shells[key]:
            V = rho(L, shell)
            for S in proper_subsets(d):
                assert V.intersection_dim(S) == n * len(S) - intersect_coordinate(
                    L, S
                )[0]


def test_eg1_same_subset_variant_fails():
    """Regression guard on the index-set convention.

    The complement-free variant dim(perp cap E_S) = ind(L cap F^S) + n(d-1)|S|
    is false: the skew lattice has both singleton intersection indices equal
    to 1, which would force the complement to contain all of E_1 + E_2.
    """
    L = skew_lattice()
    W = rho_perp(L, SHELL21)
    from lagstab.lattices import intersect_coordinate

    for S in ({1}, {2}):
        lhs = W.intersection_dim(S)
        wrong_rhs = intersect_coordinate(L, S)[0] + 1 * (2 - 1) * len(S)
        assert lhs != wrong_rhs


# ---------------------------------------------------------------------------
# torus data
# ---------------------------------------------------------------------------


def test_torus_from_xi_worked():
    tor = torus_from_xi(XI2, SHELL21)
    assert tor.x == (Fraction(5, 8), Fraction(3, 8))
    assert tor.r == (3,) and tor.s == (5,)


def test_torus_from_xi_guards():
    with pytest.raises(NonGenericXi):
        torus_from_xi((Fraction(0), Fraction(0)), SHELL21)
    with pytest.raises(XiOutOfWindow):
        torus_from_xi((Fraction(9, 8), Fraction(-9, 8)), SHELL21)


def test_isogeny_determinant_values():
    assert isogeny_determinant(TorusData.from_ratios([1])) == 2
    assert isogeny_determinant(TorusData.from_ratios([1, 1])) == 3
    tor = torus_from_xi(XI2, SHELL21)
    assert isogeny_determinant(tor) == 8
    tor3 = torus_from_xi(XI3, ShellSpec(3, 1))
    assert isogeny_determinant(tor3) != 0


# ---------------------------------------------------------------------------
# Plücker support and the polytope test
# ---------------------------------------------------------------------------


def _subspace(p, dims, rows):
    return GradedSubspace.from_rows(p, dims, rows)


def test_pluecker_support_examples():
    # all of one summand: a single support set
    V = _subspace(2, (2, 2), [(1, 0, 0, 0), (0, 1, 0, 0)])
    assert pluecker_support(V) == ((0, 1),)
    # diagonal line in dims (1,1): both singletons
    V = _subspace(2, (1, 1), [(1, 1)])
    assert pluecker_support(V) == ((0,), (1,))
    W = rho_perp(standard_lattice(2, 2), SHELL21)
    assert len(pluecker_support(W)) >= 1


def test_polytope_stability_examples():
    tor = TorusData.from_ratios([Fraction(5, 3)])
    # fixed subspaces are never stable
    V_fixed = _subspace(2, (1, 1), [(1, 0)])
    assert not is_torus_stable(V_fixed, tor)
    assert not closed_form_subset_test(V_fixed, tor)
    # the diagonal line is stable: the weight polytope is a segment around 0
    V_diag = _subspace(2, (1, 1), [(1, 1)])
    assert is_torus_stable(V_diag, tor)
    assert is_torus_semistable(V_diag, tor)


def _all_subspaces(p, dims):
    """Every subspace of the graded space, via echelon enumeration."""
    total = sum(dims)
    out = []
    for k in range(total + 1):
        if k == 0:
            out.append(GradedSubspace.from_rows(p, dims, []))
            continue
        for pivots in itertools.combinations(range(total), k):
            pivset = set(pivots)
            free = [
                (t, c)
                for t, pc in enumerate(pivots)
                for c in range(pc + 1, total)
                if c not in pivset
            ]
            for digits in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * total for _ in range(k)]
                for t, pc in enumerate(pivots):
                    rows[t][pc] = 1
                for (t, c), v in zip(free, digits):
                    rows[t][c] = v
                out.append(GradedSubspace.from_rows(p, dims, rows))
    return out


@pytest.mark.parametrize(
    "dims,ratios",
    [
        ((1, 1), [Fraction(5, 3)]),
        ((1, 1), [Fraction(1)]),
        ((2, 2), [Fraction(5, 3)]),
        ((2, 2), [Fraction(1)]),
    ],
)
def test_closed_form_matches_polytope_exhaustively(dims, ratios):
    """The subset-inequality orientation is pinned by exhaustive agreement."""
    tor = TorusData.from_ratios(ratios)
    for V in _all_subspaces(2, dims):
        assert closed_form_subset_test(V, tor) == is_torus_stable(V, tor)
        assert closed_form_subset_test(V, tor, strict=False) == is_torus_semistable(
            V, tor
        )


def test_closed_form_matches_stability_on_images(shells, xi_for):
    for key in ((2, 1, 3), (3, 1, 2)):
        d, n, p = key
        shell = ShellSpec(d, n)
        tor = torus_from_xi(xi_for[d], shell)
        for L in shells[key][::3]:
            W = rho_perp(L, shell)
            assert closed_form_subset_test(W, tor) == is_xi_stable(L, xi_for[d])


# ---------------------------------------------------------------------------
# one-parameter weights
# ---------------------------------------------------------------------------


def test_mu_calibration_on_diagonal_line():
    tor = TorusData.from_ratios([Fraction(5, 3)])  # r = 3, s = 5
    V = _subspace(2, (1, 1), [(1, 1)])
    assert mu_one_param(V, (1,), tor) == 5
    assert mu_one_param(V, (-1,), tor) == 3


def test_mu_fixed_point_antisymmetry_and_scaling():
    tor = TorusData.from_ratios([Fraction(5, 3)])
    V = _subspace(2, (1, 1), [(1, 0)])
    for n in ((1,), (-1,), (2,)):
        neg = tuple(-x for x in n)
        assert mu_one_param(V, n, tor) == -mu_one_param(V, neg, tor)
    assert mu_one_param(V, (2,), tor) == 2 * mu_one_param(V, (1,), tor)


def test_mu_sign_consistent_with_polytope(shells):
    shell = ShellSpec(2, 1)
    tor = torus_from_xi(XI2, shell)
    rays = [(1,), (-1,), (2,), (-2,)]
    for L in shells[(2, 1, 3)]:
        W = rho_perp(L, shell)
        stable = is_torus_stable(W, tor)
        mus = [mu_one_param(W, n, tor) for n in rays]
        assert stable == all(m > 0 for m in mus)


def test_mu_rejects_zero_ray():
    tor = TorusData.from_ratios([Fraction(1)])
    V = _subspace(2, (1, 1), [(1, 1)])
    with pytest.raises(ValueError):
        mu_one_param(V, (0,), tor)


# ---------------------------------------------------------------------------
# the main comparison
# ---------------------------------------------------------------------------


def test_git_comparison_d2(shells):
    shell = ShellSpec(2, 1)
    tor = torus_from_xi(XI2, shell)
    for L in shells[(2, 1, 2)] + shells[(2, 1, 3)]:
        W = rho_perp(L, shell)
        assert is_torus_stable(W, tor) == is_xi_stable(L, XI2)
        assert is_torus_semistable(W, tor) == is_torus_stable(W, tor)


def test_semistable_equals_stable_on_images(shells, xi_for):
    for key in ((2, 2, 2), (3, 1, 2)):
        d, n, p = key
        shell = ShellSpec(d, n)
        tor = torus_from_xi(xi_for[d], shell)
        for L in shells[key]:
            W = rho_perp(L, shell)
            assert is_torus_semistable(W, tor) == is_torus_stable(W, tor)
