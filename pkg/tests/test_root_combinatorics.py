import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import XI2, XI3

from lagstab.errors import BudgetExceeded, NonGenericXi, ShapeMismatch
from lagstab.lattices import ShellSpec
from lagstab.rootdata import (
    ParabolicType,
    block_sums,
    dominance_leq,
    enumerate_parabolics,
    fixed_points_shell,
    in_sector,
    is_generic,
    project_levi,
)
from lagstab.series import cells_polynomial


# ---------------------------------------------------------------------------
# genericity
# ---------------------------------------------------------------------------


def test_generic_examples():
    assert is_generic((Fraction(1, 4), Fraction(-1, 4)))
    assert not is_generic((Fraction(1, 2), Fraction(-1, 2)))
    assert is_generic(XI3)


def test_generic_checks_all_pairs():
    # differences: 2/3 - (-1/3) = 1 is integral
    assert not is_generic((Fraction(2, 3), Fraction(-1, 3), Fraction(-1, 3)))


# ---------------------------------------------------------------------------
# Levi projections and block sums
# ---------------------------------------------------------------------------


def test_project_levi_examples():
    pi_m, pi_up = project_levi((1, 0, 0), ((1, 2), (3,)))
    assert pi_m == (Fraction(1, 2), Fraction(1, 2), Fraction(0))
    assert pi_up == (Fraction(1, 2), Fraction(-1, 2), Fraction(0))

    v = (Fraction(3), Fraction(3))
    pi_m, pi_up = project_levi(v, ((1, 2),))
    assert pi_m == v and all(x == 0 for x in pi_up)

    pi_m, pi_up = project_levi(XI2, ((1,), (2,)))
    assert pi_m == XI2 and all(x == 0 for x in pi_up)


def test_project_levi_idempotent():
    rng = random.Random(1)
    for _ in range(20):
        d = rng.choice([2, 3, 4])
        blocks = rng.choice(
            [P.blocks for P in enumerate_parabolics(d)]
        )
        v = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(d))
        pi_m, pi_up = project_levi(v, blocks)
        again_m, again_up = project_levi(pi_m, blocks)
        assert again_m == pi_m and all(x == 0 for x in again_up)
        assert tuple(a + b for a, b in zip(pi_m, pi_up)) == v


def test_block_sums_examples():
    assert block_sums((1, -1), ((1,), (2,))) == (1, -1)
    assert block_sums((1, -1), ((1, 2),)) == (0,)
    assert block_sums((2, 0, -2), ((1, 2), (3,))) == (2, -2)


# ---------------------------------------------------------------------------
# sectors
# ---------------------------------------------------------------------------


def test_in_sector_examples():
    # block vectors are indexed in the parabolic's own block order, so the
    # coweight (1,-1) reads as (-1, 1) along the reversed flag
    B = ParabolicType.borel(2)
    Bop = ParabolicType.borel_opposite(2)
    assert in_sector(block_sums((0, 0), B.blocks), B, XI2)
    assert not in_sector(block_sums((1, -1), B.blocks), B, XI2)
    assert in_sector(block_sums((1, -1), Bop.blocks), Bop, XI2)


def test_in_sector_requires_generic():
    with pytest.raises(NonGenericXi):
        in_sector((0, 0), ParabolicType.borel(2), (Fraction(1, 2), Fraction(-1, 2)))


@pytest.mark.parametrize("d,xi", [(2, XI2), (3, XI3)])
def test_sectors_partition_block_vectors(d, xi):
    """For each Levi, every block vector lands in exactly one block order."""
    by_levi = {}
    for P in enumerate_parabolics(d):
        by_levi.setdefault(P.levi_key(), []).append(P)
    for levi, orders in by_levi.items():
        blocks0 = orders[0].blocks
        r = len(blocks0)
        for lam0 in itertools.product(range(-3, 4), repeat=r):
            matches = 0
            for P in orders:
                # express lam on P's block order
                lam = tuple(
                    lam0[blocks0.index(b)] for b in P.blocks
                )
                if in_sector(lam, P, xi):
                    matches += 1
            assert matches == 1, (levi, lam0)


# ---------------------------------------------------------------------------
# dominance order
# ---------------------------------------------------------------------------


def test_dominance_examples():
    assert dominance_leq((1, 1), (2, 0))
    assert dominance_leq((2, 0), (2, 0))
    assert not dominance_leq((2, 0, 0), (1, 1, 0))


def test_dominance_shape_guard():
    with pytest.raises(ShapeMismatch):
        dominance_leq((1, 1), (1, 0))


partitions4 = [
    tuple(sorted(q, reverse=True))
    for q in itertools.product(range(5), repeat=3)
    if sum(q) == 4
]


def test_dominance_is_partial_order():
    uniq = sorted(set(partitions4))
    for a in uniq:
        assert dominance_leq(a, a)
        for b in uniq:
            if dominance_leq(a, b) and dominance_leq(b, a):
                assert a == b
            for c in uniq:
                if dominance_leq(a, b) and dominance_leq(b, c):
                    assert dominance_leq(a, c)


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------


def test_fixed_points_d2():
    assert set(fixed_points_shell(ShellSpec(2, 1))) == {(1, -1), (0, 0), (-1, 1)}
    assert len(fixed_points_shell(ShellSpec(2, 2))) == 5


def test_fixed_points_d3():
    # direct enumeration under mu_i <= n and sum zero: ten vectors
    pts = fixed_points_shell(ShellSpec(3, 1))
    assert len(pts) == 10
    for mu in pts:
        assert sum(mu) == 0
        assert all(-2 <= m <= 1 for m in mu)
    brute = {
        mu
        for mu in itertools.product(range(-2, 2), repeat=3)
        if sum(mu) == 0
    }
    assert set(pts) == brute


def test_fixed_points_count_cells_support():
    for d, n in ((2, 1), (2, 2), (3, 1), (3, 2)):
        pts = fixed_points_shell(ShellSpec(d, n))
        poly = cells_polynomial(ShellSpec(d, n))
        assert len(pts) == sum(poly.coeffs)


# ---------------------------------------------------------------------------
# parabolic enumeration
# ---------------------------------------------------------------------------


def test_parabolic_counts():
    assert len(enumerate_parabolics(1)) == 1
    assert len(enumerate_parabolics(2)) == 3
    assert len(enumerate_parabolics(3)) == 13
    assert len(enumerate_parabolics(4)) == 75


def test_parabolic_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_parabolics(7)


def test_parabolic_parse_and_format():
    P = ParabolicType.parse("1,2|3")
    assert P.blocks == ((1, 2), (3,))
    assert P.format() == "1,2|3"
    with pytest.raises(ValueError):
        ParabolicType.parse("1|1,2")
    with pytest.raises(ValueError):
        ParabolicType.parse("1|3")


def test_parabolic_refinement():
    B = ParabolicType.borel(3)
    Q = ParabolicType.parse("1,2|3")
    assert B.refines(Q)
    assert not B.refines(ParabolicType.parse("2|1,3"))
    assert Q.refines(ParabolicType.full_group(3))
    assert not Q.refines(B)
