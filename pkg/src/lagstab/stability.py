"""Convex-envelope stability for lattices.

The envelope of a lattice is the convex hull of its Borel-wise vectors, whose
prefix sums along a permutation are the coordinate-subspace intersection
indices.  Stability of an index-zero lattice against a generic parameter is
the family of subset inequalities sum_S xi <= ind(L cap F^S); the hull-side
test is kept around as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .errors import NonGenericXi, NonZeroIndex, NotAdjacent
from .lattices import Lattice, intersect_coordinate
from .rootdata import is_generic, require_sum_zero
from . import lp

__all__ = [
    "HVector",
    "h_borel",
    "ec_vertices",
    "is_xi_stable",
    "failing_subsets",
    "in_envelope",
    "arthur_difference",
    "hull_membership",
    "proper_subsets",
]


@dataclass(frozen=True)
class HVector:
    """Borel-wise invariant: prefix sums along the permutation are
    intersection indices; value is given in ambient coordinates."""

    borel: tuple
    value: tuple


def proper_subsets(d: int):
    """All nonempty proper subsets of {1..d}, by size then lexicographically."""
    labels = range(1, d + 1)
    for size in range(1, d):
        for S in combinations(labels, size):
            yield frozenset(S)


def h_borel(L: Lattice, tau) -> HVector:
    """The vector whose prefix sums along tau are intersection indices."""
    tau = tuple(tau)
    if sorted(tau) != list(range(1, L.d + 1)):
        raise ValueError("tau must be a permutation of 1..d")
    value = [0] * L.d
    prev = 0
    for i in range(L.d):
        S = frozenset(tau[: i + 1])
        idx = intersect_coordinate(L, S)[0]
        value[tau[i] - 1] = idx - prev
        prev = idx
    return HVector(borel=tau, value=tuple(value))


def ec_vertices(L: Lattice) -> tuple:
    """All Borel-wise vectors, duplicates merged, deterministically sorted.

    Every vector has coordinate sum equal to the index, so comparing raw
    tuples is comparison modulo constant shifts.
    """
    seen = {h_borel(L, tau).value for tau in permutations(range(1, L.d + 1))}
    return tuple(sorted(seen))


def in_envelope(L: Lattice, point) -> bool:
    """Exact membership of a rational point in the envelope of L.

    The envelope lives in the affine slice where coordinates sum to the
    index; points off that slice are never members.
    """
    pt = tuple(Fraction(x) for x in point)
    if len(pt) != L.d:
        raise ValueError("point length disagrees with the lattice")
    if sum(pt) != L.index:
        return False
    for S in proper_subsets(L.d):
        if sum(pt[i - 1] for i in S) > intersect_coordinate(L, S)[0]:
            return False
    return True


def hull_membership(L: Lattice, point) -> bool:
    """Independent oracle: exact LP membership in the hull of the vertices."""
    pt = tuple(Fraction(x) for x in point)
    return lp.in_convex_hull(ec_vertices(L), pt)


def is_xi_stable(L: Lattice, xi) -> bool:
    """Subset-inequality stability test for an index-zero lattice."""
    xs = require_sum_zero(xi)
    if len(xs) != L.d:
        raise ValueError("parameter length disagrees with the lattice")
    if L.index != 0:
        raise NonZeroIndex("stability test requires an index-zero lattice")
    if not is_generic(xs):
        raise NonGenericXi("stability parameter is not generic")
    for S in proper_subsets(L.d):
        if sum(xs[i - 1] for i in S) > intersect_coordinate(L, S)[0]:
            return False
    return True


def failing_subsets(L: Lattice, xi) -> list:
    """The subsets whose inequality fails, for reporting."""
    xs = require_sum_zero(xi)
    if L.index != 0:
        raise NonZeroIndex("stability test requires an index-zero lattice")
    if not is_generic(xs):
        raise NonGenericXi("stability parameter is not generic")
    out = []
    for S in proper_subsets(L.d):
        bound = intersect_coordinate(L, S)[0]
        total = sum(xs[i - 1] for i in S)
        if total > bound:
            out.append((tuple(sorted(S)), total, bound))
    return out


def arthur_difference(L: Lattice, tau, tau2) -> tuple[tuple, int]:
    """Difference of adjacent Borel-wise vectors as a coroot multiple.

    The permutations must differ by one adjacent transposition; the returned
    coroot is positive for ``tau`` and the multiplicity is a nonnegative
    integer.
    """
    tau = tuple(tau)
    tau2 = tuple(tau2)
    d = L.d
    diff_pos = [k for k in range(d) if tau[k] != tau2[k]]
    if (
        len(diff_pos) != 2
        or diff_pos[1] != diff_pos[0] + 1
        or tau[diff_pos[0]] != tau2[diff_pos[1]]
        or tau[diff_pos[1]] != tau2[diff_pos[0]]
    ):
        raise NotAdjacent("permutations do not differ by one adjacent swap")
    i = diff_pos[0]
    a, b = tau[i], tau[i + 1]
    coroot = tuple(1 if k == a - 1 else (-1 if k == b - 1 else 0) for k in range(d))
    h1 = h_borel(L, tau).value
    h2 = h_borel(L, tau2).value
    delta = tuple(x - y for x, y in zip(h1, h2))
    mult = delta[a - 1]
    if delta != tuple(mult * c for c in coroot):
        raise AssertionError("difference is not a coroot multiple")
    assert mult >= 0, "adjacent difference must have nonnegative multiplicity"
    return coroot, mult


def stability_gap(L: Lattice, xi) -> Fraction:
    """Smallest distance between a subset sum of xi and its intersection bound.

    Perturbing xi by less than this (in sup norm times d) cannot change the
    stability verdict.
    """
    xs = require_sum_zero(xi)
    gap = None
    for S in proper_subsets(L.d):
        bound = intersect_coordinate(L, S)[0]
        total = sum(xs[i - 1] for i in S)
        dist = abs(bound - total)
        if gap is None or dist < gap:
            gap = dist
    return gap if gap is not None else Fraction(0)
