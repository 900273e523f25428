"""Reduction of the shell into a stable locus and parabolic strata.

Every non-stable index-zero lattice is claimed by exactly one ordered flag:
its retraction (the associated graded along the flag) must be blockwise
envelope-compatible with the parameter, and the block indices must sit in the
flag's cone.  The audits here verify exactly-one-stratum, the transition
property of nested retractions, and invariance under flag-unipotent matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    NonGenericXi,
    NonZeroIndex,
    NotNested,
    NotUnipotentForP,
    PartitionViolation,
)
from .laurent import LaurentMatrix, LaurentPoly, FieldSpec
from .lattices import (
    Lattice,
    ShellSpec,
    enumerate_shell,
    intersect_coordinate,
    lattice_from_generators,
    lattice_from_matrix,
)
from .rootdata import ParabolicType, enumerate_parabolics, in_sector, is_generic, require_sum_zero
from .stability import in_envelope, is_xi_stable

__all__ = [
    "StratumTag",
    "retract",
    "h_parabolic",
    "in_cylinder",
    "stratum",
    "partition_audit",
    "PartitionReport",
    "transition_audit",
    "sample_unipotent",
    "unipotent_audit",
]


@dataclass(frozen=True)
class StratumTag:
    """Either the stable locus (parabolic is None) or one proper flag."""

    parabolic: ParabolicType | None

    @property
    def is_stable(self) -> bool:
        return self.parabolic is None

    def format(self) -> str:
        return "stable" if self.is_stable else f"S[{self.parabolic.format()}]"


def retract(L: Lattice, P: ParabolicType) -> list:
    """Associated graded of L along P's coordinate flag, one lattice per block.

    Block b receives the image of L cap V_b in V_b / V_{b-1}, written on the
    sorted coordinates of the block; the block indices always sum to the index
    of L.
    """
    if P.d != L.d:
        raise ValueError("parabolic dimension disagrees with the lattice")
    out = []
    prefix: set = set()
    for block in P.blocks:
        prev = frozenset(prefix)
        prefix |= set(block)
        _, gens = intersect_coordinate(L, frozenset(prefix))
        rows = sorted(block)
        cols = [[g[r - 1] for r in rows] for g in gens]
        out.append(lattice_from_generators(L.p, len(block), cols))
    total = sum(lat.index for lat in out)
    if total != L.index:
        raise AssertionError("block indices do not sum to the lattice index")
    return out


def h_parabolic(L: Lattice, P: ParabolicType) -> tuple:
    """Block indices of the retraction, via prefix intersection differences."""
    if P.d != L.d:
        raise ValueError("parabolic dimension disagrees with the lattice")
    out = []
    prev_idx = 0
    prefix: set = set()
    for block in P.blocks:
        prefix |= set(block)
        idx = intersect_coordinate(L, frozenset(prefix))[0]
        out.append(idx - prev_idx)
        prev_idx = idx
    return tuple(out)


def in_cylinder(L: Lattice, P: ParabolicType, xi) -> bool:
    """Membership of the parameter in the flag's semi-cylinder at L.

    Two conditions: the block-sum-zero part of xi lies in the blockwise
    envelope of the retraction, and the block averages xi_avg - H_avg are
    weakly decreasing along the flag order (the cone condition).
    """
    xs = require_sum_zero(xi)
    if not is_generic(xs):
        raise NonGenericXi("stability parameter is not generic")
    if L.index != 0:
        raise NonZeroIndex("cylinder test requires an index-zero lattice")
    if P.d != L.d:
        raise ValueError("parabolic dimension disagrees with the lattice")

    h = h_parabolic(L, P)

    # cone: xi-average minus H-average weakly decreasing along the block order
    vals = []
    for hb, block in zip(h, P.blocks):
        avg_x = sum(xs[i - 1] for i in block) / len(block)
        vals.append(avg_x - Fraction(hb, len(block)))
    if any(vals[k] < vals[k + 1] for k in range(len(vals) - 1)):
        return False

    # blockwise envelope of the retraction
    blocks_lat = retract(L, P)
    for lat, hb, block in zip(blocks_lat, h, P.blocks):
        rows = sorted(block)
        avg_x = sum(xs[i - 1] for i in block) / len(block)
        point = tuple(xs[r - 1] - avg_x + Fraction(hb, len(block)) for r in rows)
        if not in_envelope(lat, point):
            return False
    return True


def stratum(L: Lattice, xi) -> StratumTag:
    """Stable, or the unique proper flag whose cylinder holds the parameter."""
    if is_xi_stable(L, xi):
        return StratumTag(parabolic=None)
    matches = [
        P
        for P in enumerate_parabolics(L.d)
        if not P.is_full_group and in_cylinder(L, P, xi)
    ]
    if len(matches) != 1:
        raise PartitionViolation(
            f"lattice matched {len(matches)} cylinders: "
            + ", ".join(P.format() for P in matches)
        )
    return StratumTag(parabolic=matches[0])


@dataclass
class PartitionReport:
    d: int
    n: int
    p: int
    total: int
    counts: dict
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations and self.total == sum(self.counts.values())

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "p": self.p,
            "total": self.total,
            "counts": dict(sorted(self.counts.items())),
            "violations": list(self.violations),
            "ok": self.ok,
        }


def partition_audit(
    shell: ShellSpec, field: FieldSpec, xi, budget: int | None = None
) -> PartitionReport:
    """Census of strata over the shell, with the coherence checks.

    For every lattice: exactly one tag; for a tagged flag, the block indices
    pass the sector test and every block retraction is blockwise
    envelope-stable for the projected parameter.
    """
    counts: dict = {}
    violations: list = []
    total = 0
    xs = require_sum_zero(xi)
    for L in enumerate_shell(shell, field, budget=budget):
        total += 1
        try:
            tag = stratum(L, xs)
        except PartitionViolation as exc:
            violations.append(f"{L.basis.to_json()}: {exc}")
            continue
        counts[tag.format()] = counts.get(tag.format(), 0) + 1
        if tag.is_stable:
            continue
        P = tag.parabolic
        h = h_parabolic(L, P)
        if not in_sector(h, P, xs):
            violations.append(f"{tag.format()}: block indices fail the sector test")
        for lat, hb, block in zip(retract(L, P), h, P.blocks):
            rows = sorted(block)
            avg_x = sum(xs[i - 1] for i in block) / len(block)
            point = tuple(xs[r - 1] - avg_x + Fraction(hb, len(block)) for r in rows)
            if not in_envelope(lat, point):
                violations.append(
                    f"{tag.format()}: block {block} retraction fails the envelope"
                )
    return PartitionReport(
        d=shell.d, n=shell.n, p=field.p, total=total, counts=counts, violations=violations
    )


def transition_audit(L: Lattice, P: ParabolicType, Q: ParabolicType) -> bool:
    """Retraction along P equals blockwise retraction of the Q-retraction.

    Requires P's flag to refine Q's; the induced partition inside each
    Q-block is relabeled through the order-preserving coordinate map.
    """
    if not P.refines(Q):
        raise NotNested("P must refine Q")
    direct = retract(L, P)

    staged = []
    q_blocks = retract(L, Q)
    p_blocks = list(P.blocks)
    pos = 0
    for q_lat, q_block in zip(q_blocks, Q.blocks):
        inner = []
        while pos < len(p_blocks) and set(p_blocks[pos]) <= set(q_block):
            inner.append(p_blocks[pos])
            pos += 1
        rows = sorted(q_block)
        relabel = {coord: t + 1 for t, coord in enumerate(rows)}
        induced = ParabolicType(tuple(tuple(relabel[c] for c in b) for b in inner))
        staged.extend(retract(q_lat, induced))
    if pos != len(p_blocks):
        raise NotNested("P blocks do not tile Q's blocks")
    return staged == direct


def sample_unipotent(
    rng: random.Random, P: ParabolicType, n: int, p: int
) -> LaurentMatrix:
    """Random flag-unipotent matrix: identity diagonal, entries above the flag
    with at most 3 terms and exponents in [-2n, 2n]."""
    d = P.d
    block_of = {}
    for bi, b in enumerate(P.blocks):
        for x in b:
            block_of[x] = bi
    zero = LaurentPoly.zero(p)
    rows = [[zero] * d for _ in range(d)]
    for i in range(1, d + 1):
        rows[i - 1][i - 1] = LaurentPoly.one(p)
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            if block_of[i] < block_of[j]:
                nterms = rng.randint(0, 3)
                terms = []
                for _ in range(nterms):
                    terms.append((rng.randint(-2 * n, 2 * n), rng.randint(1, p - 1)))
                rows[i - 1][j - 1] = LaurentPoly(p, terms)
    return LaurentMatrix(p, rows)


def _check_unipotent(u: LaurentMatrix, P: ParabolicType):
    block_of = {}
    for bi, b in enumerate(P.blocks):
        for x in b:
            block_of[x] = bi
    one = LaurentPoly.one(u.p)
    for i in range(1, u.d + 1):
        for j in range(1, u.d + 1):
            e = u.rows[i - 1][j - 1]
            if i == j:
                if e != one:
                    raise NotUnipotentForP("diagonal entries must be 1")
            elif block_of[i] >= block_of[j] and not e.is_zero:
                raise NotUnipotentForP(
                    f"entry ({i},{j}) sits outside the flag's unipotent radical"
                )


def unipotent_audit(L: Lattice, P: ParabolicType, u: LaurentMatrix, xi) -> bool:
    """Retraction, block indices and (when applicable) the stratum are
    unchanged by a flag-unipotent translation of the lattice."""
    _check_unipotent(u, P)
    moved = lattice_from_matrix(
        LaurentMatrix(
            u.p,
            [
                [
                    _dot(u.rows[i], L.basis.column(j), u.p)
                    for j in range(L.d)
                ]
                for i in range(L.d)
            ],
        )
    )
    if retract(moved, P) != retract(L, P):
        return False
    if h_parabolic(moved, P) != h_parabolic(L, P):
        return False
    tag = stratum(L, xi)
    if not tag.is_stable and tag.parabolic == P:
        if stratum(moved, xi) != tag:
            return False
    return True


def _dot(row, col, p: int) -> LaurentPoly:
    acc = LaurentPoly.zero(p)
    for a, b in zip(row, col):
        if not a.is_zero and not b.is_zero:
            acc = acc + a * b
    return acc
