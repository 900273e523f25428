"""Type-A root datum combinatorics: stability parameters, ordered set
partitions as parabolic flags, Levi projections, sectors, dominance order,
and torus-fixed points of a shell.

Points of the ambient rational space are length-d vectors compared modulo
constant shifts, so every predicate here is shift-invariant.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .errors import BudgetExceeded, NonGenericXi, ShapeMismatch
from .lattices import ShellSpec

__all__ = [
    "ParabolicType",
    "is_generic",
    "require_sum_zero",
    "project_levi",
    "block_sums",
    "in_sector",
    "dominance_leq",
    "fixed_points_shell",
    "enumerate_parabolics",
]

DEFAULT_PARABOLIC_BOUND = 6


class ParabolicType:
    """Ordered set partition of {1..d}; order encodes the coordinate flag.

    The single-block partition is the full group, all-singletons in identity
    order is the standard Borel flag.
    """

    __slots__ = ("d", "blocks")

    def __init__(self, blocks):
        blocks = tuple(tuple(sorted(b)) for b in blocks)
        seen = set()
        for b in blocks:
            if not b:
                raise ValueError("empty block")
            for x in b:
                if x in seen:
                    raise ValueError(f"coordinate {x} repeated")
                seen.add(x)
        d = len(seen)
        if seen != set(range(1, d + 1)):
            raise ValueError("blocks must partition {1..d}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "blocks", blocks)

    def __setattr__(self, *a):
        raise AttributeError("ParabolicType is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def full_group(cls, d: int) -> "ParabolicType":
        return cls((tuple(range(1, d + 1)),))

    @classmethod
    def borel(cls, d: int) -> "ParabolicType":
        return cls(tuple((i,) for i in range(1, d + 1)))

    @classmethod
    def borel_opposite(cls, d: int) -> "ParabolicType":
        return cls(tuple((i,) for i in range(d, 0, -1)))

    @classmethod
    def parse(cls, text: str) -> "ParabolicType":
        blocks = []
        for chunk in text.split("|"):
            blocks.append(tuple(int(x) for x in chunk.split(",") if x.strip()))
        return cls(blocks)

    # -- queries -----------------------------------------------------------

    @property
    def is_full_group(self) -> bool:
        return len(self.blocks) == 1

    def levi_key(self) -> frozenset:
        """The Levi forgets block order."""
        return frozenset(frozenset(b) for b in self.blocks)

    def prefix_sets(self) -> list:
        out = []
        acc: set = set()
        for b in self.blocks:
            acc |= set(b)
            out.append(frozenset(acc))
        return out

    def refines(self, Q: "ParabolicType") -> bool:
        """True iff this flag refines Q's flag (parabolic containment)."""
        if self.d != Q.d:
            return False
        where = {}
        for qi, qb in enumerate(Q.blocks):
            for x in qb:
                where[x] = qi
        last = -1
        for b in self.blocks:
            owners = {where[x] for x in b}
            if len(owners) != 1:
                return False
            owner = owners.pop()
            if owner < last:
                return False
            last = owner
        return True

    def format(self) -> str:
        return "|".join(",".join(str(x) for x in b) for b in self.blocks)

    def __eq__(self, other) -> bool:
        return isinstance(other, ParabolicType) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"ParabolicType({self.format()!r})"


# ---------------------------------------------------------------------------


def is_generic(xi) -> bool:
    """No root takes an integer value: xi_i - xi_j is never an integer."""
    xs = [Fraction(x) for x in xi]
    for i in range(len(xs)):
        for j in range(len(xs)):
            if i != j and (xs[i] - xs[j]).denominator == 1:
                return False
    return True


def require_sum_zero(xi):
    xs = tuple(Fraction(x) for x in xi)
    if sum(xs) != 0:
        raise ValueError("stability parameter must sum to zero")
    return xs


def project_levi(v, blocks) -> tuple[tuple, tuple]:
    """Split v into (block-average part, block-sum-zero part)."""
    v = [Fraction(x) for x in v]
    pi_m = list(v)
    for b in blocks:
        avg = sum(v[i - 1] for i in b) / len(b)
        for i in b:
            pi_m[i - 1] = avg
    pi_up = tuple(x - y for x, y in zip(v, pi_m))
    return tuple(pi_m), pi_up


def block_sums(mu, blocks) -> tuple:
    """Coordinate sums over each block, in the order the blocks are given."""
    return tuple(sum(mu[i - 1] for i in b) for b in blocks)


def in_sector(lam, P: ParabolicType, xi) -> bool:
    """Sector membership of a block vector for the parabolic's opposite cone.

    ``lam`` is indexed by P's blocks.  The test compares block averages:
    (lam_b/|b| - xi-average over b) must be weakly increasing along P's block
    order.
    """
    if not is_generic(xi):
        raise NonGenericXi("stability parameter is not generic")
    xs = [Fraction(x) for x in xi]
    if len(lam) != len(P.blocks):
        raise ValueError("block vector length disagrees with the parabolic")
    vals = []
    for lb, b in zip(lam, P.blocks):
        avg_l = Fraction(lb, len(b))
        avg_x = sum(xs[i - 1] for i in b) / len(b)
        vals.append(avg_l - avg_x)
    return all(vals[k] <= vals[k + 1] for k in range(len(vals) - 1))


def dominance_leq(lam, mu) -> bool:
    """Prefix-sum dominance on weakly decreasing integer vectors."""
    lam = tuple(lam)
    mu = tuple(mu)
    if sum(lam) != sum(mu):
        raise ShapeMismatch("dominance needs equal totals")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)) or any(
        mu[i] < mu[i + 1] for i in range(len(mu) - 1)
    ):
        raise ValueError("dominance arguments must be weakly decreasing")
    acc_l = 0
    acc_m = 0
    for i in range(min(len(lam), len(mu))):
        acc_l += lam[i]
        acc_m += mu[i]
        if acc_l > acc_m:
            return False
    return True


def fixed_points_shell(shell: ShellSpec) -> list:
    """All torus-fixed lattices of the shell, as integer exponent vectors.

    A fixed point is the diagonal lattice with exponents mu, so membership
    means sum(mu) = 0 with every mu_i <= n (the lower bound (1-d)n follows).
    """
    d, n = shell.d, shell.n
    lo = (1 - d) * n
    out = []

    def rec(prefix, remaining):
        slot = len(prefix)
        if slot == d:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        left = d - slot - 1
        for m in range(max(lo, remaining - n * left), n + 1):
            prefix.append(m)
            rec(prefix, remaining - m)
            prefix.pop()

    rec([], 0)
    return out


def enumerate_parabolics(d: int, bound: int = DEFAULT_PARABOLIC_BOUND) -> list:
    """All ordered set partitions of {1..d}, the single-block one included."""
    if d > bound:
        raise BudgetExceeded(f"ordered set partitions capped at d <= {bound}")
    out = []

    # enumerate unordered partitions, then all block orders, deterministically
    unordered: list = []

    def rec_unordered(remaining: tuple, blocks: list):
        if not remaining:
            unordered.append(tuple(blocks))
            return
        first = remaining[0]
        rest = remaining[1:]
        for mask in range(1 << len(rest)):
            block = tuple(
                sorted([first] + [rest[k] for k in range(len(rest)) if mask >> k & 1])
            )
            others = tuple(rest[k] for k in range(len(rest)) if not mask >> k & 1)
            blocks.append(block)
            rec_unordered(others, blocks)
            blocks.pop()

    rec_unordered(tuple(range(1, d + 1)), [])
    seen = set()
    for part in unordered:
        for order in permutations(part):
            P = ParabolicType(order)
            if P.blocks not in seen:
                seen.add(P.blocks)
                out.append(P)
    out.sort(key=lambda P: (len(P.blocks), P.blocks))
    return out
