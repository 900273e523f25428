"""Torus stability of graded subspaces and the shell embeddings.

A lattice of the shell embeds into a grassmannian of the graded space
E_1 + ... + E_d (each E_i spanned by the residue classes eps^{(1-d)n+i} e_j),
either directly (``rho``) or through the orthogonal complement under the
anti-diagonal residue pairing (``rho_perp``).  Stability under the rank-(d-1)
sub-torus is decided by an exact weight-polytope criterion on the Plücker
support; the one-parameter weight ``mu_one_param`` exists to cross-validate
single rays, and ``closed_form_subset_test`` is the subset-inequality closed
form whose orientation is pinned empirically against the polytope test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import BudgetExceeded, NonGenericXi, NotInShell, XiOutOfWindow
from .fpspace import fp_det, fp_nullspace, fp_rref, fp_restricted_rank
from .lattices import Lattice, ShellSpec, in_shell, intersect_coordinate
from .rootdata import is_generic, require_sum_zero
from .stability import proper_subsets
from . import lp

__all__ = [
    "GradedSubspace",
    "TorusData",
    "rho",
    "rho_perp",
    "eg1_check",
    "torus_from_xi",
    "pluecker_support",
    "is_torus_stable",
    "is_torus_semistable",
    "mu_one_param",
    "closed_form_subset_test",
    "isogeny_determinant",
]

DEFAULT_PLUECKER_BUDGET = 10**6


@dataclass(frozen=True)
class GradedSubspace:
    """Subspace of E_1 + ... + E_d over F_p, generators in reduced echelon form.

    ``dims[i]`` is the dimension of the i-th graded summand; slots are indexed
    block-major, so summand i occupies columns offset[i] .. offset[i]+dims[i]-1.
    """

    p: int
    dims: tuple
    rows: tuple

    @classmethod
    def from_rows(cls, p: int, dims, rows) -> "GradedSubspace":
        dims = tuple(dims)
        total = sum(dims)
        for r in rows:
            if len(r) != total:
                raise ValueError("row width disagrees with the graded dimensions")
        red, _ = fp_rref(rows, p)
        return cls(p=p, dims=dims, rows=tuple(tuple(r) for r in red))

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def total(self) -> int:
        return sum(self.dims)

    @property
    def d(self) -> int:
        return len(self.dims)

    def offsets(self) -> list:
        out = []
        acc = 0
        for w in self.dims:
            out.append(acc)
            acc += w
        return out

    def block_columns(self, blocks) -> list:
        """Column indices covered by the given (1-based) summand labels."""
        offs = self.offsets()
        cols = []
        for b in sorted(blocks):
            cols.extend(range(offs[b - 1], offs[b - 1] + self.dims[b - 1]))
        return cols

    def intersection_dim(self, blocks) -> int:
        """dim of the intersection with the span of the chosen summands."""
        outside = sorted(set(range(self.total)) - set(self.block_columns(blocks)))
        if not outside or not self.rows:
            return self.k
        return self.k - fp_restricted_rank(self.rows, outside, self.p)


@dataclass(frozen=True)
class TorusData:
    """Sub-torus weights: summand i < d scales by t_i^{r_i}, the last by
    prod t_i^{-s_i}; x is the induced rational weight vector with sum 1."""

    r: tuple
    s: tuple
    x: tuple

    def __post_init__(self):
        if len(self.r) != len(self.s) or len(self.x) != len(self.r) + 1:
            raise ValueError("torus data lengths are inconsistent")
        if any(ri <= 0 for ri in self.r) or any(si <= 0 for si in self.s):
            raise ValueError("r_i and s_i must be positive integers")
        denom = 1 + sum(Fraction(si, ri) for si, ri in zip(self.s, self.r))
        if self.x[-1] != 1 / denom:
            raise ValueError("x_d does not match 1/(1 + sum s_i/r_i)")
        for xi, si, ri in zip(self.x, self.s, self.r):
            if xi != Fraction(si, ri) * self.x[-1]:
                raise ValueError("x_i does not match (s_i/r_i) x_d")

    @classmethod
    def from_ratios(cls, ratios) -> "TorusData":
        """Build from the positive rationals s_i/r_i, i < d."""
        fr = [Fraction(x) for x in ratios]
        if any(f <= 0 for f in fr):
            raise ValueError("weight ratios must be positive")
        r = tuple(f.denominator for f in fr)
        s = tuple(f.numerator for f in fr)
        xd = 1 / (1 + sum(fr))
        x = tuple(f * xd for f in fr) + (xd,)
        return cls(r=r, s=s, x=x)

    @property
    def d(self) -> int:
        return len(self.x)

    def summand_weight(self, i: int) -> tuple:
        """Character of the sub-torus on summand i (1-based), in Z^{d-1}."""
        dm1 = len(self.r)
        if i <= dm1:
            return tuple(self.r[i - 1] if k == i - 1 else 0 for k in range(dm1))
        return tuple(-si for si in self.s)


# ---------------------------------------------------------------------------
# shell embeddings
# ---------------------------------------------------------------------------


def _slot_vector(L: Lattice, shell: ShellSpec, vec) -> list:
    """Residue class of a lattice vector in the graded space, block-major."""
    d, n = shell.d, shell.n
    nd = n * d
    lo = (1 - d) * n
    out = [0] * (d * nd)
    for j in range(d):
        for e, c in vec[j].terms:
            if e >= n:
                continue
            i = e - lo
            if i < 0:
                raise AssertionError("vector leaves the shell window")
            out[j * nd + i] = c % L.p
    return out


def rho(L: Lattice, shell: ShellSpec) -> GradedSubspace:
    """Image of L in the graded quotient; dimension nd."""
    if not in_shell(L, shell):
        raise NotInShell("lattice is not in the requested shell")
    d, n = shell.d, shell.n
    nd = n * d
    rows = []
    for j in range(d):
        col = L.basis.column(j)
        low = min(x.val() for x in col if not x.is_zero)
        for k in range(0, n - low):
            shifted = [x.shift(k) for x in col]
            rows.append(_slot_vector(L, shell, shifted))
    V = GradedSubspace.from_rows(L.p, (nd,) * d, rows)
    if V.k != nd:
        raise AssertionError("embedded image has the wrong dimension")
    return V


def rho_perp(L: Lattice, shell: ShellSpec) -> GradedSubspace:
    """Orthogonal complement of rho(L) under the anti-diagonal residue pairing.

    The pairing couples slot (j, i) with slot (j, nd-1-i), which makes
    multiplication by eps self-adjoint, so the complement is again graded by
    the eps-action.
    """
    V = rho(L, shell)
    d, n = shell.d, shell.n
    nd = n * d
    paired = []
    for row in V.rows:
        pr = [0] * (d * nd)
        for j in range(d):
            for i in range(nd):
                pr[j * nd + (nd - 1 - i)] = row[j * nd + i]
        paired.append(pr)
    null = fp_nullspace(paired, L.p)
    W = GradedSubspace.from_rows(L.p, (nd,) * d, null)
    if W.k != nd * (d - 1):
        raise AssertionError("complement has the wrong dimension")
    return W


def eg1_check(L: Lattice, shell: ShellSpec, S) -> bool:
    """Dimension identity tying the complement embedding to intersection indices.

    For every coordinate subset S,

        dim(rho_perp(L) cap E_S) = n(d-1)|S| - ind(L cap F^{S^c}),

    with the empty-complement index read as 0.  Verified against a directly
    computed intersection dimension.
    """
    S = frozenset(S)
    if not S or not S <= set(range(1, shell.d + 1)):
        raise ValueError("S must be a nonempty subset of the coordinate labels")
    W = rho_perp(L, shell)
    lhs = W.intersection_dim(S)
    comp = frozenset(range(1, shell.d + 1)) - S
    comp_index = intersect_coordinate(L, comp)[0] if comp else 0
    rhs = shell.n * (shell.d - 1) * len(S) - comp_index
    return lhs == rhs


# ---------------------------------------------------------------------------
# torus data from the stability parameter
# ---------------------------------------------------------------------------


def torus_from_xi(xi, shell: ShellSpec) -> TorusData:
    """Weights x_i = (xi_i + n(d-1)) / (nd(d-1)), rebuilt as ratio data."""
    xs = require_sum_zero(xi)
    if not is_generic(xs):
        raise NonGenericXi("stability parameter is not generic")
    d, n = shell.d, shell.n
    if len(xs) != d:
        raise ValueError("parameter length disagrees with the shell")
    denom = n * d * (d - 1)
    x = tuple((xi_i + n * (d - 1)) / denom for xi_i in xs)
    if any(xi_i <= 0 for xi_i in x):
        raise XiOutOfWindow("induced weights must all be positive")
    ratios = [xi_i / x[-1] for xi_i in x[:-1]]
    torus = TorusData.from_ratios(ratios)
    if torus.x != x:
        raise AssertionError("ratio reconstruction does not reproduce the weights")
    return torus


# ---------------------------------------------------------------------------
# Plücker support, weight polytope, one-parameter weights
# ---------------------------------------------------------------------------


def pluecker_support(V: GradedSubspace, budget: int | None = None) -> tuple:
    """All slot subsets with a nonvanishing maximal minor of the generators."""
    cap = DEFAULT_PLUECKER_BUDGET if budget is None else budget
    if V.k == 0:
        return ((),)
    n_comb = math.comb(V.total, V.k)
    if n_comb > cap:
        raise BudgetExceeded(f"{n_comb} maximal minors exceed the budget {cap}")
    out = []
    for I in combinations(range(V.total), V.k):
        minor = [[row[c] for c in I] for row in V.rows]
        if fp_det(minor, V.p):
            out.append(I)
    return tuple(out)


def _support_weights(V: GradedSubspace, torus: TorusData, support=None) -> list:
    """Distinct sub-torus weights of the nonvanishing Plücker coordinates."""
    if support is None:
        support = pluecker_support(V)
    offs = V.offsets()
    bounds = [(offs[i], offs[i] + V.dims[i]) for i in range(V.d)]
    weights = set()
    for I in support:
        counts = [0] * V.d
        for c in I:
            for i, (lo, hi) in enumerate(bounds):
                if lo <= c < hi:
                    counts[i] += 1
                    break
        chi = [0] * (V.d - 1)
        for i in range(V.d):
            w = torus.summand_weight(i + 1)
            for k in range(V.d - 1):
                chi[k] += counts[i] * w[k]
        weights.add(tuple(chi))
    return sorted(weights)


def is_torus_stable(V: GradedSubspace, torus: TorusData) -> bool:
    """Weight-polytope criterion: the origin is interior to the hull of the
    weights carried by the nonvanishing Plücker coordinates."""
    weights = _support_weights(V, torus)
    return lp.origin_in_interior(weights)


def is_torus_semistable(V: GradedSubspace, torus: TorusData) -> bool:
    """Boundary allowed: the origin lies in the weight polytope."""
    weights = _support_weights(V, torus)
    origin = (Fraction(0),) * (V.d - 1)
    return lp.in_convex_hull(weights, origin)


def mu_one_param(V: GradedSubspace, nvec, torus: TorusData) -> int:
    """Hilbert-Mumford weight of V along the one-parameter subgroup nvec.

    Computes the limit subspace under the dominant-weight filtration, reads
    the torus weight r of the Plücker line at the limit, and returns -r.  The
    sign is calibrated so that a subspace whose weight polytope has the origin
    interior gets a positive value on every ray.
    """
    nvec = tuple(nvec)
    if len(nvec) != V.d - 1 or all(x == 0 for x in nvec):
        raise ValueError("nvec must be a nonzero integer vector of length d-1")
    pair = []
    for i in range(V.d):
        w = torus.summand_weight(i + 1)
        pair.append(sum(wk * nk for wk, nk in zip(w, nvec)))
    levels = sorted(set(pair))
    r = 0
    prev_dim = 0
    # filtration F_{>=c}: as c decreases the subspace grows; the graded piece
    # at level c contributes c times its dimension to the limit weight.
    for c in reversed(levels):
        blocks = [i + 1 for i in range(V.d) if pair[i] >= c]
        dim_ge = V.intersection_dim(blocks)
        r += c * (dim_ge - prev_dim)
        prev_dim = dim_ge
    if prev_dim != V.k:
        raise AssertionError("filtration dimensions do not exhaust the subspace")
    return -r


def closed_form_subset_test(
    V: GradedSubspace, torus: TorusData, strict: bool = True
) -> bool:
    """Subset-inequality form of the polytope criterion.

    Stability reads: dim(V) x(S) > dim(V cap E_S) for every nonempty proper
    subset S of the summands (semistability with >=).  This orientation is
    the one validated by exhaustive agreement with ``is_torus_stable``.
    """
    k = V.k
    for S in proper_subsets(V.d):
        lhs = k * sum(torus.x[i - 1] for i in S)
        rhs = V.intersection_dim(S)
        if strict:
            if lhs <= rhs:
                return False
        else:
            if lhs < rhs:
                return False
    return True


def isogeny_determinant(torus: TorusData) -> Fraction:
    """Character-lattice determinant (1 + sum s_i/r_i) * prod r_i; nonzero."""
    total = 1 + sum(Fraction(s, r) for s, r in zip(torus.s, torus.r))
    prod = 1
    for r in torus.r:
        prod *= r
    value = total * prod
    assert value != 0
    return value
