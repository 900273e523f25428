"""Lattices in F^d as O-column-spans with unique canonical bases.

A lattice is held by its canonical basis matrix (lower triangular, pure-power
pivots, sub-pivot entries reduced modulo the row pivot), so equality is
structural comparison and the index is the cached sum of pivot valuations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BudgetExceeded, FormDimensionMismatch, SingularMatrix
from .laurent import (
    LaurentMatrix,
    LaurentPoly,
    FieldSpec,
    kernel_saturation,
    reduce_generators,
)

__all__ = [
    "Lattice",
    "ShellSpec",
    "FORM_KINDS",
    "lattice_from_matrix",
    "lattice_from_generators",
    "intersect_coordinate",
    "translate",
    "in_shell",
    "enumerate_shell",
    "count_enumeration_candidates",
    "write_shell_jsonl",
    "dual_lattice",
    "is_self_dual",
    "standard_lattice",
]

DEFAULT_ENUM_BUDGET = 10**7

FORM_KINDS = ("gl_pairing", "symplectic", "symmetric_even", "symmetric_odd")


@dataclass(frozen=True)
class ShellSpec:
    """Finite truncation level: lattices of index 0 with eps^n L0 inside."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.n < 1:
            raise ValueError("level n must be >= 1")


class Lattice:
    """Full-rank O-span of d columns, stored in canonical form."""

    __slots__ = ("p", "d", "basis", "pivots", "index", "_icache")

    def __init__(self, p: int, basis: LaurentMatrix, pivots: tuple, *, _trusted=False):
        if not _trusted:
            raise TypeError("use lattice_from_matrix / lattice_from_generators")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "d", basis.d)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivots", pivots)
        object.__setattr__(self, "index", sum(pivots))
        object.__setattr__(self, "_icache", {})

    def __setattr__(self, *a):
        raise AttributeError("Lattice is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Lattice)
            and self.p == other.p
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.p, self.basis))

    def __repr__(self):
        return f"Lattice(p={self.p}, pivots={self.pivots}, basis={self.basis!r})"

    def contains(self, vec) -> bool:
        """Membership of a Laurent vector, by forward substitution.

        Pivots are pure powers, so each elimination step is an exact shift.
        """
        x = list(vec)
        for i in range(self.d):
            e = x[i]
            if e.is_zero:
                continue
            if e.val() < self.pivots[i]:
                return False
            c = e.shift(-self.pivots[i])
            for l in range(i + 1, self.d):
                b = self.basis.rows[l][i]
                if not b.is_zero:
                    x[l] = x[l] - c * b
        return True

    def to_json(self) -> dict:
        return {"d": self.d, "basis": self.basis.to_json()}

    @classmethod
    def from_json(cls, p: int, data: dict) -> "Lattice":
        if not isinstance(data, dict) or "basis" not in data:
            raise ValueError('lattice wire form must be {"d": ..., "basis": ...}')
        M = LaurentMatrix.from_json(p, data["basis"])
        if "d" in data and data["d"] != M.d:
            raise ValueError("outer d disagrees with basis dimension")
        return lattice_from_matrix(M)


def standard_lattice(p: int, d: int) -> Lattice:
    """L_0 = O^d."""
    return Lattice(p, LaurentMatrix.identity(p, d), (0,) * d, _trusted=True)


def lattice_from_matrix(M: LaurentMatrix) -> Lattice:
    """Canonical lattice with the same O-column-span as M."""
    pivots, cols = reduce_generators(M.p, M.d, M.columns())
    basis = LaurentMatrix(M.p, [[cols[j][i] for j in range(M.d)] for i in range(M.d)])
    return Lattice(M.p, basis, pivots, _trusted=True)


def lattice_from_generators(p: int, d: int, columns) -> Lattice:
    """Canonical lattice spanned by >= d generator columns of full rank."""
    pivots, cols = reduce_generators(p, d, list(columns))
    basis = LaurentMatrix(p, [[cols[j][i] for j in range(d)] for i in range(d)])
    return Lattice(p, basis, pivots, _trusted=True)


def intersect_coordinate(L: Lattice, S) -> tuple[int, list]:
    """Index and canonical basis of L intersected with the coordinate subspace F^S.

    ``S`` holds 1-based coordinate labels.  The basis is returned in ambient
    coordinates (zero rows off S); the index is taken inside F^S.
    """
    S = frozenset(S)
    if not S:
        raise ValueError("coordinate subset must be nonempty")
    if not S <= set(range(1, L.d + 1)):
        raise ValueError("coordinate labels out of range")
    got = L._icache.get(S)
    if got is not None:
        return got

    d = L.d
    p = L.p
    if len(S) == d:
        result = (L.index, L.basis.columns())
        L._icache[S] = result
        return result

    complement = sorted(set(range(1, d + 1)) - S)
    coeff_vecs = kernel_saturation(L.basis, complement)
    gens = [L.basis.apply(c) for c in coeff_vecs]
    rows = sorted(S)
    small_cols = [[g[r - 1] for r in rows] for g in gens]
    pivots, cols = reduce_generators(p, len(S), small_cols)

    zero = LaurentPoly.zero(p)
    ambient = []
    for j in range(len(S)):
        v = [zero] * d
        for t, r in enumerate(rows):
            v[r - 1] = cols[j][t]
        ambient.append(v)
    result = (sum(pivots), ambient)
    L._icache[S] = result
    return result


def intersect_index(L: Lattice, S) -> int:
    return intersect_coordinate(L, S)[0]


def translate(L: Lattice, mu) -> Lattice:
    """The lattice eps^mu L (coordinate i scaled by eps^{mu_i})."""
    mu = tuple(mu)
    if len(mu) != L.d:
        raise ValueError("translation vector length mismatch")
    if all(m == 0 for m in mu):
        return L
    # Row scaling preserves the canonical shape: pivots shift with their row
    # and sub-pivot windows shift consistently.
    rows = [
        tuple(x.shift(mu[i]) for x in L.basis.rows[i]) for i in range(L.d)
    ]
    basis = LaurentMatrix(L.p, rows)
    pivots = tuple(L.pivots[i] + mu[i] for i in range(L.d))
    return Lattice(L.p, basis, pivots, _trusted=True)


def in_shell(L: Lattice, shell: ShellSpec) -> bool:
    """True iff eps^n L0 lies inside L and L has index zero."""
    if L.d != shell.d:
        raise ValueError("lattice dimension disagrees with the shell")
    if L.index != 0:
        return False
    p = L.p
    zero = LaurentPoly.zero(p)
    for i in range(L.d):
        v = [zero] * L.d
        v[i] = LaurentPoly.eps(p, shell.n)
        if not L.contains(v):
            return False
    return True


# ---------------------------------------------------------------------------
# shell enumeration
# ---------------------------------------------------------------------------


def _pivot_vectors(d: int, m: int, total: int):
    """All (a_1..a_d) with 0 <= a_i <= m and sum = total, lexicographic."""

    def rec(prefix, remaining, slots):
        if slots == 0:
            if remaining == 0:
                yield tuple(prefix)
            return
        lo = max(0, remaining - m * (slots - 1))
        hi = min(m, remaining)
        for a in range(lo, hi + 1):
            prefix.append(a)
            yield from rec(prefix, remaining - a, slots - 1)
            prefix.pop()

    yield from rec([], total, d)


def count_enumeration_candidates(shell: ShellSpec, field: FieldSpec) -> int:
    """Number of canonical-form candidates enumerate_shell will visit."""
    d, n, p = shell.d, shell.n, field.p
    m = d * n
    total = d * (d - 1) * n
    count = 0
    for a in _pivot_vectors(d, m, total):
        slots = sum(l * a[l] for l in range(d))
        count += p**slots
    return count


def enumerate_shell(shell: ShellSpec, field: FieldSpec, budget: int | None = None):
    """Yield every lattice of the shell over F_p exactly once, deterministically.

    Candidates are canonical triangular forms of the translated problem
    (lattices between eps^{dn} L0 and L0 with index d(d-1)n), filtered by the
    containment eps^{dn} L0 inside the span, then translated back by
    -(d-1)n on every coordinate.  The enumeration order is: pivot vectors
    lexicographically, then sub-pivot coefficients lexicographically (columns
    ascending, rows ascending, exponents ascending, digits 0..p-1).
    """
    cap = DEFAULT_ENUM_BUDGET if budget is None else budget
    candidates = count_enumeration_candidates(shell, field)
    if candidates > cap:
        raise BudgetExceeded(
            f"shell enumeration needs {candidates} candidates (budget {cap})"
        )

    d, n, p = shell.d, shell.n, field.p
    m = d * n
    total = d * (d - 1) * n
    back = (d - 1) * n
    zero = LaurentPoly.zero(p)

    for pivots in _pivot_vectors(d, m, total):
        # free coefficient slots: entry (row l, col i), l > i, exponents < a_l
        slots = []
        for i in range(d):
            for l in range(i + 1, d):
                for e in range(pivots[l]):
                    slots.append((i, l, e))
        for digits in _digit_tuples(p, len(slots)):
            cols = [[zero] * d for _ in range(d)]
            entry_terms: dict[tuple[int, int], list] = {}
            for (i, l, e), c in zip(slots, digits):
                if c:
                    entry_terms.setdefault((i, l), []).append((e, c))
            ok = True
            for i in range(d):
                cols[i][i] = LaurentPoly.eps(p, pivots[i])
            for (i, l), terms in entry_terms.items():
                cols[i][l] = LaurentPoly(p, terms)

            lat = Lattice(
                p,
                LaurentMatrix(p, [[cols[j][i] for j in range(d)] for i in range(d)]),
                tuple(pivots),
                _trusted=True,
            )
            # containment filter: eps^m e_j must lie in the span for every j
            for j in range(d):
                v = [zero] * d
                v[j] = LaurentPoly.eps(p, m)
                if not lat.contains(v):
                    ok = False
                    break
            if ok:
                yield translate(lat, (-back,) * d)


def _digit_tuples(p: int, k: int):
    """All base-p digit tuples of length k, lexicographic."""
    digits = [0] * k
    while True:
        yield tuple(digits)
        i = k - 1
        while i >= 0 and digits[i] == p - 1:
            digits[i] = 0
            i -= 1
        if i < 0:
            return
        digits[i] += 1


# ---------------------------------------------------------------------------
# duals
# ---------------------------------------------------------------------------


def write_shell_jsonl(shell: ShellSpec, field: FieldSpec, fh, budget: int | None = None) -> int:
    """Stream the shell enumeration as JSON-lines, one lattice per line.

    The order is the deterministic enumeration order; returns the count.
    """
    import json

    count = 0
    for L in enumerate_shell(shell, field, budget=budget):
        fh.write(json.dumps(L.to_json(), sort_keys=True))
        fh.write("\n")
        count += 1
    return count


def _form_gram(p: int, d: int, form: str) -> list:
    """Gram matrix (rows) of the standard bilinear form, entries in F_p."""
    if form not in FORM_KINDS:
        raise ValueError(f"unknown form kind {form!r}")
    G = [[0] * d for _ in range(d)]
    if form == "gl_pairing":
        for i in range(d):
            G[i][i] = 1
        return G
    if form == "symplectic":
        if d % 2 != 0:
            raise FormDimensionMismatch("symplectic form needs even dimension")
        for i in range(d // 2):
            G[i][d - 1 - i] = 1
            G[d - 1 - i][i] = (-1) % p
        return G
    if form == "symmetric_even":
        if d % 2 != 0:
            raise FormDimensionMismatch("split even form needs even dimension")
    if form == "symmetric_odd":
        if d % 2 != 1:
            raise FormDimensionMismatch("odd form needs odd dimension")
    for i in range(d):
        G[i][d - 1 - i] = 1
    return G


def _triangular_inverse(L: Lattice) -> list:
    """Columns of basis^{-1}; exact because pivots are pure powers."""
    d = L.d
    p = L.p
    zero = LaurentPoly.zero(p)
    inv_cols = []
    for j in range(d):
        # solve basis * x = e_j by forward substitution
        rhs = [zero] * d
        rhs[j] = LaurentPoly.one(p)
        x = [zero] * d
        for i in range(d):
            e = rhs[i]
            if e.is_zero:
                continue
            c = e.shift(-L.pivots[i])
            x[i] = c
            for l in range(i + 1, d):
                b = L.basis.rows[l][i]
                if not b.is_zero:
                    rhs[l] = rhs[l] - c * b
        inv_cols.append(x)
    return inv_cols


def dual_lattice(L: Lattice, form: str) -> Lattice:
    """Dual lattice {x : <x, L> in O} for the standard form of the given kind."""
    d = L.d
    p = L.p
    G = _form_gram(p, d, form)

    # inverse of the Gram matrix over F_p (signed permutation, but solved
    # generically to stay form-agnostic)
    from .fpspace import fp_inverse

    Ginv = fp_inverse(G, p)
    Binv_cols = _triangular_inverse(L)  # column j of basis^{-1}
    # dual basis = Gram^{-T} * (basis^{-1})^T; column j of the product is
    # Gram^{-T} applied to row j of basis^{-1}.
    zero = LaurentPoly.zero(p)
    dual_cols = []
    for j in range(d):
        brow = [Binv_cols[k][j] for k in range(d)]  # row j of basis^{-1}
        col = []
        for i in range(d):
            acc = zero
            for k in range(d):
                g = Ginv[k][i]  # Gram^{-T}[i][k] = Gram^{-1}[k][i]
                if g and not brow[k].is_zero:
                    acc = acc + brow[k] * g
            col.append(acc)
        dual_cols.append(col)
    return lattice_from_generators(p, d, dual_cols)


def is_self_dual(L: Lattice, form: str) -> bool:
    return dual_lattice(L, form) == L
