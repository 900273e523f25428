"""Exact arithmetic over F_p[eps, eps^-1] and matrix reduction over O = F_p[[eps]].

Every coefficient lives in a prime field F_p and every element of the Laurent
field is carried as a finite Laurent polynomial, so nothing here truncates or
rounds.  The three matrix workhorses are:

* ``det_val``          -- valuation of an exact determinant,
* ``column_reduce_over_O`` -- the unique lower-triangular canonical basis of
  an O-column-span (pivots are pure powers eps^a_i, entries right of a pivot
  vanish, entries below row l are reduced modulo eps^{a_l}),
* ``kernel_saturation`` -- O-saturated solution module of (Mc)_j = 0 on a row
  subset.

Canonicalization works in two exact stages.  Rows are first scaled by
eps^{-m_i} so all entries are plain polynomials, then a gcd-based column
echelon over the PID F_p[eps] produces a lower-triangular matrix with exact
zeros above the diagonal.  Diagonal entries factor as eps^{a_i} * unit; the
unit inverses are power series, but every entry of the final canonical form
lives below eps^{D+1} (D = sum of pivot valuations), and exponents >= D can be
absorbed into the lattice (eps^D L_0 is contained in the span), so working
modulo eps^{D+1} loses nothing.  Uniqueness of the normal form guarantees the
result is independent of these internal choices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SingularMatrix

__all__ = [
    "FieldSpec",
    "LaurentPoly",
    "LaurentMatrix",
    "val",
    "det_val",
    "column_reduce_over_O",
    "kernel_saturation",
    "reduce_generators",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field F_p; all coefficient arithmetic reduces into [0, p-1]."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"field characteristic must be prime, got {self.p}")


# ---------------------------------------------------------------------------
# dense polynomials over F_p: coefficient lists, ascending degree, trimmed
# ---------------------------------------------------------------------------


def _ptrim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _padd(a: list, b: list, p: int) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _ptrim(out)


def _pneg(a: list, p: int) -> list:
    return [(-x) % p for x in a]


def _psub(a: list, b: list, p: int) -> list:
    return _padd(a, _pneg(b, p), p)


def _pmul(a: list, b: list, p: int) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pscale(a: list, c: int, p: int) -> list:
    c %= p
    if c == 0:
        return []
    return _ptrim([(x * c) % p for x in a])


def _pval(a: list) -> int:
    for i, x in enumerate(a):
        if x:
            return i
    raise ValueError("valuation of zero polynomial")


def _pdivmod(a: list, b: list, p: int) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    deg_b = len(b) - 1
    if len(rem) <= deg_b:
        return [], _ptrim(rem)
    binv = pow(b[-1], p - 2, p)
    quo = [0] * (len(rem) - deg_b)
    for i in range(len(rem) - 1, deg_b - 1, -1):
        c = rem[i]
        if c:
            q = (c * binv) % p
            quo[i - deg_b] = q
            for j in range(deg_b + 1):
                rem[i - deg_b + j] = (rem[i - deg_b + j] - q * b[j]) % p
    return _ptrim(quo), _ptrim(rem)


def _pdiv_exact(a: list, b: list, p: int) -> list:
    q, r = _pdivmod(a, b, p)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def _pxgcd(a: list, b: list, p: int) -> tuple[list, list, list]:
    """Extended gcd over F_p[x]; g is monic and g = u*a + v*b."""
    r0, r1 = list(a), list(b)
    u0, u1 = [1], []
    v0, v1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        u0, u1 = u1, _psub(u0, _pmul(q, u1, p), p)
        v0, v1 = v1, _psub(v0, _pmul(q, v1, p), p)
    if not r0:
        return [], u0, v0
    lead_inv = pow(r0[-1], p - 2, p)
    return (_pscale(r0, lead_inv, p), _pscale(u0, lead_inv, p), _pscale(v0, lead_inv, p))


def _pinv_series(h: list, prec: int, p: int) -> list:
    """Inverse of h (h[0] != 0) as a power series modulo x^prec."""
    c0inv = pow(h[0], p - 2, p)
    out = [c0inv] + [0] * (prec - 1)
    for k in range(1, prec):
        acc = 0
        for j in range(1, min(k, len(h) - 1) + 1):
            acc += h[j] * out[k - j]
        out[k] = (-c0inv * acc) % p
    return _ptrim(out)


def _ptrunc(a: list, bound: int) -> list:
    return _ptrim(list(a[:bound]))


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Finite Laurent polynomial over F_p, stored as sorted (exponent, coeff) pairs."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms=()):
        acc: dict[int, int] = {}
        for e, c in terms:
            c %= p
            if c:
                acc[e] = (acc.get(e, 0) + c) % p
        object.__setattr__(self, "p", p)
        object.__setattr__(
            self, "terms", tuple(sorted((e, c) for e, c in acc.items() if c))
        )

    def __setattr__(self, *a):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "LaurentPoly":
        return cls(p)

    @classmethod
    def one(cls, p: int) -> "LaurentPoly":
        return cls(p, ((0, 1),))

    @classmethod
    def eps(cls, p: int, k: int = 1) -> "LaurentPoly":
        return cls(p, ((k, 1),))

    @classmethod
    def const(cls, p: int, c: int) -> "LaurentPoly":
        return cls(p, ((0, c),))

    @classmethod
    def from_dense(cls, p: int, shift: int, coeffs: list) -> "LaurentPoly":
        return cls(p, ((shift + i, c) for i, c in enumerate(coeffs) if c))

    # -- queries --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def val(self):
        """Smallest exponent with nonzero coefficient; +inf for zero."""
        if not self.terms:
            return math.inf
        return self.terms[0][0]

    def max_exp(self):
        if not self.terms:
            return -math.inf
        return self.terms[-1][0]

    def coeff(self, e: int) -> int:
        for ee, c in self.terms:
            if ee == e:
                return c
        return 0

    def to_dense(self) -> tuple[int, list]:
        """Return (shift, coeffs) with poly = eps^shift * sum coeffs[i] eps^i."""
        if not self.terms:
            return 0, []
        shift = self.terms[0][0]
        width = self.terms[-1][0] - shift + 1
        coeffs = [0] * width
        for e, c in self.terms:
            coeffs[e - shift] = c
        return shift, coeffs

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(self.p, self.terms + other.terms)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.p, ((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(self.p, ((e, c * other) for e, c in self.terms))
        acc: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                k = e1 + e2
                acc[k] = (acc.get(k, 0) + c1 * c2) % self.p
        return LaurentPoly(self.p, acc.items())

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by eps^k."""
        return LaurentPoly(self.p, ((e + k, c) for e, c in self.terms))

    def split_at(self, a: int) -> tuple["LaurentPoly", "LaurentPoly"]:
        """Return (exponents < a, exponents >= a)."""
        lo = [(e, c) for e, c in self.terms if e < a]
        hi = [(e, c) for e, c in self.terms if e >= a]
        return LaurentPoly(self.p, lo), LaurentPoly(self.p, hi)

    # -- comparison / io ---------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.p, self.terms))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.terms:
            if e == 0:
                bits.append(f"{c}")
            elif e == 1:
                bits.append(f"{c}*eps" if c != 1 else "eps")
            else:
                bits.append(f"{c}*eps^{e}" if c != 1 else f"eps^{e}")
        return " + ".join(bits)

    def to_json(self) -> list:
        return [[e, c] for e, c in self.terms]

    @classmethod
    def from_json(cls, p: int, data) -> "LaurentPoly":
        if not isinstance(data, list):
            raise ValueError("Laurent polynomial wire form must be a list")
        prev = None
        for pair in data:
            if not (isinstance(pair, list) and len(pair) == 2):
                raise ValueError("each term must be an [exponent, coefficient] pair")
            e, c = pair
            if not (isinstance(e, int) and isinstance(c, int)):
                raise ValueError("exponents and coefficients must be integers")
            if not (1 <= c <= p - 1):
                raise ValueError(f"coefficient {c} out of range [1, {p - 1}]")
            if prev is not None and e <= prev:
                raise ValueError("exponents must be strictly increasing")
            prev = e
        return cls(p, ((e, c) for e, c in data))


def val(poly: LaurentPoly):
    """Valuation of a Laurent polynomial; +inf for zero."""
    return poly.val()


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


class LaurentMatrix:
    """Square matrix of Laurent polynomials over a common F_p."""

    __slots__ = ("p", "d", "rows")

    def __init__(self, p: int, rows):
        rows = tuple(tuple(r) for r in rows)
        d = len(rows)
        for r in rows:
            if len(r) != d:
                raise ValueError("matrix must be square")
            for x in r:
                if not isinstance(x, LaurentPoly) or x.p != p:
                    raise ValueError("entries must be LaurentPoly over the same field")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *a):
        raise AttributeError("LaurentMatrix is immutable")

    @classmethod
    def identity(cls, p: int, d: int) -> "LaurentMatrix":
        one, zero = LaurentPoly.one(p), LaurentPoly.zero(p)
        return cls(p, [[one if i == j else zero for j in range(d)] for i in range(d)])

    @classmethod
    def diag_powers(cls, p: int, exps) -> "LaurentMatrix":
        exps = list(exps)
        d = len(exps)
        zero = LaurentPoly.zero(p)
        return cls(
            p,
            [
                [LaurentPoly.eps(p, exps[i]) if i == j else zero for j in range(d)]
                for i in range(d)
            ],
        )

    def entry(self, i: int, j: int) -> LaurentPoly:
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [self.rows[i][j] for i in range(self.d)]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.d)]

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.d != other.d or self.p != other.p:
            raise ValueError("matrix shape/field mismatch")
        d = self.d
        zero = LaurentPoly.zero(self.p)
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = zero
                for k in range(d):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if not a.is_zero and not b.is_zero:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(self.p, out)

    def apply(self, vec) -> list:
        """Matrix times column vector of LaurentPoly."""
        zero = LaurentPoly.zero(self.p)
        out = []
        for i in range(self.d):
            acc = zero
            for k in range(self.d):
                a = self.rows[i][k]
                if not a.is_zero and not vec[k].is_zero:
                    acc = acc + a * vec[k]
            out.append(acc)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentMatrix)
            and self.p == other.p
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.p, self.rows))

    def __repr__(self):
        body = "; ".join(", ".join(repr(x) for x in r) for r in self.rows)
        return f"LaurentMatrix[{body}]"

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "entries": [x.to_json() for r in self.rows for x in r],
        }

    @classmethod
    def from_json(cls, p: int, data: dict) -> "LaurentMatrix":
        if not isinstance(data, dict) or "d" not in data or "entries" not in data:
            raise ValueError('matrix wire form must be {"d": ..., "entries": [...]}')
        d = data["d"]
        entries = data["entries"]
        if not (isinstance(d, int) and d >= 1 and len(entries) == d * d):
            raise ValueError("entry count must be d*d")
        polys = [LaurentPoly.from_json(p, e) for e in entries]
        return cls(p, [polys[i * d : (i + 1) * d] for i in range(d)])


# ---------------------------------------------------------------------------
# determinant valuation
# ---------------------------------------------------------------------------


def _det(M: LaurentMatrix) -> LaurentPoly:
    """Exact determinant by Laplace expansion memoized on column subsets."""
    d = M.d
    p = M.p
    memo: dict[tuple[int, int], LaurentPoly] = {}

    def rec(i: int, colmask: int) -> LaurentPoly:
        if i == d:
            return LaurentPoly.one(p)
        key = (i, colmask)
        got = memo.get(key)
        if got is not None:
            return got
        acc = LaurentPoly.zero(p)
        sign = 1
        for j in range(d):
            bit = 1 << j
            if colmask & bit:
                continue
            a = M.rows[i][j]
            if not a.is_zero:
                sub = rec(i + 1, colmask | bit)
                if not sub.is_zero:
                    term = a * sub
                    acc = acc + (term if sign > 0 else -term)
            sign = -sign
        memo[key] = acc
        return acc

    return rec(0, 0)


def det_val(M: LaurentMatrix) -> int:
    """Valuation of det(M); raises SingularMatrix when the determinant vanishes."""
    dv = _det(M).val()
    if dv == math.inf:
        raise SingularMatrix("determinant is zero")
    return dv


# ---------------------------------------------------------------------------
# gcd column echelon over F_p[eps] (shared by canonicalization and kernels)
# ---------------------------------------------------------------------------


def _gcd_column_echelon(p: int, nrows: int, cols: list, want_transform: bool):
    """Column echelon over F_p[x] by unimodular column operations.

    ``cols`` is a list of columns, each a list of dense coefficient lists.
    Returns (rank, pivot_rows, cols, U); U tracks the operations when asked.
    """
    ncols = len(cols)
    U = None
    if want_transform:
        U = [[[1] if i == j else [] for i in range(ncols)] for j in range(ncols)]
        # U[j] is the j-th transform column, expressed in original column coords.
    rank = 0
    pivot_rows = []
    for i in range(nrows):
        j0 = None
        for j in range(rank, ncols):
            if cols[j][i]:
                j0 = j
                break
        if j0 is None:
            continue
        if j0 != rank:
            cols[rank], cols[j0] = cols[j0], cols[rank]
            if U is not None:
                U[rank], U[j0] = U[j0], U[rank]
        for j in range(rank + 1, ncols):
            b = cols[j][i]
            if not b:
                continue
            a = cols[rank][i]
            g, u, v = _pxgcd(a, b, p)
            aq = _pdiv_exact(a, g, p)
            bq = _pdiv_exact(b, g, p)
            new_r = [
                _padd(_pmul(u, cols[rank][t], p), _pmul(v, cols[j][t], p), p)
                for t in range(nrows)
            ]
            new_j = [
                _psub(
                    _pmul(aq, cols[j][t], p), _pmul(bq, cols[rank][t], p), p
                )
                for t in range(nrows)
            ]
            cols[rank], cols[j] = new_r, new_j
            if U is not None:
                nu_r = [
                    _padd(_pmul(u, U[rank][t], p), _pmul(v, U[j][t], p), p)
                    for t in range(ncols)
                ]
                nu_j = [
                    _psub(_pmul(aq, U[j][t], p), _pmul(bq, U[rank][t], p), p)
                    for t in range(ncols)
                ]
                U[rank], U[j] = nu_r, nu_j
        pivot_rows.append(i)
        rank += 1
        if rank == ncols:
            break
    return rank, pivot_rows, cols, U


# ---------------------------------------------------------------------------
# canonical column reduction over O
# ---------------------------------------------------------------------------


def reduce_generators(p: int, d: int, columns: list) -> tuple[tuple, list]:
    """Canonical lower-triangular O-basis of the span of ``columns``.

    ``columns`` is a list (length >= d) of length-d lists of LaurentPoly that
    must span a full-rank lattice.  Returns (pivot_valuations, basis_columns)
    where basis_columns is the unique canonical d x d column family.
    """
    if len(columns) < d:
        raise SingularMatrix("fewer generators than the ambient rank")

    # Row scaling: shift each row into F_p[eps]; undone at the end.
    row_min = []
    for i in range(d):
        vals = [c[i].val() for c in columns if not c[i].is_zero]
        if not vals:
            raise SingularMatrix(f"row {i + 1} of the generators is identically zero")
        row_min.append(min(vals))

    dense_cols = []
    for c in columns:
        col = []
        for i in range(d):
            shift, coeffs = c[i].shift(-row_min[i]).to_dense()
            col.append(_ptrim([0] * shift + coeffs))
        dense_cols.append(col)

    rank, pivot_rows, cols, _ = _gcd_column_echelon(p, d, dense_cols, False)
    if rank < d:
        raise SingularMatrix("generators do not span full rank")
    for j in range(d, len(cols)):
        if any(cols[j][i] for i in range(d)):
            raise AssertionError("non-pivot column survived echelon")
    cols = cols[:d]

    pivots = [_pval(cols[i][i]) for i in range(d)]
    total = sum(pivots)
    bound = total + 1  # exponents >= total are absorbed by eps^total L0

    # Normalize each diagonal to the pure power eps^{a_i}.
    for i in range(d):
        a = pivots[i]
        g = cols[i][i]
        unit = g[a:]
        if unit != [1]:
            uinv = _pinv_series(unit, bound, p)
            cols[i] = [_ptrunc(_pmul(e, uinv, p), bound) for e in cols[i]]
        else:
            cols[i] = [_ptrunc(e, bound) for e in cols[i]]
        piv = [0] * a + [1]
        if cols[i][i] != piv:
            raise AssertionError("pivot normalization failed")

    # Reduce entries below each pivot modulo the pivot power of their row.
    for i in range(d):
        for l in range(i + 1, d):
            e = cols[i][l]
            if len(e) <= pivots[l]:
                continue
            q = e[pivots[l]:]  # quotient by eps^{a_l}, exponents >= a_l part
            for t in range(l, d):
                cols[i][t] = _ptrunc(
                    _psub(cols[i][t], _pmul(q, cols[l][t], p), p), bound
                )

    # Undo the row scaling.
    out_cols = []
    for j in range(d):
        out_cols.append(
            [
                LaurentPoly.from_dense(p, row_min[i], cols[j][i])
                for i in range(d)
            ]
        )
    out_pivots = tuple(pivots[i] + row_min[i] for i in range(d))

    for j in range(d):
        for i in range(j):
            if not out_cols[j][i].is_zero:
                raise AssertionError("canonical form is not lower triangular")
    return out_pivots, out_cols


def column_reduce_over_O(M: LaurentMatrix) -> LaurentMatrix:
    """Unique canonical basis matrix of the O-column-span of M."""
    pivots, cols = reduce_generators(M.p, M.d, M.columns())
    return LaurentMatrix(
        M.p, [[cols[j][i] for j in range(M.d)] for i in range(M.d)]
    )


# ---------------------------------------------------------------------------
# saturated kernels
# ---------------------------------------------------------------------------


def kernel_saturation(M: LaurentMatrix, rows) -> list:
    """O-generators of {c in O^d : (Mc)_j = 0 for all j in rows}.

    ``rows`` uses 1-based coordinate labels.  The output list of coefficient
    vectors is saturated: the O-span is exactly the solution module.
    """
    rows = sorted(set(rows))
    d = M.d
    p = M.p
    for r in rows:
        if not 1 <= r <= d:
            raise ValueError(f"row label {r} out of range 1..{d}")
    det_val(M)  # raises SingularMatrix when det = 0

    if not rows:
        one = LaurentPoly.one(p)
        zero = LaurentPoly.zero(p)
        return [[one if i == j else zero for i in range(d)] for j in range(d)]

    # Row scaling leaves the kernel unchanged.
    dense_cols = []
    scaled_rows = []
    for r in rows:
        entries = [M.rows[r - 1][j] for j in range(d)]
        vals = [x.val() for x in entries if not x.is_zero]
        shift = -min(vals) if vals else 0
        scaled_rows.append([x.shift(shift) for x in entries])
    for j in range(d):
        col = []
        for rr in scaled_rows:
            s, coeffs = rr[j].to_dense()
            col.append(_ptrim([0] * s + coeffs))
        dense_cols.append(col)

    rank, _, cols, U = _gcd_column_echelon(p, len(rows), dense_cols, True)

    kernel = []
    for j in range(rank, d):
        if any(cols[j][t] for t in range(len(rows))):
            raise AssertionError("kernel column is not annihilated")
        vec = [LaurentPoly.from_dense(p, 0, U[j][t]) for t in range(d)]
        kernel.append(vec)

    # Exact verification: every generator solves the system.
    for vec in kernel:
        for r in rows:
            acc = LaurentPoly.zero(p)
            for jj in range(d):
                a = M.rows[r - 1][jj]
                if not a.is_zero and not vec[jj].is_zero:
                    acc = acc + a * vec[jj]
            if not acc.is_zero:
                raise AssertionError("kernel verification failed")
    return kernel
