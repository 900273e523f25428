"""Dense linear algebra over a prime field F_p (row vectors as int lists)."""

from __future__ import annotations

__all__ = [
    "fp_rref",
    "fp_rank",
    "fp_nullspace",
    "fp_det",
    "fp_inverse",
    "fp_restricted_rank",
]


def fp_rref(rows, p: int) -> tuple[list, list]:
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    R = [list(r) for r in rows]
    if not R:
        return [], []
    ncols = len(R[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(R)):
            if R[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = pow(R[r][c], p - 2, p)
        R[r] = [(x * inv) % p for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] % p:
                f = R[i][c] % p
                R[i] = [(x - f * y) % p for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    out = [R[i] for i in range(r)]
    return out, pivots


def fp_rank(rows, p: int) -> int:
    return len(fp_rref(rows, p)[0])


def fp_nullspace(rows, p: int) -> list:
    """RREF basis of {x : rows . x = 0} (x as row vectors)."""
    if not rows:
        return []
    ncols = len(rows[0])
    R, pivots = fp_rref(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in zip(R, pivots):
            v[c] = (-r[f]) % p
        basis.append(v)
    out, _ = fp_rref(basis, p)
    return out


def fp_det(rows, p: int) -> int:
    """Determinant of a square matrix over F_p."""
    R = [list(r) for r in rows]
    n = len(R)
    det = 1
    for c in range(n):
        pr = None
        for i in range(c, n):
            if R[i][c] % p:
                pr = i
                break
        if pr is None:
            return 0
        if pr != c:
            R[c], R[pr] = R[pr], R[c]
            det = (-det) % p
        det = (det * R[c][c]) % p
        inv = pow(R[c][c], p - 2, p)
        for i in range(c + 1, n):
            if R[i][c] % p:
                f = (R[i][c] * inv) % p
                R[i] = [(x - f * y) % p for x, y in zip(R[i], R[c])]
    return det % p


def fp_inverse(rows, p: int) -> list:
    """Inverse of a square matrix over F_p."""
    n = len(rows)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    R, pivots = fp_rref(aug, p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular over F_p")
    return [r[n:] for r in R[:n]]


def fp_restricted_rank(rows, cols, p: int) -> int:
    """Rank of the submatrix keeping the given column indices."""
    sub = [[r[c] for c in cols] for r in rows]
    return fp_rank(sub, p)
