"""Exact rational linear programming and convex-hull membership.

A small two-phase simplex over fractions.Fraction with Bland's rule; sizes
here are tiny (tens of variables), so simplicity beats speed.  Built on top
of it: point-in-hull feasibility and the strict interior test for the origin,
both exact.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "simplex_solve",
    "in_convex_hull",
    "origin_in_interior",
    "affine_rank",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _phase(T, basis, nrows, ncols):
    """Run simplex iterations on tableau T (objective in last row), Bland's rule."""
    while True:
        obj = T[nrows]
        enter = None
        for j in range(ncols):
            if obj[j] < 0:
                enter = j
                break
        if enter is None:
            return True
        leave = None
        best = None
        for i in range(nrows):
            if T[i][enter] > 0:
                ratio = T[i][ncols] / T[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave is None:
            return False  # unbounded
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(nrows + 1):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * b for a, b in zip(T[i], T[leave])]
        basis[leave] = enter


def simplex_solve(A, b, c):
    """Minimize c.x subject to A x = b, x >= 0 (all entries exact rationals).

    Returns (status, x, value) where status is "optimal", "infeasible" or
    "unbounded".
    """
    m = len(A)
    n = len(c)
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    c = [Fraction(x) for x in c]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]

    # phase 1: artificial variables
    ncols = n + m
    T = []
    for i in range(m):
        row = A[i] + [(_ONE if j == i else _ZERO) for j in range(m)] + [b[i]]
        T.append(row)
    obj = [_ZERO] * (ncols + 1)
    for i in range(m):
        for j in range(ncols + 1):
            obj[j] -= T[i][j]
    for j in range(n, ncols):
        obj[j] = _ZERO
    T.append(obj)
    basis = [n + i for i in range(m)]
    _phase(T, basis, m, ncols)
    if -T[m][ncols] > 0:
        return "infeasible", None, None

    # drive any artificial variables out of the basis
    for i in range(m):
        if basis[i] >= n:
            enter = None
            for j in range(n):
                if T[i][j] != 0:
                    enter = j
                    break
            if enter is None:
                continue  # redundant row
            piv = T[i][enter]
            T[i] = [x / piv for x in T[i]]
            for k in range(m + 1):
                if k != i and T[k][enter] != 0:
                    f = T[k][enter]
                    T[k] = [a - f * bb for a, bb in zip(T[k], T[i])]
            basis[i] = enter

    # phase 2
    T2 = [row[:n] + [row[ncols]] for row in T[:m]]
    obj = list(c) + [_ZERO]
    for i in range(m):
        if basis[i] < n and obj[basis[i]] != 0:
            f = obj[basis[i]]
            obj = [a - f * bb for a, bb in zip(obj, T2[i])]
    T2.append(obj)
    if not _phase(T2, basis, m, n):
        return "unbounded", None, None
    x = [_ZERO] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T2[i][n]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return "optimal", x, value


def in_convex_hull(points, target) -> bool:
    """Exact membership of target in the convex hull of the point list."""
    pts = [tuple(Fraction(x) for x in pt) for pt in points]
    if not pts:
        return False
    tgt = tuple(Fraction(x) for x in target)
    dim = len(tgt)
    A = []
    b = []
    for k in range(dim):
        A.append([pt[k] for pt in pts])
        b.append(tgt[k])
    A.append([_ONE] * len(pts))
    b.append(_ONE)
    status, _, _ = simplex_solve(A, b, [_ZERO] * len(pts))
    return status == "optimal"


def affine_rank(points) -> int:
    """Dimension of the affine hull of the points."""
    pts = [tuple(Fraction(x) for x in pt) for pt in points]
    if len(pts) <= 1:
        return 0
    base = pts[0]
    rows = [[x - y for x, y in zip(pt, base)] for pt in pts[1:]]
    # rational Gaussian elimination
    rank = 0
    ncols = len(base)
    for c in range(ncols):
        pr = None
        for i in range(rank, len(rows)):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        inv = rows[rank][c]
        rows[rank] = [x / inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def origin_in_interior(points) -> bool:
    """Exact test: is the origin interior to the convex hull of the points?

    Interior needs the hull to be full-dimensional and the origin to admit a
    convex combination with every coefficient strictly positive; the latter is
    the optimum of a small exact LP (maximize the common floor t of the
    coefficients).
    """
    pts = [tuple(Fraction(x) for x in pt) for pt in points]
    if not pts:
        return False
    dim = len(pts[0])
    if affine_rank(pts) < dim:
        return False
    k = len(pts)
    # variables: t, mu_1..mu_k  with  lambda_j = t + mu_j
    A = []
    b = []
    for c in range(dim):
        A.append([sum(pt[c] for pt in pts)] + [pt[c] for pt in pts])
        b.append(_ZERO)
    A.append([Fraction(k)] + [_ONE] * k)
    b.append(_ONE)
    status, x, value = simplex_solve(A, b, [Fraction(-1)] + [_ZERO] * k)
    if status != "optimal":
        return False
    return -value > 0
