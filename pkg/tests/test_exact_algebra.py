import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lagstab.errors import SingularMatrix
from lagstab.laurent import (
    FieldSpec,
    LaurentMatrix,
    LaurentPoly,
    column_reduce_over_O,
    det_val,
    kernel_saturation,
    val,
)


def eps(p, k=1):
    return LaurentPoly.eps(p, k)


def zero(p):
    return LaurentPoly.zero(p)


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------


def test_field_spec_requires_prime():
    FieldSpec(2)
    FieldSpec(13)
    with pytest.raises(ValueError):
        FieldSpec(4)
    with pytest.raises(ValueError):
        FieldSpec(1)


def test_val_of_eps_is_one():
    assert val(eps(2)) == 1


def test_val_of_zero_is_infinite():
    assert val(zero(5)) == math.inf


def test_val_picks_least_exponent():
    f = LaurentPoly(3, [(-1, 1), (0, 1), (1, 1)])
    assert val(f) == -1


laurent_terms = st.lists(
    st.tuples(st.integers(-6, 6), st.integers(1, 4)), min_size=0, max_size=6
)


@given(laurent_terms, laurent_terms)
@settings(max_examples=200, deadline=None)
def test_val_is_multiplicative(t1, t2):
    p = 5
    f = LaurentPoly(p, t1)
    g = LaurentPoly(p, t2)
    fg = f * g
    if f.is_zero or g.is_zero:
        assert fg.is_zero
    else:
        # over a field the lowest terms cannot cancel
        assert val(fg) == val(f) + val(g)


@given(laurent_terms, laurent_terms, laurent_terms)
@settings(max_examples=150, deadline=None)
def test_ring_axioms_sampled(t1, t2, t3):
    p = 3
    f, g, h = (LaurentPoly(p, t) for t in (t1, t2, t3))
    assert f + g == g + f
    assert (f + g) + h == f + (g + h)
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f - f).is_zero


# ---------------------------------------------------------------------------
# determinant valuation
# ---------------------------------------------------------------------------


def test_det_val_diagonal():
    p = 2
    M = LaurentMatrix(p, [[eps(p, 1), zero(p)], [zero(p), eps(p, -1)]])
    assert det_val(M) == 0


def test_det_val_identity():
    for d in (1, 2, 3, 4):
        assert det_val(LaurentMatrix.identity(3, d)) == 0


def test_det_val_worked_example():
    # [[eps, eps^-1], [0, eps^-1]]: det = eps*eps^-1 = 1, valuation 0
    p = 2
    M = LaurentMatrix(p, [[eps(p, 1), eps(p, -1)], [zero(p), eps(p, -1)]])
    assert det_val(M) == 0


def test_det_val_singular():
    p = 3
    one = LaurentPoly.one(p)
    M = LaurentMatrix(p, [[one, one], [one, one]])
    with pytest.raises(SingularMatrix):
        det_val(M)


def _random_matrix(rng, p, d, max_terms=3, span=3):
    rows = []
    for _ in range(d):
        row = []
        for _ in range(d):
            terms = [
                (rng.randint(-span, span), rng.randint(1, p - 1))
                for _ in range(rng.randint(0, max_terms))
            ]
            row.append(LaurentPoly(p, terms))
        rows.append(row)
    return LaurentMatrix(p, rows)


def _random_unit_upper(rng, p, d):
    """Matrix in GL_d(O) with unit diagonal: column ops it encodes are legal."""
    rows = [[zero(p)] * d for _ in range(d)]
    for i in range(d):
        rows[i][i] = LaurentPoly(p, [(0, rng.randint(1, p - 1))] + [
            (rng.randint(1, 3), rng.randint(1, p - 1)) for _ in range(rng.randint(0, 2))
        ])
        for j in range(i + 1, d):
            if rng.random() < 0.6:
                rows[i][j] = LaurentPoly(
                    p,
                    [(rng.randint(0, 3), rng.randint(1, p - 1)) for _ in range(2)],
                )
    return LaurentMatrix(p, rows)


def test_det_val_invariant_under_O_column_ops():
    rng = random.Random(7)
    for _ in range(25):
        p = rng.choice([2, 3, 5])
        d = rng.choice([2, 3])
        M = _random_matrix(rng, p, d)
        try:
            dv = det_val(M)
        except SingularMatrix:
            continue
        U = _random_unit_upper(rng, p, d)
        assert det_val(M @ U) == dv


# ---------------------------------------------------------------------------
# canonical column reduction
# ---------------------------------------------------------------------------


def test_reduce_permutation_is_identity():
    p = 2
    M = LaurentMatrix(p, [[zero(p), LaurentPoly.one(p)], [LaurentPoly.one(p), zero(p)]])
    assert column_reduce_over_O(M) == LaurentMatrix.identity(p, 2)


def test_reduce_diagonal_already_canonical():
    p = 3
    M = LaurentMatrix.diag_powers(p, (1, -1))
    assert column_reduce_over_O(M) == M


def test_reduce_worked_example():
    # span(eps e1, eps^-1(e1 + e2)) has pivot valuations (-1, 1) in row order
    p = 2
    M = LaurentMatrix(p, [[eps(p, 1), eps(p, -1)], [zero(p), eps(p, -1)]])
    B = column_reduce_over_O(M)
    expected = LaurentMatrix(
        p, [[eps(p, -1), zero(p)], [eps(p, -1), eps(p, 1)]]
    )
    assert B == expected


def test_reduce_singular_rejected():
    p = 2
    one = LaurentPoly.one(p)
    M = LaurentMatrix(p, [[one, one], [one, one]])
    with pytest.raises(SingularMatrix):
        column_reduce_over_O(M)


def _pivot_vals(B):
    return [B.rows[i][i].val() for i in range(B.d)]


def _members_of(B, M):
    """Each column of M must lie in the O-span of B (forward substitution)."""
    d = B.d
    pivots = _pivot_vals(B)
    for j in range(d):
        x = [M.rows[i][j] for i in range(d)]
        for i in range(d):
            e = x[i]
            if e.is_zero:
                continue
            if e.val() < pivots[i]:
                return False
            c = e.shift(-pivots[i])
            for l in range(i + 1, d):
                b = B.rows[l][i]
                if not b.is_zero:
                    x[l] = x[l] - c * b
        # row i consumed exactly at each step
    return True


def test_reduce_canonical_shape_and_mutual_generation():
    rng = random.Random(11)
    done = 0
    while done < 40:
        p = rng.choice([2, 3, 5])
        d = rng.choice([2, 3])
        M = _random_matrix(rng, p, d)
        try:
            B = column_reduce_over_O(M)
        except SingularMatrix:
            continue
        done += 1
        # triangular with pure-power pivots, reduced sub-pivot entries
        for i in range(d):
            for j in range(i + 1, d):
                assert B.rows[i][j].is_zero
            piv = B.rows[i][i]
            assert len(piv.terms) == 1 and piv.terms[0][1] == 1
        for i in range(d):
            for l in range(i + 1, d):
                e = B.rows[l][i]
                if not e.is_zero:
                    assert e.max_exp() < B.rows[l][l].val()
        # idempotence
        assert column_reduce_over_O(B) == B
        # pivot sum equals determinant valuation
        assert sum(_pivot_vals(B)) == det_val(M)
        # mutual O-generation both ways
        assert _members_of(B, M)
        assert _members_of(B, B)
        # same span from shuffled generators
        cols = M.columns()
        rng.shuffle(cols)
        M2 = LaurentMatrix(p, [[cols[j][i] for j in range(d)] for i in range(d)])
        assert column_reduce_over_O(M2) == B


# ---------------------------------------------------------------------------
# kernel saturation
# ---------------------------------------------------------------------------


def test_kernel_identity_rows():
    p = 2
    K = kernel_saturation(LaurentMatrix.identity(p, 3), [1])
    # span{e2, e3}
    assert len(K) == 2
    for v in K:
        assert v[0].is_zero


def test_kernel_diagonal():
    p = 3
    M = LaurentMatrix.diag_powers(p, (1, -1))
    K = kernel_saturation(M, [2])
    assert len(K) == 1
    assert not K[0][0].is_zero and K[0][1].is_zero


def test_kernel_worked_example():
    p = 2
    M = LaurentMatrix(p, [[eps(p, 1), eps(p, -1)], [zero(p), eps(p, -1)]])
    K = kernel_saturation(M, [2])
    assert len(K) == 1
    # solution set is O e1
    assert K[0][0] == LaurentPoly.one(p) and K[0][1].is_zero


def _random_unit_lower(rng, p, d):
    rows = [[zero(p)] * d for _ in range(d)]
    for i in range(d):
        rows[i][i] = LaurentPoly.one(p)
        for j in range(i):
            if rng.random() < 0.6:
                rows[i][j] = LaurentPoly(
                    p, [(rng.randint(0, 3), rng.randint(1, p - 1)) for _ in range(2)]
                )
    return LaurentMatrix(p, rows)


def test_canonical_form_invariant_under_O_basis_change():
    """Right multiplication by GL_d(O) elements fixes the canonical form."""
    rng = random.Random(41)
    done = 0
    while done < 30:
        p = rng.choice([2, 3, 5])
        d = rng.choice([2, 3])
        M = _random_matrix(rng, p, d)
        try:
            B = column_reduce_over_O(M)
        except SingularMatrix:
            continue
        done += 1
        U = _random_unit_upper(rng, p, d) @ _random_unit_lower(rng, p, d)
        assert column_reduce_over_O(M @ U) == B


def test_canonical_form_wide_exponent_stress():
    """d up to 4 with exponents spread over [-5, 5]: shape, idempotence,
    pivot sums and invariance under column shuffles plus unit rescaling."""
    rng = random.Random(99)
    done = 0
    while done < 60:
        p = rng.choice([2, 3, 5])
        d = rng.choice([2, 3, 4])
        M = _random_matrix(rng, p, d, max_terms=4, span=5)
        try:
            B = column_reduce_over_O(M)
        except SingularMatrix:
            continue
        done += 1
        pivots = [B.rows[i][i].val() for i in range(d)]
        assert sum(pivots) == det_val(M)
        assert column_reduce_over_O(B) == B
        cols = M.columns()
        rng.shuffle(cols)
        unit = LaurentPoly(
            p,
            [(0, rng.randint(1, p - 1)), (1, rng.randint(1, p - 1)),
             (2, rng.randint(0, p - 1))],
        )
        cols[0] = [unit * x for x in cols[0]]
        M2 = LaurentMatrix(p, [[cols[j][i] for j in range(d)] for i in range(d)])
        assert column_reduce_over_O(M2) == B


def test_kernel_is_saturated():
    """Random O-vectors solving the system must lie in the reported span."""
    rng = random.Random(23)
    checked = 0
    while checked < 20:
        p = rng.choice([2, 3])
        d = 3
        M = _random_matrix(rng, p, d, span=2)
        try:
            det_val(M)
        except SingularMatrix:
            continue
        rows = [1 + rng.randrange(d)]
        K = kernel_saturation(M, rows)
        checked += 1
        if not K:
            continue
        # random O-combinations of the kernel generators solve the system
        for _ in range(5):
            coeffs = [
                LaurentPoly(p, [(rng.randint(0, 2), rng.randint(1, p - 1))])
                for _ in K
            ]
            v = [zero(p)] * d
            for c, k in zip(coeffs, K):
                v = [a + c * b for a, b in zip(v, k)]
            out = M.apply(v)
            for r in rows:
                assert out[r - 1].is_zero
