"""Point-counting censuses over small primes and exact interpolation reports.

Brute-force counts of shell totals, stable loci and strata give quotient
counts total/(q-1)^{d-1}; with enough primes these interpolate to exact
integer polynomials in q whose ascending coefficients are compared against
the quotient series inside the proven truncation window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceeded, InsufficientPrimes, NonIntegralQuotient
from .laurent import FieldSpec
from .lattices import ShellSpec, enumerate_shell
from .reduction import stratum
from .rootdata import require_sum_zero
from .series import bott_series, dim_shell, quotient_series

__all__ = [
    "CountReport",
    "census",
    "count_points",
    "compare_report",
    "nonstable_growth_check",
    "lagrange_interpolate",
    "poly_degree",
]


def lagrange_interpolate(points) -> list:
    """Exact coefficients (ascending) of the interpolant through the points."""
    coeffs = [Fraction(0)] * len(points)
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            # multiply basis by (x - xj)
            nxt = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                nxt[k] -= c * xj
                nxt[k + 1] += c
            basis = nxt
            denom *= xi - xj
        scale = Fraction(yi) / denom
        for k, c in enumerate(basis):
            coeffs[k] += scale * c
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def poly_degree(coeffs) -> int:
    deg = 0
    for k, c in enumerate(coeffs):
        if c != 0:
            deg = k
    return deg


def _as_int_coeffs(coeffs) -> list | None:
    out = []
    for c in coeffs:
        c = Fraction(c)
        if c.denominator != 1:
            return None
        out.append(int(c))
    return out


def census(shell: ShellSpec, field_: FieldSpec, xi, budget: int | None = None) -> dict:
    """One-prime census: total, stable and per-stratum counts."""
    xs = require_sum_zero(xi)
    total = 0
    stable = 0
    strata: dict = {}
    for L in enumerate_shell(shell, field_, budget=budget):
        total += 1
        tag = stratum(L, xs)
        if tag.is_stable:
            stable += 1
        else:
            key = tag.format()
            strata[key] = strata.get(key, 0) + 1
    if stable + sum(strata.values()) != total:
        raise AssertionError("strata do not partition the shell")
    return {"total": total, "stable": stable, "strata": strata}


@dataclass
class CountReport:
    d: int
    n: int
    xi: tuple
    primes: tuple
    per_prime: dict
    polynomials: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "xi": [str(x) for x in self.xi],
            "primes": list(self.primes),
            "per_prime": {
                str(p): {
                    "total": c["total"],
                    "stable": c["stable"],
                    "nonstable": c["total"] - c["stable"],
                    "quotient": c["quotient"],
                    "strata": dict(sorted(c["strata"].items())),
                }
                for p, c in sorted(self.per_prime.items())
            },
            "polynomials": {
                k: (list(v) if v is not None else None)
                for k, v in sorted(self.polynomials.items())
            },
            "notes": list(self.notes),
        }


def count_points(
    shell: ShellSpec, primes, xi, budget: int | None = None
) -> CountReport:
    """Censuses over the primes plus exact interpolation where determined.

    The quotient count total_stable/(p-1)^{d-1} must divide exactly; a failure
    raises NonIntegralQuotient since the free action forces exact division.
    """
    xs = require_sum_zero(xi)
    primes = tuple(primes)
    per_prime: dict = {}
    for p in primes:
        c = census(shell, FieldSpec(p), xs, budget=budget)
        denom = (p - 1) ** (shell.d - 1)
        if c["stable"] % denom != 0:
            raise NonIntegralQuotient(
                f"(q-1)^(d-1) = {denom} does not divide {c['stable']} at q = {p}"
            )
        c["quotient"] = c["stable"] // denom
        per_prime[p] = c

    report = CountReport(
        d=shell.d, n=shell.n, xi=xs, primes=primes, per_prime=per_prime
    )

    dim = dim_shell(shell)
    bounds = {
        "total": dim,
        "stable": dim,
        "nonstable": shell.n * (shell.d - 1) ** 2,
        "quotient": dim - (shell.d - 1),
    }
    series_of = {
        "total": lambda p: per_prime[p]["total"],
        "stable": lambda p: per_prime[p]["stable"],
        "nonstable": lambda p: per_prime[p]["total"] - per_prime[p]["stable"],
        "quotient": lambda p: per_prime[p]["quotient"],
    }
    for name, bound in bounds.items():
        if len(primes) >= bound + 1:
            pts = [(p, series_of[name](p)) for p in primes]
            coeffs = lagrange_interpolate(pts)
            ints = _as_int_coeffs(coeffs)
            report.polynomials[name] = ints
            if ints is None:
                report.notes.append(f"{name}: interpolant is not integral")
        else:
            report.polynomials[name] = None
            report.notes.append(
                f"{name}: needs {bound + 1} primes to determine degree {bound}"
            )
    return report


def compare_report(
    shell: ShellSpec, primes, xi, budget: int | None = None
) -> dict:
    """Interpolated quotient counts against the quotient series.

    Ascending coefficient i of the quotient polynomial is matched to the
    t^{2i} coefficient of the series; the assertion window is degree
    2(d-1)n - 2, and agreement beyond it is measured, not asserted.  A side
    check compares interpolated shell totals against the full series when
    enough primes are supplied.
    """
    counts = count_points(shell, primes, xi, budget=budget)
    d, n = shell.d, shell.n
    window = 2 * (d - 1) * n - 2

    qpoly = counts.polynomials.get("quotient")
    if qpoly is None:
        needed = dim_shell(shell) - (d - 1) + 1
        raise InsufficientPrimes(
            f"quotient polynomial needs {needed} primes, got {len(tuple(primes))}"
        )

    series_order = 2 * dim_shell(shell) + 2
    qseries = quotient_series(d, series_order)
    per_degree = []
    first_divergence = None
    for i in range(len(qpoly)):
        t_deg = 2 * i
        if t_deg > series_order:
            break
        series_c = qseries.coeff(t_deg)
        match = series_c == qpoly[i]
        per_degree.append(
            {"t_degree": t_deg, "count_coeff": qpoly[i], "series_coeff": series_c,
             "match": match, "within_window": t_deg <= window}
        )
        if not match and first_divergence is None:
            first_divergence = t_deg
    window_ok = all(row["match"] for row in per_degree if row["within_window"])

    out = {
        "d": d,
        "n": n,
        "primes": list(counts.primes),
        "window_degree": window,
        "quotient_polynomial": qpoly,
        "per_degree": per_degree,
        "window_ok": window_ok,
        "first_divergence_degree": first_divergence,
        "count_report": counts.to_json(),
    }

    # side check: interpolated totals against the full series
    tpoly = counts.polynomials.get("total")
    if tpoly is not None:
        bseries = bott_series(d, series_order)
        agree = None
        for i in range(len(tpoly)):
            if bseries.coeff(2 * i) == tpoly[i]:
                agree = 2 * i
            else:
                break
        out["bott_check"] = {
            "total_polynomial": tpoly,
            "window_degree": 2 * (d - 1) * n,
            "window_ok": all(
                bseries.coeff(2 * i) == tpoly[i]
                for i in range(len(tpoly))
                if 2 * i <= 2 * (d - 1) * n
            ),
            "empirical_agreement_degree": agree,
        }
    else:
        out["bott_check"] = {"skipped": "not enough primes for the total polynomial"}
    return out


def nonstable_growth_check(
    shell: ShellSpec, primes, xi, budget: int | None = None
) -> dict:
    """Interpolated size of the non-stable locus, with its degree bound.

    Requires n(d-1)^2 + 2 primes; instances over the enumeration budget are
    reported as skipped rather than failed.
    """
    d, n = shell.d, shell.n
    bound = n * (d - 1) ** 2
    primes = tuple(primes)
    if len(primes) < bound + 2:
        raise InsufficientPrimes(
            f"need at least {bound + 2} primes for the degree-{bound} bound"
        )
    pts = []
    try:
        for p in primes:
            c = census(shell, FieldSpec(p), xi, budget=budget)
            pts.append((p, c["total"] - c["stable"]))
    except BudgetExceeded as exc:
        return {"d": d, "n": n, "skipped": str(exc)}
    coeffs = lagrange_interpolate(pts)
    ints = _as_int_coeffs(coeffs)
    degree = poly_degree(coeffs)
    return {
        "d": d,
        "n": n,
        "primes": list(primes),
        "polynomial": ints,
        "degree": degree,
        "degree_bound": bound,
        "ok": degree <= bound and ints is not None,
    }
