"""Command-line front end.

Subcommands: stability check, reduce, audit partition|transition|unipotent,
git compare, poincare, count, selftest, report.  All numeric I/O is exact
(rationals as "a/b", series as coefficient arrays); output is deterministic
for a fixed configuration including the seed.  Exit codes: 0 ok, 1 check
failure, 2 usage/validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction

from .errors import BudgetExceeded, LagstabError
from .laurent import FieldSpec
from .lattices import (
    Lattice,
    ShellSpec,
    enumerate_shell,
)
from .rootdata import ParabolicType, enumerate_parabolics, is_generic
from .stability import ec_vertices, failing_subsets, is_xi_stable, proper_subsets
from .gitstab import (
    eg1_check,
    is_torus_semistable,
    is_torus_stable,
    rho_perp,
    torus_from_xi,
)
from .reduction import (
    h_parabolic,
    partition_audit,
    retract,
    sample_unipotent,
    stratum,
    transition_audit,
    unipotent_audit,
)
from .counting import census, compare_report, count_points
from .series import bott_series, cells_count, quotient_series

USAGE_ERROR = 2
CHECK_FAILURE = 1


def parse_xi(text: str) -> tuple:
    try:
        xs = tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse rational vector {text!r}: {exc}") from None
    if sum(xs) != 0:
        raise ValueError("stability parameter must sum to zero")
    return xs


def parse_primes(text: str) -> tuple:
    return tuple(int(x) for x in text.split(","))


def _budget(args) -> int | None:
    env = os.environ.get("LAGSTAB_BUDGET")
    if getattr(args, "budget", None) is not None:
        return args.budget
    if env is not None:
        return int(env)
    return None


def _emit(payload, fmt: str, out=None):
    if out is None:
        out = sys.stdout
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2))
        out.write("\n")
    elif fmt == "table":
        _emit_table(payload, out)
    elif fmt == "csv":
        _emit_csv(payload, out)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _emit_table(payload, out, prefix=""):
    if isinstance(payload, dict):
        for k in sorted(payload):
            v = payload[k]
            if isinstance(v, (dict, list)):
                out.write(f"{prefix}{k}:\n")
                _emit_table(v, out, prefix + "  ")
            else:
                out.write(f"{prefix}{k}: {v}\n")
    elif isinstance(payload, list):
        for v in payload:
            if isinstance(v, (dict, list)):
                _emit_table(v, out, prefix + "  ")
            else:
                out.write(f"{prefix}- {v}\n")
    else:
        out.write(f"{prefix}{payload}\n")


def _flatten(payload, prefix=""):
    rows = []
    if isinstance(payload, dict):
        for k in sorted(payload):
            rows.extend(_flatten(payload[k], f"{prefix}{k}." if prefix else f"{k}."))
    elif isinstance(payload, list):
        for i, v in enumerate(payload):
            rows.extend(_flatten(v, f"{prefix}{i}."))
    else:
        rows.append((prefix.rstrip("."), payload))
    return rows


def _emit_csv(payload, out):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in _flatten(payload):
        writer.writerow([key, value])


def _load_lattice(path: str, p: int) -> Lattice:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return Lattice.from_json(p, data)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def cmd_stability_check(args) -> int:
    xi = parse_xi(args.xi)
    if not is_generic(xi):
        raise ValueError("stability parameter is not generic")
    L = _load_lattice(args.lattice, args.p)
    stable = is_xi_stable(L, xi)
    payload = {
        "stable": stable,
        "ec_vertices": [list(v) for v in ec_vertices(L)],
        "failing_subsets": [
            {"subset": list(S), "xi_sum": str(total), "bound": bound}
            for S, total, bound in failing_subsets(L, xi)
        ],
    }
    _emit(payload, args.format)
    return 0


def cmd_reduce(args) -> int:
    xi = parse_xi(args.xi)
    if not is_generic(xi):
        raise ValueError("stability parameter is not generic")
    L = _load_lattice(args.lattice, args.p)
    tag = stratum(L, xi)
    if tag.is_stable:
        payload = {"stratum": "stable"}
    else:
        P = tag.parabolic
        payload = {
            "stratum": tag.format(),
            "parabolic": P.format(),
            "h_P": list(h_parabolic(L, P)),
            "retract_indices": [lat.index for lat in retract(L, P)],
        }
    _emit(payload, args.format)
    return 0


def cmd_audit_partition(args) -> int:
    xi = parse_xi(args.xi)
    rep = partition_audit(
        ShellSpec(args.d, args.n), FieldSpec(args.p), xi, budget=_budget(args)
    )
    _emit(rep.to_json(), args.format)
    return 0 if rep.ok else CHECK_FAILURE


def cmd_audit_transition(args) -> int:
    shell = ShellSpec(args.d, args.n)
    pars = enumerate_parabolics(args.d)
    pairs = [(P, Q) for P in pars for Q in pars if P.refines(Q)]
    checked = 0
    failures = []
    for L in enumerate_shell(shell, FieldSpec(args.p), budget=_budget(args)):
        for P, Q in pairs:
            checked += 1
            if not transition_audit(L, P, Q):
                failures.append(
                    {"lattice": L.to_json(), "P": P.format(), "Q": Q.format()}
                )
    payload = {"checked": checked, "failures": failures}
    _emit(payload, args.format)
    return 0 if not failures else CHECK_FAILURE


def cmd_audit_unipotent(args) -> int:
    xi = parse_xi(args.xi)
    shell = ShellSpec(args.d, args.n)
    rng = random.Random(args.seed)
    lats = list(enumerate_shell(shell, FieldSpec(args.p), budget=_budget(args)))
    pars = [P for P in enumerate_parabolics(args.d) if not P.is_full_group]
    checked = 0
    failures = 0
    for _ in range(args.samples):
        L = lats[rng.randrange(len(lats))]
        P = pars[rng.randrange(len(pars))]
        u = sample_unipotent(rng, P, args.n, args.p)
        checked += 1
        if not unipotent_audit(L, P, u, xi):
            failures += 1
    payload = {"checked": checked, "failures": failures, "seed": args.seed}
    _emit(payload, args.format)
    return 0 if failures == 0 else CHECK_FAILURE


def cmd_git_compare(args) -> int:
    xi = parse_xi(args.xi)
    shell = ShellSpec(args.d, args.n)
    torus = torus_from_xi(xi, shell)
    checked = 0
    mismatches = []
    eg1_failures = []
    ss_vs_st = []
    for L in enumerate_shell(shell, FieldSpec(args.p), budget=_budget(args)):
        checked += 1
        W = rho_perp(L, shell)
        lattice_side = is_xi_stable(L, xi)
        git_side = is_torus_stable(W, torus)
        if lattice_side != git_side:
            mismatches.append(L.to_json())
        if is_torus_semistable(W, torus) != git_side:
            ss_vs_st.append(L.to_json())
        for S in proper_subsets(args.d):
            if not eg1_check(L, shell, S):
                eg1_failures.append({"lattice": L.to_json(), "S": sorted(S)})
    payload = {
        "checked": checked,
        "mismatches": mismatches,
        "eg1_failures": eg1_failures,
        "semistable_vs_stable": ss_vs_st,
    }
    _emit(payload, args.format)
    ok = not mismatches and not eg1_failures and not ss_vs_st
    return 0 if ok else CHECK_FAILURE


def cmd_count(args) -> int:
    xi = parse_xi(args.xi)
    rep = count_points(
        ShellSpec(args.d, args.n), parse_primes(args.primes), xi, budget=_budget(args)
    )
    _emit(rep.to_json(), args.format)
    return 0


def cmd_poincare(args) -> int:
    xi = parse_xi(args.xi)
    shell = ShellSpec(args.d, args.n)
    payload = compare_report(shell, parse_primes(args.primes), xi, budget=_budget(args))
    if args.emit == "csv":
        _emit(payload, "csv")
    else:
        _emit(payload, args.format)
    return 0 if payload["window_ok"] else CHECK_FAILURE


def cmd_report(args) -> int:
    xi = parse_xi(args.xi)
    shell = ShellSpec(args.d, args.n)
    outdir = args.out
    if not os.path.isdir(outdir):
        raise ValueError(f"output directory does not exist: {outdir}")
    payload = compare_report(shell, parse_primes(args.primes), xi, budget=_budget(args))
    json_path = os.path.join(outdir, "report.json")
    csv_path = os.path.join(outdir, "report.csv")
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2))
        fh.write("\n")
    buf = io.StringIO()
    _emit_csv(payload, buf)
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())
    _emit({"written": [json_path, csv_path]}, args.format)
    return 0 if payload["window_ok"] else CHECK_FAILURE


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------


def _selftest_checks(budget, rng):
    """Curated audit list; each yields (name, ok_or_None) with None = skipped."""
    from fractions import Fraction

    xi2 = (Fraction(1, 4), Fraction(-1, 4))
    xi3 = (Fraction(1, 5), Fraction(1, 7), Fraction(-12, 35))
    fault = os.environ.get("LAGSTAB_FAULT") == "flip"

    def guard(fn):
        if budget == 0:
            return None
        try:
            return fn()
        except BudgetExceeded:
            return None

    def census_check():
        ok = True
        for d, n, p in [(2, 1, 2), (2, 1, 3), (2, 2, 2)]:
            total = sum(
                1 for _ in enumerate_shell(ShellSpec(d, n), FieldSpec(p), budget=budget)
            )
            expect = cells_count(ShellSpec(d, n), p)
            if fault:
                expect += 1
            ok = ok and total == expect
        return ok

    yield "census vs cells", guard(census_check)

    def strata_check():
        ok = True
        for p in (2, 3):
            c = census(ShellSpec(2, 1), FieldSpec(p), xi2, budget=budget)
            ok = ok and c["stable"] == p * p - 1
            ok = ok and c["strata"].get("S[1|2]") == p + 1
            ok = ok and c["strata"].get("S[2|1]") == 1
        return ok

    yield "strata census (q^2-1, q+1, 1)", guard(strata_check)

    def git_check():
        shell = ShellSpec(2, 1)
        torus = torus_from_xi(xi2, shell)
        for L in enumerate_shell(shell, FieldSpec(2), budget=budget):
            if is_xi_stable(L, xi2) != is_torus_stable(rho_perp(L, shell), torus):
                return False
            for S in proper_subsets(2):
                if not eg1_check(L, shell, S):
                    return False
        return True

    yield "git comparison + eg1 (d=2, n=1, p=2)", guard(git_check)

    def partition_check():
        rep = partition_audit(ShellSpec(3, 1), FieldSpec(2), xi3, budget=budget)
        return rep.ok

    yield "partition audit (d=3, n=1, p=2)", guard(partition_check)

    def series_check():
        from .series import PowerSeriesZ

        q = quotient_series(2, 40)
        prod = bott_series(2, 40) * PowerSeriesZ.geometric(2, 40)
        return (q - prod).is_zero()

    yield "series identity", guard(series_check)

    def unipotent_check():
        lats = list(enumerate_shell(ShellSpec(2, 1), FieldSpec(2), budget=budget))
        pars = [P for P in enumerate_parabolics(2) if not P.is_full_group]
        for _ in range(50):
            L = lats[rng.randrange(len(lats))]
            P = pars[rng.randrange(len(pars))]
            u = sample_unipotent(rng, P, 1, 2)
            if not unipotent_audit(L, P, u, xi2):
                return False
        return True

    yield "unipotent invariance (seeded)", guard(unipotent_check)


def cmd_selftest(args) -> int:
    budget = _budget(args)
    rng = random.Random(args.seed)
    rows = []
    failed = None
    for name, ok in _selftest_checks(budget, rng):
        status = "skipped" if ok is None else ("pass" if ok else "FAIL")
        rows.append((name, status))
        if ok is False and failed is None:
            failed = name
    width = max(len(r[0]) for r in rows)
    for name, status in rows:
        print(f"{name:<{width}}  {status}")
    if failed is not None:
        print(f"first failing check: {failed}", file=sys.stderr)
        return CHECK_FAILURE
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="lagstab",
        description="Exact lattice stability audits at finite truncation level.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(sp, xi=True, shell=True, prime=True):
        if shell:
            sp.add_argument("--d", type=int, required=True)
            sp.add_argument("--n", type=int, required=True)
        if prime:
            sp.add_argument("--p", type=int, required=True)
        if xi:
            sp.add_argument("--xi", type=str, required=True)
        sp.add_argument("--budget", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument(
            "--format", choices=("json", "table", "csv"), default="json"
        )

    stab = sub.add_parser("stability", help="stability tests on one lattice")
    stab_sub = stab.add_subparsers(dest="subcommand", required=True)
    check = stab_sub.add_parser("check")
    check.add_argument("--lattice", required=True)
    check.add_argument("--p", type=int, required=True)
    check.add_argument("--xi", type=str, required=True)
    check.add_argument("--budget", type=int, default=None)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--format", choices=("json", "table", "csv"), default="json")
    check.set_defaults(fn=cmd_stability_check)

    red = sub.add_parser("reduce", help="stratum of one lattice")
    red.add_argument("--lattice", required=True)
    red.add_argument("--p", type=int, required=True)
    red.add_argument("--xi", type=str, required=True)
    red.add_argument("--budget", type=int, default=None)
    red.add_argument("--seed", type=int, default=0)
    red.add_argument("--format", choices=("json", "table", "csv"), default="json")
    red.set_defaults(fn=cmd_reduce)

    audit = sub.add_parser("audit", help="exhaustive / randomized audits")
    audit_sub = audit.add_subparsers(dest="subcommand", required=True)
    ap = audit_sub.add_parser("partition")
    add_common(ap)
    ap.set_defaults(fn=cmd_audit_partition)
    at = audit_sub.add_parser("transition")
    add_common(at, xi=False)
    at.set_defaults(fn=cmd_audit_transition)
    au = audit_sub.add_parser("unipotent")
    add_common(au)
    au.add_argument("--samples", type=int, default=1000)
    au.set_defaults(fn=cmd_audit_unipotent)

    git = sub.add_parser("git", help="torus-GIT comparison")
    git_sub = git.add_subparsers(dest="subcommand", required=True)
    gc = git_sub.add_parser("compare")
    add_common(gc)
    gc.set_defaults(fn=cmd_git_compare)

    cnt = sub.add_parser("count", help="point counts over primes")
    cnt.add_argument("--d", type=int, required=True)
    cnt.add_argument("--n", type=int, required=True)
    cnt.add_argument("--primes", type=str, required=True)
    cnt.add_argument("--xi", type=str, required=True)
    cnt.add_argument("--budget", type=int, default=None)
    cnt.add_argument("--seed", type=int, default=0)
    cnt.add_argument("--format", choices=("json", "table", "csv"), default="json")
    cnt.set_defaults(fn=cmd_count)

    poi = sub.add_parser("poincare", help="series comparison report")
    poi.add_argument("--d", type=int, required=True)
    poi.add_argument("--n", type=int, required=True)
    poi.add_argument("--primes", type=str, required=True)
    poi.add_argument("--xi", type=str, required=True)
    poi.add_argument("--budget", type=int, default=None)
    poi.add_argument("--seed", type=int, default=0)
    poi.add_argument("--format", choices=("json", "table", "csv"), default="json")
    poi.add_argument("--emit", choices=("json", "csv"), default="json")
    poi.set_defaults(fn=cmd_poincare)

    sel = sub.add_parser("selftest", help="run the budgeted audit suite")
    sel.add_argument("--budget", type=int, default=None)
    sel.add_argument("--seed", type=int, default=0)
    sel.set_defaults(fn=cmd_selftest)

    repo = sub.add_parser("report", help="write JSON and CSV artifacts")
    repo.add_argument("--d", type=int, required=True)
    repo.add_argument("--n", type=int, required=True)
    repo.add_argument("--primes", type=str, required=True)
    repo.add_argument("--xi", type=str, required=True)
    repo.add_argument("--out", type=str, required=True)
    repo.add_argument("--budget", type=int, default=None)
    repo.add_argument("--seed", type=int, default=0)
    repo.add_argument("--format", choices=("json", "table", "csv"), default="json")
    repo.set_defaults(fn=cmd_report)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (LagstabError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
