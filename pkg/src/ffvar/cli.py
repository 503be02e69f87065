"""Command-line front end.

Every subcommand writes one JSON document (or CSV for ``limit-table
--format csv``) with a ``provenance`` block that is enough to rerun it.

Exit status: 0 success, 1 usage error, 2 violated hypothesis or size
bound, 3 tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import __version__
from .chars import CharacterError, build_unit_group, even_mask, orthogonality_check, parse_character
from .experiments import (
    ExperimentError,
    LimitReport,
    expectation,
    limit_table,
    variance_direct,
    variance_via_characters,
)
from .gf import FieldError, parse_field
from .lfunc import TOL_RH, analyze, analyze_all, degree_census
from .polyring import PolyError, factorize, parse_poly, to_text
from .reps import RepresentationError, get_rep, lambda_table, reflect, von_mangoldt
from .rmt import GENERATOR, phase_invariance_check, trace_moment

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_TOLERANCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InvariantError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    k: int | None = None
    rep: str | None = None
    n: int | None = None
    h: int | None = None
    m: int | None = None
    samples: int | None = None
    seed: int | None = None
    workers: int = 1
    out: str | None = None
    tolerances: dict = dc_field(default_factory=dict)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def provenance(cfg: RunConfig, argv) -> dict:
    return {
        "tool": "ffvar",
        "version": __version__,
        "argv": list(argv),
        "seed": cfg.seed,
        "generator": GENERATOR,
        "tolerances": cfg.tolerances,
        "python": platform.python_version(),
        "numpy": np.__version__,
    }


def emit_report(report: dict, fmt: str = "json", out: str | None = None, csv_rows=None, columns=None):
    """Write JSON (the source of truth) or a CSV projection to ``out`` or stdout."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in csv_rows:
            w.writerow(_jsonable(row))
        text = buf.getvalue()
    else:
        text = json.dumps(_jsonable(report), indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------------

def _field(args):
    if not args.q:
        raise UsageError("--q is required")
    return parse_field(args.q)


def _rep(args, F):
    if not args.rep:
        raise UsageError("--rep is required")
    return get_rep(args.rep, F)


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required")


def _interval_args(args):
    _need(args, "n", "h")
    if not 0 <= args.h < args.n:
        raise InvariantError(f"need n > h >= 0 (got n={args.n}, h={args.h})")


def cmd_field_info(args, cfg):
    F = _field(args)
    out = {"p": F.p, "k": F.k, "q": F.q, "modulus": list(F.modulus), "generator": F.generator}
    if F.q <= 1024:
        out["generator_order"] = len(set(F.tables.exp))
    return out, EXIT_OK


def cmd_factor(args, cfg):
    F = _field(args)
    _need(args, "poly")
    f = parse_poly(args.poly, F)
    fac = factorize(f)
    return {"poly": to_text(f), "unit": fac.unit,
            "factors": [[to_text(pl.prime), e] for pl, e in fac.factors]}, EXIT_OK


def cmd_lambda(args, cfg):
    F = _field(args)
    rep = _rep(args, F)
    if args.poly is not None:
        return {"poly": args.poly, "rep": rep.name, "value": von_mangoldt(rep, parse_poly(args.poly, F))}, EXIT_OK
    _need(args, "n")
    tab = lambda_table(rep, args.n)
    return {"rep": rep.name, "n": args.n, "sum": int(tab.sum()),
            "nonzero": int(np.count_nonzero(tab))}, EXIT_OK


def cmd_chars(args, cfg):
    F = _field(args)
    _need(args, "m")
    tbl = build_unit_group(F, args.m)
    rpt = orthogonality_check(tbl, args.tol_orth) if tbl.order <= 5000 else None
    out = {"q": F.q, "m": args.m, "order": tbl.order, "generators": list(tbl.generators),
           "orders": list(tbl.orders), "even_count": int(even_mask(tbl).sum())}
    if rpt is not None:
        out["orthogonality"] = {"max_deviation": rpt.max_deviation, "ok": rpt.ok}
    return out, EXIT_OK if rpt is None or rpt.ok else EXIT_TOLERANCE


def cmd_lfunction(args, cfg):
    F = _field(args)
    rep = _rep(args, F)
    _need(args, "m")
    if args.char:
        chi = parse_character(build_unit_group(F, args.m), args.char)
        return {"rep": rep.name, "q": F.q, "m": args.m, "lfunction": analyze(rep, chi, args.D, args.tol_rh).to_record()}, EXIT_OK
    res = analyze_all(rep, args.m, args.D, tol_rh=args.tol_rh)
    return {"rep": rep.name, "q": F.q, "m": args.m, "lfunctions": [ld.to_record() for _, ld in res]}, EXIT_OK


def cmd_degree_census(args, cfg):
    F = _field(args)
    rep = _rep(args, F)
    _need(args, "m")
    cen = degree_census(rep, args.m, args.D)
    return {"census": asdict(cen)}, EXIT_OK


def cmd_variance(args, cfg):
    F = _field(args)
    rep = _rep(args, F)
    _interval_args(args)
    direct = variance_direct(rep, args.n, args.h)
    status = EXIT_OK
    if args.route in ("chars", "both"):
        cr = reflect(rep) if args.reflected else rep
        direct = variance_via_characters(rep, args.n, args.h, cr, direct, with_prediction=True)
        if args.route == "both" and not direct.identity_ok(args.tol_id):
            status = EXIT_TOLERANCE
    rec = direct.to_record()
    if args.route == "chars":
        for key in ("variance", "variance_exact", "normalized", "identity_residual"):
            rec.pop(key)
    e = expectation(rep, args.n, args.h)
    rec["expectation_routes"] = {"definition": str(e.definition), "lemma": str(e.lemma),
                                 "character": e.character, "max_relative_gap": e.max_relative_gap}
    return {"variance": rec}, status


def cmd_limit_table(args, cfg):
    _need(args, "rep", "n", "h", "q_list")
    _interval_args(args)
    if args.n - args.h < 5:
        raise InvariantError("limit-table needs n - h >= 5 (the equidistribution theorem's hypothesis)")
    qs = [s for s in args.q_list.split(",") if s]
    rpt: LimitReport = limit_table(args.rep.rstrip("*"), args.n, args.h, qs, args.samples, args.seed,
                                   reflected=not args.literal, workers=args.workers)
    rec = rpt.to_record()
    rec["soft_check"] = rpt.soft_check()
    return {"limit_table": rec, "_csv": (rec["rows"], LimitReport.CSV_COLUMNS)}, EXIT_OK


def cmd_rmt(args, cfg):
    _need(args, "size", "power")
    est = trace_moment(args.size, args.power, args.samples, args.seed, args.workers)
    expected = min(args.size, args.power)
    ok = abs(est.mean - expected) <= 4 * est.stderr + 1e-12
    out = {"S": args.size, "n": args.power, "N": est.N, "mean": float(est.mean), "stderr": est.stderr,
           "expected": expected, "within_4_stderr": ok}
    if args.phase:
        out["phase_checks"] = [asdict(c) for c in
                               phase_invariance_check(args.size, args.power, args.samples, args.seed,
                                                      workers=args.workers)]
        ok = ok and all(c["ok"] for c in out["phase_checks"])
    return out, EXIT_OK if ok else EXIT_TOLERANCE


def cmd_identity_suite(args, cfg):
    F = _field(args)
    rep = _rep(args, F)
    cr = reflect(rep) if args.reflected else rep
    nmax = args.n or 6
    cases, status = [], EXIT_OK
    for n in range(2, nmax + 1):
        for m in range(2, min(n, 5) + 1):
            h = n - m
            r = variance_via_characters(rep, n, h, cr)
            e = expectation(rep, n, h)
            ok = r.identity_ok(args.tol_id) and e.agree(1e-9)
            status = status if ok else EXIT_TOLERANCE
            cases.append({"n": n, "h": h, "variance": r.variance, "char_route_variance": r.char_route_variance,
                          "identity_residual": r.identity_residual, "expectation_gap": e.max_relative_gap,
                          "ok": ok})
    return {"rep": rep.name, "char_rep": cr.name, "q": F.q, "cases": cases}, status


def cmd_acceptance(args, cfg):
    from .acceptance import run_acceptance_suite

    only = set(args.only.split(",")) if args.only else None
    vs = run_acceptance_suite(only, log=lambda s: print(s, file=sys.stderr))
    main = [v for v in vs if not v.supplementary]
    ok = all(v.passed for v in main)
    return {"criteria": [v.to_record() for v in vs], "passed": ok}, EXIT_OK if ok else EXIT_TOLERANCE


COMMANDS = {
    "field-info": cmd_field_info,
    "factor": cmd_factor,
    "lambda": cmd_lambda,
    "chars": cmd_chars,
    "lfunction": cmd_lfunction,
    "degree-census": cmd_degree_census,
    "variance": cmd_variance,
    "limit-table": cmd_limit_table,
    "rmt": cmd_rmt,
    "identity-suite": cmd_identity_suite,
    "acceptance": cmd_acceptance,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ffvar", description="Short-interval variance of von Mangoldt functions over F_q[t].")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--q", help="field size as 'p^k' or an integer")
        s.add_argument("--rep", help="trivial | legendre (a trailing * reflects it)")
        s.add_argument("--n", type=int)
        s.add_argument("--h", type=int)
        s.add_argument("--m", type=int, help="modulus exponent: characters mod t^m")
        s.add_argument("--D", type=int, help="number of traces for L-function reconstruction")
        s.add_argument("--poly", help="coefficients c0,c1,...,cd as element indices")
        s.add_argument("--char", help="character as e1/o1,e2/o2,...")
        s.add_argument("--route", choices=("direct", "chars", "both"), default="both")
        s.add_argument("--reflected", action="store_true", help="character side uses the reflected rep")
        s.add_argument("--literal", action="store_true", help="limit-table: character side uses the rep itself")
        s.add_argument("--q-list", dest="q_list")
        s.add_argument("--size", type=int)
        s.add_argument("--power", type=int)
        s.add_argument("--phase", action="store_true", help="rmt: also run the det^k phase checks")
        s.add_argument("--samples", type=int, default=20000)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--workers", type=int, default=1)
        s.add_argument("--out")
        s.add_argument("--format", choices=("json", "csv"), default="json")
        s.add_argument("--tol-rh", type=float, default=TOL_RH)
        s.add_argument("--tol-id", type=float, default=1e-8)
        s.add_argument("--tol-orth", type=float, default=1e-10)
        s.add_argument("--only", help="acceptance: comma-separated check ids")
    return p


def parse_and_dispatch(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, rep=args.rep, n=args.n, h=args.h, m=args.m, samples=args.samples,
                    seed=args.seed, workers=args.workers, out=args.out,
                    tolerances={"rh": args.tol_rh, "identity": args.tol_id, "orthogonality": args.tol_orth})
    try:
        if args.q:
            F = parse_field(args.q)
            cfg.p, cfg.k = F.p, F.k
        report, status = COMMANDS[args.command](args, cfg)
    except UsageError as e:
        print(f"ffvar {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantError, ExperimentError, RepresentationError, FieldError, PolyError, CharacterError) as e:
        print(f"ffvar {args.command}: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    csv_part = report.pop("_csv", None)
    report["config"] = asdict(cfg)
    report["provenance"] = provenance(cfg, argv)
    if args.format == "csv":
        if csv_part is None:
            print(f"ffvar {args.command}: CSV output is only available for limit-table", file=sys.stderr)
            return EXIT_USAGE
        rows, cols = csv_part
        emit_report(report, "csv", args.out, rows, cols)
    else:
        emit_report(report, "json", args.out)
    return status


def main():
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
