"""Command line front end.

Exit status: 0 on success, 1 on invalid input, 2 when an oracle or an
arithmetic consistency check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .admissible import admissible_density, enumerate_admissible, is_admissible_prime, quotient_order
from .algebra import DivisionAlgebraSpec, TypeData, validate_type
from .check import run_check
from .counts import (
    ModuliConfig,
    asymptotic_h,
    betti_vector,
    component_count,
    dv_bound,
    limit_ratio,
    ratio_exact,
    supersingular_count,
    volume_g1,
    wd_bound,
    wd_limit,
)
from .ff_poly import parse_poly, split_top_level
from .report import RunConfig, build_convergence_table, fmt_rational, optimal_curves_report, render
from .zeta import (
    Place,
    euler_product_check,
    volume_residue_oracle,
    zeta_division_rational_function,
    zeta_global_neg,
    zeta_local_neg,
    zeta_partial_neg,
)


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(t) for t in split_top_level(text) if t.strip()]


def _places(text: str | None, q: int) -> list[Place]:
    if not text:
        return []
    return [Place.parse(t, q) for t in split_top_level(text) if t.strip()]


def _ramification(text, d: int) -> list[tuple[str, str]]:
    """"T:1/2,T+1:1/2" or a JSON list; a bare place gets the invariant 1/d."""
    if text is None:
        return []
    items = text if isinstance(text, list) else [t for t in split_top_level(text) if t.strip()]
    out = []
    for item in items:
        if isinstance(item, dict):
            out.append((item["place"], str(item["inv"])))
            continue
        place, sep, inv = item.rpartition(":")
        if not sep:
            place, inv = item, f"1/{d}"
        out.append((place.strip(), inv.strip()))
    return out


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _place_o(args) -> Place:
    try:
        return Place.parse(args.o, args.q)
    except ValueError as exc:
        raise UsageError(f"o = {args.o} is not available as a place over F_{args.q}: {exc}") from exc


def _spec(args) -> DivisionAlgebraSpec:
    _need(args, "q", "d")
    items = [(Place.parse(x, args.q), Fraction(a)) for x, a in _ramification(args.ramification, args.d)]
    spec = DivisionAlgebraSpec.from_map(args.d, args.q, items)
    spec.validate()
    return spec


def _moduli(args) -> ModuliConfig:
    _need(args, "o", "level")
    spec = _spec(args)
    o = _place_o(args)
    return ModuliConfig.build(spec, o, parse_poly(args.level, args.q))


def _apply_config(args):
    """Fill options that were not given on the command line from the JSON config."""
    if not args.config:
        return
    with open(args.config) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise UsageError("config file must hold a JSON object")
    args.config_doc = doc
    for key, value in doc.items():
        attr = key.replace("-", "_")
        if attr == "level_degrees" and isinstance(value, list):
            value = ",".join(str(v) for v in value)
        if attr in ("format", "out") and getattr(args, attr) is not None:
            continue
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


# ---------------------------------------------------------------------
# output
# ---------------------------------------------------------------------


def _plain(v):
    if isinstance(v, Fraction):
        return fmt_rational(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    return v


def _emit_record(record: dict, fmt: str) -> str:
    record = _plain(record)
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["field", "value"])
    for k, v in record.items():
        writer.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
    return buf.getvalue()


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------
# subcommands; each returns (text, exit status)
# ---------------------------------------------------------------------


def cmd_zeta(args):
    _need(args, "q")
    if args.euler is not None:
        ok = euler_product_check(args.q, args.euler)
        return _emit_record({"q": args.q, "N": args.euler, "euler_product_check": ok}, args.format), 0 if ok else 2
    _need(args, "i")
    if args.place:
        value = zeta_local_neg(Place.parse(args.place, args.q), args.i)
        kind = f"local at {args.place}"
    elif args.S is not None:
        S = _places(args.S, args.q)
        value = zeta_partial_neg(args.q, S, args.i)
        kind = "partial, S = {" + ", ".join(str(x) for x in S) + "}"
    else:
        value = zeta_global_neg(args.q, args.i)
        kind = "global"
    return _emit_record({"q": args.q, "i": args.i, "zeta": kind, "value": value}, args.format), 0


def cmd_admissible(args):
    _need(args, "q", "d")
    if args.poly:
        p = parse_poly(args.poly, args.q)
        ok = is_admissible_prime(p, args.d)
        rec = {"q": args.q, "d": args.d, "prime": str(p), "admissible": ok, "quotient_order": quotient_order(args.q, p.degree)}
        return _emit_record(rec, args.format), 0
    if args.density is not None:
        count, total = admissible_density(args.q, args.d, args.density)
        return _emit_record({"q": args.q, "d": args.d, "degree": args.density, "admissible": count, "total": total}, args.format), 0
    _need(args, "max_deg")
    primes = enumerate_admissible(args.q, args.d, args.max_deg, _places(args.exclude, args.q))
    if args.format == "json":
        items = [{"prime": str(p), "degree": p.degree, "admissible": True} for p in primes]
        return json.dumps(items, indent=2) + "\n", 0
    return "".join(f"{p}\n" for p in primes), 0


def cmd_volume(args):
    spec = _spec(args)
    vol = volume_g1(spec)
    rec = {"q": spec.q, "d": spec.d, "ramification": spec.to_json()["ramification"], "volume": vol}
    status = 0
    if args.oracle:
        residue = volume_residue_oracle(spec)
        rec["zeta_D"] = str(zeta_division_rational_function(spec))
        rec["residue_oracle"] = residue
        rec["agree"] = residue == vol
        status = 0 if residue == vol else 2
    return _emit_record(rec, args.format), status


def cmd_count(args):
    cfg = _moduli(args)
    count = supersingular_count(cfg)
    h = asymptotic_h(cfg, barred=True)
    ratio = ratio_exact(cfg)
    limit = limit_ratio(cfg.d, cfg.q_o)
    rec = {
        "q": cfg.q,
        "d": cfg.d,
        "o": str(cfg.o),
        "level": str(cfg.level.prime),
        "supersingular_count": count.value,
        "exact": count.exact,
        "asymptotic_h": h,
        "asymptotic_h_unbarred": asymptotic_h(cfg, barred=False),
        "component_count": component_count(cfg.q, cfg.level.prime),
        "ratio": ratio,
        "limit_ratio": limit,
        "wd_limit": wd_limit(cfg.d, cfg.q_o),
        "note": "h values are asymptotic (h ~); the count is the rational-point count only for levels of large enough degree, threshold unknown",
    }
    return _emit_record(rec, args.format), 0 if ratio == limit else 2


def cmd_betti(args):
    if args.h is not None:
        _need(args, "d")
        d, h, q_o = args.d, Fraction(args.h), None
    else:
        cfg = _moduli(args)
        d, h, q_o = cfg.d, asymptotic_h(cfg), cfg.q_o
    bv = betti_vector(d, h)
    rec = {"d": d, "h_total": h, "mu": bv.mu, "dims": list(bv.dims)}
    if q_o is not None:
        wd = wd_bound(bv, q_o, d)
        rec["wd_bound"] = str(wd)
        rec["wd_ratio"] = wd.to_fraction() / h if wd.is_rational else str(wd)
        rec["wd_limit"] = wd_limit(d, q_o)
        if d == 2:
            rec["dv_bound"] = str(dv_bound(q_o, 2))
    return _emit_record(rec, args.format), 0


def _run_config(args) -> RunConfig:
    doc = dict(getattr(args, "config_doc", None) or {})
    for key in ("q", "d", "o"):
        if getattr(args, key, None) is not None:
            doc[key] = getattr(args, key)
    if args.ramification is not None:
        doc["ramification"] = [{"place": x, "inv": a} for x, a in _ramification(args.ramification, int(doc.get("d", 0)) or 1)]
    if args.degrees is not None:
        doc["level_degrees"] = _int_list(args.degrees) if isinstance(args.degrees, str) else list(args.degrees)
    if args.per_degree is not None:
        doc["max_per_degree"] = args.per_degree
    doc["format"] = args.format
    missing = [k for k in ("q", "d", "o", "level_degrees") if k not in doc]
    if missing:
        raise UsageError("missing " + ", ".join(missing))
    return RunConfig.from_json(doc)


def cmd_table(args):
    if args.degrees is None and args.level_degrees is not None:
        args.degrees = args.level_degrees
    cfg = _run_config(args)
    return render(build_convergence_table(cfg), args.format), 0


def cmd_optimal_curves(args):
    _need(args, "q", "o", "degrees")
    R = _places(",".join(x for x, _ in _ramification(args.ramification, 2)), args.q)
    o = _place_o(args)
    rows = optimal_curves_report(args.q, R, o, _int_list(args.degrees), args.per_degree or 3)
    return render(rows, args.format), 0


def cmd_type_check(args):
    _need(args, "type_data", "o")
    spec = _spec(args)
    with open(args.type_data) as fh:
        doc = json.load(fh)
    verdict = validate_type(TypeData.from_json(doc, spec.q), spec, _place_o(args))
    return _emit_record(verdict.to_json(), args.format), 0


def cmd_check(args):
    report = run_check(args.scale, args.seed or 0, args.inject_fault, args.jobs)
    doc = report.to_json()
    if args.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["oracle", "passed", "cases", "seconds", "counterexample"])
        for r in doc["oracles"]:
            writer.writerow([r["oracle"], r["passed"], r["cases"], r["seconds"], json.dumps(r["counterexample"]) if "counterexample" in r else ""])
        text = buf.getvalue()
    return text, 0 if report.passed else 2


# ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file supplying option values")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized sweeps")

    algebra = argparse.ArgumentParser(add_help=False)
    algebra.add_argument("--q", type=int)
    algebra.add_argument("--d", type=int)
    algebra.add_argument("--ramification", "--ram", dest="ramification", help='e.g. "T:1/2,T+1:1/2"')

    moduli = argparse.ArgumentParser(add_help=False)
    moduli.add_argument("--o", help="the place o (finite)")
    moduli.add_argument("--level", help="admissible level prime")

    parser = _Parser(prog="wdbound", description="Exact point counts and Betti asymptotics for quotients of Drinfeld modular varieties.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zeta", parents=[common], help="zeta values at negative integers")
    p.add_argument("--q", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--place", help="local factor at this place")
    p.add_argument("--S", help="partial zeta with these places removed")
    p.add_argument("--euler", type=int, metavar="N", help="check the Euler product to order N")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("admissible", parents=[common], help="admissible primes")
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--poly", help="test one prime")
    p.add_argument("--max-deg", type=int)
    p.add_argument("--density", type=int, metavar="N", help="admissible count among degree-N primes")
    p.add_argument("--exclude", help="comma separated places to skip")
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("volume", parents=[common, algebra], help="Vol(G(F)\\G^1(A))")
    p.add_argument("--oracle", action="store_true", help="also compute the residue of zeta_D")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("count", parents=[common, algebra, moduli], help="supersingular count and asymptotic h")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("betti", parents=[common, algebra, moduli], help="Betti vector and WD bound")
    p.add_argument("--h", help="total Betti number (instead of a moduli configuration)")
    p.set_defaults(func=cmd_betti)

    for name, func, text in (
        ("table", cmd_table, "convergence table over level degrees"),
        ("optimal-curves", cmd_optimal_curves, "d = 2 points/genus report"),
    ):
        p = sub.add_parser(name, parents=[common, algebra], help=text)
        p.add_argument("--o")
        p.add_argument("--degrees", help="comma separated level degrees")
        p.add_argument("--level-degrees", help=argparse.SUPPRESS)
        p.add_argument("--per-degree", type=int, help="levels per degree (default 3)")
        p.set_defaults(func=func)

    p = sub.add_parser("type-check", parents=[common, algebra], help="validate (D, inf, o)-type data")
    p.add_argument("--o")
    p.add_argument("--type-data", help="JSON file with ext_degree and places")
    p.set_defaults(func=cmd_type_check)

    p = sub.add_parser("check", parents=[common], help="run the oracle suite")
    p.add_argument("--scale", choices=("quick", "full"), default="quick")
    p.add_argument("--inject-fault", action="store_true", help="flip one zeta sign to test the suite")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        if args.format is None:
            args.format = "csv"
        if args.format not in ("csv", "json"):
            raise UsageError(f"unknown format {args.format!r}")
        text, status = args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        errors = getattr(exc, "errors", None)
        if errors:
            print("error:", file=sys.stderr)
            for line in errors:
                print(f"  {line}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"arithmetic failure: {exc}", file=sys.stderr)
        return 2
    _write(text, args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
