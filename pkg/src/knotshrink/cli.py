"""Command-line interface: ``knotshrink <command> [options]``.

Exit codes: 0 success, 1 usage or parse error, 2 mathematical precondition
violated, 3 table mismatch, 4 resource cap reached.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import warnings

from flint import ctx

from .diophantine import (
    baker_wustholz_constant,
    convergents_of,
    gouillon_constant,
    mahler_measure,
    mahler_measure_quadrature,
)
from .errors import DomainError, InputError, ParseError, ResourceError
from .knotdb import builtin_table, ingest_csv, levine_check, torus_knot_lambda, twist_knot_lambda
from .polyring import LaurentPoly, parse_poly
from .report import ReportEnvelope, provenance
from .shrinkage import classify
from .sigma import exponent_scan, spike_contrast, spike_probe
from .smith import alexander_polynomials, load_matrix, reduced_from_pair, smith_normal_form

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_MISMATCH, EXIT_RESOURCE = 0, 1, 2, 3, 4
PRECISION_ENV = "KNOTSHRINK_PRECISION_BITS"
DEFAULT_PRECISION = 192
MAX_SCAN_N = 1_000_000


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"{PRECISION_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--precision-bits", type=int, default=None,
                        help=f"working precision (default {DEFAULT_PRECISION}, or ${PRECISION_ENV})")
    common.add_argument("--strict", action="store_true",
                        help="treat invariant violations such as Lambda(1) != +-1 as errors")

    parser = _Parser(prog="knotshrink", description="Shrinkage rates of knot cyclic covers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="shrinkage type of a knot")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly", help="reduced Alexander polynomial Lambda")
    src.add_argument("--delta1", help="first Alexander polynomial (with --delta2)")
    src.add_argument("--matrix", help="presentation matrix file, or - for stdin")
    p.add_argument("--delta2", help="second Alexander polynomial")
    p.add_argument("--baker-method", choices=("gouillon", "bw"), default="gouillon")

    p = sub.add_parser("table", parents=[common], help="classify a dataset and compare")
    p.add_argument("--dataset", default="builtin", help="'builtin' or a CSV file")

    p = sub.add_parser("sigma", parents=[common], help="exponent scan of sigma_hat")
    p.add_argument("--poly", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--nmin", type=int, default=2)
    p.add_argument("--spikes", action="store_true",
                   help="append probes at convergent denominators of each non-cyclotomic root")

    p = sub.add_parser("baker", parents=[common], help="Baker constant of a root polynomial")
    p.add_argument("--poly", required=True)
    p.add_argument("--method", choices=("gouillon", "bw"), default="gouillon")

    p = sub.add_parser("mahler", parents=[common], help="Mahler measure and torsion growth rate")
    p.add_argument("--poly", required=True)

    p = sub.add_parser("smith", parents=[common], help="Smith normal form of a matrix file")
    p.add_argument("--matrix", required=True)

    p = sub.add_parser("levine", parents=[common], help="Levine realizability conditions")
    p.add_argument("--chain", required=True, help="polynomials separated by ';'")

    p = sub.add_parser("family", parents=[common], help="torus or twist knot")
    p.add_argument("family", choices=("torus", "twist"))
    p.add_argument("params", type=int, nargs="+")
    return parser


# ---------------------------------------------------------------------------
# commands return (inputs, result, rows, text, exit_code)

def _poly(text: str, flag: str) -> LaurentPoly:
    try:
        return parse_poly(text)
    except ParseError as exc:
        exc.flag = flag
        raise


def _check_lambda(lam: LaurentPoly, strict: bool):
    if lam.is_zero():
        raise DomainError("Lambda is zero")
    if abs(lam(1)) != 1:
        msg = f"Lambda(1) = {lam(1)}, but a reduced Alexander polynomial has Lambda(1) = +-1"
        if strict:
            raise DomainError(msg)
        warnings.warn(msg, stacklevel=2)


def _classify_rows(report) -> list:
    rows = [("factor", "multiplicity", "t", "cyclotomic_order", "nu_lower", "nu_upper")]
    for cb in report.clusters:
        c = cb.cluster
        rows.append((str(c.factor), c.multiplicity, repr(c.t), c.cyclotomic_order or "",
                     cb.nu_lower, cb.nu_upper))
    return rows


def _classify_text(report) -> str:
    lines = [f"Lambda = {report.lam}", f"type: {report.verdict.label}",
             f"lower rate: {report.mu_lower}",
             f"upper rate: between {report.mu_upper_lower_bound} and {report.mu_upper_upper_bound}",
             f"Novikov-Shubin: {report.novikov_shubin}"]
    for cb in report.clusters:
        c = cb.cluster
        kind = f"root of unity of order {c.cyclotomic_order}" if c.is_cyclotomic else "not a root of unity"
        line = f"  root t = {c.t:.15g} (mult {c.multiplicity}, {kind}), nu in [{cb.nu_lower}, {cb.nu_upper}]"
        if cb.baker is not None:
            line += f", Baker C = {cb.baker.C} ({cb.baker.method})"
        lines.append(line)
    if report.verdict.reason:
        lines.append(f"undecided: {report.verdict.reason}")
    return "\n".join(lines)


def cmd_classify(args, prec):
    if args.poly is not None:
        lam, inputs = _poly(args.poly, "--poly"), {"poly": args.poly}
        if args.delta2:
            raise _UsageError("--delta2 goes with --delta1, not --poly")
    elif args.delta1 is not None:
        if not args.delta2:
            raise _UsageError("--delta1 needs --delta2")
        d1, d2 = _poly(args.delta1, "--delta1"), _poly(args.delta2, "--delta2")
        lam, inputs = reduced_from_pair(d1, d2), {"delta1": args.delta1, "delta2": args.delta2}
    else:
        A = load_matrix(sys.stdin if args.matrix == "-" else args.matrix)
        snf = smith_normal_form(A)
        if not snf.invariant_factors:
            raise DomainError("the matrix has rank 0")
        lam, inputs = snf.invariant_factors[0], {"matrix": args.matrix}
    _check_lambda(lam, args.strict)
    inputs["baker_method"] = args.baker_method
    report = classify(lam, args.baker_method)
    return inputs, report, _classify_rows(report), _classify_text(report), EXIT_OK


def cmd_table(args, prec):
    if args.dataset == "builtin":
        records, rejections = builtin_table(), ()
    else:
        res = ingest_csv(args.dataset)
        records, rejections = res.records, res.rejections
    rows = [("name", "lambda", "computed", "expected", "published", "match")]
    entries, mismatches = [], 0
    for rec in records:
        verdict = classify(rec.lam).verdict
        expected = rec.expected_type.label if rec.expected_type else ""
        published = rec.published_type.label if rec.published_type else ""
        match = not expected or verdict.label == expected
        mismatches += not match
        rows.append((rec.name, str(rec.lam), verdict.label, expected, published, match))
        entries.append({"name": rec.name, "lambda": str(rec.lam), "computed": verdict.label,
                        "expected": expected, "published": published, "match": match})
    result = {
        "rows": entries, "count": len(entries), "mismatches": mismatches,
        "published_deviations": [e["name"] for e in entries if e["published"] and e["published"] != e["computed"]],
        "rejections": [{"line": r.line, "name": r.name, "reason": r.reason} for r in rejections],
    }
    width = max((len(r[0]) for r in rows), default=4)
    text = [f"{'knot':<{width}}  {'computed':<12} {'expected':<12} Lambda"]
    for e in entries:
        flag = "" if e["match"] else "  MISMATCH"
        note = f"  (published: {e['published']})" if e["published"] and e["published"] != e["expected"] else ""
        text.append(f"{e['name']:<{width}}  {e['computed']:<12} {e['expected']:<12} {e['lambda']}{flag}{note}")
    for r in rejections:
        text.append(f"rejected line {r.line} ({r.name}): {r.reason}")
    text.append(f"{len(entries) - mismatches}/{len(entries)} match, {len(rejections)} rejected")
    code = EXIT_MISMATCH if mismatches else EXIT_OK
    return {"dataset": args.dataset}, result, rows, "\n".join(text), code


def cmd_sigma(args, prec):
    lam = _poly(args.poly, "--poly")
    _check_lambda(lam, args.strict)
    if args.nmax < 2 or args.nmin < 1 or args.nmin > args.nmax:
        raise _UsageError("need 1 <= nmin <= nmax and nmax >= 2")
    code, notice = EXIT_OK, None
    nmax = args.nmax
    if nmax > MAX_SCAN_N:
        nmax, code = MAX_SCAN_N, EXIT_RESOURCE
        notice = f"scan truncated at n = {MAX_SCAN_N} (resource cap)"
    scan = exponent_scan([lam], range(args.nmin, nmax + 1), prec)
    points = [p.to_dict() | {"kind": "scan"} for p in scan]
    spikes = []
    if args.spikes:
        report = classify(lam)
        for cb in report.clusters:
            if cb.cluster.is_cyclotomic:
                continue
            convs = convergents_of(cb.cluster, max(nmax // 2, 1))
            probes = spike_probe(lam, cb.cluster, convs, prec)
            contrast = spike_contrast([lam], probes, precision_bits=prec)
            for c, p, (_, generic) in zip(convs, probes, contrast):
                spikes.append(p.to_dict() | {"kind": "spike", "convergent": str(c),
                                             "t": cb.cluster.t, "generic_median": generic})
    exps = [p["exponent"] for p in points if p["exponent"] is not None]
    result = {"points": points, "spikes": spikes,
              "running_min": scan.running_min[-1], "running_max": scan.running_max[-1]}
    if notice:
        result["notice"] = notice
        print(notice, file=sys.stderr)
    header = ("n", "sigma_lo", "sigma_hi", "exponent", "zero_count")
    rows = [header + (("kind",) if args.spikes else ())]
    for p in points + spikes:
        row = tuple(p[k] for k in header)
        rows.append(row + ((p["kind"],) if args.spikes else ()))
    text = [f"Lambda = {lam}, n in [{args.nmin}, {nmax}]",
            f"exponent range: [{min(exps):.6f}, {max(exps):.6f}]" if exps else "no exponents",
            f"last exponent: {exps[-1]:.6f}" if exps else ""]
    for s in spikes:
        text.append(f"  spike n = {s['n']} ({s['convergent']}): exponent {s['exponent']:.4f}, "
                    f"generic median {s['generic_median']:.4f}")
    inputs = {"poly": args.poly, "nmin": args.nmin, "nmax": args.nmax, "spikes": args.spikes}
    return inputs, result, rows, "\n".join(t for t in text if t), code


def cmd_baker(args, prec):
    p = _poly(args.poly, "--poly")
    bound = gouillon_constant(p) if args.method == "gouillon" else baker_wustholz_constant(p)
    d = bound.to_dict()
    rows = [("key", "value")] + list(d.items())
    tag = " (asymptotic)" if bound.asymptotic else ""
    text = (f"{bound.method} constant for {p}: C = {bound.C} (exact {bound.C_exact:.6f}), "
            f"d = {bound.degree}, H = {bound.height}, log M = {bound.log_mahler:.10f}\n"
            f"nu <= C + 1 = {bound.nu_upper}{tag}")
    return {"poly": args.poly, "method": args.method}, bound, rows, text, EXIT_OK


def cmd_mahler(args, prec):
    p = _poly(args.poly, "--poly")
    m = mahler_measure(p, prec)
    with ctx.workprec(prec):
        log_m = m.log()
    quad = mahler_measure_quadrature(p)
    result = {"mahler_measure": m, "log_mahler": log_m, "quadrature": quad,
              "growth_rate": float(log_m.mid())}
    rows = [("key", "value"), ("mahler_measure", float(m.mid())), ("log_mahler", float(log_m.mid())),
            ("quadrature", quad)]
    text = f"M({p}) = {m.str(20)}\nm = log M = {log_m.str(20)}\nquadrature: {quad!r}"
    return {"poly": args.poly}, result, rows, text, EXIT_OK


def cmd_smith(args, prec):
    A = load_matrix(sys.stdin if args.matrix == "-" else args.matrix)
    snf = smith_normal_form(A)
    deltas = alexander_polynomials(A)
    result = {"invariant_factors": [str(a) for a in snf.invariant_factors], "rank": snf.rank,
              "alexander_polynomials": [str(d) for d in deltas], "shape": list(A.shape)}
    rows = [("index", "invariant_factor", "alexander_polynomial")]
    rows += [(i + 1, str(a), str(d)) for i, (a, d) in enumerate(zip(snf.invariant_factors, deltas))]
    text = "\n".join([f"{A.rows}x{A.cols} matrix of rank {snf.rank}"] +
                     [f"  Lambda_{i + 1} = {a}    Delta_{i + 1} = {d}"
                      for i, (a, d) in enumerate(zip(snf.invariant_factors, deltas))])
    return {"matrix": args.matrix}, result, rows, text, EXIT_OK


def cmd_levine(args, prec):
    parts = [s for s in args.chain.split(";") if s.strip()]
    if not parts:
        raise _UsageError("--chain is empty")
    chain = [_poly(s, "--chain") for s in parts]
    rep = levine_check(chain)
    rows = [("index", "poly", "i", "ii", "iii")]
    rows += [(c["index"], rep.to_dict()["chain"][c["index"] - 1], c["i"], c["ii"], c["iii"])
             for c in rep.to_dict()["conditions"]]
    text = ["realizable" if rep.ok else "not realizable"]
    labels = {"i": "Lambda(1) = +-1", "ii": "symmetric", "iii": "divides the previous one"}
    for idx, tag in rep.failures():
        text.append(f"  Lambda_{idx} fails condition ({tag}): {labels[tag]}")
    return {"chain": args.chain}, rep, rows, "\n".join(text), EXIT_OK


def cmd_family(args, prec):
    if args.family == "torus":
        if len(args.params) != 2:
            raise _UsageError("torus needs two parameters p q")
        lam = torus_knot_lambda(*args.params)
    else:
        if len(args.params) != 1:
            raise _UsageError("twist needs one parameter m")
        lam = twist_knot_lambda(args.params[0])
    report = classify(lam)
    text = f"{args.family} {' '.join(map(str, args.params))}\n" + _classify_text(report)
    inputs = {"family": args.family, "params": args.params}
    return inputs, report, _classify_rows(report), text, EXIT_OK


COMMANDS = {
    "classify": cmd_classify, "table": cmd_table, "sigma": cmd_sigma, "baker": cmd_baker,
    "mahler": cmd_mahler, "smith": cmd_smith, "levine": cmd_levine, "family": cmd_family,
}


def _emit(fmt, envelope, rows, text, out):
    if fmt == "json":
        out.write(envelope.to_json() + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(text + "\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        prec = args.precision_bits if args.precision_bits is not None else _default_precision()
        if prec < 16:
            raise _UsageError("--precision-bits must be at least 16")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            inputs, result, rows, text, code = COMMANDS[args.command](args, prec)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        envelope = ReportEnvelope(args.command, inputs, result, provenance(prec))
        _emit(args.format, envelope, rows, text, out)
        return code
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        flag = getattr(exc, "flag", None)
        print(f"parse error{f' in {flag}' if flag else ''}: {exc}", file=sys.stderr)
        if exc.caret():
            print(exc.caret(), file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
