"""Command line interface.

Exit codes: 0 when every check passes, 1 when a verification check fails
(the report names the failing check and a witness), 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import counterexamples as cx
from .distortion import (
    CertificateFormatError,
    default_windows,
    distort,
    load_certificate,
    verify_certificate,
)
from .factorization import factorize, verify_factorization
from .io import ParseError, fixture_text, parse_sequence
from .orbits import SearchExhausted, build_orbit_system, figure_text, verify_orbit_system
from .pl import PLError, Window, format_rational, parse_rational

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    """``p/q`` in canonical form, or a plain integer."""
    try:
        if "/" not in text:
            return Fraction(int(text))
        return parse_rational(text)
    except (ValueError, PLError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}: {exc}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input file ('-' for stdin; 'fixture:four' or 'fixture:eight' for bundled data)")
    common.add_argument("--out", help="output file; figures and tables are written next to it")
    common.add_argument(
        "--window", nargs=2, action="append", type=_rational_arg, metavar=("LO", "HI"), help="verification window (repeatable)"
    )
    common.add_argument("--samples", type=_positive, default=250, help="sample points per window")
    common.add_argument("--depth", type=_positive, default=15, help="iterate depth for orbit checks")
    common.add_argument("--den-bound", type=_positive, default=64, help="denominator bound for the orbit search")
    common.add_argument("--seed", type=int, default=0, help="seed for sample points only")

    p = argparse.ArgumentParser(prog="homeodistort", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("distort", parents=[common], help="sequence -> ten generators, words and ledger")
    sub.add_parser("factorize", parents=[common], help="sequence -> g, h, k factors")
    sub.add_parser("verify", parents=[common], help="replay a certificate file")
    o = sub.add_parser("orbits", parents=[common], help="build and check an interval orbit system")
    o.add_argument("--count", type=_positive, default=3, help="number of intervals K")
    sub.add_parser("counterexample", parents=[common], help="non-generation certificate in a finite power")
    sub.add_parser("selftest", parents=[common], help="quick end-to-end checks on generated fixtures")
    return p


def _windows(args) -> list:
    if not args.window:
        return default_windows()
    try:
        return [Window(lo, hi) for lo, hi in args.window]
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _read_input(args) -> str:
    if not args.input:
        raise InputError("--input is required")
    if args.input == "-":
        return sys.stdin.read()
    if args.input.startswith("fixture:"):
        try:
            return fixture_text(args.input.split(":", 1)[1])
        except FileNotFoundError:
            raise InputError(f"unknown fixture {args.input!r}") from None
    try:
        return Path(args.input).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None


def _write(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)


def _sidecar(args, suffix: str):
    if not args.out:
        return None
    out = Path(args.out)
    return out.with_name(out.stem + suffix)


def _emit_report(title: str, report) -> None:
    print(report.summary())
    for c in report.failures():
        if c.witness is not None:
            print(f"witness\t{title}\t{c.name}\tn={c.index}\tx={format_rational(c.witness)}")


# ---------------------------------------------------------------------------


def ledger_table(ledger: list) -> str:
    rows = ["n\tk=6n+4\tg=4n+4\th=4n+4\ttotal\tbound=14n+12\treduced"]
    for r in ledger:
        rows.append(f"{r['n']}\t{r['k']}\t{r['g']}\t{r['h']}\t{r['total']}\t{r['bound']}\t{r['reduced']}")
    return "\n".join(rows) + "\n"


def cmd_distort(args) -> int:
    fs = parse_sequence(_read_input(args))
    cert = distort(fs)
    cert.verification = verify_certificate(cert, _windows(args), args.samples, args.seed)
    print(f"generators\t{len(cert.generators)}")
    table = ledger_table(cert.ledger)
    print(table, end="")
    _emit_report("distort", cert.verification)
    _write(args, cert.to_json())
    tsv = _sidecar(args, ".ledger.tsv")
    if tsv is not None:
        tsv.write_text(table)
        from .plotting import plot_ledger

        plot_ledger(cert.ledger, _sidecar(args, ".ledger.png"))
    return EXIT_OK if cert.verification.passed else EXIT_FAIL


def cmd_factorize(args) -> int:
    fs = parse_sequence(_read_input(args))
    res = factorize(fs)
    windows = _windows(args)
    rep = verify_factorization(res, windows)
    data = res.to_dict()
    if not res.finite:
        data["materialized"] = [
            {
                "window": [format_rational(w.lo), format_rational(w.hi)],
                "g": [m.materialize(w).restrict(w).to_dict() for m in res.g],
                "h": [m.materialize(w).restrict(w).to_dict() for m in res.h],
            }
            for w in windows
        ]
    data["verification"] = rep.to_dict()
    print(f"finite\t{res.finite}")
    print("n\tz_n\tx_n^-\tx_n^+")
    an = res.anchors
    for n in range(an.N + 1):
        z = "-" if an.z[n] is None else format_rational(an.z[n])
        print(f"{n}\t{z}\t{format_rational(an.x_minus[n])}\t{format_rational(an.x_plus[n])}")
    _emit_report("factorize", rep)
    _write(args, json.dumps(data, indent=1, sort_keys=True) + "\n")
    png = _sidecar(args, ".anchors.png")
    if png is not None:
        from .plotting import plot_anchors

        plot_anchors(an, png, an.N + 2)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        cert = load_certificate(_read_input(args))
    except CertificateFormatError as exc:
        raise InputError(str(exc)) from None
    rep = verify_certificate(cert, _windows(args), args.samples, args.seed)
    _emit_report("verify", rep)
    _write(args, json.dumps(rep.to_dict(), indent=1, sort_keys=True) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_orbits(args) -> int:
    system = build_orbit_system(args.count, args.den_bound, depth=max(args.depth, 16))
    window = _windows(args)[0] if args.window else Window(0, 10**4)
    rep = verify_orbit_system(system, window, args.depth)
    print(f"intervals\t{len(system.intervals)}")
    for k, (a, b) in enumerate(system.intervals):
        print(f"I_{k}\t{format_rational(a)}\t{format_rational(b)}")
    print(f"violations\t{len(rep['violations'])}")
    for v in rep["violations"]:
        print(f"violation\t{v['first']}\t{v['second']}\t{v['overlap'][0]}\t{v['overlap'][1]}")
    print(figure_text(system, depth=3, hi=200), end="")
    _write(args, json.dumps({"system": system.to_dict(), "report": rep}, indent=1, sort_keys=True) + "\n")
    fig = _sidecar(args, ".figure.txt")
    if fig is not None:
        fig.write_text(figure_text(system, depth=args.depth))
        from .plotting import plot_orbits

        plot_orbits(system, _sidecar(args, ".orbits.png"), depth=3, hi=60)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def _load_group(spec: dict, base: Path) -> cx.FiniteGroupTable:
    if "group" in spec:
        return cx.builtin_group(spec["group"])
    if "table" in spec:
        return cx.FiniteGroupTable(spec["table"])
    if "table_file" in spec:
        path = base / spec["table_file"]
        try:
            return cx.FiniteGroupTable.from_text(path.read_text(), path.stem)
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    raise InputError("the input needs one of 'group', 'table' or 'table_file'")


def cmd_counterexample(args) -> int:
    """Input: ``{"group": "S3", "generators": [[...], ...], "target": [...], "max_len": 4}``."""
    try:
        spec = json.loads(_read_input(args))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from None
    if not isinstance(spec, dict):
        raise InputError("expected a JSON object")
    base = Path(args.input).parent if args.input not in (None, "-") else Path(".")
    G = _load_group(spec, base)
    S = [tuple(s) for s in spec.get("generators", [])]
    try:
        target = tuple(spec["target"])
    except KeyError:
        raise InputError("missing 'target'") from None
    cx._check_elements(G, S + [target], len(target))
    cert = cx.nongeneration_certificate(S, target)
    out = {"group": G.name, "order": G.order, "m": len(target), "certificate": cert.to_dict()}
    print(f"classes\t{len(cx.agreement_partition(S, len(target)))}")
    ok = bool(cert)
    if cert:
        j1, j2 = cert.pair
        print(f"certificate\tclass={cert.witness_class}\tpair=({j1}, {j2})")
    else:
        print("certificate\tnot found")
    max_len = spec.get("max_len", args.depth if args.depth < 15 else 4)
    if len(target) <= 6 and G.order <= 12:
        try:
            gen = cx.brute_force_generated(G, S, target, max_len)
            out["brute_force"] = {"max_len": max_len, "generated": gen}
            print(f"brute_force\tmax_len={max_len}\tgenerated={gen}")
            if cert and gen:
                print("error\tcertificate contradicted by enumeration")
                ok = False
        except cx.BudgetExceeded as exc:
            out["brute_force"] = {"max_len": max_len, "budget_exceeded": str(exc)}
    _write(args, json.dumps(out, indent=1, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    lines, ok = run_selftest(args.seed, samples=min(args.samples, 40))
    for line in lines:
        print(line)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "distort": cmd_distort,
    "factorize": cmd_factorize,
    "verify": cmd_verify,
    "orbits": cmd_orbits,
    "counterexample": cmd_counterexample,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: parse error at line {exc.line}: {exc.reason}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, SearchExhausted, cx.GroupTableError, PLError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
