"""Command-line front end: ``ntinv <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence, TextIO

from .algebra import determinant, is_homomorphism, parse_gamma
from .catalan import lower_bound_experiment
from .census import cached_count, rational_infinitude_witnesses
from .errors import IoError, NtinvError
from .field import FieldSpec, parse_field
from .invariants import invariant_report
from .iso import DEFAULT_BUDGET, residuals, decide
from .reduction import reduce_1ref, reduce_2ref
from .sltm import Sltm, format_sltm, read_sltm


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {v}")
    return v


def _field(text: str) -> FieldSpec:
    try:
        return parse_field(text)
    except (NtinvError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ntinv", description=__doc__)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--threads", type=_positive, default=1, help="worker processes")
    # repeated on subcommands; SUPPRESS keeps a value given before the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--threads", type=_positive, default=argparse.SUPPRESS, help="worker processes")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("reduce", parents=[common], help="reduce a matrix to 1-REF or 2-REF")
    c.add_argument("file")
    c.add_argument("--form", choices=["1ref", "2ref"], default="2ref")
    c.add_argument("--log", action="store_true", help="also print the ETO log")

    c = sub.add_parser("invariants", parents=[common], help="wall, measure sequence, TNul, TRank")
    c.add_argument("file")

    c = sub.add_parser("compare", parents=[common], help="decide whether A(T) and A(S) are isomorphic")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--full-search", action="store_true")
    c.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)

    c = sub.add_parser("verify-gamma", parents=[common], help="check a candidate isomorphism matrix")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("gamma")

    c = sub.add_parser("catalan", parents=[common], help="Catalan lower-bound experiment")
    c.add_argument("--n", type=_positive, required=True)
    c.add_argument("--field", type=_field, default=FieldSpec.rationals())
    c.add_argument("--strictness", action="store_true")

    c = sub.add_parser("count-classes", parents=[common], help="exhaustive class count")
    c.add_argument("--n", type=_positive, required=True)
    c.add_argument("--field", type=_field, required=True)
    c.add_argument("--no-cache", action="store_true")

    c = sub.add_parser("witnesses", parents=[common], help="pairwise distinct classes over the rationals")
    c.add_argument("--count", type=_positive, required=True)
    return p


def _read(path: str) -> Sltm:
    try:
        return read_sltm(path)
    except OSError as exc:
        raise IoError(f"{path}: {exc.strerror or exc}") from exc


def _emit(out: TextIO, as_json: bool, data: Any, text: str) -> None:
    if as_json:
        out.write(json.dumps(data, sort_keys=True) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def _cmd_reduce(a: argparse.Namespace, out: TextIO) -> None:
    res = (reduce_1ref if a.form == "1ref" else reduce_2ref)(_read(a.file))
    data: dict[str, Any] = {"form": res.form, "matrix": format_sltm(res.reduced)}
    text = format_sltm(res.reduced)
    if a.log:
        data["log"] = res.log.to_records()
        text += res.log.to_jsonl()
    _emit(out, a.json, data, text)


def _cmd_invariants(a: argparse.Namespace, out: TextIO) -> None:
    rep = invariant_report(_read(a.file)).to_dict()
    text = "\n".join([
        f"wall: {rep['wall']}",
        "measure sequence: " + "; ".join(f"rows {m['rows']} measures {m['measures']}" for m in rep["measure_sequence"]),
        f"tnul: {rep['tnul']}",
        f"trank: {rep['trank']}",
        f"zero class: {rep['zero_class']}",
    ])
    _emit(out, a.json, rep, text)


def _cmd_compare(a: argparse.Namespace, out: TextIO) -> None:
    v = decide(_read(a.a), _read(a.b), budget=a.budget, workers=a.threads, full_search=a.full_search)
    data = v.to_dict()
    lines = [f"verdict: {v.kind}"]
    if "witness" in data:
        lines.append(f"witness: {json.dumps(data['witness'], sort_keys=True)}")
    if "reason" in data:
        lines.append(f"reason: {data['reason']}")
    if "gamma" in data:
        lines.append(f"gamma ({data['gamma_relates']}):")
        lines.extend(" ".join(row) for row in data["gamma"])
    elif "certificate" in data:
        lines.append(f"certificate: {data['certificate']['kind']}")
    _emit(out, a.json, data, "\n".join(lines))


def _cmd_verify_gamma(a: argparse.Namespace, out: TextIO) -> None:
    t, s = _read(a.a), _read(a.b)
    try:
        with open(a.gamma, encoding="utf-8") as fh:
            gamma = parse_gamma(fh.read(), t.spec, a.gamma)
    except OSError as exc:
        raise IoError(f"{a.gamma}: {exc.strerror or exc}") from exc
    bad = [x for x in residuals(t, s, gamma) if x.value != 0]
    det = determinant(gamma, t.spec)
    hom = is_homomorphism(gamma, t, s)
    ok = hom and det != 0 and not bad
    data = {
        "valid": ok,
        "homomorphism": hom,
        "determinant": t.spec.format_raw(det),
        "failing_residuals": [[x.r, x.i, x.k] for x in bad],
    }
    text = f"valid: {ok}\nhomomorphism: {hom}\ndeterminant: {data['determinant']}"
    if bad:
        text += "\nfailing residuals (r, i, k): " + ", ".join(f"({x.r},{x.i},{x.k})" for x in bad)
    _emit(out, a.json, data, text)


def _cmd_catalan(a: argparse.Namespace, out: TextIO) -> None:
    rep = lower_bound_experiment(a.n, a.field, strictness=a.strictness).to_dict()
    text = "\n".join([
        f"n: {rep['n']} field: {rep['field']}",
        f"paths: {rep['path_count']} (Catalan {rep['catalan']})",
        f"invariants agree: {rep['invariants_agree']}",
        f"pairwise distinct: {rep['pairwise_distinct']}",
    ] + ([f"strictness ({rep['strictness']['method']}): {rep['strictness']['distinguished']}"] if rep["strictness"] else []))
    _emit(out, a.json, rep, text)


def _cmd_count(a: argparse.Namespace, out: TextIO) -> None:
    r = cached_count(a.n, a.field, workers=a.threads, use_cache=not a.no_cache)
    data = r.to_dict()
    data.pop("stats")
    lines = [f"N={r.class_count}"]
    for c in r.classes:
        lines.append(f"  size {c.size:>6} wall {list(c.wall)}")
    _emit(out, a.json, data, "\n".join(lines))


def _cmd_witnesses(a: argparse.Namespace, out: TextIO) -> None:
    if a.count < 2:
        raise UsageError("--count must be at least 2")
    w = rational_infinitude_witnesses(a.count)
    lines = [f"parameters: {w.parameters}"]
    lines += [f"  {c['ratio']} square: {c['is_square']}" for c in w.certificates]
    _emit(out, a.json, w.to_dict(), "\n".join(lines))


COMMANDS = {
    "reduce": _cmd_reduce,
    "invariants": _cmd_invariants,
    "compare": _cmd_compare,
    "verify-gamma": _cmd_verify_gamma,
    "catalan": _cmd_catalan,
    "count-classes": _cmd_count,
    "witnesses": _cmd_witnesses,
}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    as_json = "--json" in (argv if argv is not None else sys.argv[1:])
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args, out)
        return 0
    except UsageError as exc:
        if as_json:
            err.write(json.dumps({"error": "UsageError", "message": str(exc)}) + "\n")
        else:
            err.write(f"ntinv: usage error: {exc}\n")
        return 2
    except NtinvError as exc:
        if as_json:
            out.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True) + "\n")
        else:
            err.write(f"ntinv: {type(exc).__name__}: {exc}\n")
        return 1


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
