"""Command line front end (``galilean``).

Exit codes are stable per error class:

    0  success
    1  parse error in a statement or auxiliary definition
    2  invalid annotations or network spec
    3  unbound symbol
    4  I/O failure
    5  bad arguments
    6  no grounded variables (I undefined)
    7  corpus rows disagree with their expected values
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import corpus as cp
from .errors import (
    AnnotationInvalid, CycleError, InvalidSpec, ParseError, UnboundSymbol, ZeroVariables,
)
from .expr import parse_statement, render
from .intelligibility import (
    AnalysisResult, format_decimal, score, significantly_different,
)
from .netintel import DEFAULT_ASYMPTOTIC_RATIO, load_network_spec, network_report
from .ontology import classify_statement, load_annotations, prepare, validate

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_ANNOTATION = 2
EXIT_UNBOUND = 3
EXIT_IO = 4
EXIT_USAGE = 5
EXIT_ZERO_VARIABLES = 6
EXIT_MISMATCH = 7


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, (AnnotationInvalid, CycleError, InvalidSpec)):
        return EXIT_ANNOTATION
    if isinstance(exc, UnboundSymbol):
        return EXIT_UNBOUND
    if isinstance(exc, ZeroVariables):
        return EXIT_ZERO_VARIABLES
    if isinstance(exc, OSError):
        return EXIT_IO
    raise exc


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="galilean", description="Galilean intelligibility of empirical statements.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("score", help="score one statement")
    s.add_argument("statement")
    s.add_argument("--annotations", required=True)
    s.add_argument("--format", choices=("human", "json", "csv"), default="human")

    c = sub.add_parser("classify", help="print the statement region")
    c.add_argument("statement")
    c.add_argument("--annotations", required=True)

    v = sub.add_parser("validate", help="check an annotation file")
    v.add_argument("--annotations", required=True)

    nn = sub.add_parser("nn", help="network estimator")
    nn_sub = nn.add_subparsers(dest="nn_command", required=True, parser_class=_Parser)
    nns = nn_sub.add_parser("score")
    nns.add_argument("--spec", required=True)
    nns.add_argument("--ratio", type=int, default=DEFAULT_ASYMPTOTIC_RATIO,
                     help="N_h >= ratio*N_O makes the -N_h approximation applicable")
    nns.add_argument("--format", choices=("human", "json"), default="human")

    cmp_ = sub.add_parser("compare", help="compare two statements under +/-1 count noise")
    cmp_.add_argument("a", help="corpus entry dir, statement file or network spec (.json)")
    cmp_.add_argument("b")
    cmp_.add_argument("--annotations-a")
    cmp_.add_argument("--annotations-b")
    cmp_.add_argument("--format", choices=("human", "json"), default="human")

    co = sub.add_parser("corpus", help="bundled or custom statement corpus")
    co_sub = co.add_subparsers(dest="corpus_command", required=True, parser_class=_Parser)
    rep = co_sub.add_parser("report")
    rep.add_argument("--dir", default=None, help="corpus directory (default: bundled)")
    rep.add_argument("--out", default=None, help="write CSV here instead of stdout")
    fig = co_sub.add_parser("figure4")
    fig.add_argument("--dir", default=None)
    fig.add_argument("--out", required=True)
    fig.add_argument("--n-o", default="2,10,100")
    fig.add_argument("--n-h-max", type=int, default=2500)
    return p


# -- commands ----------------------------------------------------------------

def _load_statement(path):
    return parse_statement(Path(path).read_text(encoding="utf-8"))


def _human_result(res: AnalysisResult, source: str) -> str:
    groups = ", ".join("{" + ", ".join(sorted(g.members)) + "}" for g in res.groups) or "-"
    lines = [
        f"statement  {source}",
        f"region     {res.region.value}",
        f"N_O        {res.n_o}  ({', '.join(sorted(res.variables))})",
        f"N_E        {res.n_e}  {groups}",
        f"I          {res.intelligibility}  ({format_decimal(res.intelligibility)})",
    ]
    lines += [f"warning    {w}" for w in res.warnings]
    return "\n".join(lines) + "\n"


def cmd_score(args, out):
    stmt = _load_statement(args.statement)
    res = score(stmt, load_annotations(args.annotations), Path(args.statement).stem)
    if args.format == "json":
        out.write(json.dumps(res.to_dict(), indent=2, sort_keys=True) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "N_O", "N_E", "I_num", "I_den", "I_decimal", "region", "warnings"])
        i = res.intelligibility
        w.writerow([res.name, res.n_o, res.n_e, i.numerator, i.denominator,
                    format_decimal(i), res.region.value, "; ".join(res.warnings)])
        out.write(buf.getvalue())
    else:
        out.write(_human_result(res, render(stmt)))
    return EXIT_OK


def cmd_classify(args, out):
    bound = prepare(_load_statement(args.statement), load_annotations(args.annotations))
    out.write(classify_statement(bound).value + "\n")
    return EXIT_OK


def cmd_validate(args, out, err):
    report = validate(load_annotations(args.annotations))
    if report.ok:
        out.write("ok\n")
        return EXIT_OK
    for v in report.violations:
        err.write(f"violation: {v}\n")
    return EXIT_ANNOTATION


def cmd_nn(args, out):
    rep = network_report(load_network_spec(args.spec), args.ratio)
    if args.format == "json":
        out.write(json.dumps(rep, indent=2, sort_keys=True) + "\n")
    else:
        asym = rep["asymptotic"]
        out.write(
            f"network    {rep['name']}\n"
            f"N_h        {rep['N_h']}\n"
            f"N_O        {rep['N_O']}\n"
            f"N_E        {rep['N_E']}\n"
            f"I          {Fraction(rep['I']['num'], rep['I']['den'])}  ({rep['I_decimal']})\n"
            f"I approx   {asym['value']}  "
            f"({'applicable' if asym['applicable'] else 'not applicable'}: N_h >> N_O)\n")
    return EXIT_OK


def _load_comparand(path, annotations):
    path = Path(path)
    if path.is_dir():
        entry = cp.load_entry(path)
        if entry.error is not None:
            raise entry.error
        if entry.network is not None:
            return entry.network
        return score(entry.statement, entry.annotations, entry.name)
    if path.suffix == ".json":
        return load_network_spec(path)
    ann = Path(annotations) if annotations else path.with_suffix(".json")
    return score(_load_statement(path), load_annotations(ann), path.stem)


def cmd_compare(args, out):
    a = _load_comparand(args.a, args.annotations_a)
    b = _load_comparand(args.b, args.annotations_b)
    verdict = significantly_different(a, b)
    if args.format == "json":
        payload = {"verdict": verdict.value,
                   "a": {"N_O": a.n_o, "N_E": a.n_e}, "b": {"N_O": b.n_o, "N_E": b.n_e}}
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write(verdict.value + "\n")
    return EXIT_OK


def _corpus_dir(arg):
    path = Path(arg) if arg else cp.bundled_corpus_dir()
    if not path.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {path}")
    return path


def cmd_corpus_report(args, out, err):
    rows = cp.score_corpus(cp.load_corpus(_corpus_dir(args.dir)))
    buf = io.StringIO()
    cp.write_report_csv(rows, buf)
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        out.write(buf.getvalue())
    code = EXIT_OK
    for row in rows:
        if row.match == cp.ERROR:
            err.write(f"{row.name}: {row.warnings[0]}\n")
            if code == EXIT_OK:
                code = exit_code_for(row.error)
        elif row.match == cp.MISMATCH:
            err.write(f"{row.name}: computed values disagree with expected.json\n")
            if code == EXIT_OK:
                code = EXIT_MISMATCH
    return code


def cmd_corpus_figure4(args, out):
    try:
        n_o_values = [int(x) for x in args.n_o.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--n-o expects comma separated integers, got {args.n_o!r}") from None
    if not n_o_values or min(n_o_values) < 1 or args.n_h_max < 1:
        raise UsageError("--n-o values and --n-h-max must be positive")
    entries = cp.load_corpus(_corpus_dir(args.dir))
    points = cp.figure4_data(n_o_values, range(1, args.n_h_max + 1), entries)
    buf = io.StringIO()
    cp.write_figure4_csv(points, buf)
    Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    out.write(f"wrote {len(points)} points to {args.out}\n")
    return EXIT_OK


def run(argv=None, out=None, err=None) -> int:
    """Run the CLI; returns the exit code.  ``out``/``err`` default to stdio."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "score":
            return cmd_score(args, out)
        if args.command == "classify":
            return cmd_classify(args, out)
        if args.command == "validate":
            return cmd_validate(args, out, err)
        if args.command == "nn":
            return cmd_nn(args, out)
        if args.command == "compare":
            return cmd_compare(args, out)
        if args.corpus_command == "report":
            return cmd_corpus_report(args, out, err)
        return cmd_corpus_figure4(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ParseError, AnnotationInvalid, CycleError, InvalidSpec, UnboundSymbol,
            ZeroVariables, OSError) as exc:
        kind = type(exc).__name__
        err.write(f"error: {kind}: {exc}\n")
        return exit_code_for(exc)


def main():  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
