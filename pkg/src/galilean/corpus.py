"""Bundled statement corpus, report generation and figure data.

Layout of a corpus directory::

    <dir>/<name>/statement.gal      statement source
    <dir>/<name>/annotations.json   ontology for the statement
    <dir>/<name>/network.json       (instead of the two above) network spec
    <dir>/<name>/expected.json      {"N_O", "N_E", "I": {"num", "den"},
                                     "paper_row", "discrepancy"?}
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable

from . import expr as ex
from .errors import AnnotationInvalid, GalileanError
from .intelligibility import AnalysisResult, format_decimal, score
from .netintel import NetworkSpec, load_network_spec, nn_empirical_constants, nn_score
from .ontology import AnnotationSet, load_annotations, validate

REPORT_HEADER = ["name", "N_O", "N_E", "I_num", "I_den", "I_decimal",
                 "expected_I_num", "expected_I_den", "match", "warnings"]
FIGURE4_HEADER = ["series", "N_O", "N_h", "I_decimal", "label"]

MATCH = "true"
MISMATCH = "false"
DISCREPANCY = "paper-discrepancy"
ERROR = "error"


def bundled_corpus_dir() -> Path:
    return Path(str(resources.files("galilean") / "data" / "corpus"))


@dataclass
class CorpusEntry:
    name: str
    path: Path
    expected_n_o: int | None = None
    expected_n_e: int | None = None
    expected_i: Fraction | None = None
    paper_row: str = ""
    discrepancy: str | None = None
    statement: ex.Statement | None = None
    annotations: AnnotationSet | None = None
    network: NetworkSpec | None = None
    error: GalileanError | OSError | None = None

    @property
    def is_network(self) -> bool:
        return self.network is not None or (self.path / "network.json").exists()

    @property
    def ok(self) -> bool:
        return self.error is None


def _read_expected(entry: CorpusEntry):
    data = json.loads((entry.path / "expected.json").read_text(encoding="utf-8"))
    unknown = set(data) - {"N_O", "N_E", "I", "paper_row", "discrepancy"}
    if unknown:
        raise AnnotationInvalid([f"expected.json: unknown key(s) {sorted(unknown)}"])
    try:
        entry.expected_n_o = int(data["N_O"])
        entry.expected_n_e = int(data["N_E"])
        entry.expected_i = Fraction(data["I"]["num"], data["I"]["den"])
        entry.paper_row = data["paper_row"]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise AnnotationInvalid([f"expected.json: malformed ({exc!r})"]) from None
    entry.discrepancy = data.get("discrepancy")
    if (entry.expected_n_o >= 1 and not entry.discrepancy
            and entry.expected_i != 1 - Fraction(entry.expected_n_e, entry.expected_n_o)):
        raise AnnotationInvalid(["expected.json: I disagrees with 1 - N_E/N_O "
                                 "and no discrepancy note is given"])


def load_entry(path: Path) -> CorpusEntry:
    """Load one entry.  Failures are stored on ``entry.error``, never raised."""
    entry = CorpusEntry(path.name, path)
    try:
        _read_expected(entry)
        if (path / "network.json").exists():
            entry.network = load_network_spec(path / "network.json")
        else:
            entry.statement = ex.parse_statement(
                (path / "statement.gal").read_text(encoding="utf-8"))
            entry.annotations = load_annotations(path / "annotations.json")
            validate(entry.annotations).raise_if_invalid()
    except (GalileanError, OSError) as exc:
        entry.error = exc
    except json.JSONDecodeError as exc:
        entry.error = AnnotationInvalid([f"expected.json: {exc}"])
    return entry


def load_corpus(directory) -> list[CorpusEntry]:
    """All entries under ``directory`` sorted by name; broken ones carry ``error``."""
    directory = Path(directory)
    return [load_entry(p) for p in sorted(directory.iterdir(), key=lambda p: p.name)
            if p.is_dir()]


@dataclass
class ReportRow:
    name: str
    n_o: int | None
    n_e: int | None
    intelligibility: Fraction | None
    expected_i: Fraction | None
    match: str
    warnings: tuple = ()
    result: AnalysisResult | None = field(default=None, repr=False)
    error: Exception | None = field(default=None, repr=False)

    def csv_row(self) -> list:
        i, e = self.intelligibility, self.expected_i
        return [
            self.name,
            "" if self.n_o is None else self.n_o,
            "" if self.n_e is None else self.n_e,
            "" if i is None else i.numerator,
            "" if i is None else i.denominator,
            "" if i is None else format_decimal(i),
            "" if e is None else e.numerator,
            "" if e is None else e.denominator,
            self.match,
            "; ".join(self.warnings),
        ]


def score_entry(entry: CorpusEntry) -> ReportRow:
    if entry.error is not None:
        return ReportRow(entry.name, None, None, None, entry.expected_i, ERROR,
                         (f"{type(entry.error).__name__}: {entry.error}",), error=entry.error)
    result = None
    try:
        if entry.network is not None:
            n_o, n_e, value = (entry.network.io_variable_count,
                               nn_empirical_constants(entry.network), nn_score(entry.network))
            warnings = []
        else:
            result = score(entry.statement, entry.annotations, entry.name)
            n_o, n_e, value = result.n_o, result.n_e, result.intelligibility
            warnings = list(result.warnings)
    except GalileanError as exc:
        return ReportRow(entry.name, None, None, None, entry.expected_i, ERROR,
                         (f"{type(exc).__name__}: {exc}",), error=exc)
    agrees = (n_o, n_e, value) == (entry.expected_n_o, entry.expected_n_e, entry.expected_i)
    if not agrees:
        match = MISMATCH
    elif entry.discrepancy:
        match = DISCREPANCY
    else:
        match = MATCH
    if entry.discrepancy:
        warnings.append("discrepancy: " + entry.discrepancy)
    return ReportRow(entry.name, n_o, n_e, value, entry.expected_i, match,
                     tuple(warnings), result=result)


def score_corpus(entries: Iterable[CorpusEntry]) -> list[ReportRow]:
    return [score_entry(e) for e in entries]


def write_report_csv(rows: Iterable[ReportRow], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for row in rows:
        writer.writerow(row.csv_row())


# -- figure data -------------------------------------------------------------

@dataclass(frozen=True)
class Figure4Point:
    series: str          # "curve", "statement", "network" or "star"
    n_o: int
    n_h: int | None
    intelligibility: Fraction
    label: str

    def csv_row(self) -> list:
        return [self.series, self.n_o, "" if self.n_h is None else self.n_h,
                format_decimal(self.intelligibility), self.label]


def figure4_data(n_o_values: Iterable[int], n_h_range: Iterable[int],
                 entries: Iterable[CorpusEntry] = (),
                 star: str | None = "alphafold2") -> list[Figure4Point]:
    """Network curves, statement scatter points and network markers.

    Curves give the network score for every ``N_h`` in ``n_h_range`` and every
    requested ``N_O``.  Each scorable statement entry adds a ``statement``
    point; network entries add a ``network`` point, or ``star`` when the entry
    is named ``star``.
    """
    n_h_values = list(n_h_range)
    if not n_h_values:
        raise ValueError("N_h range must not be empty")
    points = []
    for n_o in n_o_values:
        for n_h in n_h_values:
            spec = NetworkSpec(f"N_O={n_o}", n_h, n_o)
            points.append(Figure4Point("curve", n_o, n_h, nn_score(spec), f"N_O={n_o}"))
    for row_entry in entries:
        row = score_entry(row_entry)
        if row.match == ERROR:
            continue
        if row_entry.network is not None:
            series = "star" if row_entry.name == star else "network"
            points.append(Figure4Point(series, row.n_o, row_entry.network.hidden_layers,
                                       row.intelligibility, row_entry.name))
        else:
            points.append(Figure4Point("statement", row.n_o, None, row.intelligibility,
                                       row_entry.name))
    return points


def write_figure4_csv(points: Iterable[Figure4Point], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(FIGURE4_HEADER)
    for p in points:
        writer.writerow(p.csv_row())


__all__ = [
    "CorpusEntry", "ReportRow", "Figure4Point", "bundled_corpus_dir", "load_entry",
    "load_corpus", "score_entry", "score_corpus", "write_report_csv", "figure4_data",
    "write_figure4_csv", "REPORT_HEADER", "FIGURE4_HEADER",
]
