"""Accuracy experiments over method x field and their rendering.

A report row covers one (method, dataset, field) combination. Documents
whose text cannot be classified (empty after normalization, no short
words) are counted in ``n_errors`` and left out of the accuracy.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .classifiers import Method, classify
from .corpus import LabeledCorpus
from .errors import ClassificationError, EvaluationError
from .profiles import ModelSet

FIELD_NAMES = {"title": "title", "content": "contents", "contents": "contents"}
_ATTRIBUTE = {"title": "title", "contents": "content"}
TSV_HEADER = ("method", "dataset", "field", "accuracy", "correct", "evaluated", "errors", "confusion")


@dataclass(frozen=True)
class ReportRow:
    method: str
    dataset: str
    field: str
    correct: int
    n_evaluated: int
    n_errors: int
    confusion: tuple[tuple[tuple[str, str], int], ...] = ()
    skipped: bool = False

    @property
    def accuracy(self) -> float | None:
        if self.skipped or self.n_evaluated == 0:
            return None
        return self.correct / self.n_evaluated

    @property
    def key(self) -> tuple[str, str]:
        return self.method, self.field


@dataclass(frozen=True)
class EvaluationReport:
    rows: tuple[ReportRow, ...]

    def row(self, method: str | Method, field: str) -> ReportRow:
        key = (str(Method(method)), FIELD_NAMES[field])
        for row in self.rows:
            if row.key == key:
                return row
        raise KeyError(key)


def evaluate(model_set: ModelSet, corpus: LabeledCorpus, methods: Iterable[Method | str],
             fields: Sequence[str] = ("title", "contents"), **classify_options) -> EvaluationReport:
    """Classify the requested field of every document with every method.

    ``classify_options`` are passed on to :func:`~alblid.classifiers.classify`.

    Raises:
        EvaluationError: empty corpus or method list, unknown field, or no
            language shared between corpus and models.
    """
    methods = [Method(m) for m in methods]
    if not methods:
        raise EvaluationError("no methods to evaluate")
    if not len(corpus):
        raise EvaluationError("corpus is empty")
    try:
        fields = [FIELD_NAMES[f] for f in fields]
    except KeyError as exc:
        raise EvaluationError(f"unknown field {exc.args[0]!r}") from None
    if not set(corpus.languages) & set(model_set):
        raise EvaluationError(f"corpus languages {corpus.languages} do not overlap models {list(model_set)}")

    rows = []
    for method in methods:
        for field in fields:
            if _ATTRIBUTE[field] in corpus.skip_fields or field in corpus.skip_fields:
                rows.append(ReportRow(str(method), corpus.provenance, field, 0, 0, 0, skipped=True))
                continue
            confusion: Counter[tuple[str, str]] = Counter()
            errors = 0
            for doc in corpus:
                try:
                    verdict = classify(getattr(doc, _ATTRIBUTE[field]), model_set, method, **classify_options)
                except ClassificationError:
                    errors += 1
                    continue
                confusion[doc.language, verdict.language] += 1
            correct = sum(c for (truth, predicted), c in confusion.items() if truth == predicted)
            rows.append(ReportRow(str(method), corpus.provenance, field, correct, confusion.total(), errors,
                                  tuple(sorted(confusion.items()))))
    return EvaluationReport(tuple(rows))


def format_accuracy(value: float | None, signed: bool = False) -> str:
    """Four decimals, rounded half-up; ``N/A`` for ``None``."""
    if value is None:
        return "N/A"
    text = str(Decimal(repr(value)).quantize(Decimal("0.0001"), ROUND_HALF_UP))
    if signed and not text.startswith("-"):
        text = "+" + text
    return text


def _confusion_text(row: ReportRow) -> str:
    return ",".join(f"{truth}>{predicted}={count}" for (truth, predicted), count in row.confusion)


def render_report(report: EvaluationReport, format: str = "table-text") -> str:
    """Render as an aligned text table or as tab-separated values.

    The tab-separated form carries the raw counts and confusion entries and
    is read back by :func:`parse_report_tsv`.
    """
    if not report.rows:
        raise EvaluationError("report is empty")
    if format == "tab-separated":
        lines = ["\t".join(TSV_HEADER)]
        for r in report.rows:
            lines.append("\t".join([r.method, r.dataset, r.field, format_accuracy(r.accuracy), str(r.correct),
                                    str(r.n_evaluated), str(r.n_errors), _confusion_text(r)]))
        return "\n".join(lines) + "\n"
    if format != "table-text":
        raise EvaluationError(f"unknown report format {format!r}")
    header = ("METHOD", "DATASET", "FIELD", "ACCURACY", "EVALUATED", "ERRORS")
    table = [header] + [
        (r.method, r.dataset, r.field.upper(), format_accuracy(r.accuracy),
         "N/A" if r.skipped else str(r.n_evaluated), "N/A" if r.skipped else str(r.n_errors))
        for r in report.rows
    ]
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    return "".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n" for row in table)


def parse_report_tsv(text: str) -> EvaluationReport:
    lines = text.rstrip("\n").split("\n")
    if not lines or tuple(lines[0].split("\t")) != TSV_HEADER:
        raise EvaluationError("not a tab-separated evaluation report")
    rows = []
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split("\t")
        if len(parts) != len(TSV_HEADER):
            raise EvaluationError(f"line {lineno}: expected {len(TSV_HEADER)} fields, found {len(parts)}")
        method, dataset, field, accuracy, correct, evaluated, errors, confusion_text = parts
        try:
            confusion = []
            for item in filter(None, confusion_text.split(",")):
                pair, count = item.rsplit("=", 1)
                truth, predicted = pair.split(">", 1)
                confusion.append(((truth, predicted), int(count)))
            row = ReportRow(method, dataset, field, int(correct), int(evaluated), int(errors), tuple(confusion),
                            skipped=accuracy == "N/A" and int(evaluated) == 0 and int(errors) == 0)
        except ValueError:
            raise EvaluationError(f"line {lineno}: malformed row") from None
        if format_accuracy(row.accuracy) != accuracy:
            raise EvaluationError(f"line {lineno}: accuracy {accuracy} disagrees with the counts")
        rows.append(row)
    return EvaluationReport(tuple(rows))


def compare_runs(report_a: EvaluationReport,
                 report_b: EvaluationReport) -> list[tuple[tuple[str, str], float | None]]:
    """Signed accuracy change ``b - a`` per (method, field).

    ``None`` where either side has no accuracy.

    Raises:
        EvaluationError: the two reports do not have the same row keys.
    """
    def index(report):
        rows = {}
        for row in report.rows:
            if row.key in rows:
                raise EvaluationError(f"report has more than one row for {row.key}")
            rows[row.key] = row
        return rows

    a, b = index(report_a), index(report_b)
    if a.keys() != b.keys():
        unmatched = sorted(a.keys() ^ b.keys())
        raise EvaluationError(f"row keys present in only one report: {unmatched}")
    deltas = []
    for key, row_a in a.items():
        acc_a, acc_b = row_a.accuracy, b[key].accuracy
        deltas.append((key, None if acc_a is None or acc_b is None else acc_b - acc_a))
    return deltas


def render_comparison(deltas: Sequence[tuple[tuple[str, str], float | None]]) -> str:
    lines = ["method\tfield\tdelta"]
    lines.extend(f"{method}\t{field}\t{format_accuracy(delta, signed=True)}" for (method, field), delta in deltas)
    return "\n".join(lines) + "\n"
