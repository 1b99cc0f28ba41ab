"""One-vs-rest confusion matrices, metric tables, and verb-list audits.

Counting is one-vs-rest per class: an item predicted into class c with
gold label c is a true positive for c, a false positive for nothing, and
a true negative for every other class, so each class's four counts sum
to the total item count.

Zero-denominator metrics come back as 0 with the metric name recorded in
the row's degenerate set; tables always render in full.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .classifier import classify_verb
from .similarity import UnknownVerbError
from .verbsets import SourceVerbList, canonical_level, domain_levels
from .wordnet import LexicalStore


class EvaluationError(Exception):
    pass


class LabelMismatchError(EvaluationError):
    pass


class UnknownClassError(EvaluationError):
    pass


class EmptyInputError(EvaluationError):
    pass


@dataclass(frozen=True)
class ClassCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class ConfusionMatrix:
    classes: tuple[str, ...]
    counts: dict[str, ClassCounts]
    total: int

    def __post_init__(self):
        if set(self.counts) != set(self.classes):
            raise ValueError("counts must cover exactly the listed classes")
        for cls, c in self.counts.items():
            if c.total != self.total:
                raise ValueError(
                    f"class {cls!r}: counts sum to {c.total}, not {self.total}"
                )

    def counts_for(self, class_name: str) -> ClassCounts:
        try:
            return self.counts[class_name]
        except KeyError:
            raise UnknownClassError(f"unknown class {class_name!r}") from None


_METRIC_NAMES = ("accuracy", "precision", "recall", "f1", "error_rate")


@dataclass(frozen=True)
class MetricRow:
    class_name: str
    accuracy: float
    precision: float
    recall: float
    f1: float
    error_rate: float
    degenerate: frozenset[str]

    def __post_init__(self):
        for name, value in zip(_METRIC_NAMES, self.as_tuple()):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} out of range: {value}")

    def as_tuple(self):
        return (self.accuracy, self.precision, self.recall,
                self.f1, self.error_rate)


@dataclass(frozen=True)
class AuditReport:
    total: int
    agree: int
    reclassified: tuple[tuple[str, str, str], ...]  # verb, manual, predicted
    unknown: tuple[str, ...]

    def __post_init__(self):
        if self.agree + len(self.reclassified) != self.total:
            raise ValueError("agree plus reclassifications must equal total")

    @property
    def correctness(self) -> float:
        return self.agree / self.total if self.total else 0.0


def build_confusion(predictions, gold, classes) -> ConfusionMatrix:
    """Count one-vs-rest confusion over two (item, label) sequences.

    The sequences must cover exactly the same items; every label must be
    one of ``classes``.
    """
    classes = tuple(classes)
    pred_map = _as_label_map(predictions, "predictions", classes)
    gold_map = _as_label_map(gold, "gold", classes)
    if pred_map.keys() != gold_map.keys():
        missing = pred_map.keys() ^ gold_map.keys()
        raise LabelMismatchError(
            f"items present on one side only: {sorted(map(str, missing))[:5]}"
        )
    total = len(gold_map)
    counts: dict[str, ClassCounts] = {}
    for cls in classes:
        tp = fp = fn = 0
        for item, gold_label in gold_map.items():
            predicted = pred_map[item]
            if predicted == cls and gold_label == cls:
                tp += 1
            elif predicted == cls:
                fp += 1
            elif gold_label == cls:
                fn += 1
        counts[cls] = ClassCounts(tp, fp, fn, total - tp - fp - fn)
    return ConfusionMatrix(classes, counts, total)


def _as_label_map(pairs, side, classes):
    out = {}
    for item, label in pairs:
        if label not in classes:
            raise UnknownClassError(f"{side}: label {label!r} not in classes")
        if item in out:
            raise LabelMismatchError(f"{side}: duplicate item {item!r}")
        out[item] = label
    return out


def _ratio(numerator, denominator, name, degenerate):
    if denominator == 0:
        degenerate.add(name)
        return 0.0
    return numerator / denominator


def metric_row(matrix: ConfusionMatrix, class_name: str) -> MetricRow:
    c = matrix.counts_for(class_name)
    degenerate: set[str] = set()
    accuracy = _ratio(c.tp + c.tn, matrix.total, "accuracy", degenerate)
    precision = _ratio(c.tp, c.tp + c.fp, "precision", degenerate)
    recall = _ratio(c.tp, c.tp + c.fn, "recall", degenerate)
    f1 = _ratio(
        2.0 * precision * recall, precision + recall, "f1", degenerate
    )
    error_rate = _ratio(c.fp + c.fn, matrix.total, "error_rate", degenerate)
    return MetricRow(
        class_name, accuracy, precision, recall, f1, error_rate,
        frozenset(degenerate),
    )


def macro_average(rows) -> MetricRow:
    """Arithmetic column means across classes, as one synthetic row."""
    rows = list(rows)
    if not rows:
        raise EmptyInputError("no metric rows to average")
    n = len(rows)
    degenerate = frozenset(flag for row in rows for flag in row.degenerate)
    return MetricRow(
        "macro",
        sum(r.accuracy for r in rows) / n,
        sum(r.precision for r in rows) / n,
        sum(r.recall for r in rows) / n,
        sum(r.f1 for r in rows) / n,
        sum(r.error_rate for r in rows) / n,
        degenerate,
    )


def metric_table(matrix: ConfusionMatrix) -> tuple[MetricRow, ...]:
    """Per-class rows in class order, macro row last."""
    rows = [metric_row(matrix, cls) for cls in matrix.classes]
    rows.append(macro_average(rows))
    return tuple(rows)


_COLUMNS = ("Accuracy", "Precision", "Recall", "F1", "Error Rate")


def format_metric_table(rows) -> str:
    """Fixed-width text table, one class per row, metrics to 4 decimals."""
    rows = list(rows)
    name_width = max(len("Class"), *(len(r.class_name) for r in rows))
    header = "Class".ljust(name_width) + "".join(
        f"  {c:>10}" for c in _COLUMNS
    )
    lines = [header, "-" * len(header)]
    for row in rows:
        cells = "".join(f"  {value:>10.4f}" for value in row.as_tuple())
        lines.append(row.class_name.ljust(name_width) + cells)
    return "\n".join(lines)


def metrics_to_dict(matrix: ConfusionMatrix, rows) -> dict:
    return {
        "total": matrix.total,
        "classes": [
            {
                "class": cls,
                "tp": matrix.counts[cls].tp,
                "fp": matrix.counts[cls].fp,
                "fn": matrix.counts[cls].fn,
                "tn": matrix.counts[cls].tn,
            }
            for cls in matrix.classes
        ],
        "metrics": [
            {
                "class": row.class_name,
                "accuracy": row.accuracy,
                "precision": row.precision,
                "recall": row.recall,
                "f1": row.f1,
                "error_rate": row.error_rate,
                "degenerate": sorted(row.degenerate),
            }
            for row in rows
        ],
    }


def load_gold(path, domain: str) -> list[tuple[str, str]]:
    """Read ``item<TAB>level`` lines; levels resolve against ``domain``."""
    pairs = []
    path = Path(path)
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise LabelMismatchError(
                    f"{path}:{line_no}: expected 2 tab-separated fields"
                )
            item, level = fields[0].strip(), fields[1].strip()
            pairs.append((item, canonical_level(domain, level)))
    return pairs


def audit_verbset(
    store: LexicalStore,
    registry,
    candidate: SourceVerbList,
) -> AuditReport:
    """Re-classify a candidate list's verbs and count agreement with its
    own manual levels. Verbs the lexicon cannot resolve are excluded from
    the total and listed."""
    agree = 0
    reclassified = []
    unknown = []
    total = 0
    seen_unknown = set()
    for level in domain_levels(candidate.domain):
        for verb in sorted(candidate.entries.get(level, frozenset())):
            try:
                report = classify_verb(store, registry, verb, candidate.domain)
            except UnknownVerbError:
                if verb not in seen_unknown:
                    seen_unknown.add(verb)
                    unknown.append(verb)
                continue
            total += 1
            if report.chosen_level == level:
                agree += 1
            else:
                reclassified.append((verb, level, report.chosen_level))
    return AuditReport(total, agree, tuple(reclassified), tuple(unknown))
