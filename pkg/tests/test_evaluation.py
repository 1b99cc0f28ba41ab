"""Confusion matrices, the per-class metric suite, and verb-list audits."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from bloomsim.evaluation import (
    AuditReport,
    ClassCounts,
    ConfusionMatrix,
    EmptyInputError,
    LabelMismatchError,
    MetricRow,
    UnknownClassError,
    audit_verbset,
    build_confusion,
    format_metric_table,
    load_gold,
    macro_average,
    metric_row,
    metric_table,
    metrics_to_dict,
)
from bloomsim.verbsets import (
    COGNITIVE,
    DOMAIN_LEVELS,
    SourceVerbList,
    UnknownLevelError,
    parse_source_list,
)
from tests.conftest import FIXTURES

LEVELS = DOMAIN_LEVELS[COGNITIVE]

# 14 hand-labeled verbs; the classifier is known to move exactly one of
# them (examine) from Analysis to Application.
GOLD_14 = (
    ("define", "Knowledge"), ("memorize", "Knowledge"),
    ("classify", "Comprehension"), ("estimate", "Comprehension"),
    ("solve", "Application"), ("compute", "Application"),
    ("compare", "Analysis"), ("subdivide", "Analysis"),
    ("diagram", "Analysis"), ("examine", "Analysis"),
    ("compose", "Synthesis"), ("roll_up", "Synthesis"),
    ("appraise", "Evaluation"), ("criticize", "Evaluation"),
)
PRED_14 = tuple(
    (item, "Application" if item == "examine" else level)
    for item, level in GOLD_14
)


def _matrix_14():
    return build_confusion(PRED_14, GOLD_14, LEVELS)


# --- build_confusion ----------------------------------------------------------

def test_perfect_agreement_has_no_errors():
    pairs = [(f"item{i}", LEVELS[i % 6]) for i in range(12)]
    matrix = build_confusion(pairs, pairs, LEVELS)
    assert matrix.total == 12
    for cls in LEVELS:
        counts = matrix.counts_for(cls)
        assert counts.fp == 0
        assert counts.fn == 0
        assert counts.tp == 2
        assert counts.tn == 10


def test_single_item_disagreement():
    predictions = [("q", "Knowledge")]
    gold = [("q", "Comprehension")]
    matrix = build_confusion(predictions, gold, LEVELS)
    assert matrix.counts_for("Knowledge") == ClassCounts(0, 1, 0, 0)
    assert matrix.counts_for("Comprehension") == ClassCounts(0, 0, 1, 0)
    for cls in LEVELS[2:]:
        assert matrix.counts_for(cls) == ClassCounts(0, 0, 0, 1)


def test_counts_partition_every_class():
    matrix = _matrix_14()
    for cls in LEVELS:
        assert matrix.counts_for(cls).total == 14
    correct = sum(matrix.counts_for(cls).tp for cls in LEVELS)
    assert correct == 13


def test_duplicate_item_rejected():
    pairs = [("q", "Knowledge"), ("q", "Knowledge")]
    with pytest.raises(LabelMismatchError, match="duplicate"):
        build_confusion(pairs, [("q", "Knowledge")], LEVELS)


def test_one_sided_item_rejected():
    with pytest.raises(LabelMismatchError, match="one side"):
        build_confusion(
            [("a", "Knowledge")], [("b", "Knowledge")], LEVELS
        )


def test_unknown_label_rejected():
    with pytest.raises(UnknownClassError):
        build_confusion(
            [("a", "Remembering")], [("a", "Knowledge")], LEVELS
        )


def test_matrix_validation_direct():
    with pytest.raises(ValueError):
        ConfusionMatrix(("A",), {"A": ClassCounts(1, 0, 0, 1)}, total=3)
    with pytest.raises(ValueError):
        ConfusionMatrix(("A", "B"), {"A": ClassCounts(1, 0, 0, 1)}, total=2)
    with pytest.raises(ValueError):
        ClassCounts(-1, 0, 0, 0)


# --- metric_row ----------------------------------------------------------------

def test_knowledge_style_f1():
    matrix = ConfusionMatrix(
        ("Knowledge",), {"Knowledge": ClassCounts(10, 0, 1, 3)}, total=14
    )
    row = metric_row(matrix, "Knowledge")
    assert row.precision == pytest.approx(1.0)
    assert row.recall == pytest.approx(0.9090909, abs=1e-6)
    assert row.f1 == pytest.approx(0.952380952, abs=1e-6)
    assert row.degenerate == frozenset()


def test_perfect_class_row():
    matrix = ConfusionMatrix(
        ("Evaluation",), {"Evaluation": ClassCounts(2, 0, 0, 12)}, total=14
    )
    row = metric_row(matrix, "Evaluation")
    assert row.as_tuple() == (1.0, 1.0, 1.0, 1.0, 0.0)


def test_fixture_analysis_row():
    row = metric_row(_matrix_14(), "Analysis")
    assert row.error_rate == pytest.approx(0.07142857, abs=1e-6)
    assert row.accuracy == pytest.approx(13 / 14)
    assert row.precision == pytest.approx(1.0)
    assert row.recall == pytest.approx(0.75)
    assert row.f1 == pytest.approx(6 / 7)


def test_fixture_application_row():
    row = metric_row(_matrix_14(), "Application")
    assert row.precision == pytest.approx(2 / 3)
    assert row.recall == pytest.approx(1.0)
    assert row.f1 == pytest.approx(0.8)
    assert row.error_rate == pytest.approx(1 / 14)


def test_zero_denominators_flagged_not_raised():
    matrix = ConfusionMatrix(
        ("Synthesis",), {"Synthesis": ClassCounts(0, 0, 0, 5)}, total=5
    )
    row = metric_row(matrix, "Synthesis")
    assert row.precision == 0.0
    assert row.recall == 0.0
    assert row.f1 == 0.0
    assert row.degenerate == frozenset({"precision", "recall", "f1"})
    assert row.accuracy == 1.0


def test_metric_row_unknown_class():
    with pytest.raises(UnknownClassError):
        metric_row(_matrix_14(), "Remembering")


def test_metric_row_range_validation():
    with pytest.raises(ValueError):
        MetricRow("x", 1.5, 0, 0, 0, 0, frozenset())


# --- macro_average --------------------------------------------------------------

def test_macro_of_fixture_table():
    rows = [metric_row(_matrix_14(), cls) for cls in LEVELS]
    macro = macro_average(rows)
    assert macro.class_name == "macro"
    assert macro.accuracy == pytest.approx(0.976190476)
    assert macro.precision == pytest.approx(0.944444444)
    assert macro.recall == pytest.approx(0.958333333)
    assert macro.f1 == pytest.approx(0.942857142)
    assert macro.error_rate == pytest.approx(0.023809523)


def test_macro_matches_published_columns():
    # column means quoted to two decimals by the reference tables
    precisions = (1.00, 1.00, 0.91, 0.92, 1.00, 1.00)
    accuracies = (0.91, 0.69, 0.71, 0.93, 0.76, 1.00)
    rows = [
        MetricRow(f"c{i}", accuracies[i], precisions[i], 0.5, 0.5, 0.0,
                  frozenset())
        for i in range(6)
    ]
    macro = macro_average(rows)
    assert round(macro.precision, 2) == 0.97
    assert round(macro.accuracy, 2) == 0.83


def test_macro_of_identical_rows_is_that_row():
    row = MetricRow("c", 0.9, 0.8, 0.7, 0.746666, 0.1, frozenset())
    macro = macro_average([row, row, row])
    assert macro.as_tuple() == pytest.approx(row.as_tuple())


def test_macro_requires_rows():
    with pytest.raises(EmptyInputError):
        macro_average([])


def test_macro_collects_degenerate_flags():
    clean = MetricRow("a", 1, 1, 1, 1, 0, frozenset())
    flagged = MetricRow("b", 1, 0, 0, 0, 0, frozenset({"precision"}))
    assert macro_average([clean, flagged]).degenerate == frozenset(
        {"precision"}
    )


# --- table rendering -------------------------------------------------------------

def test_metric_table_order_and_macro_last():
    rows = metric_table(_matrix_14())
    assert tuple(r.class_name for r in rows) == LEVELS + ("macro",)


def test_format_metric_table_layout():
    text = format_metric_table(metric_table(_matrix_14()))
    lines = text.splitlines()
    assert lines[0].startswith("Class")
    for column in ("Accuracy", "Precision", "Recall", "F1", "Error Rate"):
        assert column in lines[0]
    assert set(lines[1]) == {"-"}
    assert lines[-1].startswith("macro")
    assert "0.0714" in text  # Analysis error rate at 4 decimals


def test_metrics_to_dict_round_trips_via_json():
    matrix = _matrix_14()
    payload = metrics_to_dict(matrix, metric_table(matrix))
    decoded = json.loads(json.dumps(payload))
    assert decoded["total"] == 14
    assert len(decoded["classes"]) == 6
    assert decoded["metrics"][-1]["class"] == "macro"
    analysis = next(
        m for m in decoded["metrics"] if m["class"] == "Analysis"
    )
    assert analysis["error_rate"] == pytest.approx(1 / 14)


# --- invariants ------------------------------------------------------------------

CLASSES3 = ("A", "B", "C")


@settings(max_examples=120)
@given(
    st.lists(
        st.tuples(st.sampled_from(CLASSES3), st.sampled_from(CLASSES3)),
        min_size=1,
        max_size=50,
    )
)
def test_property_recount_oracle(labels):
    predictions = [(f"i{k}", p) for k, (p, _) in enumerate(labels)]
    gold = [(f"i{k}", g) for k, (_, g) in enumerate(labels)]
    matrix = build_confusion(predictions, gold, CLASSES3)
    for cls in CLASSES3:
        tp = sum(1 for p, g in labels if p == cls and g == cls)
        fp = sum(1 for p, g in labels if p == cls and g != cls)
        fn = sum(1 for p, g in labels if p != cls and g == cls)
        tn = len(labels) - tp - fp - fn
        assert matrix.counts_for(cls) == ClassCounts(tp, fp, fn, tn)
        row = metric_row(matrix, cls)
        assert row.accuracy + row.error_rate == pytest.approx(1.0)
        for value in row.as_tuple():
            assert 0.0 <= value <= 1.0
        if "f1" not in row.degenerate:
            low = min(row.precision, row.recall)
            high = max(row.precision, row.recall)
            assert low - 1e-12 <= row.f1 <= high + 1e-12


@settings(max_examples=60)
@given(st.permutations(range(6)))
def test_property_macro_permutation_invariant(order):
    rows = [metric_row(_matrix_14(), cls) for cls in LEVELS]
    base = macro_average(rows)
    shuffled = macro_average([rows[i] for i in order])
    assert shuffled.as_tuple() == pytest.approx(base.as_tuple())


# --- audits ----------------------------------------------------------------------

def test_audit_identity_candidate(full_store, bundled_registry):
    entries = {
        level: frozenset(bundled_registry.verbs(COGNITIVE, level))
        for level in LEVELS
    }
    candidate = SourceVerbList("self", COGNITIVE, entries)
    report = audit_verbset(full_store, bundled_registry, candidate)
    assert report.total == 15
    assert report.agree == 15
    assert report.correctness == 1.0
    assert report.reclassified == ()
    assert report.unknown == ()


def test_audit_fixture_candidate(full_store, bundled_registry):
    candidate = parse_source_list(FIXTURES / "audit_candidate.tsv")
    report = audit_verbset(full_store, bundled_registry, candidate)
    assert report.total == 10
    assert report.agree == 7
    assert report.correctness == pytest.approx(0.7)
    moved = {(verb, manual, predicted)
             for verb, manual, predicted in report.reclassified}
    assert moved == {
        ("accumulate", "Knowledge", "Synthesis"),
        ("cipher", "Comprehension", "Application"),
        ("valuate", "Analysis", "Evaluation"),
    }


def test_audit_excludes_unknown_verbs(full_store, bundled_registry):
    entries = {
        "Knowledge": frozenset({"define", "xqzzy"}),
        "Application": frozenset({"solve"}),
    }
    candidate = SourceVerbList("probe", COGNITIVE, entries)
    report = audit_verbset(full_store, bundled_registry, candidate)
    assert report.total == 2
    assert report.agree == 2
    assert report.unknown == ("xqzzy",)


def test_audit_report_validation():
    with pytest.raises(ValueError):
        AuditReport(total=3, agree=1, reclassified=(), unknown=())
    empty = AuditReport(total=0, agree=0, reclassified=(), unknown=())
    assert empty.correctness == 0.0


# --- gold-file loading --------------------------------------------------------------

def test_load_gold_fixture():
    pairs = load_gold(FIXTURES / "eval_gold_14.tsv", COGNITIVE)
    assert len(pairs) == 14
    assert ("examine", "Analysis") in pairs
    assert all(level in LEVELS for _, level in pairs)


def test_load_gold_canonicalizes_case(tmp_path):
    path = tmp_path / "gold.tsv"
    path.write_text("define\tknowledge\n", encoding="utf-8")
    assert load_gold(path, COGNITIVE) == [("define", "Knowledge")]


def test_load_gold_rejects_bad_rows(tmp_path):
    path = tmp_path / "gold.tsv"
    path.write_text("define only one field\n", encoding="utf-8")
    with pytest.raises(LabelMismatchError):
        load_gold(path, COGNITIVE)
    path.write_text("define\tRemembering\n", encoding="utf-8")
    with pytest.raises(UnknownLevelError):
        load_gold(path, COGNITIVE)
