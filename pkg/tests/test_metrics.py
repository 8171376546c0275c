"""Agreement metrics, grading scales, and report emission."""

import json
from fractions import Fraction

import numpy as np
import pytest

import oracles
from clickseg import metrics
from clickseg.errors import (
    DimensionMismatchError,
    EmptyInputError,
    OutOfScaleDomainError,
    UndefinedMetricError,
    ValidationError,
)
from clickseg.metrics import (
    FLEISS,
    LANDIS_KOCH,
    REPORT_FIELDS,
    TRADITIONAL_AUROC,
    ConfusionMatrix,
    accuracy,
    auroc,
    auroc_from_rates,
    confusion,
    evaluate,
    evaluate_set,
    grade,
    jaccard,
    kappa,
    rates,
)


def cm_of(tp, tn, fp, fn):
    return ConfusionMatrix(Fraction(tp), Fraction(tn), Fraction(fp), Fraction(fn))


# ------------------------------------------------------------- confusion


def test_confusion_quarters():
    pred = np.array([[1, 0], [1, 0]], dtype=np.uint8)
    truth = np.array([[1, 1], [0, 0]], dtype=np.uint8)
    cm = confusion(pred, truth)
    assert cm.tp == cm.tn == cm.fp == cm.fn == Fraction(1, 4)


def test_confusion_counts_match_loop_oracle():
    rng = np.random.RandomState(11)
    for _ in range(50):
        shape = (rng.randint(1, 9), rng.randint(1, 9))
        pred = (rng.rand(*shape) < 0.5).astype(np.uint8)
        truth = (rng.rand(*shape) < 0.5).astype(np.uint8)
        tp, tn, fp, fn = oracles.count_confusion(pred, truth)
        total = pred.size
        cm = confusion(pred, truth)
        assert cm.tp == Fraction(tp, total)
        assert cm.tn == Fraction(tn, total)
        assert cm.fp == Fraction(fp, total)
        assert cm.fn == Fraction(fn, total)


def test_confusion_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        confusion(np.zeros((2, 2), np.uint8), np.zeros((2, 3), np.uint8))


def test_confusion_matrix_validation():
    with pytest.raises(ValidationError):
        ConfusionMatrix(Fraction(-1, 10), Fraction(6, 10), Fraction(3, 10), Fraction(2, 10))
    with pytest.raises(ValidationError):
        ConfusionMatrix(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), 0)
    with pytest.raises(EmptyInputError):
        ConfusionMatrix.from_counts(0, 0, 0, 0)


def test_confusion_matrix_accepts_decimal_floats():
    cm = ConfusionMatrix(0.4, 0.4, 0.1, 0.1)
    assert cm.tp == Fraction(2, 5)
    assert cm.fp == Fraction(1, 10)


# ------------------------------------------------------------- point metrics


def test_accuracy_fixture():
    assert accuracy(cm_of("0.5", "0.3", "0.1", "0.1")) == 0.8


def test_jaccard_fixture():
    assert jaccard(cm_of("0.25", "0.5", "0.125", "0.125")) == 0.5


def test_jaccard_undefined_when_no_foreground_anywhere():
    with pytest.raises(UndefinedMetricError):
        jaccard(cm_of(0, 1, 0, 0))


def test_rates_fixture():
    assert rates(cm_of("0.25", "0.25", "0.25", "0.25")) == (0.5, 0.5)


def test_rates_undefined_per_missing_class():
    with pytest.raises(UndefinedMetricError, match="foreground"):
        rates(cm_of(0, "0.5", "0.5", 0))  # truth is all background
    with pytest.raises(UndefinedMetricError, match="background"):
        rates(cm_of("0.5", 0, 0, "0.5"))  # truth is all foreground


def test_auroc_published_rows():
    # Two of the six published values round the trailing 5 downward, so the
    # check is numeric (inclusive half-ulp-of-the-table) rather than string
    # equality against a fixed rounding rule.
    rows = [
        ("0.319044", "0.010224", "0.835366"),
        ("0.446302", "0.003077", "0.775311"),
        ("0.334855", "0.028521", "0.818312"),
        ("0.322915", "0.043478", "0.816803"),
        ("0.171410", "0.034758", "0.896916"),
        ("0.032981", "0.036248", "0.965385"),
    ]
    tol = Fraction(5, 10**7)
    for fnr, fpr, expected in rows:
        got = auroc_from_rates(float(fnr), float(fpr))
        assert abs(Fraction(str(got)) - Fraction(expected)) <= tol


def test_auroc_from_rates_validates_range():
    with pytest.raises(ValidationError):
        auroc_from_rates(-0.1, 0.5)
    with pytest.raises(ValidationError):
        auroc_from_rates(0.1, 1.5)


def test_auroc_of_matrix_matches_rates_form():
    rng = np.random.RandomState(12)
    for _ in range(50):
        counts = rng.randint(1, 40, size=4)
        cm = ConfusionMatrix.from_counts(*counts)
        fnr = cm.fn / (cm.fn + cm.tp)
        fpr = cm.fp / (cm.fp + cm.tn)
        # exact rates give an exact match; float-rounded rates only approximate
        assert auroc(cm) == auroc_from_rates(fnr, fpr)
        assert auroc(cm) == pytest.approx(auroc_from_rates(*rates(cm)), abs=1e-12)


def test_kappa_perfect_agreement():
    assert kappa(cm_of("0.3", "0.7", 0, 0)) == 1.0


def test_kappa_symmetric_fixture_exact():
    assert kappa(ConfusionMatrix(0.4, 0.4, 0.1, 0.1)) == 0.6


def test_kappa_independition_is_zero():
    # Independent rater marginals: expected and observed agreement coincide.
    rng = np.random.RandomState(13)
    for _ in range(200):
        p = Fraction(int(rng.randint(5, 96)), 100)
        q = Fraction(int(rng.randint(5, 96)), 100)
        cm = ConfusionMatrix(p * q, (1 - p) * (1 - q), (1 - p) * q, p * (1 - q))
        assert abs(kappa(cm)) < 1e-12


def test_kappa_invariant_under_fp_fn_swap():
    rng = np.random.RandomState(14)
    for _ in range(100):
        tp, tn, fp, fn = (int(v) for v in rng.randint(0, 30, size=4))
        if tp + tn + fp + fn == 0 or fp + fn + min(tp, tn) == 0:
            continue
        a = ConfusionMatrix.from_counts(tp, tn, fp, fn)
        b = ConfusionMatrix.from_counts(tp, tn, fn, fp)
        try:
            ka = kappa(a)
        except UndefinedMetricError:
            with pytest.raises(UndefinedMetricError):
                kappa(b)
            continue
        assert ka == kappa(b)


def test_kappa_undefined_when_chance_agreement_total():
    with pytest.raises(UndefinedMetricError):
        kappa(cm_of(1, 0, 0, 0))
    with pytest.raises(UndefinedMetricError):
        kappa(cm_of(0, 1, 0, 0))


def test_metric_ranges_fuzz():
    rng = np.random.RandomState(15)
    for _ in range(300):
        counts = [int(v) for v in rng.randint(0, 50, size=4)]
        if sum(counts) == 0:
            continue
        cm = ConfusionMatrix.from_counts(*counts)
        acc = accuracy(cm)
        assert 0.0 <= acc <= 1.0
        try:
            jac = jaccard(cm)
            assert 0.0 <= jac <= 1.0
            # IoU never exceeds plain accuracy: tp <= (tp+tn)(1-tn) algebraically.
            assert Fraction(cm.tp, cm.tp + cm.fp + cm.fn) <= cm.tp + cm.tn
        except UndefinedMetricError:
            pass
        try:
            assert 0.0 <= auroc(cm) <= 1.0
        except UndefinedMetricError:
            pass
        try:
            assert -1.0 <= kappa(cm) <= 1.0
        except UndefinedMetricError:
            pass


# ------------------------------------------------------------- grading


def test_grade_published_fixtures():
    assert grade(Fraction("0.674656"), LANDIS_KOCH) == "substantial agreement"
    assert grade(Fraction("0.674656"), FLEISS) == "fair to good agreement"
    assert grade(Fraction("0.965385"), TRADITIONAL_AUROC) == "excellent agreement (A)"


# The published tables print two-decimal bands with gaps between them
# (0.59 -> 0.60, 0.20 -> 0.21); each band runs from its printed lower bound
# up to but excluding the next band's lower bound, and the top band is closed.
TRADITIONAL_CASES = [
    ("0.50", "no agreement (F)"),
    ("0.59", "no agreement (F)"),
    ("0.595", "no agreement (F)"),
    ("0.60", "poor agreement (D)"),
    ("0.695", "poor agreement (D)"),
    ("0.70", "fair agreement (C)"),
    ("0.795", "fair agreement (C)"),
    ("0.80", "good agreement (B)"),
    ("0.895", "good agreement (B)"),
    ("0.90", "excellent agreement (A)"),
    ("1", "excellent agreement (A)"),
]

LANDIS_CASES = [
    ("-1", "no agreement"),
    ("-0.000001", "no agreement"),
    ("0", "slight agreement"),
    ("0.20", "slight agreement"),
    ("0.205", "slight agreement"),
    ("0.21", "fair agreement"),
    ("0.405", "fair agreement"),
    ("0.41", "moderate agreement"),
    ("0.605", "moderate agreement"),
    ("0.61", "substantial agreement"),
    ("0.805", "substantial agreement"),
    ("0.81", "almost perfect agreement"),
    ("1", "almost perfect agreement"),
]

FLEISS_CASES = [
    ("-1", "poor agreement"),
    ("0.399999", "poor agreement"),
    ("0.40", "fair to good agreement"),
    ("0.75", "fair to good agreement"),
    ("0.750001", "excellent agreement"),
    ("1", "excellent agreement"),
]


@pytest.mark.parametrize("value,label", TRADITIONAL_CASES)
def test_traditional_band_boundaries(value, label):
    assert grade(Fraction(value), TRADITIONAL_AUROC) == label


@pytest.mark.parametrize("value,label", LANDIS_CASES)
def test_landis_band_boundaries(value, label):
    assert grade(Fraction(value), LANDIS_KOCH) == label


@pytest.mark.parametrize("value,label", FLEISS_CASES)
def test_fleiss_band_boundaries(value, label):
    assert grade(Fraction(value), FLEISS) == label


def test_grade_out_of_domain():
    with pytest.raises(OutOfScaleDomainError, match="below"):
        grade(Fraction("0.499999"), TRADITIONAL_AUROC)
    with pytest.raises(OutOfScaleDomainError, match="above"):
        grade(Fraction("1.000001"), TRADITIONAL_AUROC)
    with pytest.raises(OutOfScaleDomainError, match="below"):
        grade(Fraction("-1.000001"), LANDIS_KOCH)
    with pytest.raises(OutOfScaleDomainError, match="above"):
        grade(Fraction("1.1"), FLEISS)


def test_scales_have_no_gaps():
    for scale in (TRADITIONAL_AUROC, LANDIS_KOCH, FLEISS):
        for prev, nxt in zip(scale.bands, scale.bands[1:]):
            assert prev.upper == nxt.lower
            # exactly one of the two bands owns the shared point
            assert prev.upper_closed != nxt.lower_closed


# ------------------------------------------------------------- evaluate


def test_evaluate_reports_all_metrics():
    pred = np.array([[1, 0], [1, 0]], dtype=np.uint8)
    truth = np.array([[1, 1], [0, 0]], dtype=np.uint8)
    rep = evaluate(pred, truth)
    assert rep.acc == 0.5
    assert rep.jac == pytest.approx(1 / 3)
    assert rep.auroc == 0.5
    assert rep.kap == 0.0
    assert (rep.fnr, rep.fpr) == (0.5, 0.5)
    assert rep.auroc_grade == "no agreement (F)"
    assert rep.kap_landis == "slight agreement"
    assert rep.kap_fleiss == "poor agreement"


def test_evaluate_identical_all_foreground():
    ones = np.ones((3, 3), dtype=np.uint8)
    rep = evaluate(ones, ones)
    assert rep.acc == 1.0
    assert rep.jac == 1.0
    # no background in truth: rates and the scores built on them are undefined
    assert rep.auroc is None and rep.fnr is None and rep.fpr is None
    assert rep.kap is None
    assert rep.auroc_grade is None and rep.kap_landis is None


def test_evaluate_inverted_prediction_grades_below_scale():
    truth = np.zeros((4, 4), dtype=np.uint8)
    truth[:2] = 1
    pred = 1 - truth
    rep = evaluate(pred, truth)
    assert rep.auroc == 0.0
    assert rep.auroc_grade == "below scale"
    assert rep.kap == -1.0
    assert rep.kap_landis == "no agreement"
    assert rep.kap_fleiss == "poor agreement"


def test_evaluate_set_micro_pools_pixel_counts():
    rng = np.random.RandomState(16)
    small = ((rng.rand(2, 2) < 0.5).astype(np.uint8), (rng.rand(2, 2) < 0.5).astype(np.uint8))
    big = ((rng.rand(4, 4) < 0.5).astype(np.uint8), (rng.rand(4, 4) < 0.5).astype(np.uint8))
    micro, per = evaluate_set([small, big])
    assert len(per) == 2

    c1 = oracles.count_confusion(*small)
    c2 = oracles.count_confusion(*big)
    pooled = [a + b for a, b in zip(c1, c2)]
    total = 4 + 16
    assert micro.cm.tp == Fraction(pooled[0], total)
    assert micro.cm.tn == Fraction(pooled[1], total)
    assert micro.cm.fp == Fraction(pooled[2], total)
    assert micro.cm.fn == Fraction(pooled[3], total)


def test_evaluate_set_equal_sizes_micro_acc_is_mean():
    rng = np.random.RandomState(17)
    pairs = [
        ((rng.rand(4, 4) < 0.5).astype(np.uint8), (rng.rand(4, 4) < 0.5).astype(np.uint8))
        for _ in range(3)
    ]
    micro, per = evaluate_set(pairs)
    assert micro.acc == pytest.approx(sum(r.acc for r in per) / len(per), abs=1e-12)


def test_evaluate_set_empty_and_mismatch():
    with pytest.raises(EmptyInputError):
        evaluate_set([])
    a = np.zeros((2, 2), np.uint8)
    b = np.zeros((3, 3), np.uint8)
    with pytest.raises(DimensionMismatchError, match="pair 1"):
        evaluate_set([(a, a), (a, b)])


# ------------------------------------------------------------- report emission


def test_report_dict_field_order():
    rep = evaluate(np.eye(3, dtype=np.uint8), np.eye(3, dtype=np.uint8))
    row = metrics.report_to_dict(rep)
    assert tuple(row.keys()) == REPORT_FIELDS


def test_set_report_json_shape_and_nulls():
    ones = np.ones((2, 2), dtype=np.uint8)
    micro, per = evaluate_set([(ones, ones)])
    doc = json.loads(metrics.set_report_to_json(micro, per, ids=["img_a"]))
    assert set(doc.keys()) == {"micro", "per_image"}
    assert doc["per_image"][0]["image"] == "img_a"
    assert doc["per_image"][0]["tp"] == 1.0
    # undefined metrics serialize as JSON null, not 0 and not a string
    assert doc["micro"]["auroc"] is None
    assert doc["micro"]["kap_landis"] is None


def test_set_report_csv_layout():
    pred = np.array([[1, 0], [1, 0]], dtype=np.uint8)
    truth = np.array([[1, 1], [0, 0]], dtype=np.uint8)
    micro, per = evaluate_set([(pred, truth)])
    text = metrics.set_report_to_csv(micro, per, ids=["x"])
    lines = text.splitlines()
    assert lines[0] == "image," + ",".join(REPORT_FIELDS)
    assert len(lines) == 3
    assert lines[1].startswith("x,")
    assert lines[2].startswith("micro,")


def test_set_report_csv_empty_cells_for_undefined():
    ones = np.ones((2, 2), dtype=np.uint8)
    micro, per = evaluate_set([(ones, ones)])
    row = metrics.set_report_to_csv(micro, per).splitlines()[1].split(",")
    header = metrics.set_report_to_csv(micro, per).splitlines()[0].split(",")
    assert row[header.index("auroc")] == ""
    assert row[header.index("kap_fleiss")] == ""
    assert row[header.index("jac")] == "1.0"
