"""Pixel-wise agreement metrics and grading scales for binary masks.

The confusion matrix is kept as exact rationals normalized to a total of 1,
and every metric is evaluated in exact arithmetic before being returned as a
float.  Floats entering from outside are read as the decimal they print as,
so a published rate like 0.319044 means exactly 319044/1000000 here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    OutOfScaleDomainError,
    UndefinedMetricError,
    ValidationError,
)
from .raster import as_binary_mask

_SUM_TOLERANCE = Fraction(1, 10**12)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class ConfusionMatrix:
    """TP/TN/FP/FN as exact fractions of all evaluated pixels (they sum to 1)."""

    tp: Fraction
    tn: Fraction
    fp: Fraction
    fn: Fraction

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            object.__setattr__(self, name, _to_fraction(getattr(self, name)))
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValidationError("confusion entries must be >= 0")
        total = self.tp + self.tn + self.fp + self.fn
        if abs(total - 1) > _SUM_TOLERANCE:
            raise ValidationError(f"confusion entries must sum to 1, got {float(total)!r}")

    @classmethod
    def from_counts(cls, tp: int, tn: int, fp: int, fn: int) -> "ConfusionMatrix":
        total = tp + tn + fp + fn
        if total <= 0:
            raise EmptyInputError("confusion matrix needs at least one pixel")
        return cls(
            Fraction(tp, total), Fraction(tn, total), Fraction(fp, total), Fraction(fn, total)
        )


def _raw_counts(pred, truth) -> tuple[int, int, int, int]:
    p = as_binary_mask(pred).astype(bool)
    t = as_binary_mask(truth).astype(bool)
    if p.shape != t.shape:
        raise DimensionMismatchError(f"pred {p.shape} vs truth {t.shape}")
    tp = int((p & t).sum())
    fp = int((p & ~t).sum())
    fn = int((~p & t).sum())
    tn = int((~p & ~t).sum())
    return tp, tn, fp, fn


def confusion(pred, truth) -> ConfusionMatrix:
    """Count pixels into TP/TN/FP/FN and normalize by the total."""

    return ConfusionMatrix.from_counts(*_raw_counts(pred, truth))


def accuracy(cm: ConfusionMatrix) -> float:
    """Fraction of pixels labelled correctly: tp + tn under the unit total."""

    return float(cm.tp + cm.tn)


def jaccard(cm: ConfusionMatrix) -> float:
    """Intersection over union, tp / (tp + fp + fn); true negatives drop out."""

    den = cm.tp + cm.fp + cm.fn
    if den == 0:
        raise UndefinedMetricError("jaccard undefined: both masks are entirely background")
    return float(cm.tp / den)


def _exact_rates(cm: ConfusionMatrix) -> tuple[Fraction, Fraction]:
    pos = cm.fn + cm.tp
    neg = cm.fp + cm.tn
    if pos == 0:
        raise UndefinedMetricError("rates undefined: truth has no foreground pixels")
    if neg == 0:
        raise UndefinedMetricError("rates undefined: truth has no background pixels")
    return cm.fn / pos, cm.fp / neg


def rates(cm: ConfusionMatrix) -> tuple[float, float]:
    """(false negative rate, false positive rate) = (fn/(fn+tp), fp/(fp+tn))."""

    fnr, fpr = _exact_rates(cm)
    return float(fnr), float(fpr)


def auroc_from_rates(fnr, fpr) -> float:
    """Single-operating-point score 1 - (FPR + FNR) / 2.

    This is what the evaluation literature this mirrors calls AUROC even
    though no threshold sweep is involved; the formula coincides with
    balanced accuracy.
    """

    f_nr = _to_fraction(fnr)
    f_pr = _to_fraction(fpr)
    for name, v in (("fnr", f_nr), ("fpr", f_pr)):
        if not 0 <= v <= 1:
            raise ValidationError(f"{name} must lie in [0, 1]")
    return float(1 - (f_pr + f_nr) / 2)


def auroc(cm: ConfusionMatrix) -> float:
    """1 - (FPR + FNR)/2 from the matrix's own rates."""

    fnr, fpr = _exact_rates(cm)
    return float(1 - (fpr + fnr) / 2)


def kappa(cm: ConfusionMatrix) -> float:
    """Chance-adjusted agreement (fa - fc) / (N - fc) with N = 1.

    fa is the observed agreement tp + tn; fc the agreement expected from the
    marginals, (tn+fn)(tn+fp) + (fp+tp)(fn+tp).
    """

    fa = cm.tp + cm.tn
    fc = (cm.tn + cm.fn) * (cm.tn + cm.fp) + (cm.fp + cm.tp) * (cm.fn + cm.tp)
    if fc == 1:
        raise UndefinedMetricError(
            "kappa undefined: both marginals are a single class, chance agreement is total"
        )
    return float((fa - fc) / (1 - fc))


@dataclass(frozen=True)
class Band:
    """One labelled interval of a grading scale."""

    lower: Fraction
    upper: Fraction
    label: str
    lower_closed: bool = True
    upper_closed: bool = False

    def contains(self, v: Fraction) -> bool:
        above = v >= self.lower if self.lower_closed else v > self.lower
        below = v <= self.upper if self.upper_closed else v < self.upper
        return above and below


@dataclass(frozen=True)
class AgreementScale:
    """An ordered, gap-free partition of a score range into labelled bands."""

    name: str
    bands: tuple

    @property
    def low(self) -> Fraction:
        return self.bands[0].lower

    @property
    def high(self) -> Fraction:
        return self.bands[-1].upper


# Published two-decimal bands leave gaps on the real line (e.g. 0.59 -> 0.60);
# each band therefore runs from its printed lower bound up to, but excluding,
# the next band's lower bound, and the top band is closed at its upper end.
TRADITIONAL_AUROC = AgreementScale(
    "traditional-auroc",
    (
        Band(Fraction("0.50"), Fraction("0.60"), "no agreement (F)"),
        Band(Fraction("0.60"), Fraction("0.70"), "poor agreement (D)"),
        Band(Fraction("0.70"), Fraction("0.80"), "fair agreement (C)"),
        Band(Fraction("0.80"), Fraction("0.90"), "good agreement (B)"),
        Band(Fraction("0.90"), Fraction(1), "excellent agreement (A)", upper_closed=True),
    ),
)

LANDIS_KOCH = AgreementScale(
    "landis-koch",
    (
        Band(Fraction(-1), Fraction(0), "no agreement"),
        Band(Fraction(0), Fraction("0.21"), "slight agreement"),
        Band(Fraction("0.21"), Fraction("0.41"), "fair agreement"),
        Band(Fraction("0.41"), Fraction("0.61"), "moderate agreement"),
        Band(Fraction("0.61"), Fraction("0.81"), "substantial agreement"),
        Band(Fraction("0.81"), Fraction(1), "almost perfect agreement", upper_closed=True),
    ),
)

# This scale is printed without gaps: the middle band owns both of its
# endpoints and the top band is open at 0.75.
FLEISS = AgreementScale(
    "fleiss",
    (
        Band(Fraction(-1), Fraction("0.40"), "poor agreement"),
        Band(Fraction("0.40"), Fraction("0.75"), "fair to good agreement", upper_closed=True),
        Band(Fraction("0.75"), Fraction(1), "excellent agreement", lower_closed=False, upper_closed=True),
    ),
)

SCALES = {s.name: s for s in (TRADITIONAL_AUROC, LANDIS_KOCH, FLEISS)}


def grade(value, scale: AgreementScale) -> str:
    """Label of the unique band of *scale* containing *value*."""

    v = _to_fraction(value)
    if v < scale.low:
        err = OutOfScaleDomainError(f"{value} is below scale {scale.name} (minimum {float(scale.low)})")
        err.side = "below"
        raise err
    if v > scale.high:
        err = OutOfScaleDomainError(f"{value} is above scale {scale.name} (maximum {float(scale.high)})")
        err.side = "above"
        raise err
    for band in scale.bands:
        if band.contains(v):
            return band.label
    raise AssertionError(f"scale {scale.name} has a gap at {value}")


@dataclass(frozen=True)
class EvalReport:
    """All metrics for one prediction/truth comparison.

    Metrics whose denominators vanish are reported as None, never coerced to
    a number.  An AUROC outside the graded range reports the marker string
    "below scale" (or "above scale") instead of a band label.
    """

    cm: ConfusionMatrix
    acc: float
    jac: float | None
    auroc: float | None
    kap: float | None
    fnr: float | None
    fpr: float | None
    auroc_grade: str | None
    kap_landis: str | None
    kap_fleiss: str | None


def _maybe(fn, cm):
    try:
        return fn(cm)
    except UndefinedMetricError:
        return None


def _graded(value, scale):
    if value is None:
        return None
    try:
        return grade(value, scale)
    except OutOfScaleDomainError as exc:
        return f"{exc.side} scale"


def _report_from_cm(cm: ConfusionMatrix) -> EvalReport:
    jac = _maybe(jaccard, cm)
    kap = _maybe(kappa, cm)
    try:
        fnr, fpr = rates(cm)
        roc = auroc(cm)
    except UndefinedMetricError:
        fnr = fpr = roc = None
    return EvalReport(
        cm=cm,
        acc=accuracy(cm),
        jac=jac,
        auroc=roc,
        kap=kap,
        fnr=fnr,
        fpr=fpr,
        auroc_grade=_graded(roc, TRADITIONAL_AUROC),
        kap_landis=_graded(kap, LANDIS_KOCH),
        kap_fleiss=_graded(kap, FLEISS),
    )


def evaluate(pred, truth) -> EvalReport:
    """Confusion matrix, all metrics, and all three gradings for one pair."""

    return _report_from_cm(confusion(pred, truth))


def evaluate_set(pairs) -> tuple[EvalReport, list[EvalReport]]:
    """Micro-pooled and per-image reports for a list of (pred, truth) pairs.

    The micro report pools raw pixel counts across all images before
    normalizing, so differently sized images contribute by pixel count, not
    one vote each.
    """

    pairs = list(pairs)
    if not pairs:
        raise EmptyInputError("evaluate_set needs at least one (pred, truth) pair")
    pooled = [0, 0, 0, 0]
    per_image = []
    for i, (pred, truth) in enumerate(pairs):
        try:
            counts = _raw_counts(pred, truth)
        except DimensionMismatchError as exc:
            raise DimensionMismatchError(f"pair {i}: {exc}") from exc
        pooled = [a + b for a, b in zip(pooled, counts)]
        per_image.append(_report_from_cm(ConfusionMatrix.from_counts(*counts)))
    micro = _report_from_cm(ConfusionMatrix.from_counts(*pooled))
    return micro, per_image


# ------------------------------------------------------------------ reports

REPORT_FIELDS = (
    "tp",
    "tn",
    "fp",
    "fn",
    "acc",
    "jac",
    "auroc",
    "kap",
    "fnr",
    "fpr",
    "auroc_grade",
    "kap_landis",
    "kap_fleiss",
)


def report_to_dict(report: EvalReport) -> dict:
    """Flatten a report into the fixed field order used by all emitters."""

    row = {
        "tp": float(report.cm.tp),
        "tn": float(report.cm.tn),
        "fp": float(report.cm.fp),
        "fn": float(report.cm.fn),
    }
    for name in REPORT_FIELDS[4:]:
        row[name] = getattr(report, name)
    return row


def set_report_to_json(micro: EvalReport, per_image, ids=None) -> str:
    """One object per image plus a pooled "micro" object, as a JSON document."""

    ids = list(ids) if ids is not None else [str(i) for i in range(len(per_image))]
    doc = {
        "micro": report_to_dict(micro),
        "per_image": [
            {"image": image_id, **report_to_dict(rep)} for image_id, rep in zip(ids, per_image)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def set_report_to_csv(micro: EvalReport, per_image, ids=None) -> str:
    """The same report as a comma-delimited table; empty cells mean undefined."""

    ids = list(ids) if ids is not None else [str(i) for i in range(len(per_image))]
    lines = ["image," + ",".join(REPORT_FIELDS)]

    def cell(v):
        return "" if v is None else str(v)

    for image_id, rep in list(zip(ids, per_image)) + [("micro", micro)]:
        row = report_to_dict(rep)
        lines.append(str(image_id) + "," + ",".join(cell(row[f]) for f in REPORT_FIELDS))
    return "\n".join(lines) + "\n"
