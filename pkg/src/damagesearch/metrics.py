"""Detection evaluation: instance matching, confusion matrix, per-class
precision/recall, overall accuracy, average confidence.

Matching is greedy by prediction confidence at a bbox-IoU threshold
(default 0.5), the standard detection-benchmark convention. Only the four
damage classes are evaluated; object-labeled regions and detections are
ignored. Undefined ratios (0/0) are reported as None, never coerced.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .annotations import GroundTruthRegion
from .detector import Detection, gate_confidence
from .model import DamageLevel, damage_from_label

DAMAGE_CLASS_IDS = (1, 2, 3, 4)


def bbox_iou(a: Sequence[float], b: Sequence[float]) -> float:
    """Intersection over union of two (x, y, w, h) boxes."""
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    ix = max(ax, bx)
    iy = max(ay, by)
    ix2 = min(ax + aw, bx + bw)
    iy2 = min(ay + ah, by + bh)
    if ix2 <= ix or iy2 <= iy:
        return 0.0
    inter = (ix2 - ix) * (iy2 - iy)
    union = aw * ah + bw * bh - inter
    return inter / union if union > 0 else 0.0


def region_bbox(region: GroundTruthRegion) -> tuple[float, float, float, float]:
    xs = [p[0] for p in region.polygon]
    ys = [p[1] for p in region.polygon]
    return (min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))


def region_image_id(region: GroundTruthRegion) -> str:
    """Image key for a ground-truth region: the filename stem."""
    return Path(region.filename).stem


def region_class_id(region: GroundTruthRegion) -> int | None:
    level = damage_from_label(region.class_name)
    return level.class_id if level is not None else None


@dataclass(frozen=True)
class InstanceMatch:
    prediction: Detection
    truth: GroundTruthRegion
    iou: float


@dataclass
class MatchResult:
    matches: list[InstanceMatch] = field(default_factory=list)
    unmatched_predictions: list[Detection] = field(default_factory=list)
    unmatched_truth: list[GroundTruthRegion] = field(default_factory=list)


def match_instances(
    predictions: Sequence[Detection],
    ground_truth: Sequence[GroundTruthRegion],
    iou_threshold: float = 0.5,
) -> MatchResult:
    """Greedy class-agnostic matching, per image, confidence first.

    Each prediction takes the still-unmatched ground-truth region with the
    highest IoU at or above the threshold; leftovers on either side are
    reported unmatched.
    """
    truth_by_image: dict[str, list[tuple[int, GroundTruthRegion]]] = {}
    for i, region in enumerate(ground_truth):
        truth_by_image.setdefault(region_image_id(region), []).append((i, region))

    result = MatchResult()
    taken: set[int] = set()
    ordered = sorted(enumerate(predictions), key=lambda item: (-item[1].confidence, item[0]))
    matched_predictions: set[int] = set()
    pairs: dict[int, tuple[int, float]] = {}
    for pi, pred in ordered:
        best: tuple[float, int] | None = None
        for ti, region in truth_by_image.get(pred.image_id, []):
            if ti in taken:
                continue
            iou = bbox_iou(pred.bbox, region_bbox(region))
            if iou >= iou_threshold and (best is None or iou > best[0]):
                best = (iou, ti)
        if best is not None:
            taken.add(best[1])
            matched_predictions.add(pi)
            pairs[pi] = (best[1], best[0])

    for pi, pred in enumerate(predictions):
        if pi in pairs:
            ti, iou = pairs[pi]
            result.matches.append(InstanceMatch(pred, ground_truth[ti], iou))
        else:
            result.unmatched_predictions.append(pred)
    result.unmatched_truth = [r for i, r in enumerate(ground_truth) if i not in taken]
    return result


@dataclass
class ConfusionMatrix:
    """4x4 matched-pair counts (rows truth, columns predicted) plus
    unmatched tallies per class."""

    counts: dict[int, dict[int, int]] = field(
        default_factory=lambda: {t: {p: 0 for p in DAMAGE_CLASS_IDS} for t in DAMAGE_CLASS_IDS}
    )
    fn_only: dict[int, int] = field(default_factory=lambda: {c: 0 for c in DAMAGE_CLASS_IDS})
    fp_only: dict[int, int] = field(default_factory=lambda: {c: 0 for c in DAMAGE_CLASS_IDS})

    @classmethod
    def from_matches(cls, result: MatchResult) -> "ConfusionMatrix":
        matrix = cls()
        for match in result.matches:
            truth_class = region_class_id(match.truth)
            pred_class = match.prediction.class_id
            if truth_class is None or pred_class not in DAMAGE_CLASS_IDS:
                continue
            matrix.counts[truth_class][pred_class] += 1
        for region in result.unmatched_truth:
            truth_class = region_class_id(region)
            if truth_class is not None:
                matrix.fn_only[truth_class] += 1
        for pred in result.unmatched_predictions:
            if pred.class_id in DAMAGE_CLASS_IDS:
                matrix.fp_only[pred.class_id] += 1
        return matrix

    def total_matched(self) -> int:
        return sum(sum(row.values()) for row in self.counts.values())

    def truth_count(self, class_id: int) -> int:
        return sum(self.counts[class_id].values()) + self.fn_only[class_id]


def precision_recall(matrix: ConfusionMatrix) -> dict[int, tuple[float | None, float | None]]:
    """Per class: (precision, recall); None where the ratio is 0/0."""
    out: dict[int, tuple[float | None, float | None]] = {}
    for c in DAMAGE_CLASS_IDS:
        tp = matrix.counts[c][c]
        fn = sum(matrix.counts[c].values()) - tp + matrix.fn_only[c]
        fp = sum(matrix.counts[t][c] for t in DAMAGE_CLASS_IDS) - tp + matrix.fp_only[c]
        precision = tp / (tp + fp) if tp + fp > 0 else None
        recall = tp / (tp + fn) if tp + fn > 0 else None
        out[c] = (precision, recall)
    return out


@dataclass
class ClassReport:
    class_id: int
    label: str
    truth_instances: int
    accuracy: float | None
    precision: float | None
    recall: float | None
    average_confidence: float | None


@dataclass
class EvalReport:
    overall_accuracy: float | None
    average_confidence: float | None
    total_truth: int
    total_predictions: int
    gated_predictions: int
    per_class: list[ClassReport]
    matrix: ConfusionMatrix


def summary(
    predictions: Sequence[Detection],
    ground_truth: Sequence[GroundTruthRegion],
    min_confidence: float = 0.85,
    iou_threshold: float = 0.5,
) -> EvalReport:
    """Gate, match, and tally the detection-quality report."""
    damage_truth = [r for r in ground_truth if region_class_id(r) is not None]
    damage_preds = [d for d in predictions if d.class_id in DAMAGE_CLASS_IDS]
    gated = gate_confidence(damage_preds, min_confidence)

    result = match_instances(gated, damage_truth, iou_threshold)
    matrix = ConfusionMatrix.from_matches(result)
    pr = precision_recall(matrix)

    per_class = []
    for c in DAMAGE_CLASS_IDS:
        truth_n = matrix.truth_count(c)
        correct = matrix.counts[c][c]
        class_preds = [d.confidence for d in gated if d.class_id == c]
        per_class.append(
            ClassReport(
                class_id=c,
                label=DamageLevel(c).label,
                truth_instances=truth_n,
                accuracy=correct / truth_n if truth_n > 0 else None,
                precision=pr[c][0],
                recall=pr[c][1],
                average_confidence=sum(class_preds) / len(class_preds) if class_preds else None,
            )
        )

    total_truth = len(damage_truth)
    correct_total = sum(matrix.counts[c][c] for c in DAMAGE_CLASS_IDS)
    return EvalReport(
        overall_accuracy=correct_total / total_truth if total_truth > 0 else None,
        average_confidence=sum(d.confidence for d in gated) / len(gated) if gated else None,
        total_truth=total_truth,
        total_predictions=len(damage_preds),
        gated_predictions=len(gated),
        per_class=per_class,
        matrix=matrix,
    )


def _fmt(value: float | None) -> str:
    return f"{value:.4f}" if value is not None else "undefined"


def report_table(report: EvalReport) -> str:
    lines = [
        f"{'class':<10}{'instances':>10}{'accuracy':>12}{'precision':>12}{'recall':>12}{'avg conf':>12}",
    ]
    for row in report.per_class:
        lines.append(
            f"{row.label:<10}{row.truth_instances:>10}{_fmt(row.accuracy):>12}"
            f"{_fmt(row.precision):>12}{_fmt(row.recall):>12}{_fmt(row.average_confidence):>12}"
        )
    lines.append(
        f"{'overall':<10}{report.total_truth:>10}{_fmt(report.overall_accuracy):>12}"
        f"{'':>12}{'':>12}{_fmt(report.average_confidence):>12}"
    )
    return "\n".join(lines)


def report_csv(report: EvalReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["class", "instances", "accuracy", "precision", "recall", "average_confidence"])
    for row in report.per_class:
        writer.writerow(
            [
                row.label,
                row.truth_instances,
                _fmt(row.accuracy),
                _fmt(row.precision),
                _fmt(row.recall),
                _fmt(row.average_confidence),
            ]
        )
    writer.writerow(
        ["overall", report.total_truth, _fmt(report.overall_accuracy), "", "", _fmt(report.average_confidence)]
    )
    return buf.getvalue()
