"""Smoothing, anomaly maps, detector metrics, and parallelepiped classification."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .convolve import Boundary, convolve
from .raster import BandSet, Raster
from .stencil import Stencil


class MapMode(enum.Enum):
    RESIDUAL = "residual"
    HIGHPASS = "highpass"


@dataclass(frozen=True)
class AnomalyMap:
    scores: Raster
    source_band: str
    mode: MapMode


def smooth_jacobi(
    r: Raster,
    s: Stencil,
    iterations: int = 1,
    b: Boundary = Boundary.MIRROR,
    tile_height: int = 64,
    workers: int | None = None,
) -> Raster:
    """Jacobi relaxation of the stencil equation: each sweep replaces every
    pixel by -(sum of off-center taps)/center, reading only the previous
    iterate."""
    if iterations < 1:
        raise ValueError(f"iterations must be positive, got {iterations}")
    center = s.coeff(0, 0)
    if center == 0.0:
        raise ValueError("stencil center coefficient must be non-zero")
    current = r
    for _ in range(iterations):
        response = convolve(current, s, b, tile_height, workers)
        current = Raster._from_array(current.data - response.data / center)
    return current


def anomaly_residual(original: Raster, smoothed: Raster, source_band: str = "") -> AnomalyMap:
    """Smoothed minus original, per band."""
    if original.shape != smoothed.shape:
        raise ValueError(f"shape mismatch: {original.shape} vs {smoothed.shape}")
    scores = Raster._from_array(smoothed.data - original.data)
    return AnomalyMap(scores=scores, source_band=source_band, mode=MapMode.RESIDUAL)


def anomaly_highpass(
    r: Raster,
    s: Stencil,
    b: Boundary = Boundary.MIRROR,
    source_band: str = "",
    tile_height: int = 64,
    workers: int | None = None,
) -> AnomalyMap:
    """Direct high-pass response of the stencil."""
    scores = convolve(r, s, b, tile_height, workers)
    return AnomalyMap(scores=scores, source_band=source_band, mode=MapMode.HIGHPASS)


def threshold_mask(m: AnomalyMap, k_sigma: float) -> Raster:
    """Binary mask of scores more than k_sigma population standard deviations
    from the map mean; all zeros when the map is constant."""
    scores = m.scores.data
    mu = float(scores.mean())
    sd = float(scores.std())
    if sd == 0.0:
        return Raster._from_array(np.zeros_like(scores))
    mask = (np.abs(scores - mu) > k_sigma * sd).astype(np.float64)
    return Raster._from_array(mask)


@dataclass(frozen=True)
class DetectionMetrics:
    tp: int
    fp: int
    tn: int
    fn: int
    precision: float
    recall: float
    overall_accuracy: float
    auc: float

    @classmethod
    def from_counts(cls, tp, fp, tn, fn, auc):
        total = tp + fp + tn + fn
        precision = tp / (tp + fp) if tp + fp > 0 else 1.0
        recall = tp / (tp + fn) if tp + fn > 0 else 1.0
        accuracy = (tp + tn) / total if total > 0 else 1.0
        return cls(tp, fp, tn, fn, precision, recall, accuracy, auc)


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties averaged."""
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    starts = ends - counts
    average = (starts + ends + 1) / 2.0
    return average[inverse]


def ranking_auc(scores: np.ndarray, truth: np.ndarray) -> float:
    """Mann-Whitney AUC of |scores| against the binary truth, ties averaged.

    Degenerate truth (single class) yields 0.5: the ranking is untestable.
    """
    truth = truth.astype(bool).ravel()
    n_pos = int(truth.sum())
    n_neg = truth.size - n_pos
    if n_pos == 0 or n_neg == 0:
        return 0.5
    ranks = _average_ranks(np.abs(scores).ravel())
    rank_sum = float(ranks[truth].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def detector_metrics(m: AnomalyMap, truth: Raster, k_sigma: float = 3.0) -> DetectionMetrics:
    if m.scores.shape != truth.shape:
        raise ValueError(f"shape mismatch: {m.scores.shape} vs {truth.shape}")
    auc = ranking_auc(m.scores.data, truth.data)
    mask = threshold_mask(m, k_sigma).data.astype(bool)
    t = truth.data.astype(bool)
    tp = int(np.sum(mask & t))
    fp = int(np.sum(mask & ~t))
    fn = int(np.sum(~mask & t))
    tn = int(np.sum(~mask & ~t))
    return DetectionMetrics.from_counts(tp, fp, tn, fn, auc)


def compare_detectors(scores_a: AnomalyMap, scores_b: AnomalyMap, truth: Raster):
    """Metrics for two detectors against the same truth mask."""
    return detector_metrics(scores_a, truth), detector_metrics(scores_b, truth)


@dataclass(frozen=True)
class ClassModel:
    """Per-class, per-band [lo, hi] boxes. intervals[class_id] has shape (bands, 2)."""

    band_count: int
    intervals: dict

    def __post_init__(self):
        if self.band_count < 1:
            raise ValueError("band_count must be positive")
        for cid, box in self.intervals.items():
            if cid < 1:
                raise ValueError(f"class ids must be positive, got {cid}")
            box = np.asarray(box, dtype=np.float64)
            if box.shape != (self.band_count, 2):
                raise ValueError(
                    f"class {cid}: expected {(self.band_count, 2)} intervals, got {box.shape}"
                )
            if np.any(box[:, 0] > box[:, 1]):
                raise ValueError(f"class {cid}: interval with lo > hi")

    def class_ids(self):
        return sorted(self.intervals)


def fit_parallelepiped(b: BandSet, roi_labels: Raster) -> ClassModel:
    """Per class and band, the interval mean +/- 2 population standard
    deviations over that class's ROI pixels. Label 0 means unlabeled."""
    if roi_labels.shape != (b.height, b.width):
        raise ValueError(
            f"ROI shape {roi_labels.shape} does not match bands {(b.height, b.width)}"
        )
    labels = roi_labels.data
    class_ids = sorted(int(c) for c in np.unique(labels) if c > 0)
    if not class_ids:
        raise ValueError("ROI contains no labeled pixels")
    intervals = {}
    for cid in class_ids:
        sel = labels == cid
        box = np.empty((len(b), 2))
        for bi, band in enumerate(b):
            pixels = band.data[sel]
            mu = float(pixels.mean())
            sd = float(pixels.std())
            box[bi] = (mu - 2.0 * sd, mu + 2.0 * sd)
        intervals[cid] = box
    return ClassModel(band_count=len(b), intervals=intervals)


def classify_parallelepiped(b: BandSet, m: ClassModel) -> Raster:
    """Assign each pixel the lowest class id whose box contains it in every
    band; 0 where no box matches."""
    if len(b) != m.band_count:
        raise ValueError(f"band set has {len(b)} bands, model expects {m.band_count}")
    labels = np.zeros((b.height, b.width))
    for cid in m.class_ids():
        box = np.asarray(m.intervals[cid], dtype=np.float64)
        inside = np.ones((b.height, b.width), dtype=bool)
        for bi, band in enumerate(b):
            inside &= (band.data >= box[bi, 0]) & (band.data <= box[bi, 1])
        labels[(labels == 0) & inside] = cid
    return Raster._from_array(labels)


def overall_accuracy(labels: Raster, truth: Raster) -> float:
    """Fraction of pixels whose label equals the reference label."""
    if labels.shape != truth.shape:
        raise ValueError(f"shape mismatch: {labels.shape} vs {truth.shape}")
    return float(np.count_nonzero(labels.data == truth.data)) / labels.data.size
