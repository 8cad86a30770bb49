"""Biharmonic smoothing stencil, deterministic convolution, and anomaly detection."""

from .convolve import Boundary, convolve, convolve_reference
from .formats import (
    FormatError,
    UnsupportedFormatError,
    load_bandset,
    load_pgm,
    save_bandset,
    save_pgm,
)
from .pipeline import (
    AnomalyMap,
    ClassModel,
    DetectionMetrics,
    MapMode,
    anomaly_highpass,
    anomaly_residual,
    classify_parallelepiped,
    compare_detectors,
    detector_metrics,
    fit_parallelepiped,
    overall_accuracy,
    ranking_auc,
    smooth_jacobi,
    threshold_mask,
)
from .raster import BandSet, Raster
from .scene import Disk, Rect, SceneSpec, parse_scene_spec, synth_scene
from .stencil import (
    Monomial,
    Stencil,
    ValidationReport,
    biharmonic_stencil,
    laplacian_baseline,
    monomial_response,
    validate_stencil,
)

__version__ = "0.1.0"

__all__ = [
    "AnomalyMap",
    "BandSet",
    "Boundary",
    "ClassModel",
    "DetectionMetrics",
    "Disk",
    "FormatError",
    "MapMode",
    "Monomial",
    "Raster",
    "Rect",
    "SceneSpec",
    "Stencil",
    "UnsupportedFormatError",
    "ValidationReport",
    "anomaly_highpass",
    "anomaly_residual",
    "biharmonic_stencil",
    "classify_parallelepiped",
    "compare_detectors",
    "convolve",
    "convolve_reference",
    "detector_metrics",
    "fit_parallelepiped",
    "laplacian_baseline",
    "load_bandset",
    "load_pgm",
    "monomial_response",
    "overall_accuracy",
    "parse_scene_spec",
    "ranking_auc",
    "save_bandset",
    "save_pgm",
    "smooth_jacobi",
    "synth_scene",
    "threshold_mask",
    "validate_stencil",
]
