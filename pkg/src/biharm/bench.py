"""Throughput benchmark: reference engine vs tiled engine, numba vs numpy kernel."""
from __future__ import annotations

import time

import numpy as np

from . import _kernels
from .convolve import Boundary, convolve, convolve_reference
from .raster import Raster
from .scene import gaussian
from .stencil import biharmonic_stencil


def _time_best(fn, iters: int) -> float:
    best = float("inf")
    for _ in range(iters):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmark(
    width: int = 2048,
    height: int = 2048,
    iters: int = 3,
    workers: int = 4,
    tile_height: int = 64,
) -> dict:
    """Returns pixels/second for each engine; outputs are checked identical."""
    stencil = biharmonic_stencil(1.0, 1.0)
    data = 100.0 + 10.0 * gaussian(1234, width * height).reshape(height, width)
    raster = Raster._from_array(data)
    pixels = width * height

    def tiled():
        return convolve(raster, stencil, Boundary.MIRROR, tile_height, workers)

    # warm-up also covers JIT compilation
    ref_out = convolve_reference(raster, stencil, Boundary.MIRROR)
    tiled_out = tiled()
    identical = bool(np.array_equal(ref_out.data, tiled_out.data))

    results = {
        "backend": "numba" if _kernels.NUMBA_ENABLED else "numpy",
        "width": width,
        "height": height,
        "workers": workers,
        "tile_height": tile_height,
        "bit_identical": identical,
        "reference_pps": pixels / _time_best(
            lambda: convolve_reference(raster, stencil, Boundary.MIRROR), iters
        ),
        "tiled_pps": pixels / _time_best(tiled, iters),
    }
    if _kernels.NUMBA_ENABLED:
        # time the pure numpy fallback kernel through the same tiling
        saved = _kernels.conv_rows
        _kernels.conv_rows = _kernels.conv_rows_numpy
        try:
            tiled()  # warm-up
            results["tiled_numpy_pps"] = pixels / _time_best(tiled, iters)
        finally:
            _kernels.conv_rows = saved
    results["speedup_tiled_vs_reference"] = (
        results["tiled_pps"] / results["reference_pps"]
    )
    return results
