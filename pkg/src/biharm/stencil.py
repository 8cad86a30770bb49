"""Closed-form high-pass stencils: the 5x5 biharmonic template and the 3x3 Laplacian."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Stencil:
    """Square odd-sized coefficient grid plus the grid increments that generated it.

    ``coeffs[q + radius, p + radius]`` is the weight applied to the sample at
    column offset ``p`` and row offset ``q``.
    """

    radius: int
    coeffs: np.ndarray
    lx: float = 1.0
    ly: float = 1.0

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"radius must be non-negative, got {self.radius}")
        if not (self.lx > 0 and self.ly > 0):
            raise ValueError(f"increments must be positive, got lx={self.lx}, ly={self.ly}")
        k = 2 * self.radius + 1
        arr = np.asarray(self.coeffs, dtype=np.float64)
        if arr.shape != (k, k):
            raise ValueError(f"coefficient grid must be {k}x{k}, got {arr.shape}")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def coeff(self, p: int, q: int) -> float:
        return float(self.coeffs[q + self.radius, p + self.radius])

    def rows_top_down(self) -> np.ndarray:
        """Coefficient rows ordered q = +radius down to -radius."""
        return self.coeffs[::-1]

    def to_csv(self) -> str:
        lines = []
        for row in self.rows_top_down():
            lines.append(",".join("%.17g" % v for v in row))
        return "\n".join(lines) + "\n"

    def format_grid(self) -> str:
        cells = [["%g" % v for v in row] for row in self.rows_top_down()]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


@dataclass(frozen=True)
class Monomial:
    """One Taylor term x^u * y^v."""

    u: int
    v: int

    def __post_init__(self):
        if self.u < 0 or self.v < 0:
            raise ValueError("powers must be non-negative")
        if self.u + self.v > 7:
            raise ValueError(f"total degree {self.u + self.v} exceeds 7")


def biharmonic_stencil(lx: float = 1.0, ly: float = 1.0) -> Stencil:
    """The optimal 5x5 smoothing template for grid increments (lx, ly).

    Applying it to an image approximates the biharmonic operator; at
    lx = ly = 1 the grid is the integer template with center 20.
    """
    if not (lx > 0 and ly > 0):
        raise ValueError(f"increments must be positive, got lx={lx}, ly={ly}")
    lx2, ly2 = lx * lx, ly * ly
    lx4, ly4 = lx2 * lx2, ly2 * ly2
    c = np.zeros((5, 5))

    def put(p, q, value):
        c[q + 2, p + 2] = value

    put(-2, 0, 1.0 / lx4)
    put(2, 0, 1.0 / lx4)
    put(0, -2, 1.0 / ly4)
    put(0, 2, 1.0 / ly4)
    for p in (-1, 1):
        for q in (-1, 1):
            put(p, q, 2.0 / (lx2 * ly2))
    axis_x = -4.0 * (lx2 + ly2) / (lx4 * ly2)
    axis_y = -4.0 * (lx2 + ly2) / (lx2 * ly4)
    put(-1, 0, axis_x)
    put(1, 0, axis_x)
    put(0, -1, axis_y)
    put(0, 1, axis_y)
    put(0, 0, 2.0 * (3.0 * lx4 + 3.0 * ly4 + 4.0 * lx2 * ly2) / (lx4 * ly4))
    return Stencil(radius=2, coeffs=c, lx=lx, ly=ly)


def laplacian_baseline() -> Stencil:
    """3x3 high-pass filter: center 8, all eight neighbors -1."""
    c = np.full((3, 3), -1.0)
    c[1, 1] = 8.0
    return Stencil(radius=1, coeffs=c, lx=1.0, ly=1.0)


def monomial_response(s: Stencil, m: Monomial) -> float:
    """Stencil applied to x^u * y^v, evaluated at the origin by brute-force sum."""
    r = s.radius
    offsets = np.arange(-r, r + 1, dtype=np.float64)
    px = (offsets * s.lx) ** m.u if m.u else np.ones_like(offsets)
    qy = (offsets * s.ly) ** m.v if m.v else np.ones_like(offsets)
    # coeffs rows index q, columns index p
    return float(np.sum(s.coeffs * np.outer(qy, px)))


@dataclass(frozen=True)
class ValidationReport:
    zero_sum_residual: float
    max_symmetry_violation: float
    monomial_responses: dict = field(default_factory=dict)
    passed: bool = False


def validate_stencil(s: Stencil) -> ValidationReport:
    """Check zero sum, axis symmetry, and annihilation of cubics.

    Residual budgets are relative to the largest coefficient magnitude so the
    check is meaningful across the 1/(lx^4 ly^4) coefficient scales.
    """
    scale = max(1.0, float(np.max(np.abs(s.coeffs))))
    zero_sum = abs(float(np.sum(s.coeffs)))
    sym = max(
        float(np.max(np.abs(s.coeffs - s.coeffs[::-1, :]))),
        float(np.max(np.abs(s.coeffs - s.coeffs[:, ::-1]))),
    )
    responses = {}
    cubic_ok = True
    for total in range(5):
        for u in range(total + 1):
            v = total - u
            resp = monomial_response(s, Monomial(u, v))
            responses[(u, v)] = resp
            if total <= 3 and abs(resp) >= 1e-10 * scale:
                cubic_ok = False
    passed = zero_sum < 1e-12 * scale and sym < 1e-12 * scale and cubic_ok
    return ValidationReport(
        zero_sum_residual=zero_sum,
        max_symmetry_violation=sym,
        monomial_responses=responses,
        passed=passed,
    )
