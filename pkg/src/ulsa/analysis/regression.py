"""Per-class ordinary least squares on 2-d projections (PC2 on PC1)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateClass


@dataclass(frozen=True)
class LineFit:
    label: str
    slope: float
    intercept: float
    count: int


def fit_line(x: np.ndarray, y: np.ndarray, label: str = "") -> LineFit:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    if len(np.unique(x)) < 2:
        raise DegenerateClass(
            f"class {label!r}: need >= 2 distinct x values, got {len(np.unique(x))}"
        )
    x_mean = x.mean()
    y_mean = y.mean()
    slope = float(np.sum((x - x_mean) * (y - y_mean)) / np.sum((x - x_mean) ** 2))
    intercept = float(y_mean - slope * x_mean)
    return LineFit(label=label, slope=slope, intercept=intercept, count=len(x))


def fit_line_per_class(projections: np.ndarray, labels) -> list[LineFit]:
    """One OLS fit of PC2 on PC1 per label, labels in sorted order."""
    points = np.asarray(projections, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] < 2:
        raise ValueError(f"expected N x 2 projections, got {points.shape}")
    names = [getattr(lab, "value", lab) for lab in labels]
    if len(names) != points.shape[0]:
        raise ValueError("one label per projection row required")
    fits = []
    for name in sorted(set(names)):
        rows = [i for i, n in enumerate(names) if n == name]
        fits.append(fit_line(points[rows, 0], points[rows, 1], label=name))
    return fits
