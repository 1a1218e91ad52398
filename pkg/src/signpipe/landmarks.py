"""Hand-landmark ingestion: flattening and standard-score normalization.

A gesture observation is 42 tracked 3-D points. Classifiers consume the
flattened 126-value vector after per-feature standardization (fit on the
training set, applied everywhere else).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_POINTS = 42
N_FEATURES = 3 * N_POINTS


@dataclass(frozen=True)
class LandmarkFrame:
    """One gesture observation: 42 ordered (x, y, z) points plus an optional label."""

    points: np.ndarray  # (42, 3) float64
    label: str | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.shape != (N_POINTS, 3):
            raise ValueError(f"expected {N_POINTS} landmark points, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("landmark coordinates must be finite")
        object.__setattr__(self, "points", pts)
        self.points.setflags(write=False)


@dataclass(frozen=True)
class ScalerParams:
    """Per-feature mean and standard deviation; sigma is never zero (guarded to 1)."""

    mu: np.ndarray  # (126,)
    sigma: np.ndarray  # (126,)

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=np.float64)
        sigma = np.asarray(self.sigma, dtype=np.float64)
        if mu.shape != (N_FEATURES,) or sigma.shape != (N_FEATURES,):
            raise ValueError("scaler params must have length 126")
        if not np.all(sigma > 0):
            raise ValueError("sigma must be strictly positive")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        self.mu.setflags(write=False)
        self.sigma.setflags(write=False)


def flatten(frame: LandmarkFrame) -> np.ndarray:
    """Flatten a frame to the 126-vector (x1, y1, z1, ..., x42, y42, z42)."""
    return frame.points.reshape(N_FEATURES).copy()


def unflatten(values: np.ndarray, label: str | None = None) -> LandmarkFrame:
    """Inverse of :func:`flatten`; used for round-trip checks and CSV ingestion."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (N_FEATURES,):
        raise ValueError(f"expected {N_FEATURES} values, got shape {values.shape}")
    return LandmarkFrame(points=values.reshape(N_POINTS, 3), label=label)


def fit_scaler(dataset: np.ndarray) -> ScalerParams:
    """Fit per-feature mean and population standard deviation.

    Zero-variance features get sigma = 1 so constant coordinates pass through
    as zeros instead of dividing by zero.
    """
    data = np.asarray(dataset, dtype=np.float64)
    if data.ndim == 1:
        data = data[None, :]
    if data.size == 0 or data.shape[0] == 0:
        raise ValueError("cannot fit a scaler on an empty dataset")
    if data.shape[1] != N_FEATURES:
        raise ValueError(f"expected {N_FEATURES} feature columns, got {data.shape[1]}")
    mu = data.mean(axis=0)
    sigma = data.std(axis=0)  # population std (ddof=0)
    sigma = np.where(sigma == 0.0, 1.0, sigma)
    return ScalerParams(mu=mu, sigma=sigma)


def apply_scaler(params: ScalerParams, v: np.ndarray) -> np.ndarray:
    """Standardize a feature vector (or a stack of them): (v - mu) / sigma."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape[-1] != N_FEATURES:
        raise ValueError(f"expected {N_FEATURES} features in the last axis, got {v.shape[-1]}")
    return (v - params.mu) / params.sigma
