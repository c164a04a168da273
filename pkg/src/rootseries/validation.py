"""Input checks shared by the estimator and the command line."""

from __future__ import annotations

import numpy as np

# desk-scale limits; --unsafe lifts them
MAX_ORDER = 8
MAX_SET_SIZE = 8
MAX_DEGREE = 5


class BoundsError(ValueError):
    """A size parameter exceeds the documented desk-scale limit."""


def check_bound(name: str, value: int, limit: int, unsafe: bool = False, minimum: int = 0) -> int:
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    if value > limit and not unsafe:
        raise BoundsError(f"{name}={value} exceeds the limit {limit}; pass --unsafe to override")
    return value


def check_perturbations(X, d: int) -> np.ndarray:
    """Coerce X to a finite complex array of shape (n_samples, d)."""
    arr = np.asarray(X, dtype=complex)
    if arr.ndim == 1:
        if d != 1 and arr.shape[0] == d:
            arr = arr.reshape(1, d)
        else:
            arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[1] != d:
        raise ValueError(f"expected perturbations of shape (n_samples, {d}), got {np.shape(X)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("perturbations must be finite")
    return arr


def check_small(arr: np.ndarray, radius: float = 1e-2) -> None:
    """Reject perturbations far outside the regime where truncation is meaningful."""
    worst = float(np.max(np.abs(arr))) if arr.size else 0.0
    if worst > radius:
        raise ValueError(f"perturbation modulus {worst:.3g} exceeds {radius:g}")
