"""Input validation helpers shared across the package."""
from __future__ import annotations

import numpy as np


class ConfigurationError(ValueError):
    """Invalid user-supplied configuration (CLI maps this to exit code 1)."""


def as_complex_array(x, name: str = "array", ndim: int | None = None) -> np.ndarray:
    """Coerce input to a finite complex128 ndarray, optionally of fixed rank."""
    arr = np.asarray(x, dtype=np.complex128)
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_channel_arrays(cascade, direct) -> tuple[np.ndarray, np.ndarray]:
    """Validate a (K, N) cascade matrix against a length-K direct response."""
    cascade = as_complex_array(cascade, "cascade", ndim=2)
    direct = as_complex_array(direct, "direct", ndim=1)
    if cascade.shape[0] != direct.shape[0]:
        raise ValueError(
            f"cascade has {cascade.shape[0]} subcarrier rows but direct has "
            f"{direct.shape[0]} entries"
        )
    if cascade.shape[0] < 1 or cascade.shape[1] < 1:
        raise ValueError("channel arrays must be non-empty")
    return cascade, direct


def check_unit_modulus(theta, tol: float = 1e-9, name: str = "theta") -> np.ndarray:
    """Validate that every reflection coefficient has unit magnitude."""
    theta = as_complex_array(theta, name, ndim=1)
    dev = float(np.max(np.abs(np.abs(theta) - 1.0))) if theta.size else 0.0
    if dev > tol:
        raise ValueError(f"{name} is not unit-modulus (max |.|-1 deviation {dev:.3e})")
    return theta


def check_rng(random_state) -> np.random.Generator:
    """Coerce an int seed, SeedSequence, Generator or None into a Generator."""
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(random_state)


def check_positive(value, name: str, *, allow_zero: bool = False) -> float:
    value = float(value)
    if allow_zero and value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    if not allow_zero and not value > 0:
        raise ValueError(f"{name} must be > 0, got {value}")
    return value
