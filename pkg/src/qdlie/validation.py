"""Input validation helpers, in the spirit of ``sklearn.utils.validation``."""

import numbers

import numpy as np

from .exceptions import InvalidInputError


def check_endomorphism(D, *, name="D"):
    """Return ``D`` as a finite, square, C-contiguous float64 array.

    Scalars and 1-element sequences are promoted to 1x1 matrices.
    """
    try:
        arr = np.array(D, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name} is not a real matrix: {exc}") from None
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise InvalidInputError(f"{name} must have positive dimension")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return np.ascontiguousarray(arr)


def check_vector(v, dim=None, *, name="v", allow_zero=True):
    try:
        arr = np.array(v, dtype=float).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name} is not a real vector: {exc}") from None
    if dim is not None and arr.shape[0] != dim:
        raise InvalidInputError(f"{name} has length {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    if not allow_zero and not np.any(arr):
        raise InvalidInputError(f"{name} must be nonzero")
    return arr


def check_positive(x, name, *, strict=True):
    if not isinstance(x, numbers.Real) or not np.isfinite(x):
        raise InvalidInputError(f"{name} must be a finite real number, got {x!r}")
    if (strict and x <= 0) or (not strict and x < 0):
        raise InvalidInputError(f"{name} must be {'positive' if strict else 'nonnegative'}, got {x!r}")
    return float(x)


def check_direction(direction):
    """Accept ``+1``/``-1`` or the strings ``'+'``, ``'-'``, ``'+inf'``, ``'-inf'``."""
    if isinstance(direction, str):
        key = direction.strip().lower()
        if key in {"+", "+inf", "inf", "forward", "+∞"}:
            return 1
        if key in {"-", "-inf", "backward", "-∞", "−∞"}:
            return -1
    elif isinstance(direction, numbers.Real) and direction in (1, -1):
        return int(direction)
    elif isinstance(direction, numbers.Real) and np.isinf(direction):
        return 1 if direction > 0 else -1
    raise InvalidInputError(f"direction must be +inf or -inf, got {direction!r}")


def check_random_state(seed):
    """Counter-based (Philox) generator keyed by ``seed``."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = 0
    return np.random.Generator(np.random.Philox(int(seed)))
