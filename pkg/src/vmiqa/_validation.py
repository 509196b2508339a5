"""Input validation helpers shared by the functional and estimator APIs."""

from __future__ import annotations

import numbers

import numpy as np


def check_gray_image(image, *, bounded=True, min_size=1, name="image"):
    """Validate a 2-D grayscale image and return it as a float64 array.

    Parameters
    ----------
    image : array_like
        2-D array of luminance values.
    bounded : bool, default=True
        Require every value to lie in ``[0, 1]``. Scale-invariance checks
        pass ``bounded=False`` to work on rescaled images.
    min_size : int, default=1
        Minimum number of rows and columns.
    """
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={arr.ndim}")
    if arr.shape[0] < min_size or arr.shape[1] < min_size:
        raise ValueError(
            f"{name} must be at least {min_size}x{min_size}, got {arr.shape[0]}x{arr.shape[1]}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if bounded and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError(f"{name} values must lie in [0, 1]")
    return arr


def check_images(images, *, bounded=True):
    """Validate a batch of images (a sequence of 2-D arrays or a 3-D stack)."""
    if isinstance(images, np.ndarray) and images.ndim == 2:
        raise ValueError("expected a sequence of images, got a single 2-D array")
    return [check_gray_image(im, bounded=bounded) for im in images]


def check_window(window):
    """Window length N must be a positive even integer."""
    if isinstance(window, bool) or not isinstance(window, numbers.Integral):
        raise TypeError(f"window must be an integer, got {type(window).__name__}")
    if window < 2 or window % 2:
        raise ValueError(f"window N must be even and >= 2, got {window}")
    return int(window)


def check_finite_scalar(value, name):
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    return value


def check_paired(x, y, *, min_length=2):
    """Validate paired samples and return them as 1-D float64 arrays."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.size != y.size:
        raise ValueError(f"paired samples differ in length: {x.size} != {y.size}")
    if x.size < min_length:
        raise ValueError(f"need at least {min_length} paired samples, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("paired samples must be finite")
    return x, y
