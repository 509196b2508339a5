"""Controlled degradations: Gaussian blur and additive Gaussian noise."""

from __future__ import annotations

import numbers

import numpy as np
from scipy import ndimage

from ._validation import check_gray_image

BLUR_SIZE = 5
BLUR_SIGMA = 1.0
NOISE_SIGMA = 0.01
PROBE_SIGMA = 1.5

KINDS = ("blur", "noise", "blur+noise")


def gaussian_kernel(size=BLUR_SIZE, sigma=BLUR_SIGMA):
    """Rotationally symmetric Gaussian lowpass kernel normalized to sum 1.

    Parameters
    ----------
    size : int
        Odd side length, at least 3.
    sigma : float
        Standard deviation in pixels.

    Returns
    -------
    ndarray of shape (size, size)
    """
    if isinstance(size, bool) or not isinstance(size, numbers.Integral):
        raise TypeError("kernel size must be an integer")
    if size < 3 or size % 2 == 0:
        raise ValueError(f"kernel size must be odd and >= 3, got {size}")
    sigma = float(sigma)
    if not np.isfinite(sigma) or sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    half = size // 2
    x = np.arange(-half, half + 1, dtype=np.float64)
    weights = np.exp(-(x[:, None] ** 2 + x[None, :] ** 2) / (2.0 * sigma**2))
    return weights / weights.sum()


def convolve(image, kernel, *, clip=True):
    """Convolve with mirror-reflected borders.

    Borders use half-sample symmetric reflection (``abc|cba``). The output
    is clamped to [0, 1] unless ``clip=False``.
    """
    kernel = np.asarray(kernel, dtype=np.float64)
    if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1] or kernel.shape[0] % 2 == 0:
        raise ValueError("kernel must be a square array with odd side")
    image = check_gray_image(image, bounded=False)
    if image.shape[0] < kernel.shape[0] or image.shape[1] < kernel.shape[1]:
        raise ValueError(
            f"image {image.shape} is smaller than kernel {kernel.shape}"
        )
    out = ndimage.convolve(image, kernel, mode="reflect")
    if clip:
        np.clip(out, 0.0, 1.0, out=out)
    return out


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def add_gaussian_noise(image, sigma=NOISE_SIGMA, seed=0):
    """Add i.i.d. Normal(0, sigma^2) noise and clamp to [0, 1].

    Noise is drawn from numpy's PCG64 generator (``default_rng(seed)``)
    via ``standard_normal``, so a given integer seed reproduces the same
    image. ``seed`` may also be an existing ``numpy.random.Generator``.
    """
    sigma = float(sigma)
    if not np.isfinite(sigma) or sigma < 0:
        raise ValueError(f"noise sigma must be >= 0, got {sigma}")
    image = check_gray_image(image, bounded=False)
    if sigma == 0:
        return image.copy()
    noise = _rng(seed).standard_normal(image.shape)
    return np.clip(image + sigma * noise, 0.0, 1.0)


def degradation_series(
    image,
    kind="blur",
    steps=10,
    *,
    blur_size=BLUR_SIZE,
    blur_sigma=BLUR_SIGMA,
    noise_sigma=NOISE_SIGMA,
    seed=0,
):
    """Build a ladder of progressively degraded copies of ``image``.

    Element 0 is the original and element ``i`` applies one more step than
    element ``i - 1``. A ``"blur"`` step convolves with the 5x5, sigma=1
    kernel. A ``"noise"`` step adds sigma=0.01 Gaussian noise. A
    ``"blur+noise"`` step blurs, then adds one ``noise_sigma`` noise draw.

    Noise draws for all steps come from a single generator seeded with
    ``seed``.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if isinstance(steps, bool) or not isinstance(steps, numbers.Integral) or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")
    current = check_gray_image(image, bounded=False).copy()
    kernel = gaussian_kernel(blur_size, blur_sigma)
    rng = _rng(seed)
    series = [current]
    for _ in range(steps - 1):
        if kind in ("blur", "blur+noise"):
            current = convolve(current, kernel)
        if kind in ("noise", "blur+noise"):
            current = add_gaussian_noise(current, noise_sigma, rng)
        series.append(current)
    return series
