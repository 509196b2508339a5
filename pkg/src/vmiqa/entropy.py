"""Directional Renyi entropy from 1-D pseudo-Wigner distributions.

Each pixel is examined through four oriented windows of ``N + 1`` samples,
one per axis of a regular octagon (pi/8, 3pi/8, 5pi/8, 7pi/8). Along each
window the local pseudo-Wigner distribution (PWD) is computed, squared and
normalized into a distribution over ``N`` frequency bins, and scored with
the order-3 Renyi entropy normalized to [0, 1].

Coordinates: ``dx`` is the column offset (rightward), ``dy`` the row offset
(downward), and angles are measured from the +x axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_gray_image, check_window
from .exceptions import DegenerateInputError

DEFAULT_WINDOW = 8
ORIENTATIONS = np.array([1.0, 3.0, 5.0, 7.0]) * np.pi / 8.0

_IMAG_RTOL = 1e-9


def _round_half_away(values):
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


@dataclass(frozen=True)
class DirectionalWindow:
    """Pixel offsets of an oriented window, ordered from t=-N/2 to t=N/2."""

    theta: float
    offsets: np.ndarray  # (N + 1, 2) integer (dx, dy)

    @property
    def n(self):
        return self.offsets.shape[0] - 1

    @property
    def span(self):
        return float(np.hypot(*self.offsets[-1]))


@dataclass(frozen=True)
class DirectionalEntropy:
    """Image-mean directional entropies at the four octagon axes."""

    angles: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.angles.shape != (4,) or self.values.shape != (4,):
            raise ValueError("DirectionalEntropy needs exactly four angles and four values")

    def __iter__(self):
        return iter(zip(self.angles.tolist(), self.values.tolist()))


def directional_offsets(theta, n=DEFAULT_WINDOW):
    """Rasterize a line through the origin at angle ``theta``.

    Offset ``t`` in ``[-N/2, N/2]`` maps to ``(round(t cos theta),
    round(t sin theta))`` with rounding half away from zero.
    """
    n = check_window(n)
    t = np.arange(-n // 2, n // 2 + 1, dtype=np.float64)
    dx = _round_half_away(t * np.cos(theta))
    dy = _round_half_away(t * np.sin(theta))
    offsets = np.stack([dx, dy], axis=1).astype(np.int64)
    return DirectionalWindow(float(theta), offsets)


def _mirror_index(idx, size):
    # half-sample symmetric reflection, period 2*size
    idx = np.mod(idx, 2 * size)
    return np.where(idx >= size, 2 * size - 1 - idx, idx)


def extract_window(image, center, window):
    """Sample ``image`` along ``window`` centered at ``center = (row, col)``.

    Out-of-range coordinates are mirrored back into the image.
    """
    image = check_gray_image(image, bounded=False)
    row, col = center
    h, w = image.shape
    if not (0 <= row < h and 0 <= col < w):
        raise ValueError(f"center {center} lies outside the {h}x{w} image")
    rows = _mirror_index(row + window.offsets[:, 1], h)
    cols = _mirror_index(col + window.offsets[:, 0], w)
    return image[rows, cols]


def _lag_kernel(n):
    """Complex exponential matrix E[k, m] for k, m in [-N/2, N/2 - 1].

    The lag product is transformed with the length-N DFT kernel
    ``exp(-2j*pi*k*m/N)``; see ``pwd`` for why the lag is not doubled.
    """
    idx = np.arange(-n // 2, n // 2)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / n)


def _lag_products(samples):
    """r(m) = z(m) z(-m) for m in [-N/2, N/2 - 1]; samples on axis 0."""
    n = samples.shape[0] - 1
    half = n // 2
    return np.stack([samples[half + m] * samples[half - m] for m in range(-half, half)])


def _check_real(spectrum):
    resid = np.abs(spectrum.imag)
    bound = _IMAG_RTOL * np.maximum(1.0, np.abs(spectrum.real))
    if np.any(resid >= bound):
        worst = float(np.max(resid / bound))
        raise ArithmeticError(f"PWD imaginary residue exceeds tolerance (x{worst:.3g})")
    return spectrum.real


def pwd(window_values):
    """Local pseudo-Wigner distribution of one window of ``N + 1`` samples.

    ``W(k) = 2 * sum_m z(m) z(-m) exp(-2j*pi*k*m/N)`` over ``m`` and ``k`` in
    ``[-N/2, N/2 - 1]``, returned ordered by ``k``. The lag products are
    even in ``m`` (and the ``m = -N/2`` term has a real phase), so the
    result is real; the imaginary residue is checked and dropped.

    The lag is transformed with the plain length-N DFT kernel. Doubling
    it aliases the spectrum onto N/2 distinct bins, each repeated twice.
    """
    z = np.asarray(window_values, dtype=np.float64)
    if z.ndim != 1 or z.size < 3 or z.size % 2 == 0:
        raise ValueError(f"window must hold N + 1 samples with N even, got {z.size}")
    n = z.size - 1
    r = _lag_products(z)
    spectrum = 2.0 * (_lag_kernel(n) @ r)
    return _check_real(spectrum)


def normalize_pwd(w):
    """Square and normalize a PWD to unit sum over frequency."""
    w = np.asarray(w, dtype=np.float64)
    energy = w * w
    total = energy.sum()
    if not total > 0:
        raise DegenerateInputError("all-zero PWD cannot be normalized")
    return energy / total


def renyi_entropy(w_norm):
    """Order-3 Renyi entropy of a normalized PWD, scaled to [0, 1] by log2 N."""
    p = np.asarray(w_norm, dtype=np.float64)
    if p.ndim != 1 or p.size < 2:
        raise ValueError("normalized PWD must be 1-D with at least 2 bins")
    if abs(p.sum() - 1.0) > 1e-9 or np.any(p < 0):
        raise ValueError("renyi_entropy expects a normalized, non-negative distribution")
    value = -0.5 * np.log2(np.sum(p**3)) / np.log2(p.size)
    return float(min(max(value, 0.0), 1.0))


def _shifted_samples(image, window):
    """Stack of ``image`` shifted by each window offset: shape (N+1, H, W)."""
    h, w = image.shape
    rows = np.arange(h)
    cols = np.arange(w)
    out = np.empty((window.offsets.shape[0], h, w), dtype=np.float64)
    for j, (dx, dy) in enumerate(window.offsets):
        r = _mirror_index(rows + dy, h)
        c = _mirror_index(cols + dx, w)
        out[j] = image[np.ix_(r, c)]
    return out


def normalized_pwd_stack(image, theta, n=DEFAULT_WINDOW, *, bounded=True):
    """Normalized PWD of every pixel for one orientation.

    Returns
    -------
    spectra : ndarray of shape (N, H, W)
        Per-pixel distributions over ``k = -N/2 .. N/2 - 1``; all-zero where
        the PWD vanishes.
    live : ndarray of bool, shape (H, W)
        False where the PWD vanishes entirely (a black window).
    """
    image = check_gray_image(image, bounded=bounded)
    window = directional_offsets(theta, n)
    samples = _shifted_samples(image, window)
    r = _lag_products(samples)
    spectrum = 2.0 * np.tensordot(_lag_kernel(window.n), r, axes=(1, 0))
    w = _check_real(spectrum)
    energy = w * w
    total = energy.sum(axis=0)
    live = total > 0
    return energy / np.where(live, total, 1.0), live


def directional_entropy_map(image, theta, n=DEFAULT_WINDOW, *, bounded=True):
    """Per-pixel directional entropy ``R(n, theta)`` in [0, 1].

    Pixels whose PWD vanishes entirely (a black window) get entropy 0.
    Pass ``bounded=False`` to accept values outside [0, 1] (for example a
    globally rescaled image).
    """
    n = check_window(n)
    p, live = normalized_pwd_stack(image, theta, n, bounded=bounded)
    cube_sum = np.where(live, np.sum(p**3, axis=0), 1.0)
    entropy = -0.5 * np.log2(cube_sum) / np.log2(n)
    return np.clip(entropy, 0.0, 1.0)


def mean_directional_entropy(image, n=DEFAULT_WINDOW, *, bounded=True):
    """Image-mean entropy at each of the four octagon axes."""
    image = check_gray_image(image, bounded=bounded)
    values = np.array(
        [directional_entropy_map(image, theta, n, bounded=bounded).mean() for theta in ORIENTATIONS]
    )
    return DirectionalEntropy(ORIENTATIONS.copy(), values)
