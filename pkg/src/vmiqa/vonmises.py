"""Axial (bimodal) von Mises fit of the four directional entropies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import ORIENTATIONS, DirectionalEntropy, mean_directional_entropy
from .exceptions import DegenerateInputError

DEFAULT_STEP = 0.01
DEFAULT_MAX_ITER = 10_000
KAPPA_CAP = 1e6

_SERIES_LIMIT = 50.0
# Asymptotic coefficients of I0(x) e^-x sqrt(2 pi x): prod_{i<j}(2i+1)^2 / (j! 8^j)
_ASYMPTOTIC_TERMS = 12


def _i0_series(ax):
    # sum (x/2)^(2j) / (j!)^2; stop once a term is below 1e-16 of the sum
    q = 0.25 * ax * ax
    term = 1.0
    total = 1.0
    j = 0
    while True:
        j += 1
        term *= q / (j * j)
        total += term
        if term < 1e-16 * total:
            return total


def _i0e_asymptotic(ax):
    coef = 1.0
    total = 1.0
    for j in range(1, _ASYMPTOTIC_TERMS + 1):
        coef *= (2 * j - 1) ** 2 / (8.0 * j * ax)
        total += coef
    return total / math.sqrt(2.0 * math.pi * ax)


def bessel_i0(x):
    """Modified Bessel function of the first kind, order 0.

    Power series summed until the relative term drops below 1e-16.
    Overflows to ``inf`` beyond |x| ~ 713.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"bessel_i0 needs a finite argument, got {x}")
    ax = abs(x)
    if ax <= _SERIES_LIMIT:
        return _i0_series(ax)
    try:
        return _i0e_asymptotic(ax) * math.exp(ax)
    except OverflowError:
        return math.inf


def bessel_i0e(x):
    """Exponentially scaled ``I0(x) * exp(-|x|)``; finite for any finite x."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"bessel_i0e needs a finite argument, got {x}")
    ax = abs(x)
    if ax <= _SERIES_LIMIT:
        return _i0_series(ax) * math.exp(-ax)
    return _i0e_asymptotic(ax)


def vm_density(theta, mu, kappa):
    """Axial von Mises density ``cosh(kappa cos(theta - mu)) / (2 pi I0(kappa))``.

    Evaluated in exponentially scaled form so large ``|kappa|`` does not
    overflow. Broadcasts over ``theta``.
    """
    kappa = float(kappa)
    mu = float(mu)
    if not (math.isfinite(kappa) and math.isfinite(mu)):
        raise ValueError("mu and kappa must be finite")
    theta = np.asarray(theta, dtype=np.float64)
    ak = abs(kappa)
    c = np.cos(theta - mu)
    # cosh(k c) e^-|k| = (e^{|k|(c-1)} + e^{-|k|(c+1)}) / 2
    scaled = 0.5 * (np.exp(ak * (c - 1.0)) + np.exp(-ak * (c + 1.0)))
    out = scaled / (2.0 * math.pi * bessel_i0e(ak))
    return out if out.ndim else float(out)


def entropy_vectors(values, angles=ORIENTATIONS):
    """Cartesian form ``(R_i cos theta_i, R_i sin theta_i)`` as a (4, 2) array."""
    values = np.asarray(values, dtype=np.float64)
    angles = np.asarray(angles, dtype=np.float64)
    return np.stack([values * np.cos(angles), values * np.sin(angles)], axis=1)


def estimate_mu(vectors):
    """Mean axis from the leading right singular vector of the (4, 2) matrix.

    The singular vector is taken with non-negative y (non-negative x on the
    x axis), so the result lies in ``[0, pi)``. An isotropic spectrum
    (``s1 - s2 < 1e-9 s1``) has no preferred axis and returns ``pi/2``.
    """
    x = np.asarray(vectors, dtype=np.float64)
    if not np.any(x):
        raise DegenerateInputError("all entropy vectors are zero")
    _, s, vt = np.linalg.svd(x, full_matrices=False)
    if s[0] - s[1] < 1e-9 * s[0]:
        return math.pi / 2
    v = vt[0]
    if v[1] < 0 or (v[1] == 0 and v[0] < 0):
        v = -v
    mu = math.atan2(v[1], v[0])
    return 0.0 if mu >= math.pi else mu


def estimate_kappa_init(vectors):
    """Dhillon's starting value ``1 / (2 (1 - Rbar))``, ``Rbar = |sum R_i| / 4``.

    Returns
    -------
    kappa : float
    saturated : bool
        True when ``Rbar`` is within 1e-12 of 1 and ``kappa`` was capped.
    """
    x = np.asarray(vectors, dtype=np.float64)
    rbar = float(np.linalg.norm(x.sum(axis=0))) / x.shape[0]
    if rbar >= 1.0 - 1e-12:
        return KAPPA_CAP, True
    return 1.0 / (2.0 * (1.0 - rbar)), False


def linear_fit_error(values, mu, kappa, angles=ORIENTATIONS):
    """Least-squares ``R_i = A f(theta_i) + B`` and ``eps = |(A, B) - (1, 0)|``.

    When the density samples are (numerically) constant the slope is
    undefined; then ``A = 0`` and ``B = mean(R)``.
    """
    r = np.asarray(values, dtype=np.float64)
    f = vm_density(np.asarray(angles, dtype=np.float64), mu, kappa)
    f_mean = f.mean()
    f_var = np.mean((f - f_mean) ** 2)
    if f_var < 1e-12:
        a, b = 0.0, float(r.mean())
    else:
        a = float(np.mean((f - f_mean) * (r - r.mean())) / f_var)
        b = float(r.mean() - a * f_mean)
    return a, b, math.hypot(a - 1.0, b)


def fitness(epsilon):
    """``phi = exp(-epsilon)``: 1 for a perfect fit, tending to 0."""
    epsilon = float(epsilon)
    if not epsilon >= 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    return math.exp(-epsilon)


@dataclass(frozen=True)
class VonMisesFit:
    mu: float
    kappa: float
    epsilon: float
    phi: float
    a_coef: float
    b_coef: float
    iterations: int
    degenerate: bool = False
    saturated: bool = False
    epsilon_trace: tuple = field(default=(), repr=False, compare=False)

    @property
    def abs_kappa(self):
        return abs(self.kappa)

    @property
    def mu_degrees(self):
        """Mean axis in degrees, folded into [-90, 90)."""
        deg = math.degrees(self.mu)
        return (deg + 90.0) % 180.0 - 90.0


def _degenerate_fit(values, mu=math.pi / 2):
    a, b, eps = linear_fit_error(values, mu, 0.0)
    return VonMisesFit(mu, 0.0, eps, fitness(eps), a, b, 0, degenerate=True, epsilon_trace=(eps,))


def fit_vonmises(
    entropy,
    *,
    step=DEFAULT_STEP,
    max_iter=DEFAULT_MAX_ITER,
    refine=True,
    min_step=1e-7,
    kappa0=None,
):
    """Fit ``(mu, kappa)`` of the axial von Mises density to four entropies.

    ``mu`` is fixed first from the SVD of the entropy vectors. ``kappa``
    starts at Dhillon's estimate (or ``kappa0``) and follows the
    multiplicative law ``kappa <- (1 +/- step) kappa``: each iteration moves
    to whichever neighbour has strictly lower error, and the loop stops
    when neither improves. With ``refine=True`` the step is then halved and
    the walk resumed, until the step falls below ``min_step``; this pins
    the minimum below the 1% grid of the fixed-step walk.

    Parameters
    ----------
    entropy : DirectionalEntropy or array_like of 4 floats
        Mean directional entropies at pi/8, 3pi/8, 5pi/8, 7pi/8.
    step : float, default=0.01
        Relative update C.
    max_iter : int, default=10000
        Cap on accepted-or-rejected iterations across all step sizes.
    refine : bool, default=True
        Halve the step after a stall instead of stopping.
    kappa0 : float, optional
        Override the starting concentration.

    Returns
    -------
    VonMisesFit
    """
    if isinstance(entropy, DirectionalEntropy):
        values, angles = entropy.values, entropy.angles
    else:
        values, angles = np.asarray(entropy, dtype=np.float64), ORIENTATIONS
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (4,) or not np.all(np.isfinite(values)):
        raise ValueError("need four finite directional entropy values")
    if not 0 < step < 1:
        raise ValueError(f"step must lie in (0, 1), got {step}")

    if np.ptp(values) <= 1e-12:
        return _degenerate_fit(values)

    vectors = entropy_vectors(values, angles)
    mu = estimate_mu(vectors)
    saturated = False
    if kappa0 is None:
        kappa, saturated = estimate_kappa_init(vectors)
    else:
        kappa = float(kappa0)
    if kappa == 0.0:
        return _degenerate_fit(values, mu)

    a, b, eps = linear_fit_error(values, mu, kappa, angles)
    trace = [eps]
    iterations = 0
    c = float(step)
    while iterations < max_iter:
        up = kappa * (1.0 + c)
        down = kappa * (1.0 - c)
        fit_up = linear_fit_error(values, mu, up, angles)
        fit_down = linear_fit_error(values, mu, down, angles)
        iterations += 1
        best_kappa, best = (up, fit_up) if fit_up[2] < fit_down[2] else (down, fit_down)
        if best[2] < eps:
            kappa = best_kappa
            a, b, eps = best
            trace.append(eps)
            continue
        # equal errors on both sides count as a minimum
        if not refine or c / 2.0 < min_step:
            break
        c /= 2.0

    return VonMisesFit(
        mu=mu,
        kappa=kappa,
        epsilon=eps,
        phi=fitness(eps),
        a_coef=a,
        b_coef=b,
        iterations=iterations,
        degenerate=False,
        saturated=saturated,
        epsilon_trace=tuple(trace),
    )


def fit_image(image, n=8, *, bounded=True, **fit_options):
    """Directional entropies of ``image`` followed by ``fit_vonmises``."""
    return fit_vonmises(mean_directional_entropy(image, n, bounded=bounded), **fit_options)
