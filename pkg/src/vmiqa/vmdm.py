"""No-contextual von Mises degradation measure (VMDM) and its learned transform.

Fitness is modelled as decaying exponentially with degradation,
``phi = phi0 * exp(-beta * D)``. One probe blur (5x5, sigma=1.5) defines one
degradation unit, which gives ``beta = ln(phi / phi_next)`` and hence
``D = -(ln phi - ln phi0) / beta``. All logarithms are natural.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_gray_image, check_paired, check_window
from .degradation import BLUR_SIZE, PROBE_SIGMA, convolve, gaussian_kernel
from .exceptions import UndefinedCorrelationError, UnstableMeasureError
from .stats import pearson, rankdata, spearman
from .vonmises import fit_image

DEFAULT_PHI0 = 0.88
DEFAULT_BETA_MIN = 1e-4
N_TERMS = 5
DEFAULT_RANGES = {"a": (0.0, 3.0), "b": (0.0, 5.0), "c": (-5.0, 5.0)}


def estimate_beta(phi, phi_next):
    """Decay constant for one degradation unit: ``ln(phi / phi_next)``."""
    phi, phi_next = float(phi), float(phi_next)
    if not (phi > 0 and phi_next > 0):
        raise ValueError(f"fitness values must be positive, got {phi}, {phi_next}")
    return math.log(phi / phi_next)


def degradation_from_fitness(phi, beta, phi0=DEFAULT_PHI0):
    """Invert ``ln phi = ln phi0 - beta D`` for ``D``."""
    if not phi0 > 0:
        raise ValueError(f"phi0 must be positive, got {phi0}")
    if beta == 0:
        raise ZeroDivisionError("beta is zero; degradation is undefined")
    return -(math.log(phi) - math.log(phi0)) / beta


def log1p_degradation(d):
    """``ln(1 + D)``; only defined for ``D > -1``."""
    if not d > -1.0:
        raise ValueError(f"log(1 + D) is undefined for D={d} <= -1")
    return math.log1p(d)


@dataclass(frozen=True)
class VmdmResult:
    phi: float
    phi_next: float
    beta: float
    d: float
    log_d: float


def vmdm_score(
    image,
    phi0=DEFAULT_PHI0,
    probe_kernel=None,
    *,
    n=8,
    beta_min=DEFAULT_BETA_MIN,
    bounded=True,
    **fit_options,
):
    """Score one image with the von Mises degradation measure.

    The image is fitted, blurred once with ``probe_kernel`` (default 5x5,
    sigma=1.5) and fitted again; the fitness drop fixes ``beta``.

    Raises
    ------
    UnstableMeasureError
        If ``beta <= beta_min``: the probe blur did not lower the fitness,
        so the exponential model does not describe this image.
    ValueError
        If ``D <= -1`` (``log(1 + D)`` undefined).
    """
    if not 0 < phi0 <= 1:
        raise ValueError(f"phi0 must lie in (0, 1], got {phi0}")
    n = check_window(n)
    image = check_gray_image(image, bounded=bounded)
    if probe_kernel is None:
        probe_kernel = gaussian_kernel(BLUR_SIZE, PROBE_SIGMA)
    phi = fit_image(image, n, bounded=bounded, **fit_options).phi
    # A unit-mass non-negative kernel keeps [0, 1] data in range; skipping
    # the clamp keeps rescaled inputs exactly scale-covariant.
    blurred = convolve(image, probe_kernel, clip=False)
    phi_next = fit_image(blurred, n, bounded=False, **fit_options).phi
    beta = estimate_beta(phi, phi_next)
    if beta <= beta_min:
        raise UnstableMeasureError(phi, phi_next, beta, beta_min)
    d = degradation_from_fitness(phi, beta, phi0)
    return VmdmResult(phi, phi_next, beta, d, log1p_degradation(d))


@dataclass(frozen=True)
class TransformParams:
    """Coefficients of ``D + sum_i a_i tanh(b_i (D + c_i))``."""

    a: tuple = (0.0,) * N_TERMS
    b: tuple = (0.0,) * N_TERMS
    c: tuple = (0.0,) * N_TERMS
    seed: int | None = None

    def __post_init__(self):
        for name in ("a", "b", "c"):
            vals = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, vals)
        if not (len(self.a) == len(self.b) == len(self.c)):
            raise ValueError("a, b and c must have the same length")
        if any(v < 0 for v in self.a) or any(v < 0 for v in self.b):
            raise ValueError("transform coefficients a_i and b_i must be >= 0")
        if any(math.isnan(v) for v in self.a + self.b + self.c):
            raise ValueError("transform coefficients must not be NaN")

    @classmethod
    def identity(cls, n_terms=N_TERMS, seed=None):
        return cls((0.0,) * n_terms, (0.0,) * n_terms, (0.0,) * n_terms, seed)

    def to_dict(self):
        return {"a": list(self.a), "b": list(self.b), "c": list(self.c), "seed": self.seed}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(data["a"]), tuple(data["b"]), tuple(data["c"]), data.get("seed"))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def transform(d, params):
    """Apply the monotone tanh transform; broadcasts over ``d``."""
    if not isinstance(params, TransformParams):
        params = TransformParams.from_dict(params)
    d_arr = np.asarray(d, dtype=np.float64)
    if not np.all(np.isfinite(d_arr)):
        raise ValueError("transform input must be finite")
    out = d_arr.copy()
    for a, b, c in zip(params.a, params.b, params.c):
        if a == 0.0:
            continue
        out = out + a * np.tanh(b * (d_arr + c))
    return out if out.ndim else float(out)


def _pearson_rows(xs, y):
    xc = xs - xs.mean(axis=1, keepdims=True)
    yc = y - y.mean()
    num = xc @ yc
    den = np.sqrt(np.sum(xc * xc, axis=1) * np.dot(yc, yc))
    with np.errstate(invalid="ignore", divide="ignore"):
        r = num / den
    return np.where(den > 0, r, -np.inf)


def correlation_objective(predictions, opinions):
    """Pearson + Spearman correlation; the quantity the learner maximizes."""
    return pearson(predictions, opinions) + spearman(predictions, opinions)


def _objective_rows(pred, y, y_rank):
    ranks = np.stack([rankdata(row) for row in pred])
    return _pearson_rows(pred, y) + _pearson_rows(ranks, y_rank)


def _draw_candidates(rng, iterations, n_terms, ranges):
    lo = np.array([ranges[k][0] for k in "abc"])
    hi = np.array([ranges[k][1] for k in "abc"])
    draws = rng.random((iterations, 3, n_terms))
    return lo[None, :, None] + (hi - lo)[None, :, None] * draws


@dataclass
class LearnResult:
    params: TransformParams
    objective: float
    identity_objective: float
    history: list = field(default_factory=list, repr=False)


def learn_transform(scores, opinions, *, iterations=2000, seed=0, ranges=None, n_terms=N_TERMS, batch=256):
    """Monte Carlo search for the transform maximizing Pearson + Spearman.

    Candidates are drawn uniformly from ``ranges`` (defaults: a in [0, 3],
    b in [0, 5], c in [-5, 5]) by ``numpy.random.default_rng(seed)``. The
    identity transform is candidate zero and a candidate replaces the
    incumbent only if strictly better, so the result never scores below the
    identity.

    Returns
    -------
    LearnResult
    """
    x, y = check_paired(scores, opinions, min_length=3)
    if np.ptp(y) == 0:
        raise UndefinedCorrelationError("opinion scores are constant")
    if np.ptp(x) == 0:
        raise UndefinedCorrelationError("scores are constant")
    if isinstance(iterations, bool) or int(iterations) != iterations or iterations < 0:
        raise ValueError(f"iterations must be a non-negative integer, got {iterations}")
    iterations = int(iterations)
    rngs = dict(DEFAULT_RANGES)
    if ranges:
        rngs.update({k: tuple(map(float, v)) for k, v in ranges.items()})
    for key in ("a", "b"):
        if rngs[key][0] < 0:
            raise ValueError(f"sampling range for {key} must be non-negative")

    y_rank = rankdata(y)
    best = TransformParams.identity(n_terms, seed)
    best_obj = float(_objective_rows(x[None, :], y, y_rank)[0])
    identity_obj = best_obj
    history = [best_obj]

    rng = np.random.default_rng(seed)
    cands = _draw_candidates(rng, iterations, n_terms, rngs)
    for start in range(0, iterations, batch):
        block = cands[start : start + batch]
        a, b, c = block[:, 0, :, None], block[:, 1, :, None], block[:, 2, :, None]
        pred = x[None, :] + np.sum(a * np.tanh(b * (x[None, None, :] + c)), axis=1)
        obj = _objective_rows(pred, y, y_rank)
        for i, value in enumerate(obj):
            if value > best_obj:
                best_obj = float(value)
                row = block[i]
                best = TransformParams(tuple(row[0]), tuple(row[1]), tuple(row[2]), seed)
            history.append(best_obj)
    return LearnResult(best, best_obj, identity_obj, history)
