"""scikit-learn style estimators over the functional API.

The feature extractors take ``X`` as a sequence of 2-D grayscale images
(values in [0, 1]) and are stateless: ``fit`` only validates its input.
``TanhTransform`` is a genuine learner mapping VMDM scores onto opinion
scores.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_images, check_paired, check_window
from .degradation import BLUR_SIZE, PROBE_SIGMA, gaussian_kernel
from .entropy import mean_directional_entropy
from .exceptions import UnstableMeasureError
from .stats import pearson, spearman
from .vmdm import DEFAULT_BETA_MIN, DEFAULT_PHI0, DEFAULT_RANGES, N_TERMS, learn_transform, transform, vmdm_score
from .vonmises import DEFAULT_MAX_ITER, DEFAULT_STEP, fit_vonmises


class _ImageTransformer(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        check_window(self.window)
        check_images(X)
        self.n_features_out_ = len(self.feature_names_)
        return self

    def get_feature_names_out(self, input_features=None):
        return np.asarray(self.feature_names_, dtype=object)


class DirectionalEntropyTransformer(_ImageTransformer):
    """Map each image to its four mean directional entropies.

    Parameters
    ----------
    window : int, default=8
        Even window length N (windows hold N + 1 pixels).
    """

    feature_names_ = ("entropy_pi8", "entropy_3pi8", "entropy_5pi8", "entropy_7pi8")

    def __init__(self, window=8):
        self.window = window

    def transform(self, X):
        n = check_window(self.window)
        return np.array([mean_directional_entropy(im, n).values for im in check_images(X)])


class VonMisesQuality(_ImageTransformer):
    """Contextual quality features ``[kappa, |kappa|, mu, epsilon, phi]``.

    Higher ``|kappa|`` marks the sharper, cleaner member of a set of
    degraded versions of one scene. ``predict`` returns ``|kappa|``.

    Parameters
    ----------
    window : int, default=8
    step : float, default=0.01
        Relative kappa update of the descent.
    max_iter : int, default=10000
    refine : bool, default=True
        Halve the step after a stall.
    """

    feature_names_ = ("kappa", "abs_kappa", "mu", "epsilon", "phi")

    def __init__(self, window=8, step=DEFAULT_STEP, max_iter=DEFAULT_MAX_ITER, refine=True):
        self.window = window
        self.step = step
        self.max_iter = max_iter
        self.refine = refine

    def _fits(self, X):
        n = check_window(self.window)
        return [
            fit_vonmises(
                mean_directional_entropy(im, n),
                step=self.step,
                max_iter=self.max_iter,
                refine=self.refine,
            )
            for im in check_images(X)
        ]

    def transform(self, X):
        return np.array([[f.kappa, f.abs_kappa, f.mu, f.epsilon, f.phi] for f in self._fits(X)])

    def predict(self, X):
        return self.transform(X)[:, 1]


class VMDMScorer(_ImageTransformer):
    """No-contextual degradation score ``log(1 + D)`` (or ``D``).

    Images for which the measure is unstable (the probe blur does not lower
    the fitness) yield NaN unless ``on_unstable="raise"``.

    Parameters
    ----------
    phi0 : float, default=0.88
        Fitness of an undegraded image.
    probe_size, probe_sigma : int, float, default=5, 1.5
        Probe blur kernel.
    beta_min : float, default=1e-4
    log : bool, default=True
        Return ``log(1 + D)`` instead of ``D``.
    on_unstable : {"nan", "raise"}, default="nan"
    """

    feature_names_ = ("log_d",)

    def __init__(
        self,
        phi0=DEFAULT_PHI0,
        window=8,
        probe_size=BLUR_SIZE,
        probe_sigma=PROBE_SIGMA,
        beta_min=DEFAULT_BETA_MIN,
        log=True,
        on_unstable="nan",
    ):
        self.phi0 = phi0
        self.window = window
        self.probe_size = probe_size
        self.probe_sigma = probe_sigma
        self.beta_min = beta_min
        self.log = log
        self.on_unstable = on_unstable

    def get_feature_names_out(self, input_features=None):
        return np.asarray(["log_d" if self.log else "d"], dtype=object)

    def score_images(self, X):
        """Full ``VmdmResult`` per image (``None`` where unstable)."""
        if self.on_unstable not in ("nan", "raise"):
            raise ValueError(f"on_unstable must be 'nan' or 'raise', got {self.on_unstable!r}")
        kernel = gaussian_kernel(self.probe_size, self.probe_sigma)
        n = check_window(self.window)
        results = []
        for im in check_images(X):
            try:
                results.append(vmdm_score(im, self.phi0, kernel, n=n, beta_min=self.beta_min))
            except (UnstableMeasureError, ValueError):
                if self.on_unstable == "raise":
                    raise
                results.append(None)
        return results

    def transform(self, X):
        out = [np.nan if r is None else (r.log_d if self.log else r.d) for r in self.score_images(X)]
        return np.asarray(out, dtype=np.float64)[:, None]


def _column(X):
    x = np.asarray(X, dtype=np.float64)
    if x.ndim == 2:
        if x.shape[1] != 1:
            raise ValueError(f"expected a single score column, got shape {x.shape}")
        x = x[:, 0]
    elif x.ndim != 1:
        raise ValueError(f"expected 1-D scores, got ndim={x.ndim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("scores must be finite")
    return x


class TanhTransform(RegressorMixin, TransformerMixin, BaseEstimator):
    """Learn ``D + sum_i a_i tanh(b_i (D + c_i))`` against opinion scores.

    ``fit`` runs a seeded uniform random search that maximizes Pearson plus
    Spearman correlation on the training pairs.

    Parameters
    ----------
    n_terms : int, default=5
    n_iter : int, default=2000
        Number of random candidates.
    random_state : int, default=0
    a_range, b_range, c_range : tuple of float
        Uniform sampling bounds.

    Attributes
    ----------
    params_ : TransformParams
    objective_ : float
        Training Pearson + Spearman of the learned transform.
    identity_objective_ : float
        Training Pearson + Spearman of the untransformed scores.
    """

    def __init__(
        self,
        n_terms=N_TERMS,
        n_iter=2000,
        random_state=0,
        a_range=DEFAULT_RANGES["a"],
        b_range=DEFAULT_RANGES["b"],
        c_range=DEFAULT_RANGES["c"],
    ):
        self.n_terms = n_terms
        self.n_iter = n_iter
        self.random_state = random_state
        self.a_range = a_range
        self.b_range = b_range
        self.c_range = c_range

    def fit(self, X, y):
        x = _column(X)
        x, y = check_paired(x, y, min_length=3)
        result = learn_transform(
            x,
            y,
            iterations=self.n_iter,
            seed=self.random_state,
            ranges={"a": self.a_range, "b": self.b_range, "c": self.c_range},
            n_terms=self.n_terms,
        )
        self.params_ = result.params
        self.objective_ = result.objective
        self.identity_objective_ = result.identity_objective
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        return np.atleast_1d(transform(_column(X), self.params_))[:, None]

    def predict(self, X):
        return self.transform(X)[:, 0]

    def score(self, X, y, sample_weight=None):
        """Pearson + Spearman correlation of predictions with ``y``."""
        pred = self.predict(X)
        return pearson(pred, y) + spearman(pred, y)
