"""Pearson, Spearman and Kendall tau-b correlation coefficients."""

from __future__ import annotations

import numpy as np

from ._validation import check_paired
from .exceptions import UndefinedCorrelationError


def rankdata(values):
    """1-based ranks; tied values share the average of their ranks."""
    a = np.asarray(values, dtype=np.float64).ravel()
    order = np.argsort(a, kind="mergesort")
    sorted_a = a[order]
    # boundaries of runs of equal values
    new_run = np.concatenate(([True], sorted_a[1:] != sorted_a[:-1]))
    run_id = np.cumsum(new_run) - 1
    starts = np.flatnonzero(new_run)
    ends = np.concatenate((starts[1:], [a.size])) - 1
    avg = 0.5 * (starts + ends) + 1.0
    ranks = np.empty(a.size, dtype=np.float64)
    ranks[order] = avg[run_id]
    return ranks


def pearson(x, y):
    """Sample Pearson product-moment correlation."""
    x, y = check_paired(x, y)
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = np.dot(xc, xc)
    syy = np.dot(yc, yc)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelationError("Pearson correlation undefined: zero variance")
    r = np.dot(xc, yc) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


def spearman(x, y):
    """Spearman rank correlation with average ranks for ties."""
    x, y = check_paired(x, y)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError("Spearman correlation undefined: constant sample")
    return pearson(rankdata(x), rankdata(y))


def kendall(x, y):
    """Kendall tau-b.

    ``(C - D) / sqrt((n0 - tx)(n0 - ty))`` with ``n0 = n(n-1)/2`` and
    ``tx``, ``ty`` the number of pairs tied in x and in y.
    """
    x, y = check_paired(x, y)
    n = x.size
    iu = np.triu_indices(n, k=1)
    sx = np.sign(x[:, None] - x[None, :])[iu]
    sy = np.sign(y[:, None] - y[None, :])[iu]
    n0 = n * (n - 1) // 2
    tx = int(np.count_nonzero(sx == 0))
    ty = int(np.count_nonzero(sy == 0))
    denom = (n0 - tx) * (n0 - ty)
    if denom == 0:
        raise UndefinedCorrelationError("Kendall tau-b undefined: all pairs tied")
    s = float(np.sum(sx * sy))
    return float(np.clip(s / np.sqrt(float(denom)), -1.0, 1.0))


def correlation_report(x, y):
    """All three coefficients as a dict, signed."""
    return {"pearson": pearson(x, y), "spearman": spearman(x, y), "kendall": kendall(x, y)}
