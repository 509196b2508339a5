"""Best-focus selection over an image stack by von Mises concentration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .vonmises import fit_image


@dataclass(frozen=True)
class AutofocusResult:
    best_index: int
    abs_kappa: np.ndarray
    fits: tuple

    @property
    def best_frame_number(self):
        """1-based position of the best frame."""
        return self.best_index + 1


def autofocus(images, n=8, **fit_options):
    """Pick the frame with the largest ``|kappa|``; ties go to the lowest index."""
    images = list(images)
    if not images:
        raise ValueError("autofocus needs at least one image")
    fits = tuple(fit_image(im, n, **fit_options) for im in images)
    abs_kappa = np.array([f.abs_kappa for f in fits])
    # argmax returns the first maximum
    return AutofocusResult(int(np.argmax(abs_kappa)), abs_kappa, fits)
