"""Exception types raised by vmiqa."""


class ImageDecodeError(ValueError):
    """A file could not be decoded as a supported raster image."""


class OpinionTableError(ValueError):
    """An opinion-score table is malformed."""


class DegenerateInputError(ValueError):
    """Input carries no usable structure (all-zero window, all-zero vectors)."""


class UndefinedCorrelationError(ValueError):
    """A correlation coefficient is undefined for the given samples."""


class UnstableMeasureError(ValueError):
    """The probe blur did not lower the fitness enough to estimate a decay.

    Attributes
    ----------
    phi, phi_next : float
        Fitness before and after the probe blur.
    """

    def __init__(self, phi, phi_next, beta, beta_min):
        self.phi = phi
        self.phi_next = phi_next
        self.beta = beta
        self.beta_min = beta_min
        super().__init__(
            f"decay constant beta={beta:.6g} <= {beta_min:g} "
            f"(phi={phi:.6g}, phi_next={phi_next:.6g}); "
            "exponential fitness model does not hold for this image"
        )
