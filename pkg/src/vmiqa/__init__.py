"""No-reference image quality from the von Mises distribution of directional entropy."""

from .degradation import add_gaussian_noise, convolve, degradation_series, gaussian_kernel
from .entropy import (
    ORIENTATIONS,
    DirectionalEntropy,
    DirectionalWindow,
    directional_entropy_map,
    directional_offsets,
    extract_window,
    mean_directional_entropy,
    normalize_pwd,
    pwd,
    renyi_entropy,
)
from .estimators import DirectionalEntropyTransformer, TanhTransform, VMDMScorer, VonMisesQuality
from .exceptions import (
    DegenerateInputError,
    ImageDecodeError,
    OpinionTableError,
    UndefinedCorrelationError,
    UnstableMeasureError,
)
from .focus import AutofocusResult, autofocus
from .image_io import OpinionTable, load_image, load_opinion_table, rgb_to_luma, write_pgm
from .stats import kendall, pearson, rankdata, spearman
from .vmdm import (
    TransformParams,
    VmdmResult,
    estimate_beta,
    learn_transform,
    transform,
    vmdm_score,
)
from .vonmises import (
    VonMisesFit,
    bessel_i0,
    entropy_vectors,
    estimate_kappa_init,
    estimate_mu,
    fit_image,
    fit_vonmises,
    fitness,
    linear_fit_error,
    vm_density,
)

__version__ = "0.1.0"
