"""Likelihood-ratio tests for rank-one spiked alternatives in six
high-dimensional models (SMD, PCA, SigD, REG0, REG, CCA)."""

from .ensembles import Case, CaseSpec, EigenSample, SpikeParam, sample_case
from .errors import ConfigError, DomainError, NumericalError, SpikedLRError, ValidationError
from .inference import limit_law, monte_carlo, power_envelope
from .lrengine import evaluate, lr_laplace, lr_quadrature, saddle_z0
from .spectra import LimitLaw, density, stieltjes, threshold

__version__ = "0.1.0"

__all__ = [
    "Case", "CaseSpec", "EigenSample", "SpikeParam", "sample_case",
    "ConfigError", "DomainError", "NumericalError", "SpikedLRError", "ValidationError",
    "limit_law", "monte_carlo", "power_envelope",
    "evaluate", "lr_laplace", "lr_quadrature", "saddle_z0",
    "LimitLaw", "density", "stieltjes", "threshold",
    "__version__",
]
