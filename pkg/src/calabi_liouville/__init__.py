"""Special functions, per-mode ODE solutions and Liouville-type classification
for harmonic functions on Calabi model spaces."""

from .calabi_ode import FundamentalPair, HypergeomParams, Mode, fundamental_pair, hyper_params
from .errors import (
    ConvergenceError,
    DomainError,
    FitError,
    InconsistentDataError,
    NormalizationMissingError,
    NumericalError,
    PoleError,
    TailTooLargeError,
)
from .estimates import BoundCertificate
from .logvalue import LogValue
from .poisson import GrowthClass, ModeCoefficient, solve_mode
from .spectral import CalabiParams, SpectrumTable, toy_spectrum

__all__ = [
    "BoundCertificate",
    "CalabiParams",
    "ConvergenceError",
    "DomainError",
    "FitError",
    "FundamentalPair",
    "GrowthClass",
    "HypergeomParams",
    "InconsistentDataError",
    "LogValue",
    "Mode",
    "ModeCoefficient",
    "NormalizationMissingError",
    "NumericalError",
    "PoleError",
    "SpectrumTable",
    "TailTooLargeError",
    "fundamental_pair",
    "hyper_params",
    "solve_mode",
    "toy_spectrum",
]
