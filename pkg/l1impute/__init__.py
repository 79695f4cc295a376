from .baselines import linear_interpolation, trig_poly_regression
from .config import (
    BaselineConfig,
    BenchConfig,
    ConstantsConfig,
    DiagnosticsConfig,
    ImputeConfig,
    LoggingConfig,
    SolverConfig,
    load_config,
)
from .diagnostics import DiagnosticsReport, full_report
from .errors import ConfigError, DataError, DomainError, ImputeError, ParameterError
from .evaluation import EvaluationReport, evaluate
from .mask import Mask, generic_mask, mask_from_missing_values, uniform_mask
from .solver import SolverResult, impute_exact, impute_loose, impute_noisy, recover_spectrum
from .spectral import Domain, NormKind, Signal, dft, idft, norm

__all__ = [
    "BaselineConfig",
    "BenchConfig",
    "ConfigError",
    "ConstantsConfig",
    "DataError",
    "DiagnosticsConfig",
    "DiagnosticsReport",
    "Domain",
    "DomainError",
    "EvaluationReport",
    "ImputeConfig",
    "ImputeError",
    "LoggingConfig",
    "Mask",
    "NormKind",
    "ParameterError",
    "Signal",
    "SolverConfig",
    "SolverResult",
    "dft",
    "evaluate",
    "full_report",
    "generic_mask",
    "idft",
    "impute_exact",
    "impute_loose",
    "impute_noisy",
    "linear_interpolation",
    "load_config",
    "mask_from_missing_values",
    "norm",
    "recover_spectrum",
    "trig_poly_regression",
    "uniform_mask",
]
