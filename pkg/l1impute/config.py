import os
import re
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import yaml

from .errors import ConfigError, ParameterError


_ENV_PATTERN = re.compile(r"\$\{([A-Z0-9_]+)\}")
CONSTANTS_ENV_VAR = "L1IMPUTE_CONSTANTS"


def _interpolate_env(value: Any) -> Any:
    if isinstance(value, str):
        def _replace(match: re.Match) -> str:
            var = match.group(1)
            return os.environ.get(var, "")
        return _ENV_PATTERN.sub(_replace, value)
    if isinstance(value, list):
        return [_interpolate_env(v) for v in value]
    if isinstance(value, dict):
        return {k: _interpolate_env(v) for k, v in value.items()}
    return value


@dataclass
class SolverConfig:
    max_iters: int = 50000
    tol: float = 1e-9
    relaxation: float = 1.0
    # Multiplies the median spectral magnitude of the starting point.
    threshold_step: float = 1.0
    seed: int = 0
    feasibility_tol: float = 1e-8

    def validate(self) -> "SolverConfig":
        if int(self.max_iters) < 1:
            raise ParameterError("max_iters must be >= 1")
        if not float(self.tol) > 0:
            raise ParameterError("tol must be > 0")
        if not (0.0 < float(self.relaxation) < 2.0):
            raise ParameterError("relaxation must lie in (0, 2)")
        if not float(self.threshold_step) > 0:
            raise ParameterError("threshold_step must be > 0")
        if not float(self.feasibility_tol) > 0:
            raise ParameterError("feasibility_tol must be > 0")
        return self


@dataclass
class ConstantsConfig:
    # Theoretical constants, user-supplied: the theory gives no numeric values.
    gamma0: float = 1.0
    c_t: float = 1.0
    c_q: float = 1.0
    q: float = 4.0


@dataclass
class DiagnosticsConfig:
    s_size: Optional[int] = None
    t: float = 0.1
    p: Optional[float] = None
    alpha: float = 0.0
    noise_delta: float = 0.0
    support_tol: float = 1e-9
    mae_target: float = 0.2
    bourgain_eps: float = 1.0


@dataclass
class BaselineConfig:
    harmonics: Optional[int] = None
    cyclic: bool = False


@dataclass
class LoggingConfig:
    level: str = "INFO"


def log_timestamp() -> str:
    """UTC timestamp for the ts= field of log lines."""
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class BenchConfig:
    dataset: str = "beer"
    limit: int = 300
    methods: List[str] = field(default_factory=lambda: ["linear", "l1-loose"])
    mask_model: str = "uniform"
    p: float = 0.5
    size: Optional[int] = None
    seeds: List[int] = field(default_factory=lambda: list(range(20)))
    alpha_grid: List[float] = field(default_factory=lambda: [0.01])
    noise_delta_grid: List[float] = field(default_factory=lambda: [0.1])
    workers: int = 4
    output_dir: str = "bench-out"


@dataclass
class ImputeConfig:
    solver: SolverConfig
    constants: ConstantsConfig
    diagnostics: DiagnosticsConfig
    baselines: BaselineConfig
    bench: BenchConfig
    logging: LoggingConfig


def default_config() -> ImputeConfig:
    return ImputeConfig(
        solver=SolverConfig(),
        constants=load_constants(resolve_constants_path()),
        diagnostics=DiagnosticsConfig(),
        baselines=BaselineConfig(),
        bench=BenchConfig(),
        logging=LoggingConfig(),
    )


def _load_section(data: Dict[str, Any], key: str, cls, defaults=None):
    section = data.get(key, {})
    base = dict(defaults.__dict__) if defaults is not None else {}
    if section is None or not isinstance(section, dict):
        return cls(**base)
    allowed = {f.name for f in fields(cls)}
    base.update({k: v for k, v in section.items() if k in allowed})
    try:
        return cls(**base)
    except TypeError as exc:
        raise ConfigError(f"invalid {key} section ({exc})")


def _coerce_numbers(obj, numeric: Dict[str, type]) -> None:
    for name, kind in numeric.items():
        value = getattr(obj, name)
        if value is None:
            continue
        try:
            setattr(obj, name, kind(value))
        except (TypeError, ValueError):
            raise ConfigError(f"{type(obj).__name__}.{name} must be {kind.__name__}, got {value!r}")


def resolve_constants_path() -> str:
    override = os.environ.get(CONSTANTS_ENV_VAR)
    if override:
        return override
    base_dir = os.path.dirname(os.path.abspath(__file__))
    return os.path.join(base_dir, "config", "constants.yaml")


def load_constants(path: str) -> ConstantsConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = yaml.safe_load(handle) or {}
    except OSError as exc:
        raise ConfigError(f"cannot read constants file {path} ({exc})")
    except yaml.YAMLError as exc:
        raise ConfigError(f"constants file {path} is not valid YAML ({exc})")
    if not isinstance(raw, dict):
        raise ConfigError(f"constants file {path} must hold a mapping")
    raw = _interpolate_env(raw)
    section = raw.get("constants", raw)
    constants = _load_section({"constants": section}, "constants", ConstantsConfig)
    _coerce_numbers(constants, {"gamma0": float, "c_t": float, "c_q": float, "q": float})
    return constants


def config_from_dict(raw: Dict[str, Any]) -> ImputeConfig:
    raw = _interpolate_env(raw or {})
    constants_defaults = load_constants(resolve_constants_path())

    solver = _load_section(raw, "solver", SolverConfig)
    _coerce_numbers(
        solver,
        {
            "max_iters": int,
            "tol": float,
            "relaxation": float,
            "threshold_step": float,
            "seed": int,
            "feasibility_tol": float,
        },
    )
    try:
        solver.validate()
    except ParameterError as exc:
        raise ConfigError(str(exc))

    constants = _load_section(raw, "constants", ConstantsConfig, defaults=constants_defaults)
    _coerce_numbers(constants, {"gamma0": float, "c_t": float, "c_q": float, "q": float})

    diagnostics = _load_section(raw, "diagnostics", DiagnosticsConfig)
    _coerce_numbers(
        diagnostics,
        {
            "s_size": int,
            "t": float,
            "p": float,
            "alpha": float,
            "noise_delta": float,
            "support_tol": float,
            "mae_target": float,
            "bourgain_eps": float,
        },
    )

    baselines = _load_section(raw, "baselines", BaselineConfig)
    _coerce_numbers(baselines, {"harmonics": int})

    bench = _load_section(raw, "bench", BenchConfig)
    _coerce_numbers(bench, {"limit": int, "p": float, "size": int, "workers": int})
    if not isinstance(bench.methods, list) or not bench.methods:
        raise ConfigError("bench.methods must be a non-empty list")
    if not isinstance(bench.seeds, list) or not bench.seeds:
        raise ConfigError("bench.seeds must be a non-empty list")
    try:
        bench.seeds = [int(s) for s in bench.seeds]
        bench.alpha_grid = [float(a) for a in (bench.alpha_grid or [])]
        bench.noise_delta_grid = [float(d) for d in (bench.noise_delta_grid or [])]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bench grids must hold numbers ({exc})")
    if bench.mask_model not in {"generic", "uniform"}:
        raise ConfigError(f"bench.mask_model must be 'generic' or 'uniform', got {bench.mask_model!r}")

    return ImputeConfig(
        solver=solver,
        constants=constants,
        diagnostics=diagnostics,
        baselines=baselines,
        bench=bench,
        logging=_load_section(raw, "logging", LoggingConfig),
    )


def load_config(path: Optional[str]) -> ImputeConfig:
    if not path:
        return default_config()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = yaml.safe_load(handle) or {}
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path} ({exc})")
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML ({exc})")
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a mapping")
    config = config_from_dict(raw)
    dataset = config.bench.dataset
    if dataset and dataset != "beer" and not os.path.isabs(dataset):
        base_dir = os.path.dirname(os.path.abspath(path))
        config.bench.dataset = os.path.normpath(os.path.join(base_dir, dataset))
    return config
