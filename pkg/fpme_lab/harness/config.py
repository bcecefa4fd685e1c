import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Optional, Tuple

from fpme_lab.errors import ConfigurationError, FpmeError
from fpme_lab.fracops import TestFunction
from fpme_lab.harness.readers import ConfigParser, ini_reader
from fpme_lab.kernel import check_gamma
from fpme_lab.measures import ProfileSpec

__all__ = [
    "MODES",
    "SolverSettings",
    "InvarianceSettings",
    "OperatorSettings",
    "RatesAuditSettings",
    "ExperimentConfig",
    "config_search_paths",
    "config_from_parser",
    "load_config",
]

logger = logging.getLogger(__name__)

MODES = ("hydro", "invariance", "operators", "pde", "rates-audit")

_MISSING = object()


def config_search_paths() -> list:
    """The working directory first, then the bundled defaults."""
    return [Path.cwd(), Path(__file__).parent]


def _listed(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


@dataclass(frozen=True)
class SolverSettings:
    grid_size: int = 1024
    dt: Optional[float] = None
    dealias: bool = False
    refinements: int = 2


@dataclass(frozen=True)
class InvarianceSettings:
    ring_size: int = 8
    m_values: Tuple[int, ...] = (1, 2, 3)
    gamma_values: Tuple[float, ...] = (0.5, 1.0, 1.5)
    densities: Tuple[float, ...] = (0.3, 0.5)
    dirichlet_size: int = 5
    dirichlet_samples: int = 20
    dirichlet_m_values: Tuple[int, ...] = (2, 3)
    frequency_size: int = 8
    frequency_gamma: float = 1.0
    frequency_events: int = 100_000
    sigmas: float = 3.0


@dataclass(frozen=True)
class RatesAuditSettings:
    m_values: Tuple[int, ...] = (2, 3, 4)
    window: int = 14
    max_distance: int = 5
    floor_window: int = 10


@dataclass(frozen=True)
class OperatorSettings:
    n_list: Tuple[int, ...] = (256, 512, 1024, 2048, 4096, 8192)
    gamma_values: Tuple[float, ...] = (0.5, 1.0, 1.5)
    slope_tolerance: float = 0.3


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything one harness run needs.

    ExperimentConfig(mode="hydro", gamma=1.0, m=2, n_list=(256, 512), ...)

    Built from an INI file by `load_config`; every field has a desk-scale
    default so a bare `ExperimentConfig(mode=...)` is runnable.
    """

    mode: str = "hydro"
    gamma: float = 1.0
    m: int = 2
    n_list: Tuple[int, ...] = (256, 512, 1024, 2048)
    T: float = 0.5
    snapshot_times: Tuple[float, ...] = (0.0, 0.25, 0.5)
    ensemble_size: int = 200
    master_seed: int = 0
    torus_length: float = 2.0
    output_dir: Path = Path("fpme_reports")
    deltas: Tuple[float, ...] = (0.1, 0.05, 0.02)
    martingale: bool = False
    martingale_steps: int = 32
    profile: ProfileSpec = field(default_factory=ProfileSpec)
    test_functions: Tuple[TestFunction, ...] = (TestFunction("gaussian_bump", name="bump"),)
    solver: SolverSettings = field(default_factory=SolverSettings)
    invariance: InvarianceSettings = field(default_factory=InvarianceSettings)
    operators: OperatorSettings = field(default_factory=OperatorSettings)
    rates_audit: RatesAuditSettings = field(default_factory=RatesAuditSettings)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError("experiment.mode", f"must be one of {', '.join(MODES)}")
        try:
            check_gamma(self.gamma)
        except FpmeError as error:
            raise ConfigurationError("experiment.gamma", str(error)) from error
        if int(self.m) != self.m or self.m < 1:
            raise ConfigurationError("experiment.m", f"must be a positive integer, got {self.m}")

        n_list = tuple(int(n) for n in self.n_list)
        if not n_list or any(n < 2 for n in n_list) or list(n_list) != sorted(set(n_list)):
            raise ConfigurationError("experiment.n_list", f"must be strictly ascending and >= 2, got {n_list}")
        object.__setattr__(self, "n_list", n_list)

        if not self.T > 0:
            raise ConfigurationError("experiment.T", f"must be positive, got {self.T}")
        times = tuple(sorted(set(float(t) for t in self.snapshot_times) | {0.0, float(self.T)}))
        if times[0] < 0 or times[-1] > self.T:
            raise ConfigurationError("experiment.snapshot_times", f"must lie in [0, {self.T}]")
        object.__setattr__(self, "snapshot_times", times)

        if self.ensemble_size < 1:
            raise ConfigurationError("experiment.ensemble_size", "must be >= 1")
        if self.martingale_steps < 1:
            raise ConfigurationError("experiment.martingale_steps", "must be >= 1")
        if self.master_seed < 0:
            raise ConfigurationError("experiment.master_seed", "must be nonnegative")
        if self.solver.refinements < 2:
            raise ConfigurationError("solver.refinements", f"must be >= 2, got {self.solver.refinements}")
        if not self.test_functions:
            raise ConfigurationError("test_function", "at least one test function is required")

        labels = [G.label for G in self.test_functions]
        if len(set(labels)) != len(labels):
            raise ConfigurationError("test_function", f"duplicate names in {labels}")

        try:
            self.profile.check_torus(self.torus_length)
        except FpmeError as error:
            raise ConfigurationError("profile", str(error)) from error

        object.__setattr__(self, "output_dir", Path(self.output_dir))

    def to_dict(self) -> dict:
        """Plain, JSON-ready parameters in a stable order."""
        return {
            "mode": self.mode,
            "gamma": self.gamma,
            "m": self.m,
            "n_list": list(self.n_list),
            "T": self.T,
            "snapshot_times": list(self.snapshot_times),
            "ensemble_size": self.ensemble_size,
            "master_seed": self.master_seed,
            "torus_length": self.torus_length,
            "deltas": list(self.deltas),
            "martingale": self.martingale,
            "martingale_steps": self.martingale_steps,
            "profile": self.profile.to_dict(),
            "test_functions": [_test_function_dict(G) for G in self.test_functions],
            "solver": vars_of(self.solver),
            "invariance": vars_of(self.invariance),
            "operators": vars_of(self.operators),
            "rates_audit": vars_of(self.rates_audit),
        }


def vars_of(settings) -> dict:
    return {key: list(value) if isinstance(value, tuple) else value for key, value in vars(settings).items()}


def _test_function_dict(G: TestFunction) -> dict:
    return {
        "name": G.label,
        "family": G.family,
        "center": G.center,
        "width": G.width,
        "k": G.k,
        "order": G.order,
        "amplitude": G.amplitude,
        "time_coefficients": list(G.time_coefficients),
    }


def _read(section: Mapping, prefix: str, key: str, cast: Callable, default=_MISSING) -> Any:
    if key not in section:
        if default is _MISSING:
            raise ConfigurationError(f"{prefix}.{key}", "missing")
        return default

    try:
        return cast(section[key])
    except (TypeError, ValueError) as error:
        raise ConfigurationError(f"{prefix}.{key}", f"invalid value {section[key]!r}") from error


def _ints(value) -> Tuple[int, ...]:
    return tuple(int(v) for v in _listed(value))


def _floats(value) -> Tuple[float, ...]:
    return tuple(float(v) for v in _listed(value))


def _flag(value) -> bool:
    if value not in (True, False):
        raise ValueError(value)
    return bool(value)


def _optional_float(value) -> Optional[float]:
    return None if value in ("", "auto", "none") else float(value)


def _settings(cls, section: Mapping, prefix: str, casts: Mapping[str, Callable]):
    unknown = set(section) - set(casts)
    if unknown:
        raise ConfigurationError(f"{prefix}.{sorted(unknown)[0]}", "unknown key")

    defaults = cls()
    return cls(
        **{key: _read(section, prefix, key, cast, getattr(defaults, key)) for key, cast in casts.items()}
    )


def _build(cls, prefix: str, kwargs: dict):
    try:
        return cls(**kwargs)
    except FpmeError as error:
        if isinstance(error, ConfigurationError):
            raise
        raise ConfigurationError(prefix, str(error)) from error


_EXPERIMENT_KEYS = {
    "mode": str,
    "gamma": float,
    "m": int,
    "n_list": _ints,
    "T": float,
    "snapshot_times": _floats,
    "ensemble_size": int,
    "master_seed": int,
    "torus_length": float,
    "output_dir": Path,
    "deltas": _floats,
    "martingale": _flag,
    "martingale_steps": int,
}

_PROFILE_KEYS = {
    "kind": str,
    "background": float,
    "center": float,
    "width": float,
    "height": float,
    "left_value": float,
    "right_value": float,
}

_TEST_FUNCTION_KEYS = {
    "family": str,
    "center": float,
    "width": float,
    "k": float,
    "order": int,
    "amplitude": float,
    "time_coefficients": _floats,
}

_SOLVER_KEYS = {"grid_size": int, "dt": _optional_float, "dealias": _flag, "refinements": int}

_INVARIANCE_KEYS = {
    "ring_size": int,
    "m_values": _ints,
    "gamma_values": _floats,
    "densities": _floats,
    "dirichlet_size": int,
    "dirichlet_samples": int,
    "dirichlet_m_values": _ints,
    "frequency_size": int,
    "frequency_gamma": float,
    "frequency_events": int,
    "sigmas": float,
}

_OPERATOR_KEYS = {"n_list": _ints, "gamma_values": _floats, "slope_tolerance": float}

_RATES_AUDIT_KEYS = {"m_values": _ints, "window": int, "max_distance": int, "floor_window": int}


def _section(parser: ConfigParser, name: str) -> Mapping:
    return dict(parser[name]) if parser.has_section(name) else {}


def _keyed(section: Mapping, prefix: str, casts: Mapping[str, Callable]) -> dict:
    for key in section:
        if key not in casts:
            raise ConfigurationError(f"{prefix}.{key}", "unknown key")
    return {key: _read(section, prefix, key, cast) for key, cast in casts.items() if key in section}


def config_from_parser(parser: ConfigParser, overrides: Mapping[str, Any] = None) -> ExperimentConfig:
    """
    Build an ExperimentConfig from parsed INI sections, then apply overrides
    (keys of the [experiment] section, None meaning "not given").
    """
    known = {"experiment", "profile", "solver", "invariance", "operators", "rates_audit"}
    for name in parser.sections():
        if name not in known and not name.startswith("test_function."):
            raise ConfigurationError(name, "unknown section")

    kwargs = _keyed(_section(parser, "experiment"), "experiment", _EXPERIMENT_KEYS)
    kwargs.update({key: value for key, value in (overrides or {}).items() if value is not None})

    if parser.has_section("profile"):
        kwargs["profile"] = _build(
            ProfileSpec, "profile", _keyed(_section(parser, "profile"), "profile", _PROFILE_KEYS)
        )

    test_functions = []
    for name in parser.sections():
        if name.startswith("test_function."):
            label = name.split(".", 1)[1]
            fields = _keyed(_section(parser, name), name, _TEST_FUNCTION_KEYS)
            test_functions.append(_build(TestFunction, name, dict(fields, name=label)))
    if test_functions:
        kwargs["test_functions"] = tuple(test_functions)

    kwargs["solver"] = _settings(SolverSettings, _section(parser, "solver"), "solver", _SOLVER_KEYS)
    kwargs["invariance"] = _settings(
        InvarianceSettings, _section(parser, "invariance"), "invariance", _INVARIANCE_KEYS
    )
    kwargs["operators"] = _settings(
        OperatorSettings, _section(parser, "operators"), "operators", _OPERATOR_KEYS
    )
    kwargs["rates_audit"] = _settings(
        RatesAuditSettings, _section(parser, "rates_audit"), "rates_audit", _RATES_AUDIT_KEYS
    )

    return ExperimentConfig(**kwargs)


def load_config(
    name=None,
    mode: str = None,
    overrides: Mapping[str, Any] = None,
    search_paths: Iterable[Path] = None,
) -> ExperimentConfig:
    """
    Load a configuration file by path or dotted name, defaulting to the
    bundled `configs.<mode>` file. A `mode` given here wins over the file.
    """
    if name is None:
        if mode is None:
            raise ConfigurationError("config", "either a file or a mode is required")
        name = f"configs.{mode.replace('-', '_')}"

    parser = ini_reader.load(name, search_paths or config_search_paths())
    logger.info("loaded configuration %s", name)

    overrides = dict(overrides or {})
    if mode is not None:
        overrides["mode"] = mode
    return config_from_parser(parser, overrides)
