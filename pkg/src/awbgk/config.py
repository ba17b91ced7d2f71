"""Run configuration: a TOML file with one section per concern.

Example::

    statistics = "mb"

    [initial]
    family = "gamma_shell"
    k = 1.0
    a = 1.0

    [grid]
    rule = "laguerre"
    n_nodes = 64

    [solver]
    stepper = "exact"
    dt = 0.01
    t_end = 10.0

    [output]
    dir = "runs/mb_shell"
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import tomli
import tomli_w

from .dynamics import SolverConfig, Stepper
from .equilibrium import SeriesTolerance, Statistics
from .initial import FAMILIES, FAMILY_DEFAULTS
from .quadrature import RadialGrid, RuleKind, build_grid

OUTPUT_ROOT_ENV = "AWBGK_OUTPUT_ROOT"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    rule: str = "laguerre"
    n_nodes: int = 64
    r_max: float | None = None
    scale: float = 1.0

    def build(self) -> RadialGrid:
        if self.rule == RuleKind.UNIFORM:
            return build_grid(self.rule, self.n_nodes, self.r_max)
        return build_grid(self.rule, self.n_nodes, self.r_max, self.scale)


@dataclass(frozen=True)
class InitialSpec:
    family: str = "gamma_shell"
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SolverSpec:
    stepper: str = "exact"
    dt: float = 0.01
    t_end: float = 10.0


@dataclass(frozen=True)
class Tolerances:
    series_abs_tol: float = 1e-14
    series_max_terms: int = 100_000
    match_rtol: float = 1e-10


@dataclass(frozen=True)
class OutputSpec:
    dir: str = "run"


@dataclass(frozen=True)
class RunConfig:
    statistics: str = "mb"
    initial: InitialSpec = field(default_factory=InitialSpec)
    grid: GridSpec = field(default_factory=GridSpec)
    solver: SolverSpec = field(default_factory=SolverSpec)
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: OutputSpec = field(default_factory=OutputSpec)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            dt=self.solver.dt,
            t_end=self.solver.t_end,
            stepper=self.solver.stepper,
            statistics=self.statistics,
            series_tol=SeriesTolerance(self.tolerances.series_abs_tol, self.tolerances.series_max_terms),
            match_rtol=self.tolerances.match_rtol,
        )

    def output_dir(self) -> Path:
        out = Path(self.output.dir)
        if out.is_absolute():
            return out
        return Path(os.environ.get(OUTPUT_ROOT_ENV, ".")) / out

    def to_dict(self) -> dict:
        d = asdict(self)
        initial = d.pop("initial")
        d["initial"] = {"family": initial["family"], **initial["params"]}
        d["grid"] = {k: v for k, v in d["grid"].items() if v is not None}
        return d

    def dumps(self) -> str:
        return tomli_w.dumps(self.to_dict())


def _section(raw: dict, name: str, cls):
    data = raw.get(name, {})
    if not isinstance(data, dict):
        raise ConfigError(f"[{name}] must be a table")
    allowed = set(cls.__dataclass_fields__)
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"[{name}]: unknown keys {sorted(unknown)}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"[{name}]: {exc}") from exc


def _number(section, key, value, kind=float, positive=True):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key} must be a number, got {value!r}")
    if kind is int and int(value) != value:
        raise ConfigError(f"[{section}] {key} must be an integer, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"[{section}] {key} must be positive, got {value!r}")
    return kind(value)


def parse_config(raw: dict, base_dir: Path | None = None) -> RunConfig:
    """Validate a decoded TOML document.  Relative table paths resolve
    against ``base_dir``."""
    known = {"statistics", "initial", "grid", "solver", "tolerances", "output"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
    stats = raw.get("statistics", "mb")
    try:
        Statistics(stats)
    except ValueError:
        raise ConfigError(f"statistics must be 'mb' or 'be', got {stats!r}") from None

    init_raw = dict(raw.get("initial", {}))
    family = init_raw.pop("family", "gamma_shell")
    if family not in FAMILIES:
        raise ConfigError(f"[initial] family must be one of {FAMILIES}, got {family!r}")
    extra = set(init_raw) - set(FAMILY_DEFAULTS[family])
    if extra:
        raise ConfigError(f"[initial] unknown parameters for {family}: {sorted(extra)}")
    if family == "table":
        path = init_raw.get("path", "")
        resolved = Path(path) if base_dir is None or Path(path).is_absolute() else base_dir / path
        if not path or not resolved.is_file():
            raise ConfigError(f"[initial] table file {path!r} does not exist")
        init_raw["path"] = str(resolved.resolve())
    else:
        for key, value in init_raw.items():
            init_raw[key] = _number("initial", key, value, positive=False)
    initial = InitialSpec(family=family, params=init_raw)

    grid = _section(raw, "grid", GridSpec)
    try:
        RuleKind(grid.rule)
    except ValueError:
        raise ConfigError(f"[grid] rule must be 'laguerre' or 'uniform', got {grid.rule!r}") from None
    grid = GridSpec(
        rule=grid.rule,
        n_nodes=_number("grid", "n_nodes", grid.n_nodes, int),
        r_max=None if grid.r_max is None else _number("grid", "r_max", grid.r_max),
        scale=_number("grid", "scale", grid.scale),
    )
    solver = _section(raw, "solver", SolverSpec)
    try:
        Stepper(solver.stepper)
    except ValueError:
        raise ConfigError(f"[solver] stepper must be 'exact' or 'rk4', got {solver.stepper!r}") from None
    solver = SolverSpec(solver.stepper, _number("solver", "dt", solver.dt),
                        _number("solver", "t_end", solver.t_end))
    tolerances = _section(raw, "tolerances", Tolerances)
    tolerances = Tolerances(
        _number("tolerances", "series_abs_tol", tolerances.series_abs_tol),
        _number("tolerances", "series_max_terms", tolerances.series_max_terms, int),
        _number("tolerances", "match_rtol", tolerances.match_rtol),
    )
    output = _section(raw, "output", OutputSpec)
    if not isinstance(output.dir, str) or not output.dir:
        raise ConfigError("[output] dir must be a nonempty string")

    config = RunConfig(stats, initial, grid, solver, tolerances, output)
    # surface range errors from the domain types as config errors
    try:
        config.solver_config()
        grid.build()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return config


def loads(text: str, base_dir: Path | None = None) -> RunConfig:
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"malformed TOML: {exc}") from exc
    return parse_config(raw, base_dir)


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {str(path)!r} does not exist")
    return loads(path.read_text(), base_dir=path.parent)
