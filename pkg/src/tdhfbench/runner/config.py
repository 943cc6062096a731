"""Run configuration: a TOML file with fixed sections; unknown keys are errors."""

from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCENARIOS = ("simulate", "audit", "fdll-check", "bounds")
DEFAULT_FOCK_CAP = 200_000


class ConfigError(ValueError):
    pass


def _check_keys(raw: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{where}]: {', '.join(unknown)}")


def _num(raw: dict, key: str, default, where: str, kind=float):
    val = raw.get(key, default)
    if val is None:
        return None
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"[{where}] {key} must be a number, got {val!r}")
    if kind is int:
        if isinstance(val, float) and not val.is_integer():
            raise ConfigError(f"[{where}] {key} must be an integer, got {val!r}")
        return int(val)
    if not math.isfinite(val):
        raise ConfigError(f"[{where}] {key} must be finite")
    return float(val)


def _num_list(raw: dict, key: str, default, where: str, kind=float) -> tuple:
    val = raw.get(key, default)
    if not isinstance(val, (list, tuple)) or not val:
        raise ConfigError(f"[{where}] {key} must be a non-empty list of numbers")
    return tuple(_num({key: v}, key, None, where, kind) for v in val)


@dataclass(frozen=True)
class ModelConfig:
    type: str = "lattice"
    d: int = 6
    spacing: float = 1.0
    softening: float = 1.0
    potential: Any = "soft_coulomb"
    lam: float | None = None
    preset: str | None = None
    kinetic_prefactor: float | None = None
    nu: float = 0.0
    boundary: str = "hard_wall"
    external: Any = None
    exchange: bool = True


@dataclass(frozen=True)
class TimeConfig:
    t_max: float = 1.0
    dt: float = 1e-3
    stride: int = 50
    tol: float = 1e-12
    fd_delta: float = 1e-3
    self_test: bool = True


@dataclass(frozen=True)
class WeightConfig:
    theta: float | None = 1.0 / 3.0
    values: tuple | None = None


@dataclass(frozen=True)
class InitialConfig:
    kind: str = "slater"
    angle: float = 0.0


@dataclass(frozen=True)
class ChecksConfig:
    idempotency: float = 1e-8
    trace: float = 1e-10
    energy_drift: float = 1e-8
    gronwall: float = 1e-6
    noninteracting: float = 1e-8
    slack: float = 1e-10


@dataclass(frozen=True)
class AuditConfig:
    instances: int = 100
    theta: float = 1.0 / 3.0
    d_max: int = 6
    N_max: int = 3
    commutation_instances: int = 10
    commutation_d_max: int = 5
    commutation_tol: float = 1e-12
    gaussian_a: tuple = (0.5, 1.0, 2.0)
    lt_ratio_max: float = 0.61
    closed_form_tol: float = 1e-10


@dataclass(frozen=True)
class BoundsConfig:
    lam: tuple = (0.0, 0.01, 0.1)
    K: tuple = (1.0, 100.0)
    N: tuple = (8, 64)
    t: tuple = (0.0, 0.5, 1.0)
    delta0: tuple = (0.0, 0.1)
    S0: tuple = (0.0, 1.0)


@dataclass(frozen=True)
class FdllConfig:
    points: tuple = (0.25, 0.5, 1.0, 2.0, 5.0)
    yukawa_screening: tuple = (1.0,)
    yukawa_points: tuple = (0.5, 1.0, 2.0)
    r_min: float = 0.1
    r_max: float = 10.0
    r_count: int = 41
    coulomb_tol: float = 1e-6
    weight_tol: float = 1e-10
    yukawa_tol: float = 1e-5


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    N: int = 2
    seed: int = 0
    fock_cap: int = DEFAULT_FOCK_CAP
    model: ModelConfig = field(default_factory=ModelConfig)
    time: TimeConfig = field(default_factory=TimeConfig)
    weight: WeightConfig = field(default_factory=WeightConfig)
    initial: InitialConfig = field(default_factory=InitialConfig)
    checks: ChecksConfig = field(default_factory=ChecksConfig)
    audit: AuditConfig = field(default_factory=AuditConfig)
    bounds: BoundsConfig = field(default_factory=BoundsConfig)
    fdll: FdllConfig = field(default_factory=FdllConfig)
    out: str = "out"

    def to_dict(self) -> dict:
        return _plain(asdict(self))

    def with_overrides(self, seed: int | None = None, out: str | None = None) -> "RunConfig":
        cfg = self
        if seed is not None:
            cfg = replace(cfg, seed=int(seed))
        if out is not None:
            cfg = replace(cfg, out=str(out))
        return cfg


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _model(raw: dict) -> ModelConfig:
    where = "model"
    _check_keys(raw, {"type", "d", "spacing", "softening", "potential", "lambda", "preset",
                      "kinetic_prefactor", "nu", "boundary", "external", "exchange"}, where)
    mtype = raw.get("type", "lattice")
    if mtype != "lattice":
        raise ConfigError(f"[model] type must be 'lattice', got {mtype!r}")
    pot = raw.get("potential", "soft_coulomb")
    if isinstance(pot, dict):
        _check_keys(pot, {"kind", "sign", "params"}, "model.potential")
        params = pot.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("[model.potential] params must be a table")
        _check_keys(params, {"screening", "width"}, "model.potential.params")
        pot = {"kind": pot.get("kind"), "sign": pot.get("sign", 1.0), **_plain(params)}
    elif not isinstance(pot, str):
        raise ConfigError("[model] potential must be a name or a table")
    ext = raw.get("external")
    if isinstance(ext, dict):
        _check_keys(ext, {"kind", "omega", "values"}, "model.external")
        ext = _plain(ext)
    elif ext is not None and not isinstance(ext, list):
        raise ConfigError("[model] external must be a table or a list of site values")
    elif isinstance(ext, list):
        ext = list(_num_list({"external": ext}, "external", None, where))
    exchange = raw.get("exchange", True)
    if not isinstance(exchange, bool):
        raise ConfigError("[model] exchange must be true or false")
    preset = raw.get("preset")
    if preset is not None and not isinstance(preset, str):
        raise ConfigError("[model] preset must be a string")
    lam = _num(raw, "lambda", None, where)
    if lam is None and preset is None:
        raise ConfigError("[model] needs lambda or preset")
    cfg = ModelConfig(
        type=mtype,
        d=_num(raw, "d", 6, where, int),
        spacing=_num(raw, "spacing", 1.0, where),
        softening=_num(raw, "softening", 1.0, where),
        potential=pot,
        lam=lam,
        preset=preset,
        kinetic_prefactor=_num(raw, "kinetic_prefactor", None, where),
        nu=_num(raw, "nu", 0.0, where),
        boundary=str(raw.get("boundary", "hard_wall")),
        external=ext,
        exchange=exchange,
    )
    if cfg.d < 1 or cfg.spacing <= 0:
        raise ConfigError("[model] needs d >= 1 and spacing > 0")
    return cfg


def _time(raw: dict) -> TimeConfig:
    where = "time"
    _check_keys(raw, {"t_max", "dt", "stride", "tol", "fd_delta", "self_test"}, where)
    self_test = raw.get("self_test", True)
    if not isinstance(self_test, bool):
        raise ConfigError("[time] self_test must be true or false")
    cfg = TimeConfig(
        t_max=_num(raw, "t_max", 1.0, where),
        dt=_num(raw, "dt", 1e-3, where),
        stride=_num(raw, "stride", 50, where, int),
        tol=_num(raw, "tol", 1e-12, where),
        fd_delta=_num(raw, "fd_delta", 1e-3, where),
        self_test=self_test,
    )
    if not (cfg.t_max > 0 and cfg.dt > 0 and cfg.stride >= 1 and cfg.tol > 0 and cfg.fd_delta > 0):
        raise ConfigError("[time] needs t_max > 0, dt > 0, stride >= 1, tol > 0, fd_delta > 0")
    steps = cfg.t_max / cfg.dt
    if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
        raise ConfigError(f"[time] t_max = {cfg.t_max} is not a whole number of steps dt = {cfg.dt}")
    return cfg


def _weight(raw: dict) -> WeightConfig:
    where = "weight"
    _check_keys(raw, {"theta", "values"}, where)
    if "values" in raw and "theta" in raw:
        raise ConfigError("[weight] give either theta or values, not both")
    if "values" in raw:
        vals = _num_list(raw, "values", None, where)
        if any(b < a for a, b in zip(vals, vals[1:])) or vals[0] < 0:
            raise ConfigError("[weight] values must be nonnegative and nondecreasing")
        return WeightConfig(theta=None, values=vals)
    theta = _num(raw, "theta", 1.0 / 3.0, where)
    if not (0 < theta <= 1):
        raise ConfigError(f"[weight] theta must lie in (0, 1], got {theta}")
    return WeightConfig(theta=theta)


def _initial(raw: dict) -> InitialConfig:
    _check_keys(raw, {"kind", "angle"}, "initial")
    kind = raw.get("kind", "slater")
    if kind not in ("slater", "perturbed"):
        raise ConfigError(f"[initial] kind must be 'slater' or 'perturbed', got {kind!r}")
    return InitialConfig(kind=kind, angle=_num(raw, "angle", 0.0, "initial"))


def _dataclass_section(cls, raw: dict, where: str):
    names = {f.name for f in cls.__dataclass_fields__.values()}
    aliases = {"lambda": "lam"}
    _check_keys(raw, names | {k for k, v in aliases.items() if v in names}, where)
    kwargs = {}
    for key, val in raw.items():
        name = aliases.get(key, key)
        default = getattr(cls(), name)
        kind = int if isinstance(default, int) and not isinstance(default, bool) else float
        if isinstance(default, tuple):
            elem = int if default and isinstance(default[0], int) else float
            kwargs[name] = _num_list(raw, key, None, where, elem)
        else:
            kwargs[name] = _num(raw, key, None, where, kind)
    return cls(**kwargs)


def parse_config(raw: dict) -> RunConfig:
    _check_keys(raw, {"scenario", "N", "seed", "fock_cap", "model", "time", "weight", "initial",
                      "checks", "audit", "bounds", "fdll", "output"}, "top level")
    scenario = raw.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(f"scenario must be one of {', '.join(SCENARIOS)}, got {scenario!r}")
    for sect in ("model", "time", "weight", "initial", "checks", "audit", "bounds", "fdll", "output"):
        if sect in raw and not isinstance(raw[sect], dict):
            raise ConfigError(f"[{sect}] must be a table")
    out_raw = raw.get("output", {})
    _check_keys(out_raw, {"dir"}, "output")
    model_raw = raw.get("model")
    if scenario == "simulate" and model_raw is None:
        raise ConfigError("simulate needs a [model] section")
    cfg = RunConfig(
        scenario=scenario,
        N=_num(raw, "N", 2, "top level", int),
        seed=_num(raw, "seed", 0, "top level", int),
        fock_cap=_num(raw, "fock_cap", DEFAULT_FOCK_CAP, "top level", int),
        model=_model(model_raw) if model_raw is not None else ModelConfig(lam=0.0),
        time=_time(raw.get("time", {})),
        weight=_weight(raw.get("weight", {})),
        initial=_initial(raw.get("initial", {})),
        checks=_dataclass_section(ChecksConfig, raw.get("checks", {}), "checks"),
        audit=_dataclass_section(AuditConfig, raw.get("audit", {}), "audit"),
        bounds=_dataclass_section(BoundsConfig, raw.get("bounds", {}), "bounds"),
        fdll=_dataclass_section(FdllConfig, raw.get("fdll", {}), "fdll"),
        out=str(out_raw.get("dir", "out")),
    )
    if cfg.N < 0 or (scenario == "simulate" and not 1 <= cfg.N <= cfg.model.d):
        raise ConfigError(f"N = {cfg.N} must satisfy 1 <= N <= d")
    if cfg.weight.values is not None and len(cfg.weight.values) != cfg.N + 1:
        raise ConfigError(f"[weight] values needs N + 1 = {cfg.N + 1} entries")
    if cfg.audit.instances < 0 or cfg.audit.commutation_instances < 0:
        raise ConfigError("[audit] instance counts must be nonnegative")
    if not (0 < cfg.audit.theta <= 1):
        raise ConfigError("[audit] theta must lie in (0, 1]")
    return cfg


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return parse_config(raw)
