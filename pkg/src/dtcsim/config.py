"""Experiment configuration: flat dotted-key files plus command-line overrides.

Config files are plain text, one ``key = value`` pair per line, ``#`` starts a
comment.  Values parse as int, float, bool (true/false), bare string, or a
bracketed list ``[a, b, c]``.  Keys use dotted paths (``model.N``,
``bath.beta``); later assignments and ``--set key=value`` overrides win.
A master seed is mandatory: there is no wall-clock fallback, so every run is
reproducible by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping

from .errors import ConfigError
from .model import ModelParams

PROTOCOLS = ("plain", "measured-average", "trajectories")

_DEFAULTS = {
    "model.N": 5,
    "model.h_bar": 3.141592653589793,
    "model.delta_h": 0.5,
    "model.J_bar": 0.7853981633974483,
    "model.delta_J": 0.5,
    "model.T_z": 1.0,
    "model.T_x": 1.0,
    "bath.beta": [1.0],
    "bath.Gamma": [0.01],
    "bath.omega_c": 1.0,
    "run.axis": "z",
    "run.protocol": "plain",
    "run.replications": 1,
    "run.trajectories": 1,
    "run.n_periods": 100,
    "run.sample_dt": 0.01,
    "run.fix_disorder": False,
    "run.seed": None,
    "run.out": "runs",
}


def parse_value(text: str):
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        inner = text[1:-1].strip()
        return [parse_value(part) for part in inner.split(",")] if inner else []
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_config_text(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}", f"expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = parse_value(value)
    return values


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(str(path), "config file not found")
    return parse_config_text(path.read_text(), source=str(path))


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved description of one experiment invocation."""

    model: ModelParams
    beta_grid: tuple
    gamma_grid: tuple
    omega_c: float
    axis: str
    protocol: str
    replications: int
    trajectories_per_realization: int
    n_periods: int
    sample_dt: float
    seed: int
    out_dir: Path
    fix_disorder: bool = False

    def as_flat_dict(self) -> dict:
        return {
            "model.N": self.model.N,
            "model.h_bar": self.model.h_bar,
            "model.delta_h": self.model.delta_h,
            "model.J_bar": self.model.J_bar,
            "model.delta_J": self.model.delta_J,
            "model.T_z": self.model.T_z,
            "model.T_x": self.model.T_x,
            "bath.beta": list(self.beta_grid),
            "bath.Gamma": list(self.gamma_grid),
            "bath.omega_c": self.omega_c,
            "run.axis": self.axis,
            "run.protocol": self.protocol,
            "run.replications": self.replications,
            "run.trajectories": self.trajectories_per_realization,
            "run.n_periods": self.n_periods,
            "run.sample_dt": self.sample_dt,
            "run.fix_disorder": self.fix_disorder,
            "run.seed": self.seed,
            "run.out": str(self.out_dir),
        }


def _expect(values: Mapping, key: str, kinds, check=None, describe=""):
    value = values[key]
    if isinstance(value, bool) and bool not in (kinds if isinstance(kinds, tuple) else (kinds,)):
        raise ConfigError(key, f"expected {describe or kinds}, got boolean")
    if not isinstance(value, kinds):
        raise ConfigError(key, f"expected {describe or kinds}, got {value!r}")
    if check is not None and not check(value):
        raise ConfigError(key, f"invalid value {value!r}{': ' + describe if describe else ''}")
    return value


def _number_grid(values: Mapping, key: str) -> tuple:
    value = values[key]
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not value:
        raise ConfigError(key, "expected a number or non-empty list of numbers")
    out = []
    for item in value:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigError(key, f"non-numeric grid entry {item!r}")
        out.append(float(item))
    return tuple(out)


def resolve_config(file_values: Mapping | None = None,
                   overrides: Mapping | None = None) -> ExperimentConfig:
    """Merge defaults, config-file values and overrides into a validated config."""
    values = dict(_DEFAULTS)
    for layer in (file_values or {}), (overrides or {}):
        for key, val in layer.items():
            if key not in _DEFAULTS:
                raise ConfigError(key, "unknown configuration key")
            values[key] = val

    n = _expect(values, "model.N", int, lambda v: v >= 1, "integer >= 1")
    try:
        model = ModelParams(
            N=n,
            h_bar=float(_expect(values, "model.h_bar", (int, float))),
            delta_h=float(_expect(values, "model.delta_h", (int, float),
                                  lambda v: v >= 0, "nonnegative number")),
            J_bar=float(_expect(values, "model.J_bar", (int, float))),
            delta_J=float(_expect(values, "model.delta_J", (int, float),
                                  lambda v: v >= 0, "nonnegative number")),
            T_z=float(_expect(values, "model.T_z", (int, float),
                              lambda v: v > 0, "positive number")),
            T_x=float(_expect(values, "model.T_x", (int, float),
                              lambda v: v > 0, "positive number")),
        )
    except ValueError as exc:
        raise ConfigError("model", str(exc)) from exc

    beta_grid = _number_grid(values, "bath.beta")
    if any(b <= 0 for b in beta_grid):
        raise ConfigError("bath.beta", "inverse temperatures must be positive")
    gamma_grid = _number_grid(values, "bath.Gamma")
    if any(g < 0 for g in gamma_grid):
        raise ConfigError("bath.Gamma", "coupling strengths must be nonnegative")

    axis = _expect(values, "run.axis", str, lambda v: v in ("z", "x"), "'z' or 'x'")
    protocol = _expect(values, "run.protocol", str,
                       lambda v: v in PROTOCOLS, f"one of {PROTOCOLS}")
    seed = values["run.seed"]
    if seed is None:
        raise ConfigError("run.seed", "a master seed is required (no wall-clock default)")
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("run.seed", f"expected a nonnegative integer, got {seed!r}")

    sample_dt = float(_expect(values, "run.sample_dt", (int, float),
                              lambda v: v > 0, "positive number"))
    for name, T in (("model.T_z", model.T_z), ("model.T_x", model.T_x)):
        k = round(T / sample_dt)
        if k < 1 or abs(k * sample_dt - T) > 1e-12:
            raise ConfigError("run.sample_dt",
                              f"{sample_dt} does not divide {name} = {T}")

    return ExperimentConfig(
        model=model,
        beta_grid=beta_grid,
        gamma_grid=gamma_grid,
        omega_c=float(_expect(values, "bath.omega_c", (int, float),
                              lambda v: v > 0, "positive number")),
        axis=axis,
        protocol=protocol,
        replications=_expect(values, "run.replications", int,
                             lambda v: v >= 1, "integer >= 1"),
        trajectories_per_realization=_expect(values, "run.trajectories", int,
                                             lambda v: v >= 1, "integer >= 1"),
        n_periods=_expect(values, "run.n_periods", int,
                          lambda v: v >= 1, "integer >= 1"),
        sample_dt=sample_dt,
        seed=seed,
        out_dir=Path(str(values["run.out"])),
        fix_disorder=_expect(values, "run.fix_disorder", bool, describe="boolean"),
    )


def with_updates(config: ExperimentConfig, **updates) -> ExperimentConfig:
    return replace(config, **updates)
