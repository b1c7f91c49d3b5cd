"""Flat key-value experiment configuration.

Format: one ``key = value`` pair per line, ``#`` comments.  Coefficient
functions use repeated keys ``lambda.a0``, ``lambda.cos.K``,
``lambda.sin.K`` (same for ``V``).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

from .errors import ConfigError
from .fourier import MAX_MODES, FourierSeries
from .hamiltonian import (
    HamiltonianModel,
    StationarySolution,
    constant_solution,
    example1,
    example2,
)


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "example1"
    lam: FourierSeries = field(default_factory=lambda: FourierSeries.constant(1.0))
    v: FourierSeries = field(default_factory=lambda: FourierSeries.constant(1.0))
    stationary: float = 0.0
    n: int = 512
    t_final: float = 5.0
    sample_dt: float = 0.1
    seed: int = 0
    out_dir: str = "out"
    cfl: float = 0.4
    delta: Optional[float] = None
    trials: int = 5
    tol: float = 1e-6
    max_iters: int = 200
    anchors: Tuple[float, ...] = (0.0, 0.37)
    residual_tol: float = 1e-8


_INT_KEYS = {"n", "seed", "trials", "max_iters"}
_FLOAT_KEYS = {
    "t_final",
    "sample_dt",
    "cfl",
    "delta",
    "tol",
    "stationary",
    "residual_tol",
}


def _parse_series(prefix: str, entries: Dict[str, str]) -> FourierSeries:
    a0 = 0.0
    cos: Dict[int, float] = {}
    sin: Dict[int, float] = {}
    for key, raw in entries.items():
        parts = key.split(".")
        try:
            if parts[1] == "a0" and len(parts) == 2:
                a0 = float(raw)
            elif parts[1] in ("cos", "sin") and len(parts) == 3:
                k = int(parts[2])
                if not 1 <= k <= MAX_MODES:
                    raise ConfigError(
                        "%s: mode index must lie in 1..%d" % (key, MAX_MODES), field=key
                    )
                (cos if parts[1] == "cos" else sin)[k] = float(raw)
            else:
                raise ConfigError("unknown coefficient key %r" % key, field=key)
        except (ValueError, IndexError):
            raise ConfigError("bad numeric value %r for %s" % (raw, key), field=key)
    kmax = max([0] + list(cos) + list(sin))
    return FourierSeries(
        a0,
        tuple(cos.get(k, 0.0) for k in range(1, kmax + 1)),
        tuple(sin.get(k, 0.0) for k in range(1, kmax + 1)),
    )


def parse_config(text: str) -> ExperimentConfig:
    scalars: Dict[str, str] = {}
    lam_entries: Dict[str, str] = {}
    v_entries: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError("line %d: expected key=value" % lineno, field=body)
        key, value = (part.strip() for part in body.split("=", 1))
        if key.startswith("lambda."):
            lam_entries[key] = value
        elif key.startswith("V.") or key.startswith("v."):
            v_entries["V." + key.split(".", 1)[1]] = value
        else:
            scalars[key] = value

    cfg = ExperimentConfig()
    updates: Dict[str, object] = {}
    for key, raw in scalars.items():
        try:
            if key in _INT_KEYS:
                updates[key] = int(raw)
            elif key in _FLOAT_KEYS:
                updates[key] = float(raw)
            elif key == "model":
                updates["model"] = raw
            elif key == "out":
                updates["out_dir"] = raw
            elif key == "anchors":
                updates["anchors"] = tuple(float(p) for p in raw.split(",") if p.strip())
            else:
                raise ConfigError("unknown config key %r" % key, field=key)
        except ValueError:
            raise ConfigError("bad value %r for %s" % (raw, key), field=key)
    if lam_entries:
        updates["lam"] = _parse_series("lambda", lam_entries)
    if v_entries:
        updates["v"] = _parse_series("V", v_entries)
    cfg = replace(cfg, **updates)
    validate_config(cfg)
    return cfg


def validate_config(cfg: ExperimentConfig) -> None:
    if cfg.model not in ("example1", "example2"):
        raise ConfigError("model must be example1 or example2", field="model")
    if cfg.n < 16:
        raise ConfigError("n must be >= 16", field="n")
    if cfg.t_final <= 0:
        raise ConfigError("t_final must be positive", field="t_final")
    if cfg.sample_dt <= 0:
        raise ConfigError("sample_dt must be positive", field="sample_dt")
    if not 0 < cfg.cfl <= 0.5:
        raise ConfigError("cfl must lie in (0, 0.5]", field="cfl")
    if cfg.tol <= 0:
        raise ConfigError("tol must be positive", field="tol")
    if cfg.trials < 1:
        raise ConfigError("trials must be >= 1", field="trials")
    if cfg.model == "example1" and cfg.stationary != 0.0:
        raise ConfigError("example1 only has the stationary solution 0", field="stationary")
    if cfg.model == "example2" and cfg.stationary not in (1.0, -1.0):
        raise ConfigError("example2 stationary selector must be 1 or -1", field="stationary")
    if cfg.delta is not None and cfg.delta <= 0:
        raise ConfigError("delta must be positive", field="delta")


def build_model(cfg: ExperimentConfig):
    """Instantiate the builtin model and stationary solution for a config."""
    validate_config(cfg)
    if cfg.model == "example1":
        return example1(cfg.lam), constant_solution(0.0)
    return example2(cfg.v, cfg.lam), constant_solution(cfg.stationary)
