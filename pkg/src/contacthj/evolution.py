"""Monotone Lax-Friedrichs realization of the solution semigroup, plus the
characteristic contact flow.

The scheme is first order, explicit Euler in time, with the global
Lax-Friedrichs numerical Hamiltonian

    Hhat(x, a, b, u) = H(x, (a+b)/2, u) - lf_alpha (b - a)/2.

Monotonicity under the CFL bound is the one property everything else leans
on: it gives the discrete comparison principle and convergence to the
viscosity solution.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .errors import BlowUp, CFLViolation, NonFinite
from .hamiltonian import HamiltonianModel, StationarySolution


@dataclass(frozen=True)
class GridFunction:
    """Periodic samples at x_i = i/n, i = 0..n-1."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if self.n < 16 or vals.shape != (self.n,):
            raise ValueError("need n >= 16 values on the periodic grid")
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid values must be finite")

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n) / self.n

    @staticmethod
    def from_callable(fun: Callable, n: int) -> "GridFunction":
        x = np.arange(n) / n
        return GridFunction(n, np.asarray(fun(x), dtype=float) + np.zeros(n))

    @staticmethod
    def constant(c: float, n: int) -> "GridFunction":
        return GridFunction(n, np.full(n, float(c)))

    def sup_dist(self, other: "GridFunction") -> float:
        return float(np.max(np.abs(self.values - other.values)))


@dataclass(frozen=True)
class SchemeConfig:
    lf_alpha: float
    cfl: float = 0.4
    blowup_threshold: float = 10.0

    def __post_init__(self):
        if not 0.0 < self.cfl <= 0.5:
            raise ValueError("cfl must lie in (0, 0.5]")
        if self.lf_alpha <= 0.0:
            raise ValueError("lf_alpha must be positive")


def default_config(
    model: HamiltonianModel,
    s: Optional[StationarySolution] = None,
    cfl: float = 0.4,
    blowup_threshold: Optional[float] = None,
) -> SchemeConfig:
    """lf_alpha from the |dH/dp| bound over the model box and working range."""
    if blowup_threshold is None:
        sup_u0 = 0.0
        if s is not None:
            x = np.linspace(0.0, 1.0, 1024, endpoint=False)
            sup_u0 = float(np.max(np.abs(s.u0(x))))
        blowup_threshold = 10.0 * (1.0 + sup_u0)
    x = np.linspace(0.0, 1.0, 256, endpoint=False)
    p = np.linspace(-model.box.p_max, model.box.p_max, 65)
    u = np.linspace(-blowup_threshold, blowup_threshold, 65)
    lf_alpha = float(
        np.max(np.abs(model.d_p(x[:, None, None], p[None, :, None], u[None, None, :])))
    )
    return SchemeConfig(lf_alpha=lf_alpha, cfl=cfl, blowup_threshold=blowup_threshold)


def _step_values(model, cfg, x, vals, dt, dx):
    wm = np.roll(vals, 1, axis=-1)
    wp = np.roll(vals, -1, axis=-1)
    a = (vals - wm) / dx
    b = (wp - vals) / dx
    num_h = model.eval(x, 0.5 * (a + b), vals) - 0.5 * cfg.lf_alpha * (b - a)
    return vals - dt * num_h


def step(
    model: HamiltonianModel, cfg: SchemeConfig, w: GridFunction, dt: float
) -> GridFunction:
    """One forward-Euler update; dt must respect the CFL bound."""
    dx = 1.0 / w.n
    if dt > cfg.cfl * dx / cfg.lf_alpha * (1.0 + 1e-12):
        raise CFLViolation(
            "dt = %g exceeds cfl * dx / lf_alpha = %g"
            % (dt, cfg.cfl * dx / cfg.lf_alpha)
        )
    out = _step_values(model, cfg, w.x, w.values, dt, dx)
    if not np.all(np.isfinite(out)):
        raise NonFinite("scheme produced NaN/inf")
    if np.max(np.abs(out)) > cfg.blowup_threshold:
        raise BlowUp("sup |w| exceeded %g" % cfg.blowup_threshold)
    return GridFunction(w.n, out)


@dataclass(frozen=True)
class TraceSample:
    t: float
    dist: float
    snapshot: GridFunction


@dataclass(frozen=True)
class EvolutionTrace:
    samples: List[TraceSample]
    provenance: dict = field(default_factory=dict)

    @property
    def t(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def dist(self) -> np.ndarray:
        return np.array([s.dist for s in self.samples])


def evolve_values(
    model: HamiltonianModel,
    cfg: SchemeConfig,
    values: np.ndarray,
    n: int,
    t_final: float,
    sample_dt: float,
    on_sample: Optional[Callable[[float, np.ndarray], None]] = None,
) -> List[Tuple[float, np.ndarray]]:
    """March a batch of grid functions (shape (..., n)); sample every sample_dt.

    lf_alpha is re-validated against the running solution range at each
    snapshot: with u-dependent H there is no a priori gradient bound.
    """
    dx = 1.0 / n
    x = np.arange(n) / n
    dt_max = cfg.cfl * dx / cfg.lf_alpha
    steps_per_sample = max(1, int(np.ceil(sample_dt / dt_max)))
    dt = sample_dt / steps_per_sample
    n_samples = int(round(t_final / sample_dt))
    if abs(n_samples * sample_dt - t_final) > 1e-9 * max(1.0, t_final):
        n_samples = int(np.ceil(t_final / sample_dt))

    vals = np.array(values, dtype=float)
    out = [(0.0, vals.copy())]
    if on_sample:
        on_sample(0.0, vals)
    t = 0.0
    for k in range(n_samples):
        for _ in range(steps_per_sample):
            vals = _step_values(model, cfg, x, vals, dt, dx)
        t = (k + 1) * sample_dt
        if not np.all(np.isfinite(vals)):
            raise NonFinite("scheme produced NaN/inf at t = %g" % t)
        if np.max(np.abs(vals)) > cfg.blowup_threshold:
            raise BlowUp("sup |w| exceeded %g at t = %g" % (cfg.blowup_threshold, t))
        grad = np.abs(np.roll(vals, -1, axis=-1) - vals) / dx
        running = np.maximum(
            np.abs(model.d_p(x, grad, vals)), np.abs(model.d_p(x, -grad, vals))
        )
        if float(np.max(running)) > cfg.lf_alpha * (1.0 + 1e-9):
            raise CFLViolation(
                "running |dH/dp| = %g exceeds lf_alpha = %g at t = %g"
                % (float(np.max(running)), cfg.lf_alpha, t)
            )
        out.append((t, vals.copy()))
        if on_sample:
            on_sample(t, vals)
    return out


def evolve(
    model: HamiltonianModel,
    cfg: SchemeConfig,
    phi: GridFunction,
    t_final: float,
    sample_dt: float,
    reference: GridFunction,
) -> EvolutionTrace:
    """Evolve phi under the scheme, recording sup-distance to reference."""
    if t_final <= 0.0:
        raise ValueError("t_final must be positive")
    if phi.n != reference.n:
        raise ValueError("phi and reference must share a grid")
    raw = evolve_values(model, cfg, phi.values, phi.n, t_final, sample_dt)
    samples = [
        TraceSample(
            t=t,
            dist=float(np.max(np.abs(vals - reference.values))),
            snapshot=GridFunction(phi.n, vals),
        )
        for t, vals in raw
    ]
    return EvolutionTrace(
        samples=samples,
        provenance={"model": model.name, "n": phi.n, "lf_alpha": cfg.lf_alpha},
    )


@dataclass(frozen=True)
class ContactState:
    x: float
    p: float
    u: float


def flow_b6(
    model: HamiltonianModel,
    start: ContactState,
    t_final: float,
    steps: int = 1000,
) -> List[ContactState]:
    """RK4 integration of the characteristic contact system.

        xdot = H_p,  pdot = -H_x - H_u p,  udot = H_p p - H,

    with x wrapped mod 1.  Returns steps + 1 states at uniform times.
    """
    if steps < 100:
        raise ValueError("steps must be >= 100")

    def rhs(t, y):
        x, p, u = y
        hp = model.d_p(x, p, u)
        return np.array(
            [
                hp,
                -model.d_x(x, p, u) - model.d_u(x, p, u) * p,
                hp * p - model.eval(x, p, u),
            ]
        )

    from .aubry import _rk4

    dt = t_final / steps
    y = np.array([start.x, start.p, start.u], dtype=float)
    out = [start]
    t = 0.0
    for _ in range(steps):
        y = _rk4(rhs, y, t, dt)
        t += dt
        if not np.all(np.isfinite(y)):
            raise NonFinite("characteristic flow left finite range at t = %g" % t)
        y[0] = np.mod(y[0], 1.0)
        out.append(ContactState(x=float(y[0]), p=float(y[1]), u=float(y[2])))
    return out
