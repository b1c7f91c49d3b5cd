"""Contact Hamiltonians H(x, p, u) on the circle with exact derivatives.

All callables take (x, p, u) and broadcast over numpy arrays.  Derivatives
are supplied analytically by each model; nothing here differentiates
numerically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import AssumptionAViolated, NonFiniteDerivative
from .fourier import FourierSeries

Func3 = Callable[..., np.ndarray]


@dataclass(frozen=True)
class Box:
    """Compact validity region {x in S, |p| <= p_max, |u| <= u_max}."""

    p_max: float
    u_max: float


@dataclass(frozen=True)
class HamiltonianModel:
    name: str
    eval: Func3
    d_p: Func3
    d_u: Func3
    d_x: Func3
    d_pp: Func3
    d_uu: Func3
    d_up: Func3
    d_xp: Func3
    kappa: float
    box: Box


@dataclass(frozen=True)
class StationarySolution:
    """Closed-form smooth 1-periodic solution of the stationary equation."""

    u0: Callable[..., np.ndarray]
    du0: Callable[..., np.ndarray]
    residual_tol: float = 1e-10
    label: str = "u0"


def constant_solution(c: float, label: str = None) -> StationarySolution:
    cv = float(c)
    return StationarySolution(
        u0=lambda x: cv + 0.0 * np.asarray(x, dtype=float),
        du0=lambda x: 0.0 * np.asarray(x, dtype=float),
        label=label or ("u0=%g" % cv),
    )


def example1(lam: FourierSeries) -> HamiltonianModel:
    """H = p^2 + p + lambda(x) u.  u0 = 0 solves the stationary equation."""
    dlam = lam.derivative()
    zero = lambda x, p, u: 0.0 * (np.asarray(x) + np.asarray(p) + np.asarray(u))
    return HamiltonianModel(
        name="example1",
        eval=lambda x, p, u: p * p + p + lam(x) * u,
        d_p=lambda x, p, u: 2.0 * p + 1.0 + 0.0 * (np.asarray(x) + np.asarray(u)),
        d_u=lambda x, p, u: lam(x) + 0.0 * (np.asarray(p) + np.asarray(u)),
        d_x=lambda x, p, u: dlam(x) * u + 0.0 * np.asarray(p),
        d_pp=lambda x, p, u: 2.0 + zero(x, p, u),
        d_uu=zero,
        d_up=zero,
        d_xp=zero,
        kappa=lam.max_abs(),
        box=Box(p_max=2.0, u_max=2.0),
    )


def example2(v: FourierSeries, lam: FourierSeries) -> HamiltonianModel:
    """H = p^2 + V(x) p + lambda(x) (sqrt(u^2+1) - sqrt(2)).

    u = +1 and u = -1 both solve the stationary equation; B equals V on
    either branch, so V must not vanish.
    """
    dv = v.derivative()
    dlam = lam.derivative()
    s2 = np.sqrt(2.0)

    def _eval(x, p, u):
        return p * p + v(x) * p + lam(x) * (np.sqrt(u * u + 1.0) - s2)

    def _d_x(x, p, u):
        return dv(x) * p + dlam(x) * (np.sqrt(u * u + 1.0) - s2)

    zero = lambda x, p, u: 0.0 * (np.asarray(x) + np.asarray(p) + np.asarray(u))
    return HamiltonianModel(
        name="example2",
        eval=_eval,
        d_p=lambda x, p, u: 2.0 * p + v(x) + 0.0 * np.asarray(u),
        d_u=lambda x, p, u: lam(x) * u / np.sqrt(u * u + 1.0) + 0.0 * np.asarray(p),
        d_x=_d_x,
        d_pp=lambda x, p, u: 2.0 + zero(x, p, u),
        d_uu=lambda x, p, u: lam(x) * (u * u + 1.0) ** -1.5 + 0.0 * np.asarray(p),
        d_up=zero,
        d_xp=lambda x, p, u: dv(x) + 0.0 * (np.asarray(p) + np.asarray(u)),
        # |u|/sqrt(u^2+1) < 1, so max|lambda| bounds |dH/du| globally
        kappa=lam.max_abs(),
        box=Box(p_max=2.0, u_max=4.0),
    )


@dataclass(frozen=True)
class AssumptionReport:
    min_d_pp: float
    max_abs_d_u: float
    slope_pos: float
    slope_neg: float
    h1_ok: bool
    h2_ok: bool
    h3_ok: bool

    @property
    def ok(self) -> bool:
        return self.h1_ok and self.h2_ok and self.h3_ok


def check_assumptions(
    model: HamiltonianModel, samples_per_axis: int = 16, min_slope: float = 0.1
) -> AssumptionReport:
    """Certify (H1)/(H3) by sampling and (H2) by a boundary-slope proxy.

    Superlinearity has no finite certificate; we only require the p-slope
    dH/dp at p = +p_max (resp. -dH/dp at p = -p_max) to exceed
    ``min_slope`` everywhere on the box boundary.
    """
    if samples_per_axis < 8:
        raise ValueError("samples_per_axis must be >= 8")
    box = model.box
    x = np.linspace(0.0, 1.0, samples_per_axis, endpoint=False)
    p = np.linspace(-box.p_max, box.p_max, samples_per_axis)
    u = np.linspace(-box.u_max, box.u_max, samples_per_axis)
    X = x[:, None, None]
    P = p[None, :, None]
    U = u[None, None, :]

    d_pp = np.broadcast_to(model.d_pp(X, P, U), (x.size, p.size, u.size))
    d_u = np.broadcast_to(model.d_u(X, P, U), (x.size, p.size, u.size))
    if not (np.all(np.isfinite(d_pp)) and np.all(np.isfinite(d_u))):
        raise NonFiniteDerivative("NaN/inf in sampled derivatives of %s" % model.name)

    Xb = x[:, None]
    Ub = u[None, :]
    slope_pos = float(np.min(model.d_p(Xb, box.p_max, Ub)))
    slope_neg = float(np.min(-model.d_p(Xb, -box.p_max, Ub)))

    min_d_pp = float(d_pp.min())
    max_abs_d_u = float(np.abs(d_u).max())
    return AssumptionReport(
        min_d_pp=min_d_pp,
        max_abs_d_u=max_abs_d_u,
        slope_pos=slope_pos,
        slope_neg=slope_neg,
        h1_ok=min_d_pp > 0.0,
        h2_ok=slope_pos > min_slope and slope_neg > min_slope,
        h3_ok=max_abs_d_u <= model.kappa + 1e-12,
    )


@dataclass(frozen=True)
class StationaryReport:
    max_residual: float
    min_abs_B: float
    sign_B: int
    ok: bool


def check_stationary(
    model: HamiltonianModel, s: StationarySolution, n: int = 256
) -> StationaryReport:
    """Verify the stationary residual and the sign condition on B."""
    if n < 16:
        raise ValueError("grid size must be >= 16")
    x = np.linspace(0.0, 1.0, n, endpoint=False)
    du0 = s.du0(x)
    u0 = s.u0(x)
    residual = np.abs(model.eval(x, du0, u0))
    B = model.d_p(x, du0, u0)
    min_abs = float(np.min(np.abs(B)))
    if min_abs <= 1e-12 or (B.max() > 0.0 and B.min() < 0.0):
        raise AssumptionAViolated(
            "B(x) vanishes or changes sign on the grid (min |B| = %.3e)" % min_abs
        )
    sign = 1 if B[0] > 0 else -1
    max_res = float(residual.max())
    return StationaryReport(
        max_residual=max_res,
        min_abs_B=min_abs,
        sign_B=sign,
        ok=max_res <= s.residual_tol,
    )
