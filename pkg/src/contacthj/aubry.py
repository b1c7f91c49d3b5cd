"""Quantities carried by the Aubry orbit: B, mu, rho, Z, T, f and the
constants ledger that every certificate draws from.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    AssumptionAViolated,
    DegenerateMu,
    PeriodMismatch,
    QuadratureDivergence,
)
from .hamiltonian import HamiltonianModel, StationarySolution

_MU_TOL = 1e-12


def _cumulative_simpson(func, nodes: np.ndarray) -> np.ndarray:
    """Cumulative integral on closed nodes, per-panel Simpson with midpoints."""
    x0, x1 = nodes[:-1], nodes[1:]
    mid = 0.5 * (x0 + x1)
    panels = (x1 - x0) / 6.0 * (func(x0) + 4.0 * func(mid) + func(x1))
    return np.concatenate(([0.0], np.cumsum(panels)))


@dataclass(frozen=True)
class AubryData:
    grid_n: int
    mu: float
    Z: float
    period_T: float
    x_nodes: np.ndarray
    B_nodes: np.ndarray
    rho_nodes: np.ndarray
    f_nodes: np.ndarray
    B: Callable[..., np.ndarray]
    rho: Callable[..., np.ndarray]
    drho: Callable[..., np.ndarray]
    f: Callable[..., np.ndarray]
    df: Callable[..., np.ndarray]


def _check_B_sign(Bvals: np.ndarray) -> None:
    if np.min(np.abs(Bvals)) <= 1e-12 or (Bvals.max() > 0 > Bvals.min()):
        raise AssumptionAViolated("B(x) vanishes or changes sign")


def _mu_on_grid(gfun, Bfun, n: int) -> Tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    nodes = np.linspace(0.0, 1.0, n + 1)
    inv_B = lambda x: 1.0 / Bfun(x)
    g_over_B = lambda x: gfun(x) / Bfun(x)
    IB = _cumulative_simpson(inv_B, nodes)
    Ig = _cumulative_simpson(g_over_B, nodes)
    mu = Ig[-1] / IB[-1]
    return mu, nodes, IB, Ig


def compute_aubry(
    model: HamiltonianModel, s: StationarySolution, n: int = 256
) -> AubryData:
    """Tabulate B, rho, f and the scalars mu, Z, T on an n-panel grid.

    n must be a power of two >= 64; acceptance is gated by a Richardson
    check of mu at 2n panels.
    """
    if n < 64 or (n & (n - 1)) != 0:
        raise ValueError("n must be a power of two >= 64")

    def Bfun(x):
        return model.d_p(x, s.du0(x), s.u0(x))

    def gfun(x):
        return model.d_u(x, s.du0(x), s.u0(x))

    probe = np.linspace(0.0, 1.0, 2 * n, endpoint=False)
    _check_B_sign(np.asarray(Bfun(probe)))

    mu, nodes, IB, Ig = _mu_on_grid(gfun, Bfun, n)
    mu_fine, _, _, _ = _mu_on_grid(gfun, Bfun, 2 * n)
    if abs(mu - mu_fine) > 1e-6:
        raise QuadratureDivergence(
            "mu moved by %.3e under refinement %d -> %d" % (abs(mu - mu_fine), n, 2 * n)
        )

    # rho = exp(int_0^x (mu - g)/B) = exp(mu * int 1/B - int g/B)
    rho_nodes = np.exp(mu * IB - Ig)
    rho_nodes[-1] = rho_nodes[0]  # holonomy is exact; close for the periodic spline
    Z = -IB[-1]
    period_T = abs(Z)
    f_nodes = 2.0 * np.pi * IB / IB[-1]

    rho_spline = CubicSpline(nodes, rho_nodes, bc_type="periodic")
    f_spline = CubicSpline(nodes, f_nodes)

    def rho(x):
        return rho_spline(np.mod(x, 1.0))

    def drho(x):
        # exact identity rho' B = rho (mu - dH/du); no differencing
        return rho(x) * (mu - gfun(x)) / Bfun(x)

    def f(x):
        return f_spline(np.mod(x, 1.0))

    def df(x):
        return -2.0 * np.pi / (Z * Bfun(x))

    return AubryData(
        grid_n=n,
        mu=float(mu),
        Z=float(Z),
        period_T=float(period_T),
        x_nodes=nodes,
        B_nodes=np.asarray(Bfun(nodes), dtype=float),
        rho_nodes=rho_nodes,
        f_nodes=f_nodes,
        B=Bfun,
        rho=rho,
        drho=drho,
        f=f,
        df=df,
    )


@dataclass(frozen=True)
class ConstantsLedger:
    mu: float
    M0: float
    M1: float
    M2: float
    alpha: float
    eps0: float
    delta0: float
    eps_tilde1: float
    min_abs_B: float
    period_T: float
    kappa: float
    degenerate_mu: bool

    def eps_tilde0(self, theta: float) -> float:
        return min(
            abs(self.mu - theta) * self.M2 / (self.M0 * self.M1 * (self.M1 + self.M2)),
            1.0,
        )


def compute_constants(
    model: HamiltonianModel,
    s: StationarySolution,
    a: AubryData,
    dense: int = 4096,
    lattice: Tuple[int, int, int] = (65, 33, 33),
) -> ConstantsLedger:
    """Evaluate the constants ledger.

    M0 bounds the averaged second-derivative kernels by a lattice maximum
    over a box around the graph of u0 wide enough to cover every
    perturbation the certificates use.
    """
    xd = np.linspace(0.0, 1.0, dense, endpoint=False)
    rho_d = a.rho(xd)
    drho_d = a.drho(xd)
    sup_rho = float(np.max(rho_d))
    sup_drho = float(np.max(np.abs(drho_d)))
    M1 = sup_rho + sup_drho
    M2 = float(np.min(rho_d))
    min_abs_B = float(np.min(np.abs(a.B(xd))))
    alpha = (model.kappa + abs(a.mu)) / min_abs_B

    max_df = 2.0 * np.pi / (a.period_T * min_abs_B)
    s_max = 2.0 * sup_drho + sup_rho * max_df
    r_max = 2.0 * sup_rho
    nx, ns, nr = lattice
    xl = np.linspace(0.0, 1.0, nx, endpoint=False)
    sl = np.linspace(-s_max, s_max, ns)
    rl = np.linspace(-r_max, r_max, nr)
    X = xl[:, None, None]
    P = s.du0(xl)[:, None, None] + sl[None, :, None]
    U = s.u0(xl)[:, None, None] + rl[None, None, :]
    M0 = max(
        float(np.max(np.abs(model.d_pp(X, P, U)))),
        float(np.max(np.abs(model.d_uu(X, P, U)))),
        float(np.max(np.abs(model.d_up(X, P, U)))),
    )

    mu = a.mu
    degenerate = abs(mu) < _MU_TOL
    eps0 = min(abs(mu) * M2 / (2.0 * M0 * M1 * (M1 + M2)), 1.0)

    ledger = ConstantsLedger(
        mu=mu,
        M0=M0,
        M1=M1,
        M2=M2,
        alpha=alpha,
        eps0=eps0,
        delta0=0.0,
        eps_tilde1=0.0,
        min_abs_B=min_abs_B,
        period_T=a.period_T,
        kappa=model.kappa,
        degenerate_mu=degenerate,
    )

    delta0 = ledger.eps_tilde0(mu / 2.0) * M2 if mu > 0.0 else 0.0
    eps_tilde1 = 0.0
    if mu < 0.0:
        T, b = a.period_T, min_abs_B
        bracket = (
            8.0 * np.pi**2 / (T**2 * b**2)
            + 2.0 * alpha**2
            + 4.0 * np.pi * alpha / (T * b)
            + 2.0
            + 2.0 * alpha
            + 2.0 * np.pi / (T * b)
        )
        eps_tilde1 = min(-mu / (M1 * M0 * bracket), 1.0)

    return ConstantsLedger(
        mu=mu,
        M0=M0,
        M1=M1,
        M2=M2,
        alpha=alpha,
        eps0=eps0,
        delta0=delta0,
        eps_tilde1=eps_tilde1,
        min_abs_B=min_abs_B,
        period_T=a.period_T,
        kappa=model.kappa,
        degenerate_mu=degenerate,
    )


def _rk4(f, y, t, dt):
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def mu_flow_average(
    model: HamiltonianModel,
    s: StationarySolution,
    a: AubryData,
    rk4_steps: int = 4096,
) -> float:
    """Average dH/du along the Aubry orbit by integrating xdot = B(x).

    Independent route to mu; the caller compares against the quadrature
    value.
    """
    if rk4_steps < 100:
        raise ValueError("rk4_steps must be >= 100")

    def rhs(t, y):
        x = y[0]
        return np.array([a.B(x), model.d_u(x, s.du0(x), s.u0(x))])

    y = np.array([0.0, 0.0])
    dt = a.period_T / rk4_steps
    t = 0.0
    for _ in range(rk4_steps):
        y = _rk4(rhs, y, t, dt)
        t += dt
    advance = 1.0 if a.B(0.0) > 0 else -1.0
    if abs(y[0] - advance) > 1e-5:
        raise PeriodMismatch(
            "orbit missed its start by %.3e after one period" % abs(y[0] - advance)
        )
    return float(y[1] / a.period_T)


def first_return_time(
    a: AubryData, x0: float = 0.0, steps: int = 4096
) -> float:
    """First-return time of xdot = B(x) to x0, by RK4 plus bisection."""
    advance = 1.0 if a.B(x0) > 0 else -1.0
    target = x0 + advance

    def rhs(t, y):
        return a.B(y)

    dt = a.period_T / steps
    x = float(x0)
    t = 0.0
    # march until the unwrapped trajectory brackets the target
    for _ in range(4 * steps):
        x_new = float(_rk4(rhs, x, t, dt))
        if (x_new - target) * advance >= 0.0:
            break
        x, t = x_new, t + dt
    else:
        raise PeriodMismatch("no first return within 4 nominal periods")

    lo, hi = 0.0, dt
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        x_mid = float(_rk4(rhs, x, t, mid))
        if (x_mid - target) * advance >= 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-15:
            break
    return t + 0.5 * (lo + hi)


def require_nondegenerate(ledger: ConstantsLedger) -> None:
    if ledger.degenerate_mu:
        raise DegenerateMu("mu = 0: strict certificates do not exist")
