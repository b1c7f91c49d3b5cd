"""Verdicts: decay rates, stability classification, periodic solutions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .aubry import AubryData, ConstantsLedger
from .certificates import make_periodic_sub
from .errors import DegenerateWindow, MuNotNegative, NoConvergence, Trivialized
from .evolution import (
    EvolutionTrace,
    GridFunction,
    SchemeConfig,
    default_config,
    evolve_values,
)
from .hamiltonian import HamiltonianModel, StationarySolution

DIST_FLOOR = 1e-14


def estimate_rate(trace: EvolutionTrace, window: Tuple[float, float]) -> float:
    """Least-squares slope of ln dist on the window; -inf once the distance
    hits the floating point floor."""
    t_lo, t_hi = window
    if t_hi <= t_lo:
        raise DegenerateWindow("empty window [%g, %g]" % (t_lo, t_hi))
    t = trace.t
    d = trace.dist
    mask = (t >= t_lo) & (t <= t_hi)
    if int(mask.sum()) < 10:
        raise DegenerateWindow("need >= 10 samples in window, got %d" % int(mask.sum()))
    d_win = d[mask]
    if np.any(d_win <= DIST_FLOOR):
        return float("-inf")
    slope = np.polyfit(t[mask], np.log(d_win), 1)[0]
    return float(slope)


def _slope(t: np.ndarray, d: np.ndarray, window: Tuple[float, float]) -> float:
    mask = (t >= window[0]) & (t <= window[1])
    if np.any(d[mask] <= DIST_FLOOR):
        return float("-inf")
    return float(np.polyfit(t[mask], np.log(d[mask]), 1)[0])


def _random_band_limited(rng: np.random.Generator, x: np.ndarray, modes: int = 4):
    """Smooth low-pass noise with sup norm 1 on the given grid."""
    out = np.full_like(x, rng.normal())
    for k in range(1, modes + 1):
        out += rng.normal() * np.cos(2 * np.pi * k * x) / k
        out += rng.normal() * np.sin(2 * np.pi * k * x) / k
    return out / np.max(np.abs(out))


@dataclass(frozen=True)
class StabilityVerdict:
    kind: str  # AsymptoticallyStable | Unstable | Inconclusive
    measured_rate: Optional[float] = None
    escape_time: Optional[float] = None
    trials: List[dict] = field(default_factory=list)


def classify_stability(
    model: HamiltonianModel,
    s: StationarySolution,
    a: AubryData,
    ledger: ConstantsLedger,
    trials: int = 5,
    delta: Optional[float] = None,
    n: int = 512,
    seed: int = 0,
    cfg: Optional[SchemeConfig] = None,
    sample_dt: float = 0.05,
    t_final: Optional[float] = None,
) -> StabilityVerdict:
    """Evolve a bundle of initial data in the delta-tube around u0.

    mu > 0: stable when every trace decays below 1e-6 * delta; the reported
    rate is the slowest decay among the trials.  mu < 0: unstable when some
    trace leaves the eps0-tube monotonically.
    """
    if trials < 3:
        raise ValueError("need at least 3 trials")
    mu = ledger.mu
    rng = np.random.default_rng(seed)
    x = np.arange(n) / n
    u0 = np.asarray(s.u0(x), dtype=float) + np.zeros(n)
    if cfg is None:
        cfg = default_config(model, s)

    if mu > 0.0:
        if delta is None:
            delta = ledger.delta0
        if delta > ledger.delta0 * (1.0 + 1e-12):
            raise ValueError("delta must not exceed delta0 = %g" % ledger.delta0)
        eps_t = ledger.eps_tilde0(mu / 2.0)
        rho = np.asarray(a.rho(x), dtype=float)
        rows = [u0 - eps_t * rho]
        for _ in range(trials - 1):
            rows.append(u0 + delta * _random_band_limited(rng, x))
        phi = np.stack(rows)
        if t_final is None:
            start = max(eps_t * ledger.M1, delta)
            t_final = np.log(start / (1e-6 * delta)) / mu * 1.3 + 2.0
        t_final = sample_dt * int(np.ceil(t_final / sample_dt))
        raw = evolve_values(model, cfg, phi, n, t_final, sample_dt)
        t = np.array([tt for tt, _ in raw])
        dists = np.stack([np.max(np.abs(v - u0), axis=-1) for _, v in raw], axis=-1)
        info = []
        rates = []
        converged = True
        for i in range(phi.shape[0]):
            final = float(dists[i, -1])
            ok = final < 1e-6 * delta
            converged = converged and ok
            if np.max(dists[i]) <= DIST_FLOOR * 10:
                # started at the fixed point; trivially stable, no rate
                info.append({"final_dist": final, "decayed": True, "rate": None})
                continue
            r = _slope(t, dists[i], (0.25 * t_final, 0.9 * t_final))
            rates.append(r)
            info.append({"final_dist": final, "decayed": ok, "rate": r})
        kind = "AsymptoticallyStable" if converged else "Inconclusive"
        rate = max(rates) if rates else None
        return StabilityVerdict(kind=kind, measured_rate=rate, trials=info)

    # mu <= 0: probe for escape from the eps0 tube
    if delta is None:
        delta = min(1e-3, 0.5 * ledger.eps0)
    tube = ledger.eps0 if ledger.eps0 > 0 else 10.0 * delta
    rho = np.asarray(a.rho(x), dtype=float)
    sup_rho = float(np.max(rho))
    rows = [u0 - (delta / sup_rho) * rho, u0 + (delta / sup_rho) * rho]
    for _ in range(max(0, trials - 2)):
        rows.append(u0 + delta * _random_band_limited(rng, x))
    t_max = 3.0 * np.log(tube / delta) / max(abs(mu), 0.1) + 2.0
    info = []
    escape_time = None
    for row in rows:
        t_list = [0.0]
        d_list = [float(np.max(np.abs(row - u0)))]
        vals = row.copy()
        t = 0.0
        esc = None
        while t < t_max:
            vals = evolve_values(model, cfg, vals, n, sample_dt, sample_dt)[-1][1]
            t += sample_dt
            d = float(np.max(np.abs(vals - u0)))
            t_list.append(t)
            d_list.append(d)
            if d >= tube:
                esc = t
                break
        d_arr = np.array(d_list)
        monotone = bool(np.all(np.diff(d_arr) > -1e-9 * max(1.0, d_arr.max())))
        info.append({"escape_time": esc, "monotone": monotone, "final_dist": d_list[-1]})
        if esc is not None and monotone and escape_time is None:
            escape_time = esc
    if escape_time is not None:
        return StabilityVerdict(kind="Unstable", escape_time=escape_time, trials=info)
    return StabilityVerdict(kind="Inconclusive", trials=info)


@dataclass(frozen=True)
class RateBounds:
    upper_ok: bool
    lower_ok: bool
    rates_upper: List[float]
    rate_lower: float


def rate_bounds_check(
    model: HamiltonianModel,
    s: StationarySolution,
    a: AubryData,
    ledger: ConstantsLedger,
    tol_rate: float = 0.1,
    grids: Tuple[int, int] = (256, 512),
    trials: int = 5,
    seed: int = 0,
    t_final: float = 12.0,
    window: Tuple[float, float] = (2.0, 12.0),
    sample_dt: float = 0.05,
) -> RateBounds:
    """Two-sided check of the decay-rate bounds for mu > 0.

    Random tube data must decay no slower than -mu + tol; the extremal
    profile u0 - eps~ rho must decay no faster than -mu - tol.  Rates are
    Richardson-extrapolated over the grid pair to strip the O(dx)
    numerical-viscosity bias.
    """
    mu = ledger.mu
    if mu <= 0.0:
        raise ValueError("rate bounds are only claimed for mu > 0")

    rng = np.random.default_rng(seed)
    coarse, fine = grids
    if fine != 2 * coarse:
        raise ValueError("grids must be (n, 2n) for Richardson extrapolation")

    # draw mode coefficients once, realize them on each grid
    coeffs = [rng.normal(size=(2, 5)) for _ in range(trials)]

    def trial_rows(n):
        x = np.arange(n) / n
        u0 = np.asarray(s.u0(x), dtype=float) + np.zeros(n)
        rho = np.asarray(a.rho(x), dtype=float)
        eps_t = ledger.eps_tilde0(mu / 2.0)
        rows = [u0 - eps_t * rho]
        for c in coeffs:
            eta = np.full_like(x, c[0, 0])
            for k in range(1, 5):
                eta += c[0, k] * np.cos(2 * np.pi * k * x) / k
                eta += c[1, k] * np.sin(2 * np.pi * k * x) / k
            eta /= np.max(np.abs(eta))
            rows.append(u0 + ledger.delta0 * eta)
        return np.stack(rows), u0

    cfg = default_config(model, s)
    rates = {}
    for n in grids:
        phi, u0 = trial_rows(n)
        raw = evolve_values(model, cfg, phi, n, t_final, sample_dt)
        t = np.array([tt for tt, _ in raw])
        dists = np.stack([np.max(np.abs(v - u0), axis=-1) for _, v in raw], axis=-1)
        rates[n] = [_slope(t, dists[i], window) for i in range(phi.shape[0])]

    extrap = [2.0 * rf - rc for rc, rf in zip(rates[coarse], rates[fine])]
    rate_lower = extrap[0]
    rates_upper = extrap[1:]
    return RateBounds(
        upper_ok=all(r <= -mu + tol_rate for r in rates_upper),
        lower_ok=rate_lower >= -mu - tol_rate,
        rates_upper=rates_upper,
        rate_lower=rate_lower,
    )


@dataclass(frozen=True)
class PeriodicReport:
    x0: float
    eps: float
    iterations: int
    final_delta: float
    variation: float
    min_increment: float
    period_T: float
    profile: GridFunction


def find_periodic(
    model: HamiltonianModel,
    s: StationarySolution,
    a: AubryData,
    ledger: ConstantsLedger,
    x0: float = 0.0,
    max_iters: int = 200,
    tol: float = 1e-6,
    n: int = 512,
    cfg: Optional[SchemeConfig] = None,
    eps: Optional[float] = None,
) -> PeriodicReport:
    """Iterate the time-T solution map from the periodic-subsolution seed.

    The seed is a subsolution, so each application of the return map pushes
    the iterate up (to scheme accuracy).  Constant offsets are an exact
    eigenvector of the return map with multiplier exp(-mu T) > 1, so each
    iterate is re-anchored at x0 to the stationary value there; this pins
    the unstable mode while leaving the shape dynamics untouched.
    Convergence is declared when consecutive anchored iterates agree within
    tol, and the fixed point must show genuine time variation over one
    period to count as nontrivial.
    """
    if a.mu >= 0.0:
        raise MuNotNegative("periodic solutions are sought for mu < 0 only")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if eps is None:
        eps = ledger.eps_tilde1
    cert = make_periodic_sub(model, s, a, ledger, eps, x0)
    if cfg is None:
        cfg = default_config(model, s)
    T = a.period_T
    x = np.arange(n) / n
    vals = np.asarray(cert.profile(x, 0.0), dtype=float)
    i0 = int(round(x0 * n)) % n
    anchor = float(np.asarray(s.u0(x[i0])))

    min_increment = np.inf
    converged = False
    iterations = 0
    final_delta = np.inf
    for it in range(1, max_iters + 1):
        nxt = evolve_values(model, cfg, vals, n, T, T)[-1][1]
        nxt = nxt - (nxt[i0] - anchor)
        inc = nxt - vals
        min_increment = min(min_increment, float(inc.min()))
        final_delta = float(np.max(np.abs(inc)))
        vals = nxt
        iterations = it
        if final_delta < tol:
            converged = True
            break
    if not converged:
        raise NoConvergence(
            "return map not settled after %d iterations (delta = %.3e)"
            % (max_iters, final_delta)
        )

    one_period = evolve_values(model, cfg, vals, n, T, T / 64.0)
    variation = max(float(np.max(np.abs(v - vals))) for _, v in one_period)
    if variation <= 10.0 * tol:
        raise Trivialized(
            "fixed point shows variation %.3e <= 10 tol; periodic solution trivial"
            % variation
        )
    return PeriodicReport(
        x0=x0,
        eps=float(eps),
        iterations=iterations,
        final_delta=final_delta,
        variation=variation,
        min_increment=min_increment,
        period_T=T,
        profile=GridFunction(n, vals),
    )
