"""Closed-form sub/supersolution certificates and pointwise verification.

Each certificate carries its profile together with analytic space and time
derivatives, so residuals are evaluated without any differencing.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .aubry import AubryData, ConstantsLedger, require_nondegenerate
from .errors import EpsOutOfRange, MuNotNegative, RegimeMismatch, SignViolation
from .hamiltonian import HamiltonianModel, StationarySolution

SIGN_TOL = 1e-10


class CertificateKind(str, enum.Enum):
    STATIONARY_SUB = "StationarySub"
    STATIONARY_SUPER = "StationarySuper"
    EVOL_SUB = "EvolSub"
    EVOL_SUPER = "EvolSuper"
    PERIODIC_SUB = "PeriodicSub"


_SUB_KINDS = {CertificateKind.STATIONARY_SUB, CertificateKind.EVOL_SUB,
              CertificateKind.PERIODIC_SUB}


@dataclass(frozen=True)
class Certificate:
    kind: CertificateKind
    eps: float
    theta: float
    x0: Optional[float]
    valid_t: Tuple[float, float]  # claimed time window, end may be inf
    profile: Callable[..., np.ndarray]
    d_x: Callable[..., np.ndarray]
    d_t: Callable[..., np.ndarray]

    @property
    def is_sub(self) -> bool:
        return self.kind in _SUB_KINDS


def _stationary(model, s, a, eps) -> Certificate:
    sgn = a.mu / abs(a.mu)
    kind = CertificateKind.STATIONARY_SUB if eps > 0 else CertificateKind.STATIONARY_SUPER
    return Certificate(
        kind=kind,
        eps=eps,
        theta=0.0,
        x0=None,
        valid_t=(0.0, np.inf),
        profile=lambda x, t=0.0: s.u0(x) - sgn * eps * a.rho(x),
        d_x=lambda x, t=0.0: s.du0(x) - sgn * eps * a.drho(x),
        d_t=lambda x, t=0.0: 0.0 * np.asarray(x),
    )


def make_stationary(
    model: HamiltonianModel,
    s: StationarySolution,
    a: AubryData,
    ledger: ConstantsLedger,
    eps: float,
) -> Certificate:
    """u_eps = u0 - sign(mu) eps rho; sub for eps > 0, super for eps < 0."""
    require_nondegenerate(ledger)
    if eps == 0.0 or abs(eps) > ledger.eps0:
        raise EpsOutOfRange(
            "eps = %g outside admissible 0 < |eps| <= eps0 = %g" % (eps, ledger.eps0)
        )
    return _stationary(model, s, a, eps)


def _evolutionary(s, a, eps, theta, t_end) -> Tuple[Callable, Callable, Callable]:
    profile = lambda x, t: s.u0(x) - eps * a.rho(x) * np.exp(-theta * t)
    d_x = lambda x, t: s.du0(x) - eps * a.drho(x) * np.exp(-theta * t)
    d_t = lambda x, t: theta * eps * a.rho(x) * np.exp(-theta * t)
    return profile, d_x, d_t


def make_evolutionary(
    model: HamiltonianModel,
    s: StationarySolution,
    a: AubryData,
    ledger: ConstantsLedger,
    eps: float,
    theta: float,
) -> Certificate:
    """w_eps = u0 - eps rho e^{-theta t} in one of the three admissible regimes.

    mu > 0, theta in [0, mu):      sub (eps > 0) / super (eps < 0) on [0, inf)
    mu < 0, theta in (mu, 0):      super (eps > 0) / sub (eps < 0) on a finite window
    mu > 0, theta in (mu, inf):    super (eps > 0) / sub (eps < 0) on [0, inf)
    """
    mu = a.mu
    require_nondegenerate(ledger)
    if mu > 0.0 and 0.0 <= theta < mu:
        regime = "below"
    elif mu > 0.0 and theta > mu:
        regime = "above"
    elif mu < 0.0 and mu < theta < 0.0:
        regime = "finite"
    else:
        if mu > 0.0:
            intervals = "[0, mu) or (mu, +inf) for mu > 0"
        else:
            intervals = "(mu, 0) for mu < 0"
        raise RegimeMismatch(
            "theta = %g with mu = %g lies outside %s" % (theta, mu, intervals)
        )

    eps_max = ledger.eps_tilde0(theta)
    if eps == 0.0 or abs(eps) > eps_max:
        raise EpsOutOfRange(
            "eps = %g outside admissible 0 < |eps| <= eps_tilde0(theta) = %g"
            % (eps, eps_max)
        )

    if regime == "finite":
        t_end = (np.log(eps_max) - np.log(abs(eps))) / (-theta)
    else:
        t_end = np.inf
    if regime == "below":
        kind = CertificateKind.EVOL_SUB if eps > 0 else CertificateKind.EVOL_SUPER
    else:  # "above" and "finite" swap sub/super
        kind = CertificateKind.EVOL_SUPER if eps > 0 else CertificateKind.EVOL_SUB

    profile, d_x, d_t = _evolutionary(s, a, eps, theta, t_end)
    return Certificate(
        kind=kind,
        eps=eps,
        theta=theta,
        x0=None,
        valid_t=(0.0, t_end),
        profile=profile,
        d_x=d_x,
        d_t=d_t,
    )


def _periodic(s, a, eps, x0) -> Certificate:
    two_pi_over_Z = 2.0 * np.pi / a.Z
    f_x0 = a.f(x0)

    def phase(x, t):
        return -np.pi / 2.0 + a.f(x) - f_x0 + two_pi_over_Z * t

    return Certificate(
        kind=CertificateKind.PERIODIC_SUB,
        eps=eps,
        theta=0.0,
        x0=x0,
        valid_t=(0.0, np.inf),
        profile=lambda x, t: s.u0(x)
        + eps * a.rho(x) * (1.0 + np.sin(phase(x, t))),
        d_x=lambda x, t: s.du0(x)
        + eps * a.drho(x) * (1.0 + np.sin(phase(x, t)))
        + eps * a.rho(x) * np.cos(phase(x, t)) * a.df(x),
        d_t=lambda x, t: eps * a.rho(x) * np.cos(phase(x, t)) * two_pi_over_Z,
    )


def make_periodic_sub(
    model: HamiltonianModel,
    s: StationarySolution,
    a: AubryData,
    ledger: ConstantsLedger,
    eps: float,
    x0: float = 0.0,
) -> Certificate:
    """The T-periodic subsolution anchored at x0, w(x0, 0) = u0(x0)."""
    if a.mu >= 0.0:
        raise MuNotNegative("periodic subsolutions require mu < 0, got mu = %g" % a.mu)
    if eps <= 0.0 or eps > ledger.eps_tilde1:
        raise EpsOutOfRange(
            "eps = %g outside admissible 0 < eps <= eps_tilde1 = %g"
            % (eps, ledger.eps_tilde1)
        )
    return _periodic(s, a, eps, x0)


@dataclass(frozen=True)
class ResidualReport:
    kind: CertificateKind
    max_residual: float
    min_residual: float
    verdict: str  # "PASS"
    slices: List[Tuple[float, float, float]]  # (t, min residual, max residual)


def verify_certificate(
    c: Certificate,
    model: HamiltonianModel,
    nx: int = 256,
    nt: int = 256,
    t_max: Optional[float] = None,
) -> ResidualReport:
    """Sweep the exact residual dt-profile + H over a space(-time) grid.

    Raises SignViolation (with the worst offender) when the residual sign
    contradicts the certificate kind beyond SIGN_TOL.
    """
    if nx < 64:
        raise ValueError("nx must be >= 64")
    stationary = c.kind in (
        CertificateKind.STATIONARY_SUB,
        CertificateKind.STATIONARY_SUPER,
    )
    if not stationary and nt < 64:
        raise ValueError("nt must be >= 64 for evolutionary kinds")

    x = np.linspace(0.0, 1.0, nx, endpoint=False)
    if stationary:
        ts = np.array([0.0])
    else:
        t_hi = c.valid_t[1]
        if not np.isfinite(t_hi):
            t_hi = t_max if t_max is not None else 5.0
        elif t_max is not None:
            if t_max > c.valid_t[1]:
                raise ValueError("t_max exceeds the certificate's validity window")
            t_hi = t_max
        ts = np.linspace(0.0, t_hi, nt)

    slices = []
    worst = None
    r_max, r_min = -np.inf, np.inf
    for t in ts:
        r = np.asarray(c.d_t(x, t) + model.eval(x, c.d_x(x, t), c.profile(x, t)))
        slices.append((float(t), float(r.min()), float(r.max())))
        if c.is_sub:
            bad = int(np.argmax(r))
            if worst is None or r[bad] > worst[2]:
                worst = (x[bad], float(t), float(r[bad]))
        else:
            bad = int(np.argmin(r))
            if worst is None or r[bad] < worst[2]:
                worst = (x[bad], float(t), float(r[bad]))
        r_max = max(r_max, float(r.max()))
        r_min = min(r_min, float(r.min()))

    violated = (c.is_sub and r_max > SIGN_TOL) or (not c.is_sub and r_min < -SIGN_TOL)
    if violated:
        raise SignViolation(
            "%s residual has the wrong sign: r(%.6f, %.6f) = %.3e"
            % (c.kind.value, worst[0], worst[1], worst[2]),
            x=worst[0],
            t=worst[1],
            residual=worst[2],
        )
    return ResidualReport(
        kind=c.kind,
        max_residual=r_max,
        min_residual=r_min,
        verdict="PASS",
        slices=slices,
    )
