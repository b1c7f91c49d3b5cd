import numpy as np
import pytest

from contacthj.certificates import (
    CertificateKind,
    _periodic,
    _stationary,
    make_evolutionary,
    make_periodic_sub,
    make_stationary,
    verify_certificate,
)
from contacthj.errors import (
    DegenerateMu,
    EpsOutOfRange,
    MuNotNegative,
    RegimeMismatch,
    SignViolation,
)
from contacthj import compute_aubry, compute_constants, constant_solution, example1
from contacthj.fourier import FourierSeries


def test_stationary_sub_residual_sign(ex1_stable):
    model, s, a, ledger = ex1_stable
    cert = make_stationary(model, s, a, ledger, ledger.eps0)
    assert cert.kind is CertificateKind.STATIONARY_SUB
    rep = verify_certificate(cert, model)
    assert rep.verdict == "PASS"
    assert rep.max_residual <= 1e-10
    # H(x, -eps rho', -eps rho) = eps^2 rho'^2 - eps rho' - eps rho <= 0
    assert rep.min_residual < 0.0


def test_stationary_super_residual_sign(ex1_stable):
    model, s, a, ledger = ex1_stable
    cert = make_stationary(model, s, a, ledger, -ledger.eps0)
    assert cert.kind is CertificateKind.STATIONARY_SUPER
    rep = verify_certificate(cert, model)
    assert rep.min_residual >= -1e-10
    assert rep.max_residual > 0.0


def test_stationary_anchoring_value(ex1_stable):
    model, s, a, ledger = ex1_stable
    cert = make_stationary(model, s, a, ledger, ledger.eps0)
    # u_eps = u0 - eps rho with rho(0) = 1
    assert float(cert.profile(0.0)) == pytest.approx(-ledger.eps0, abs=1e-12)


def test_stationary_eps_gate(ex1_stable):
    model, s, a, ledger = ex1_stable
    for bad in (0.0, 2.0 * ledger.eps0, -2.0 * ledger.eps0):
        with pytest.raises(EpsOutOfRange):
            make_stationary(model, s, a, ledger, bad)


def test_stationary_needs_nondegenerate_mu():
    m = example1(FourierSeries(0.0, (0.5,), ()))
    s = constant_solution(0.0)
    a = compute_aubry(m, s, n=256)
    ledger = compute_constants(m, s, a)
    with pytest.raises(DegenerateMu):
        make_stationary(m, s, a, ledger, 0.01)


def test_evolutionary_regime_below(ex1_stable):
    model, s, a, ledger = ex1_stable
    theta = 0.5
    eps = ledger.eps_tilde0(theta)
    sub = make_evolutionary(model, s, a, ledger, eps, theta)
    sup = make_evolutionary(model, s, a, ledger, -eps, theta)
    assert sub.kind is CertificateKind.EVOL_SUB
    assert sup.kind is CertificateKind.EVOL_SUPER
    assert sub.valid_t == (0.0, np.inf)
    verify_certificate(sub, model, nt=64)
    verify_certificate(sup, model, nt=64)


def test_evolutionary_regime_above_swaps_roles(ex1_stable):
    model, s, a, ledger = ex1_stable
    theta = 2.0
    eps = ledger.eps_tilde0(theta)
    cert = make_evolutionary(model, s, a, ledger, eps, theta)
    assert cert.kind is CertificateKind.EVOL_SUPER
    cert = make_evolutionary(model, s, a, ledger, -eps, theta)
    assert cert.kind is CertificateKind.EVOL_SUB
    verify_certificate(cert, model, nt=64)


def test_evolutionary_finite_window(ex1_unstable):
    model, s, a, ledger = ex1_unstable
    theta = -0.5
    eps_max = ledger.eps_tilde0(theta)
    eps = 0.5 * eps_max
    cert = make_evolutionary(model, s, a, ledger, eps, theta)
    assert cert.kind is CertificateKind.EVOL_SUPER
    t_end = (np.log(eps_max) - np.log(eps)) / (-theta)
    assert cert.valid_t[1] == pytest.approx(t_end)
    verify_certificate(cert, model, nt=64)
    with pytest.raises(ValueError):
        verify_certificate(cert, model, nt=64, t_max=2.0 * t_end)


def test_evolutionary_regime_rejections(ex1_stable, ex1_unstable):
    model, s, a, ledger = ex1_stable
    with pytest.raises(RegimeMismatch):
        make_evolutionary(model, s, a, ledger, 0.01, 1.0)  # theta == mu
    with pytest.raises(RegimeMismatch):
        make_evolutionary(model, s, a, ledger, 0.01, -0.3)
    model, s, a, ledger = ex1_unstable
    with pytest.raises(RegimeMismatch):
        make_evolutionary(model, s, a, ledger, 0.01, 0.5)
    with pytest.raises(EpsOutOfRange):
        make_evolutionary(model, s, a, ledger, 1.5, -0.5)


def test_evolutionary_profile_decay(ex1_stable):
    model, s, a, ledger = ex1_stable
    theta = 0.5
    eps = ledger.eps_tilde0(theta)
    cert = make_evolutionary(model, s, a, ledger, eps, theta)
    x = np.linspace(0, 1, 32, endpoint=False)
    d0 = np.max(np.abs(cert.profile(x, 0.0) - s.u0(x)))
    d1 = np.max(np.abs(cert.profile(x, 2.0) - s.u0(x)))
    assert d1 == pytest.approx(d0 * np.exp(-theta * 2.0), rel=1e-10)


def test_periodic_sub_anchor_and_period(ex1_unstable):
    model, s, a, ledger = ex1_unstable
    x0 = 0.37
    cert = make_periodic_sub(model, s, a, ledger, ledger.eps_tilde1, x0)
    assert float(cert.profile(x0, 0.0)) == pytest.approx(float(s.u0(x0)), abs=1e-9)
    x = np.linspace(0, 1, 64, endpoint=False)
    w0 = cert.profile(x, 0.0)
    wT = cert.profile(x, a.period_T)
    assert np.allclose(w0, wT, atol=1e-9)
    rep = verify_certificate(cert, model, nt=64, t_max=a.period_T)
    assert rep.max_residual <= 1e-10


def test_periodic_sub_guards(ex1_stable, ex1_unstable):
    model, s, a, ledger = ex1_stable
    with pytest.raises(MuNotNegative):
        make_periodic_sub(model, s, a, ledger, 0.001)
    model, s, a, ledger = ex1_unstable
    with pytest.raises(EpsOutOfRange):
        make_periodic_sub(model, s, a, ledger, 2.0 * ledger.eps_tilde1)
    with pytest.raises(EpsOutOfRange):
        make_periodic_sub(model, s, a, ledger, -ledger.eps_tilde1)


def test_corrupted_amplitude_raises_sign_violation(ex1_wavy):
    # amplitude far beyond eps0 makes the quadratic term dominate and the
    # subsolution sign fails; the unchecked builder lets us observe that
    model, s, a, ledger = ex1_wavy
    cert = _stationary(model, s, a, 50.0)
    with pytest.raises(SignViolation) as exc:
        verify_certificate(cert, model)
    assert exc.value.residual > 0.0
    assert 0.0 <= exc.value.x < 1.0


def test_corrupted_periodic_raises_sign_violation(ex1_unstable):
    model, s, a, ledger = ex1_unstable
    cert = _periodic(s, a, 50.0 * ledger.eps_tilde1, 0.0)
    with pytest.raises(SignViolation):
        verify_certificate(cert, model, nt=64, t_max=a.period_T)


def test_verify_grid_floors(ex1_stable):
    model, s, a, ledger = ex1_stable
    cert = make_stationary(model, s, a, ledger, ledger.eps0)
    with pytest.raises(ValueError):
        verify_certificate(cert, model, nx=32)
