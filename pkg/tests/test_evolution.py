import numpy as np
import pytest

from contacthj.errors import BlowUp, CFLViolation
from contacthj.evolution import (
    ContactState,
    GridFunction,
    SchemeConfig,
    default_config,
    evolve,
    evolve_values,
    flow_b6,
    step,
)
from contacthj import constant_solution, example1, example2
from contacthj.fourier import FourierSeries


def test_grid_function_basics():
    g = GridFunction.from_callable(lambda x: np.sin(2 * np.pi * x), 64)
    assert g.n == 64
    assert g.x[1] == pytest.approx(1.0 / 64)
    h = GridFunction.constant(0.5, 64)
    assert g.sup_dist(h) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        GridFunction(8, np.zeros(8))
    with pytest.raises(ValueError):
        GridFunction(16, np.full(16, np.nan))


def test_scheme_config_validation():
    with pytest.raises(ValueError):
        SchemeConfig(lf_alpha=5.0, cfl=0.7)
    with pytest.raises(ValueError):
        SchemeConfig(lf_alpha=-1.0)


def test_default_config_covers_gradient_bound(ex1_stable):
    model, s, _, _ = ex1_stable
    cfg = default_config(model, s)
    # |2p + 1| <= 5 on |p| <= 2
    assert cfg.lf_alpha == pytest.approx(5.0)
    assert cfg.blowup_threshold == pytest.approx(10.0)


def test_step_cfl_guard(ex1_stable):
    model, s, _, _ = ex1_stable
    cfg = default_config(model, s)
    w = GridFunction.constant(0.0, 64)
    with pytest.raises(CFLViolation):
        step(model, cfg, w, dt=1.0)


def test_constant_data_exact_ode(ex1_stable):
    # lambda = 1: constant data c solves w' = -w exactly, gradient stays 0
    model, s, _, _ = ex1_stable
    cfg = default_config(model, s)
    phi = GridFunction.constant(0.01, 128)
    ref = GridFunction.constant(0.0, 128)
    trace = evolve(model, cfg, phi, 2.0, 0.1, ref)
    assert trace.dist[0] == pytest.approx(0.01)
    # forward Euler on w' = -w: slight rate bias, still close to e^{-t}
    assert trace.dist[-1] == pytest.approx(0.01 * np.exp(-2.0), rel=0.01)
    assert np.ptp(trace.samples[-1].snapshot.values) < 1e-15


def test_monotone_comparison_single_pair(ex1_stable):
    model, s, _, _ = ex1_stable
    cfg = default_config(model, s)
    n = 128
    x = np.arange(n) / n
    lo = 0.02 * np.sin(2 * np.pi * x)
    hi = lo + 0.05 + 0.02 * np.cos(2 * np.pi * x) ** 2
    raw = evolve_values(model, cfg, np.stack([lo, hi]), n, 1.0, 0.1)
    for _, vals in raw:
        assert np.all(vals[1] - vals[0] >= -1e-12)


def test_contraction_without_u_coupling():
    # lambda = 0 kills the u-term; sup distance between solutions never grows
    model = example1(FourierSeries.constant(0.0))
    cfg = default_config(model)
    n = 128
    x = np.arange(n) / n
    a = 0.05 * np.sin(2 * np.pi * x)
    b = 0.04 * np.cos(2 * np.pi * x)
    raw = evolve_values(model, cfg, np.stack([a, b]), n, 1.0, 0.1)
    dists = [float(np.max(np.abs(v[0] - v[1]))) for _, v in raw]
    assert all(d2 <= d1 + 1e-12 for d1, d2 in zip(dists, dists[1:]))


def test_blowup_detection(ex1_unstable):
    model, s, _, _ = ex1_unstable
    cfg = SchemeConfig(lf_alpha=5.0, blowup_threshold=1.0)
    phi = np.full(64, 0.5)
    with pytest.raises(BlowUp):
        evolve_values(model, cfg, phi, 64, 5.0, 0.5)


def test_lf_alpha_running_check():
    model = example1(FourierSeries.constant(0.0))
    cfg = SchemeConfig(lf_alpha=1.01)  # too small for steep data
    n = 128
    x = np.arange(n) / n
    phi = 0.5 * np.sin(2 * np.pi * x)  # |2p+1| up to ~ 7
    # under-dissipated scheme: either the gradient guard or the NaN/blowup
    # guard must abort the run
    from contacthj.errors import NonFinite

    with np.errstate(all="ignore"):
        with pytest.raises((CFLViolation, NonFinite, BlowUp)):
            evolve_values(model, cfg, phi, n, 0.5, 0.1)


def test_evolve_argument_validation(ex1_stable):
    model, s, _, _ = ex1_stable
    cfg = default_config(model, s)
    phi = GridFunction.constant(0.0, 64)
    ref = GridFunction.constant(0.0, 128)
    with pytest.raises(ValueError):
        evolve(model, cfg, phi, -1.0, 0.1, phi)
    with pytest.raises(ValueError):
        evolve(model, cfg, phi, 1.0, 0.1, ref)


def test_flow_b6_conserves_H_without_u_term():
    # lambda = 0: H has no u dependence, so H is conserved along characteristics
    model = example1(FourierSeries.constant(0.0))
    st = ContactState(x=0.2, p=0.7, u=0.0)
    states = flow_b6(model, st, 1.0, steps=500)
    h0 = float(model.eval(st.x, st.p, st.u))
    hs = [float(model.eval(s.x, s.p, s.u)) for s in states]
    assert max(abs(h - h0) for h in hs) < 1e-10


def test_flow_b6_orbit_invariance_example2():
    model = example2(FourierSeries(1.0, (), (0.3,)), FourierSeries.constant(1.0))
    s = constant_solution(1.0)
    st = ContactState(x=0.1, p=0.0, u=1.0)
    states = flow_b6(model, st, 2.0, steps=1000)
    dev = max(
        abs(ss.p - float(s.du0(ss.x))) + abs(ss.u - float(s.u0(ss.x)))
        for ss in states
    )
    assert dev < 1e-10


def test_flow_b6_wraps_x(ex1_stable):
    model, _, _, _ = ex1_stable
    st = ContactState(x=0.9, p=0.5, u=0.0)
    states = flow_b6(model, st, 1.0, steps=200)
    assert all(0.0 <= ss.x < 1.0 for ss in states)
    with pytest.raises(ValueError):
        flow_b6(model, st, 1.0, steps=10)
