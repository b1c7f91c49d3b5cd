"""FastAPI service wrapping the numerical core.

Each endpoint is a pure compute job: the request carries the full model
specification, the response carries plain JSON data.  The CLI is a thin
client of this app.
"""
from __future__ import annotations

import itertools

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import analysis, aubry, certificates, evolution, hamiltonian
from ..config import build_model
from ..errors import ConfigError, ContactHJError, SignViolation
from . import schemas as sc


def _pipeline(spec: sc.ModelSpec, n: int):
    cfg = spec.to_config(n=max(n, 16))
    model, stat = build_model(cfg)
    report = hamiltonian.check_stationary(model, stat, n=max(n, 64))
    # quadrature grid must be a power of two >= 64, independent of the PDE grid
    an = n if n >= 64 and (n & (n - 1)) == 0 else 256
    data = aubry.compute_aubry(model, stat, n=an)
    ledger = aubry.compute_constants(model, stat, data)
    return model, stat, report, data, ledger


def _default_eps(kind, theta, ledger, finite_window):
    if kind in ("StationarySub", "StationarySuper"):
        eps = ledger.eps0
        return eps if kind == "StationarySub" else -eps
    if kind == "PeriodicSub":
        return ledger.eps_tilde1
    eps = ledger.eps_tilde0(theta)
    if finite_window:
        eps *= 0.5
    # EvolSub below mu needs eps > 0; above mu (or the finite regime) the
    # signs swap, so pick the sign matching the requested kind
    if ledger.mu > 0 and theta < ledger.mu:
        return eps if kind == "EvolSub" else -eps
    return eps if kind == "EvolSuper" else -eps


def create_app() -> FastAPI:
    app = FastAPI(title="contacthj", version="0.1.0")

    @app.exception_handler(ContactHJError)
    async def _domain_error(request: Request, exc: ContactHJError):
        status = 400 if isinstance(exc, ConfigError) else 422
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/assumptions", response_model=sc.AssumptionsResponse)
    def assumptions(req: sc.AssumptionsRequest):
        cfg = req.spec.to_config()
        model, _ = build_model(cfg)
        rep = hamiltonian.check_assumptions(
            model, samples_per_axis=req.samples_per_axis, min_slope=req.min_slope
        )
        return sc.AssumptionsResponse(
            min_d_pp=rep.min_d_pp,
            max_abs_d_u=rep.max_abs_d_u,
            slope_pos=rep.slope_pos,
            slope_neg=rep.slope_neg,
            h1_ok=rep.h1_ok,
            h2_ok=rep.h2_ok,
            h3_ok=rep.h3_ok,
            ok=rep.ok,
            kappa=model.kappa,
        )

    @app.post("/aubry", response_model=sc.AubryResponse)
    def aubry_endpoint(req: sc.AubryRequest):
        model, stat, report, data, ledger = _pipeline(req.spec, req.n)
        flow_mu = aubry.mu_flow_average(model, stat, data)
        return sc.AubryResponse(
            mu=data.mu,
            Z=data.Z,
            period_T=data.period_T,
            grid_n=data.grid_n,
            constants=sc.ConstantsOut(**{
                k: getattr(ledger, k) for k in sc.ConstantsOut.model_fields
            }),
            x=data.x_nodes.tolist(),
            B=data.B_nodes.tolist(),
            rho=data.rho_nodes.tolist(),
            drho=np.asarray(data.drho(data.x_nodes)).tolist(),
            f=data.f_nodes.tolist(),
            mu_flow_average=flow_mu,
            stationary_residual=report.max_residual,
        )

    @app.post("/certify", response_model=sc.CertifyResponse)
    def certify(req: sc.CertifyRequest):
        model, stat, _, data, ledger = _pipeline(req.spec, req.n)
        finite = ledger.mu < 0 and ledger.mu < req.theta < 0
        eps = req.eps
        if eps is None:
            eps = _default_eps(req.kind, req.theta, ledger, finite)
        if req.kind in ("StationarySub", "StationarySuper"):
            cert = certificates.make_stationary(model, stat, data, ledger, eps)
        elif req.kind == "PeriodicSub":
            cert = certificates.make_periodic_sub(
                model, stat, data, ledger, eps, req.x0
            )
        else:
            cert = certificates.make_evolutionary(
                model, stat, data, ledger, eps, req.theta
            )
        if cert.kind.value != req.kind:
            raise ConfigError(
                "eps/theta produce kind %s, not the requested %s"
                % (cert.kind.value, req.kind),
                field="kind",
            )
        t_max = req.t_max
        if req.kind == "PeriodicSub" and t_max is None:
            t_max = data.period_T
        try:
            rep = certificates.verify_certificate(
                cert, model, nx=req.nx, nt=req.nt, t_max=t_max
            )
        except SignViolation as exc:
            return sc.CertifyResponse(
                kind=cert.kind.value,
                eps=cert.eps,
                theta=cert.theta,
                verdict="FAIL",
                valid_t_end=None if np.isinf(cert.valid_t[1]) else cert.valid_t[1],
                worst={"x": exc.x, "t": exc.t, "residual": exc.residual},
            )
        return sc.CertifyResponse(
            kind=cert.kind.value,
            eps=cert.eps,
            theta=cert.theta,
            verdict="PASS",
            max_residual=rep.max_residual,
            min_residual=rep.min_residual,
            valid_t_end=None if np.isinf(cert.valid_t[1]) else cert.valid_t[1],
            slices=[
                sc.ResidualSlice(t=t, min_residual=lo, max_residual=hi)
                for t, lo, hi in rep.slices
            ],
        )

    @app.post("/evolve", response_model=sc.EvolveResponse)
    def evolve_endpoint(req: sc.EvolveRequest):
        model, stat, _, data, ledger = _pipeline(req.spec, req.n)
        cfg = evolution.default_config(model, stat, cfl=req.cfl)
        n = req.n
        x = np.arange(n) / n
        init = req.initial
        if init.type == "constant":
            vals = np.asarray(stat.u0(x)) + init.value + np.zeros(n)
        elif init.type == "fourier":
            if init.fourier is None:
                raise ConfigError("initial.fourier missing", field="initial.fourier")
            vals = np.asarray(stat.u0(x)) + init.fourier.to_series()(x)
        elif init.type == "values":
            if init.values is None or len(init.values) != n:
                raise ConfigError("initial.values must have length n", field="initial.values")
            vals = np.asarray(init.values, dtype=float)
        else:  # certificate profile at t = 0
            finite = ledger.mu < 0 and ledger.mu < init.theta < 0
            eps = init.eps
            if eps is None:
                eps = _default_eps(init.kind, init.theta, ledger, finite)
            if init.kind in ("StationarySub", "StationarySuper"):
                cert = certificates.make_stationary(model, stat, data, ledger, eps)
            elif init.kind == "PeriodicSub":
                cert = certificates.make_periodic_sub(
                    model, stat, data, ledger, eps, init.x0
                )
            else:
                cert = certificates.make_evolutionary(
                    model, stat, data, ledger, eps, init.theta
                )
            vals = np.asarray(cert.profile(x, 0.0), dtype=float)

        phi = evolution.GridFunction(n, vals)
        reference = evolution.GridFunction.from_callable(stat.u0, n)
        trace = evolution.evolve(model, cfg, phi, req.t_final, req.sample_dt, reference)
        return sc.EvolveResponse(
            n=n,
            lf_alpha=cfg.lf_alpha,
            trace=[
                sc.TracePoint(
                    t=smp.t,
                    sup_dist=smp.dist,
                    min=float(smp.snapshot.values.min()),
                    max=float(smp.snapshot.values.max()),
                )
                for smp in trace.samples
            ],
            snapshots=[smp.snapshot.values.tolist() for smp in trace.samples]
            if req.include_snapshots
            else None,
        )

    @app.post("/stability", response_model=sc.StabilityResponse)
    def stability(req: sc.StabilityRequest):
        model, stat, _, data, ledger = _pipeline(req.spec, req.n)
        verdict = analysis.classify_stability(
            model,
            stat,
            data,
            ledger,
            trials=req.trials,
            delta=req.delta,
            n=req.n,
            seed=req.seed,
        )
        return sc.StabilityResponse(
            verdict=verdict.kind,
            measured_rate=verdict.measured_rate,
            escape_time=verdict.escape_time,
            mu=ledger.mu,
            trials=verdict.trials,
        )

    @app.post("/periodic", response_model=sc.PeriodicResponse)
    def periodic(req: sc.PeriodicRequest):
        model, stat, _, data, ledger = _pipeline(req.spec, req.n)
        reports = []
        profiles = []
        for x0 in req.anchors:
            try:
                rep = analysis.find_periodic(
                    model,
                    stat,
                    data,
                    ledger,
                    x0=x0,
                    max_iters=req.max_iters,
                    tol=req.tol,
                    n=req.n,
                    eps=req.eps,
                )
            except ContactHJError as exc:
                reports.append(
                    sc.PeriodicAnchorReport(
                        x0=x0,
                        eps=req.eps or ledger.eps_tilde1,
                        converged=False,
                        iterations=0,
                        final_delta=float("nan"),
                        variation=float("nan"),
                        nontrivial=False,
                        min_increment=float("nan"),
                        period_T=data.period_T,
                        profile=[],
                        error="%s: %s" % (type(exc).__name__, exc),
                    )
                )
                continue
            profiles.append(rep.profile.values)
            reports.append(
                sc.PeriodicAnchorReport(
                    x0=rep.x0,
                    eps=rep.eps,
                    converged=True,
                    iterations=rep.iterations,
                    final_delta=rep.final_delta,
                    variation=rep.variation,
                    nontrivial=True,
                    min_increment=rep.min_increment,
                    period_T=rep.period_T,
                    profile=rep.profile.values.tolist(),
                )
            )
        gap = 0.0
        for pa, pb in itertools.combinations(profiles, 2):
            gap = max(gap, float(np.max(np.abs(pa - pb))))
        return sc.PeriodicResponse(
            period_T=reports[0].period_T if reports else 0.0,
            reports=reports,
            max_pairwise_gap=gap,
        )

    return app
