"""Command line experiment driver.

A thin client of the HTTP service: every subcommand builds a JSON request,
posts it to the app (in-process by default, or to ``--server URL``) and
formats the response into CSV/JSONL/report files.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .config import ExperimentConfig, parse_config
from .errors import ConfigError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def _make_client(server):
    import httpx

    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _model_payload(cfg: ExperimentConfig) -> dict:
    return {
        "model": cfg.model,
        "lam": {"a0": cfg.lam.a0, "cos": list(cfg.lam.cos), "sin": list(cfg.lam.sin)},
        "v": {"a0": cfg.v.a0, "cos": list(cfg.v.cos), "sin": list(cfg.v.sin)},
        "stationary": cfg.stationary,
    }


def _post(client, path, payload):
    resp = client.post(path, json=payload)
    body = resp.json()
    if resp.status_code == 400:
        raise ConfigError(body.get("message", "bad request"))
    if resp.status_code >= 422:
        raise RuntimeError("%s: %s" % (body.get("error", resp.status_code), body.get("message", body)))
    return body


def _fmt(v) -> str:
    return "%.17g" % v


def _write_lines(path, lines):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _say(args, msg):
    if not args.quiet:
        print(msg)


def cmd_aubry(args, cfg, client):
    body = _post(client, "/aubry", {"spec": _model_payload(cfg), "n": cfg.n})
    c = body["constants"]
    lines = ["# contacthj aubry table"]
    for key in ("mu", "Z", "period_T"):
        lines.append("# %s=%s" % (key, _fmt(body[key])))
    for key in ("M0", "M1", "M2", "alpha", "eps0", "delta0", "eps_tilde1"):
        lines.append("# %s=%s" % (key, _fmt(c[key])))
    lines.append("x,B,rho,drho,f")
    for row in zip(body["x"], body["B"], body["rho"], body["drho"], body["f"]):
        lines.append(",".join(_fmt(v) for v in row))
    _write_lines(os.path.join(cfg.out_dir, "aubry.csv"), lines)
    _say(args, "mu = %.12g  T = %.12g  (flow-average mu = %.12g)"
         % (body["mu"], body["period_T"], body["mu_flow_average"]))
    _say(args, "wrote %s" % os.path.join(cfg.out_dir, "aubry.csv"))
    return EXIT_OK


def cmd_certify(args, cfg, client):
    payload = {
        "spec": _model_payload(cfg),
        "n": cfg.n if cfg.n >= 64 else 256,
        "kind": args.kind,
        "theta": args.theta,
        "x0": args.x0,
        "nx": args.nx,
        "nt": args.nt,
    }
    if args.eps is not None:
        payload["eps"] = args.eps
    body = _post(client, "/certify", payload)
    lines = ["t,min_residual,max_residual"]
    for sl in body.get("slices", []):
        lines.append(",".join(_fmt(sl[k]) for k in ("t", "min_residual", "max_residual")))
    _write_lines(os.path.join(cfg.out_dir, "residuals.csv"), lines)
    verdict = body["verdict"]
    _say(args, "%s %s eps=%.6g theta=%.6g: residual in [%s, %s]"
         % (verdict, body["kind"], body["eps"], body["theta"],
            body.get("min_residual"), body.get("max_residual")))
    return EXIT_OK if verdict == "PASS" else EXIT_FAIL


def _initial_payload(spec: str, n: int) -> dict:
    kind, _, rest = spec.partition(":")
    if kind == "constant":
        return {"type": "constant", "value": float(rest or 0.0)}
    if kind == "certificate":
        parts = rest.split(",") if rest else []
        out = {"type": "certificate"}
        if len(parts) > 0 and parts[0]:
            out["kind"] = parts[0]
        if len(parts) > 1 and parts[1] not in ("", "auto"):
            out["eps"] = float(parts[1])
        if len(parts) > 2:
            out["theta"] = float(parts[2])
        if len(parts) > 3:
            out["x0"] = float(parts[3])
        return out
    if kind == "csv":
        with open(rest) as fh:
            vals = [float(line.strip().split(",")[-1]) for line in fh if line.strip()
                    and not line.startswith(("#", "x", "t"))]
        if len(vals) != n:
            raise ConfigError("csv initial data has %d values, grid wants %d" % (len(vals), n),
                              field="initial")
        return {"type": "values", "values": vals}
    raise ConfigError("unknown initial spec %r" % spec, field="initial")


def cmd_evolve(args, cfg, client):
    payload = {
        "spec": _model_payload(cfg),
        "n": cfg.n,
        "initial": _initial_payload(args.initial, cfg.n),
        "t_final": cfg.t_final,
        "sample_dt": cfg.sample_dt,
        "cfl": cfg.cfl,
        "include_snapshots": args.snapshots,
    }
    body = _post(client, "/evolve", payload)
    lines = ["t,sup_dist,min,max"]
    for pt in body["trace"]:
        lines.append(",".join(_fmt(pt[k]) for k in ("t", "sup_dist", "min", "max")))
    _write_lines(os.path.join(cfg.out_dir, "trace_evolve.csv"), lines)
    if args.snapshots and body.get("snapshots"):
        rows = [",".join(_fmt(v) for v in snap) for snap in body["snapshots"]]
        _write_lines(os.path.join(cfg.out_dir, "snapshots.csv"), rows)
    final = body["trace"][-1]
    _say(args, "t=%.4g sup_dist=%.6g (lf_alpha=%.4g)"
         % (final["t"], final["sup_dist"], body["lf_alpha"]))
    return EXIT_OK


def cmd_stability(args, cfg, client):
    payload = {
        "spec": _model_payload(cfg),
        "n": cfg.n,
        "trials": cfg.trials,
        "seed": cfg.seed,
    }
    if cfg.delta is not None:
        payload["delta"] = cfg.delta
    body = _post(client, "/stability", payload)
    rows = []
    for i, tr in enumerate(body["trials"]):
        rec = {"trial": i, "verdict": body["verdict"]}
        rec.update(tr)
        rows.append(json.dumps(rec, sort_keys=True))
    _write_lines(os.path.join(cfg.out_dir, "verdicts.jsonl"), rows)
    _say(args, "verdict=%s rate=%s escape_time=%s (mu=%.6g)"
         % (body["verdict"], body["measured_rate"], body["escape_time"], body["mu"]))
    return EXIT_OK if body["verdict"] != "Inconclusive" else EXIT_FAIL


def cmd_periodic(args, cfg, client):
    payload = {
        "spec": _model_payload(cfg),
        "n": cfg.n,
        "anchors": list(cfg.anchors),
        "max_iters": cfg.max_iters,
        "tol": cfg.tol,
    }
    body = _post(client, "/periodic", payload)
    rows = []
    ok = True
    for rep in body["reports"]:
        ok = ok and rep["nontrivial"]
        rows.append(json.dumps(
            {k: rep[k] for k in ("x0", "eps", "converged", "iterations",
                                 "final_delta", "variation", "nontrivial", "error")},
            sort_keys=True))
    _write_lines(os.path.join(cfg.out_dir, "verdicts.jsonl"), rows)
    _say(args, "period T=%.6g, %d anchors, max pairwise gap %.3e"
         % (body["period_T"], len(body["reports"]), body["max_pairwise_gap"]))
    return EXIT_OK if ok else EXIT_FAIL


def _run_example(args, cfg, client, which):
    spec = _model_payload(cfg)
    n = cfg.n
    report = []
    failures = []

    def check(name, ok, detail=""):
        line = "%s %s %s" % ("PASS" if ok else "FAIL", name, detail)
        report.append(line.rstrip())
        _say(args, line.rstrip())
        if not ok:
            failures.append(name)

    assumptions = _post(client, "/assumptions", {"spec": spec})
    check("assumptions (H1)-(H3)", assumptions["ok"],
          "min Hpp=%.3g max|Hu|=%.3g" % (assumptions["min_d_pp"], assumptions["max_abs_d_u"]))

    body = _post(client, "/aubry", {"spec": spec, "n": n if n >= 64 and n & (n - 1) == 0 else 256})
    mu = body["mu"]
    c = body["constants"]
    report.append("mu = %.12g, T = %.12g, flow-average mu = %.12g"
                  % (mu, body["period_T"], body["mu_flow_average"]))
    check("mu quadrature vs flow average",
          abs(mu - body["mu_flow_average"]) < 1e-6)
    if which == "example1":
        m1, m2 = c["M1"], c["M2"]
        delta0_closed = mu * m2 * m2 / (4.0 * m1 * (m2 + m1)) if mu > 0 else 0.0
        check("delta0 closed form", abs(c["delta0"] - delta0_closed) <= 1e-10,
              "delta0=%.12g closed=%.12g" % (c["delta0"], delta0_closed))

    if mu > 0:
        kinds = [("StationarySub", 0.0), ("StationarySuper", 0.0),
                 ("EvolSub", mu / 2.0), ("EvolSuper", 2.0 * mu)]
    else:
        kinds = [("StationarySub", 0.0), ("StationarySuper", 0.0),
                 ("EvolSuper", mu / 2.0), ("EvolSub", mu / 2.0),
                 ("PeriodicSub", 0.0)]
    for kind, theta in kinds:
        cert = _post(client, "/certify", {
            "spec": spec, "n": 256, "kind": kind, "theta": theta,
            "nx": 256, "nt": 128,
        })
        check("certificate %s (theta=%.3g)" % (kind, theta), cert["verdict"] == "PASS")

    predicted = ("asymptotically stable, rate <= -mu = %.6g" % -mu) if mu > 0 else \
        "Lyapunov unstable; infinitely many nontrivial T-periodic solutions"
    report.append("predicted: " + predicted)

    stab = _post(client, "/stability", {
        "spec": spec, "n": n, "trials": cfg.trials, "seed": cfg.seed,
        **({"delta": cfg.delta} if cfg.delta is not None else {}),
    })
    report.append("measured: verdict=%s rate=%s escape_time=%s"
                  % (stab["verdict"], stab["measured_rate"], stab["escape_time"]))
    if mu > 0:
        check("asymptotic stability", stab["verdict"] == "AsymptoticallyStable")
        check("decay rate within tolerance of -mu",
              stab["measured_rate"] is not None and stab["measured_rate"] <= -mu + 0.15,
              "rate=%s" % stab["measured_rate"])
    else:
        check("Lyapunov instability", stab["verdict"] == "Unstable",
              "escape_time=%s" % stab["escape_time"])
        per = _post(client, "/periodic", {
            "spec": spec, "n": n, "anchors": list(cfg.anchors),
            "max_iters": cfg.max_iters, "tol": cfg.tol,
        })
        nontrivial = [r for r in per["reports"] if r["nontrivial"]]
        check("nontrivial periodic solution", len(nontrivial) >= 1,
              "variation=%s" % (nontrivial[0]["variation"] if nontrivial else "n/a"))
        if len(per["reports"]) >= 2:
            check("distinct anchors give distinct solutions",
                  per["max_pairwise_gap"] > cfg.tol,
                  "gap=%.3e" % per["max_pairwise_gap"])

    _write_lines(os.path.join(cfg.out_dir, "report.txt"), report)
    _say(args, "wrote %s" % os.path.join(cfg.out_dir, "report.txt"))
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_example1(args, cfg, client):
    if cfg.model != "example1":
        raise ConfigError("config must declare model=example1", field="model")
    return _run_example(args, cfg, client, "example1")


def cmd_example2(args, cfg, client):
    if cfg.model != "example2":
        raise ConfigError("config must declare model=example2", field="model")
    return _run_example(args, cfg, client, "example2")


def cmd_serve(args, cfg, client):
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contacthj")
    ap.add_argument("--config", help="path to a key=value config file")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--n", type=int, help="grid size override")
    ap.add_argument("--seed", type=int, help="seed override")
    ap.add_argument("--server", help="base URL of a running service; default in-process")
    ap.add_argument("--quiet", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("aubry", help="tabulate B, rho, f and the constants ledger")

    p = sub.add_parser("certify", help="build and verify one certificate")
    p.add_argument("--kind", default="StationarySub",
                   choices=["StationarySub", "StationarySuper", "EvolSub",
                            "EvolSuper", "PeriodicSub"])
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--nx", type=int, default=256)
    p.add_argument("--nt", type=int, default=256)

    p = sub.add_parser("evolve", help="run the semigroup from given initial data")
    p.add_argument("--initial", default="constant:0.0",
                   help="constant:V | certificate:KIND[,EPS[,THETA[,X0]]] | csv:PATH")
    p.add_argument("--snapshots", action="store_true")

    sub.add_parser("stability", help="classify stability of the stationary solution")
    sub.add_parser("periodic", help="hunt for nontrivial periodic solutions")
    sub.add_parser("example1", help="full pipeline for the first builtin example")
    sub.add_parser("example2", help="full pipeline for the second builtin example")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return ap


_COMMANDS = {
    "aubry": cmd_aubry,
    "certify": cmd_certify,
    "evolve": cmd_evolve,
    "stability": cmd_stability,
    "periodic": cmd_periodic,
    "example1": cmd_example1,
    "example2": cmd_example2,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            with open(args.config) as fh:
                cfg = parse_config(fh.read())
        else:
            cfg = ExperimentConfig()
        from dataclasses import replace

        if args.out:
            cfg = replace(cfg, out_dir=args.out)
        if args.n:
            cfg = replace(cfg, n=args.n)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
    except ConfigError as exc:
        print("config error: %s%s" % (exc, " (field %s)" % exc.field if exc.field else ""),
              file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG

    client = None
    try:
        if args.command != "serve":
            client = _make_client(args.server)
        return _COMMANDS[args.command](args, cfg, client)
    except ConfigError as exc:
        print("config error: %s%s" % (exc, " (field %s)" % exc.field if exc.field else ""),
              file=sys.stderr)
        return EXIT_CONFIG
    except RuntimeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_FAIL
    finally:
        if client is not None:
            client.close()


if __name__ == "__main__":
    sys.exit(main())
