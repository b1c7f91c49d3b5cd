"""Pydantic request/response models for the HTTP service."""
from __future__ import annotations

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from ..config import ExperimentConfig
from ..fourier import FourierSeries


class FourierSpec(BaseModel):
    a0: float = 0.0
    cos: List[float] = Field(default_factory=list)
    sin: List[float] = Field(default_factory=list)

    def to_series(self) -> FourierSeries:
        return FourierSeries(self.a0, tuple(self.cos), tuple(self.sin))


class ModelSpec(BaseModel):
    model: Literal["example1", "example2"] = "example1"
    lam: FourierSpec = Field(default_factory=lambda: FourierSpec(a0=1.0))
    v: FourierSpec = Field(default_factory=lambda: FourierSpec(a0=1.0))
    stationary: float = 0.0

    def to_config(self, **overrides) -> ExperimentConfig:
        return ExperimentConfig(
            model=self.model,
            lam=self.lam.to_series(),
            v=self.v.to_series(),
            stationary=self.stationary,
            **overrides,
        )


class AssumptionsRequest(BaseModel):
    spec: ModelSpec
    samples_per_axis: int = 16
    min_slope: float = 0.1


class AssumptionsResponse(BaseModel):
    min_d_pp: float
    max_abs_d_u: float
    slope_pos: float
    slope_neg: float
    h1_ok: bool
    h2_ok: bool
    h3_ok: bool
    ok: bool
    kappa: float


class AubryRequest(BaseModel):
    spec: ModelSpec
    n: int = 256


class ConstantsOut(BaseModel):
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


class AubryResponse(BaseModel):
    mu: float
    Z: float
    period_T: float
    grid_n: int
    constants: ConstantsOut
    x: List[float]
    B: List[float]
    rho: List[float]
    drho: List[float]
    f: List[float]
    mu_flow_average: float
    stationary_residual: float


class CertifyRequest(BaseModel):
    spec: ModelSpec
    n: int = 256
    kind: Literal[
        "StationarySub", "StationarySuper", "EvolSub", "EvolSuper", "PeriodicSub"
    ] = "StationarySub"
    eps: Optional[float] = None
    theta: float = 0.0
    x0: float = 0.0
    nx: int = 256
    nt: int = 256
    t_max: Optional[float] = None


class ResidualSlice(BaseModel):
    t: float
    min_residual: float
    max_residual: float


class CertifyResponse(BaseModel):
    kind: str
    eps: float
    theta: float
    verdict: Literal["PASS", "FAIL"]
    max_residual: Optional[float] = None
    min_residual: Optional[float] = None
    valid_t_end: Optional[float] = None
    worst: Optional[dict] = None
    slices: List[ResidualSlice] = Field(default_factory=list)


class InitialSpec(BaseModel):
    type: Literal["constant", "fourier", "certificate", "values"] = "constant"
    value: float = 0.0
    fourier: Optional[FourierSpec] = None
    values: Optional[List[float]] = None
    kind: str = "PeriodicSub"
    eps: Optional[float] = None
    theta: float = 0.0
    x0: float = 0.0


class EvolveRequest(BaseModel):
    spec: ModelSpec
    n: int = 512
    initial: InitialSpec = Field(default_factory=InitialSpec)
    t_final: float = 5.0
    sample_dt: float = 0.1
    cfl: float = 0.4
    include_snapshots: bool = False


class TracePoint(BaseModel):
    t: float
    sup_dist: float
    min: float
    max: float


class EvolveResponse(BaseModel):
    n: int
    lf_alpha: float
    trace: List[TracePoint]
    snapshots: Optional[List[List[float]]] = None


class StabilityRequest(BaseModel):
    spec: ModelSpec
    n: int = 512
    trials: int = 5
    delta: Optional[float] = None
    seed: int = 0


class StabilityResponse(BaseModel):
    verdict: str
    measured_rate: Optional[float] = None
    escape_time: Optional[float] = None
    mu: float
    trials: List[dict]


class PeriodicRequest(BaseModel):
    spec: ModelSpec
    n: int = 512
    anchors: List[float] = Field(default_factory=lambda: [0.0, 0.37])
    max_iters: int = 200
    tol: float = 1e-6
    eps: Optional[float] = None


class PeriodicAnchorReport(BaseModel):
    x0: float
    eps: float
    converged: bool
    iterations: int
    final_delta: float
    variation: float
    nontrivial: bool
    min_increment: float
    period_T: float
    profile: List[float]
    error: Optional[str] = None


class PeriodicResponse(BaseModel):
    period_T: float
    reports: List[PeriodicAnchorReport]
    max_pairwise_gap: float
