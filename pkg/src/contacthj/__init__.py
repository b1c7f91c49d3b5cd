"""Numerical laboratory for contact Hamilton-Jacobi equations on the circle.

Core objects: Hamiltonian models with stationary solutions, the weighted
flow data (B, rho, f) with its constants ledger, sub/supersolution
certificates, a monotone finite-difference semigroup, and stability /
periodic-orbit analysis on top of it.
"""

from .aubry import AubryData, ConstantsLedger, compute_aubry, compute_constants, mu_flow_average
from .certificates import (
    Certificate,
    CertificateKind,
    make_evolutionary,
    make_periodic_sub,
    make_stationary,
    verify_certificate,
)
from .config import ExperimentConfig, build_model, parse_config
from .errors import ContactHJError
from .evolution import ContactState, EvolutionTrace, GridFunction, SchemeConfig, evolve, flow_b6, step
from .fourier import FourierSeries
from .hamiltonian import (
    HamiltonianModel,
    StationarySolution,
    check_assumptions,
    check_stationary,
    constant_solution,
    example1,
    example2,
)
from .analysis import (
    StabilityVerdict,
    classify_stability,
    estimate_rate,
    find_periodic,
    rate_bounds_check,
)

__version__ = "0.1.0"

__all__ = [
    "AubryData",
    "Certificate",
    "CertificateKind",
    "ConstantsLedger",
    "ContactHJError",
    "ContactState",
    "EvolutionTrace",
    "ExperimentConfig",
    "FourierSeries",
    "GridFunction",
    "HamiltonianModel",
    "SchemeConfig",
    "StabilityVerdict",
    "StationarySolution",
    "build_model",
    "check_assumptions",
    "check_stationary",
    "classify_stability",
    "compute_aubry",
    "compute_constants",
    "constant_solution",
    "estimate_rate",
    "evolve",
    "example1",
    "example2",
    "find_periodic",
    "flow_b6",
    "make_evolutionary",
    "make_periodic_sub",
    "make_stationary",
    "mu_flow_average",
    "parse_config",
    "rate_bounds_check",
    "step",
    "verify_certificate",
    "__version__",
]
