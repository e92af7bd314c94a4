"""Finite-sample guarantees for linear least squares.

Computes required sample counts N(r, eps) and outage bounds eps(r, N) for
the least-squares estimator under sub-Gaussian, bounded, and
martingale-difference noise, and verifies them with a seeded Monte-Carlo
harness.
"""

from .bounds import (
    beta,
    bound_for,
    eps_fixed_design,
    eps_of_n,
    gamma,
    l2_radius,
    n1_main,
    n2_main,
    n3_main,
    n_bounded,
    n_fixed_design,
    n_main,
    n_main_tau,
    n_mds_bounded,
    n_mds_subgaussian,
    n_rand,
)
from .linalg import (
    NonSymmetricError,
    RankDeficiencyError,
    SymSpectrumSummary,
    as_matrix,
    gram_normalized,
    ls_solve,
    max_abs_entry,
    sym_extremal_eigs,
)
from .models import (
    FirMds,
    FixedMatrix,
    Gaussian,
    GaussianMixture,
    IidBoundedColumns,
    Rademacher,
    SeedSpec,
    ToeplitzPilot,
    Uniform,
    UniformPlusGaussian,
    implied_problem_params,
    noise_bound,
    random_pilots,
    sample_design,
    sample_noise,
    subgaussian_param,
)
from .montecarlo import (
    EventDiagnostics,
    ExperimentSpec,
    RangeExhaustedError,
    SimulationQualityError,
    TailEstimate,
    find_empirical_n,
    run_event_diagnostics,
    run_tail,
    sweep,
    wilson_interval,
)
from .optimize import InfimumResult, NoFinitePointError, infimum_1d
from .params import (
    Accuracy,
    BoundBreakdown,
    DomainError,
    OutageBreakdown,
    ParameterError,
    ProblemParams,
)

__version__ = "0.1.0"
