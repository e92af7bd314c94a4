"""Seeded Monte-Carlo estimation of estimation-error tail probabilities.

Trials are independent tasks keyed by trial index; every random draw comes
from a stream derived from (base_seed, trial, role), and aggregation is a
commutative count-merge, so results do not depend on the worker count or
execution order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import bounds
from .io import ResultRow
from .linalg import (
    RankDeficiencyError,
    _cholesky_lower,
    _solve_spd,
    gram_normalized,
    sym_extremal_eigs,
)
from .models import (
    DesignModel,
    NoiseModel,
    SeedSpec,
    design_dim,
    design_is_random,
    implied_problem_params,
    sample_design,
    sample_noise,
)
from .params import Accuracy, ParameterError, ProblemParams

Z_95 = 1.959963984540054  # two-sided 95% normal quantile

INVALID_TRIAL_LIMIT = 1e-3
LEMMA1_TOL = 1e-9
IDENTITY_RTOL = 1e-10


class SimulationQualityError(RuntimeError):
    """Too many invalid (rank-deficient) trials; the setup is suspect."""


class RangeExhaustedError(RuntimeError):
    """The search range contains no sample count meeting the target."""


@dataclass(frozen=True)
class ExperimentSpec:
    """One tail-probability experiment.

    theta0 defaults to the all-ones vector; the error law does not depend on
    it, so the choice is immaterial.  Random designs are redrawn every trial;
    pilot and fixed designs are materialized once.
    """

    design: DesignModel
    noise: NoiseModel
    N: int
    r: float
    theta0: tuple[float, ...] | None = None
    trials: int = 50_000
    base_seed: int = 0
    diagnostics: bool = False

    def __post_init__(self) -> None:
        p = design_dim(self.design)
        if self.N <= p:
            raise ParameterError(f"need N > p, got N = {self.N}, p = {p}")
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if not (self.r > 0):
            raise ParameterError(f"r must be positive, got {self.r}")
        if self.theta0 is not None:
            theta = tuple(float(x) for x in self.theta0)
            if len(theta) != p:
                raise ParameterError(f"theta0 has length {len(theta)}, expected {p}")
            object.__setattr__(self, "theta0", theta)

    def theta(self) -> np.ndarray:
        if self.theta0 is None:
            return np.ones(design_dim(self.design))
        return np.asarray(self.theta0, dtype=float)

    def seed(self) -> SeedSpec:
        return SeedSpec(self.base_seed)


@dataclass(frozen=True)
class TailEstimate:
    """Exceedance estimate with a 95% score interval and seed provenance."""

    trials: int
    exceed_count: int
    p_hat: float
    ci_low: float
    ci_high: float
    base_seed: int
    invalid_trials: int = 0


@dataclass(frozen=True)
class EventDiagnostics:
    """Frequencies of the concentration events behind the bounds.

    lemma1_violations counts trials where the max-coordinate error exceeds
    lambda_tilde(A) times the Euclidean norm of (1/N) A^T v (a per-trial
    theorem for symmetric Gram matrices; expected 0).  linf_decomp_violations
    counts the stronger per-coordinate variant with the sup norm on the right
    hand side, which does fail on a positive fraction of draws; it is
    recorded for analysis, never asserted.
    """

    trials: int
    freq_e_rand: float
    freq_e2: tuple[float, ...]
    freq_e3: tuple[float, ...]
    lemma1_violations: int
    identity_violations: int
    linf_decomp_violations: int = 0


def wilson_interval(successes: int, n: int, z: float = Z_95) -> tuple[float, float]:
    """Score confidence interval for a binomial proportion."""
    if n <= 0:
        return (0.0, 1.0)
    p_hat = successes / n
    denom = 1.0 + z * z / n
    center = (p_hat + z * z / (2.0 * n)) / denom
    half = (z / denom) * math.sqrt(p_hat * (1.0 - p_hat) / n + z * z / (4.0 * n * n))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == n else min(1.0, center + half)
    return (lo, hi)


def _fixed_design_pack(spec: ExperimentSpec):
    """Materialize a non-random design once and prefactor its normal equations."""
    A = sample_design(spec.design, spec.N, spec.seed().for_trial(0, "design"))
    try:
        L = _cholesky_lower(A.T @ A)
    except RankDeficiencyError as exc:
        raise SimulationQualityError(
            f"fixed design is rank deficient; every trial would be invalid ({exc})"
        ) from exc
    return A, L


def _tail_chunk(spec: ExperimentSpec, start: int, stop: int, pack) -> tuple[int, int]:
    theta0 = spec.theta()
    seed = spec.seed()
    exceed = 0
    invalid = 0
    random_design = pack is None
    if not random_design:
        A, L = pack
        At = A.T
    for t in range(start, stop):
        v = sample_noise(spec.noise, spec.N, seed.for_trial(t, "noise"))
        if random_design:
            A = sample_design(spec.design, spec.N, seed.for_trial(t, "design"))
            x = A @ theta0 + v
            try:
                L_t = _cholesky_lower(A.T @ A)
            except RankDeficiencyError:
                invalid += 1
                continue
            theta_hat = _solve_spd(L_t, A.T @ x)
        else:
            x = A @ theta0 + v
            theta_hat = _solve_spd(L, At @ x)
        if np.max(np.abs(theta_hat - theta0)) > spec.r:
            exceed += 1
    return exceed, invalid


def _chunk_ranges(total: int, workers: int) -> list[tuple[int, int]]:
    pieces = max(1, min(total, workers * 4))
    step = math.ceil(total / pieces)
    return [(i, min(i + step, total)) for i in range(0, total, step)]


def run_tail(spec: ExperimentSpec, workers: int = 1) -> TailEstimate:
    """Estimate P(max-coordinate error > r) over spec.trials trials."""
    pack = None if design_is_random(spec.design) else _fixed_design_pack(spec)
    if workers <= 1 or spec.trials < 256:
        exceed, invalid = _tail_chunk(spec, 0, spec.trials, pack)
    else:
        exceed = invalid = 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_tail_chunk, spec, a, b, pack)
                for a, b in _chunk_ranges(spec.trials, workers)
            ]
            for fut in futures:
                e, i = fut.result()
                exceed += e
                invalid += i
    if invalid > INVALID_TRIAL_LIMIT * spec.trials:
        raise SimulationQualityError(
            f"{invalid} of {spec.trials} trials were rank-deficient "
            f"(limit {INVALID_TRIAL_LIMIT:.1%}); check the design model"
        )
    valid = spec.trials - invalid
    lo, hi = wilson_interval(exceed, valid)
    return TailEstimate(
        trials=valid,
        exceed_count=exceed,
        p_hat=exceed / valid if valid else 0.0,
        ci_low=lo,
        ci_high=hi,
        base_seed=spec.base_seed,
        invalid_trials=invalid,
    )


def _diag_chunk(
    spec: ExperimentSpec,
    start: int,
    stop: int,
    pack,
    sigma_min: float,
) -> tuple[np.ndarray, np.ndarray, int, int, int]:
    theta0 = spec.theta()
    seed = spec.seed()
    p = design_dim(spec.design)
    threshold = sigma_min**2 * spec.r**2 / 8.0
    tilde_limit = 2.0 / sigma_min
    e2 = np.zeros(p, dtype=np.int64)
    e3 = np.zeros(p, dtype=np.int64)
    e_rand = 0
    lemma1_bad = 0
    identity_bad = 0
    linf_bad = 0
    random_design = pack is None
    if not random_design:
        A, L = pack
        lam_tilde_fixed = sym_extremal_eigs(gram_normalized(A)).lambda_tilde
    for t in range(start, stop):
        v = sample_noise(spec.noise, spec.N, seed.for_trial(t, "noise"))
        if random_design:
            A = sample_design(spec.design, spec.N, seed.for_trial(t, "design"))
            try:
                L_t = _cholesky_lower(A.T @ A)
            except RankDeficiencyError:
                e_rand += 1  # singular Gram certainly exceeds the eigenvalue limit
                continue
            lam_tilde = sym_extremal_eigs(gram_normalized(A)).lambda_tilde
        else:
            L_t = L
            lam_tilde = lam_tilde_fixed
        x = A @ theta0 + v
        theta_hat = _solve_spd(L_t, A.T @ x)

        s_vec = (A.T @ v) / spec.N
        total_sq = s_vec**2
        diag_sum = (A * A).T @ (v * v) / spec.N**2
        off_sum = total_sq - diag_sum
        e2 += diag_sum > threshold
        e3 += off_sum > threshold
        e_rand += lam_tilde > tilde_limit
        err = float(np.max(np.abs(theta_hat - theta0)))
        if err > lam_tilde * float(np.linalg.norm(s_vec)) + LEMMA1_TOL:
            lemma1_bad += 1
        if err > lam_tilde * float(np.max(np.abs(s_vec))) + LEMMA1_TOL:
            linf_bad += 1
        scale = np.maximum.reduce(
            [np.abs(total_sq), np.abs(diag_sum), np.abs(off_sum), np.full_like(total_sq, 1e-300)]
        )
        if np.any(np.abs(diag_sum + off_sum - total_sq) > IDENTITY_RTOL * scale):
            identity_bad += 1
    return e2, e3, e_rand, lemma1_bad, identity_bad, linf_bad


def run_event_diagnostics(
    spec: ExperimentSpec,
    params: ProblemParams | None = None,
    workers: int = 1,
) -> EventDiagnostics:
    """Per-trial frequencies of the Gram-eigenvalue event and the diagonal /
    off-diagonal quadratic-sum events, plus per-trial inequality checks."""
    if not spec.diagnostics:
        raise ParameterError("set diagnostics=True on the spec to run diagnostics")
    if params is None:
        params = implied_problem_params(spec.design, spec.noise, N_hint=spec.N)
    pack = None if design_is_random(spec.design) else _fixed_design_pack(spec)
    args = (pack, params.sigma_min)
    if workers <= 1 or spec.trials < 256:
        parts = [_diag_chunk(spec, 0, spec.trials, *args)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_diag_chunk, spec, a, b, *args)
                for a, b in _chunk_ranges(spec.trials, workers)
            ]
            parts = [f.result() for f in futures]
    p = design_dim(spec.design)
    e2 = np.zeros(p, dtype=np.int64)
    e3 = np.zeros(p, dtype=np.int64)
    e_rand = lemma1_bad = identity_bad = linf_bad = 0
    for c2, c3, cr, cl, ci, cx in parts:
        e2 += c2
        e3 += c3
        e_rand += cr
        lemma1_bad += cl
        identity_bad += ci
        linf_bad += cx
    n = spec.trials
    return EventDiagnostics(
        trials=n,
        freq_e_rand=e_rand / n,
        freq_e2=tuple(float(x) for x in e2 / n),
        freq_e3=tuple(float(x) for x in e3 / n),
        lemma1_violations=lemma1_bad,
        identity_violations=identity_bad,
        linf_decomp_violations=linf_bad,
    )


# ---------------------------------------------------------------------------
# Sweeps and empirical sample-count search


def _outage_value(theorem: str, r: float, N: int, params: ProblemParams) -> float:
    """Outage bound at (r, N) for the given bound family, clipped to 1."""
    if theorem == "main":
        floor = 4.0 * params.require_R() ** 2 * params.alpha**2 / (
            params.sigma_min**2 * r**2
        )
        if N <= floor:
            return 1.0
        return bounds.eps_of_n(r, N, params).eps_final
    if theorem == "fixed_mds":
        return bounds.eps_fixed_design(r, N, params)
    if theorem in ("bounded", "mds_subgaussian", "mds_bounded"):
        # Exact inversion of max(C1 * log(f/eps), C_rand * log(f/eps)).
        if theorem == "bounded":
            factor = 3.0 * params.p
            c1 = 2.0 * params.alpha**2 * params.require_b() ** 2 / (
                r**2 * params.sigma_min**2
            )
        elif theorem == "mds_subgaussian":
            factor = 2.0 * params.p
            c1 = 8.0 * params.alpha**2 * params.require_R() ** 2 / (
                r**2 * params.sigma_min**2
            )
        else:
            factor = 2.0 * params.p
            c1 = 8.0 * params.alpha**2 * params.require_b() ** 2 / (
                r**2 * params.sigma_min**2
            )
        lead = max(c1, (4.0 / 3.0) * bounds._n_rand_coeff(params))
        return min(1.0, factor * math.exp(-N / lead))
    raise ParameterError(f"no outage expression for bound tag {theorem!r}")


def sweep(
    base: ExperimentSpec,
    axis_name: str,
    axis_values,
    theorem: str,
    eps: float | None = None,
    params: ProblemParams | None = None,
    beta_as_printed: bool = False,
    workers: int = 1,
) -> list[ResultRow]:
    """One tail run per axis value plus the matching bound evaluation.

    r-axis and eps-axis rows run at N equal to the bound's integer ceiling
    (so p_hat <= eps checks bound soundness); N-axis rows run at the given N
    and report the bound's outage value in the n_bound_real column.
    """
    values = list(axis_values)
    if not values:
        raise ParameterError("axis must be nonempty")
    if axis_name not in ("r", "eps", "N"):
        raise ParameterError(f"axis_name must be r, eps, or N, got {axis_name!r}")
    if params is None:
        params = implied_problem_params(base.design, base.noise, N_hint=base.N)
    p = design_dim(base.design)
    rows = []
    for value in values:
        if axis_name == "N":
            spec = replace(base, N=int(value))
            est = run_tail(spec, workers=workers)
            rows.append(
                ResultRow(
                    axis_name="N",
                    axis_value=float(value),
                    n_bound_real=_outage_value(theorem, base.r, int(value), params),
                    n_bound_ceil=None,
                    binding_term=None,
                    s_opt_n2=None,
                    s_opt_n3=None,
                    tau_opt=None,
                    p_hat=est.p_hat,
                    ci_low=est.ci_low,
                    ci_high=est.ci_high,
                    trials=est.trials,
                    seed=base.base_seed,
                )
            )
            continue
        if axis_name == "r":
            if eps is None:
                raise ParameterError("r-axis sweeps need a target eps")
            acc = Accuracy(r=float(value), eps=eps)
        else:
            acc = Accuracy(r=base.r, eps=float(value))
        bd = bounds.bound_for(theorem, acc, params, beta_as_printed)
        n_run = max(bd.n_ceil, p + 1)
        spec = replace(base, N=n_run, r=acc.r)
        est = run_tail(spec, workers=workers)
        rows.append(
            ResultRow(
                axis_name=axis_name,
                axis_value=float(value),
                n_bound_real=bd.n_final,
                n_bound_ceil=bd.n_ceil,
                binding_term=bd.binding,
                s_opt_n2=bd.s_opt_n2,
                s_opt_n3=bd.s_opt_n3,
                tau_opt=bd.tau_opt,
                p_hat=est.p_hat,
                ci_low=est.ci_low,
                ci_high=est.ci_high,
                trials=est.trials,
                seed=base.base_seed,
            )
        )
    return rows


def find_empirical_n(
    spec: ExperimentSpec,
    eps: float,
    n_lo: int,
    n_hi: int,
    workers: int = 1,
) -> int:
    """Smallest N in [n_lo, n_hi] with p_hat(N) <= eps, by geometric bracketing
    then bisection; the returned N must also have its upper CI at or below eps.
    """
    p = design_dim(spec.design)
    n_lo = max(n_lo, p + 1)
    if n_hi < n_lo:
        raise RangeExhaustedError(f"empty range [{n_lo}, {n_hi}]")
    if eps >= 1.0:
        return n_lo

    cache: dict[int, TailEstimate] = {}

    def estimate(n: int) -> TailEstimate:
        if n not in cache:
            cache[n] = run_tail(replace(spec, N=n), workers=workers)
        return cache[n]

    def passes(n: int) -> bool:
        return estimate(n).p_hat <= eps

    if passes(n_lo):
        smallest = n_lo
    else:
        lo, hi = n_lo, n_lo
        while True:
            hi = min(hi * 2, n_hi)
            if passes(hi):
                break
            lo = hi
            if hi == n_hi:
                raise RangeExhaustedError(
                    f"p_hat stays above {eps} up to N = {n_hi} "
                    f"(p_hat = {estimate(n_hi).p_hat:.4g})"
                )
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if passes(mid):
                hi = mid
            else:
                lo = mid
        smallest = hi

    n = smallest
    while estimate(n).ci_high > eps:
        if n >= n_hi:
            raise RangeExhaustedError(
                f"upper CI stays above {eps} up to N = {n_hi}"
            )
        n = min(max(n + 1, int(n * 1.1)), n_hi)
        while n <= n_hi and not passes(n):
            if n == n_hi:
                raise RangeExhaustedError(
                    f"upper CI stays above {eps} up to N = {n_hi}"
                )
            n = min(max(n + 1, int(n * 1.1)), n_hi)
    return n
