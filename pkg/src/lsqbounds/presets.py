"""One-command simulation presets (fig1..fig6).

Each preset pins a design model, a noise model, an accuracy target, and an
axis grid, then emits result CSVs (and a diagnostic SVG) whose rows pair the
computed bound with a seeded tail estimate at the bound's sample count.

The mixture component variances and the FIR tap profile are preset choices;
they are tuned so the declared noise parameters (R, b) hit their targets
exactly, which is all the bounds consume.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import bounds
from .io import ResultRow, write_result_csv
from .models import (
    FirMds,
    Gaussian,
    GaussianMixture,
    IidBoundedColumns,
    NoiseModel,
    SeedSpec,
    ToeplitzPilot,
    Uniform,
    design_dim,
    implied_problem_params,
    random_pilots,
    subgaussian_param,
)
from .montecarlo import ExperimentSpec, run_tail, sweep
from .params import Accuracy, ParameterError, ProblemParams
from .svg import write_line_plot

DEFAULT_TRIALS = 50_000
DESK_TRIALS = 10_000  # documented desk-scale override
DEFAULT_SEED = 20_240_601

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")

DEFAULT_FIR_TAPS = (1.0, 0.8, 0.64, 0.512)
PILOT_BUDGET = 8192


def gaussian_mixture_with_param(
    target_R: float, sigma_small: float = 0.05, weight_large: float = 0.1
) -> GaussianMixture:
    """Two-component mixture whose declared sub-Gaussian parameter matches
    target_R (to within the declaration grid) by bisecting the large sigma."""
    if not (target_R > sigma_small):
        raise ParameterError(
            f"target_R ({target_R}) must exceed sigma_small ({sigma_small})"
        )
    lo, hi = sigma_small, 2.0 * target_R
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        declared = subgaussian_param(GaussianMixture(sigma_small, mid, weight_large))
        if declared < target_R:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * target_R:
            break
    return GaussianMixture(sigma_small, hi, weight_large)


def fir_mds_with_param(
    target_R: float,
    taps: tuple[float, ...] = DEFAULT_FIR_TAPS,
    receiver_kind: str = "gaussian",
    receiver_share: float = 0.2,
) -> FirMds:
    """FIR-interference noise whose declared sub-Gaussian parameter equals
    target_R; receiver_share of the parameter budget goes to receiver noise."""
    if not (0 < receiver_share < 1):
        raise ParameterError(f"receiver_share must lie in (0,1), got {receiver_share}")
    receiver_param = receiver_share * target_R
    jammer_scale = (1.0 - receiver_share) * target_R / sum(abs(t) for t in taps)
    if receiver_kind == "gaussian":
        receiver: NoiseModel = Gaussian(receiver_param)
    elif receiver_kind == "uniform":
        receiver = Uniform(receiver_param)
    else:
        raise ParameterError(f"receiver_kind must be gaussian or uniform, got {receiver_kind!r}")
    return FirMds(taps=taps, jammer_scale=jammer_scale, receiver=receiver)


def channel_pilot_design(p: int = 8, length: int = PILOT_BUDGET, seed: int = DEFAULT_SEED) -> ToeplitzPilot:
    """Training-sequence design with seeded +-1 pilots."""
    return ToeplitzPilot(random_pilots(length, SeedSpec(seed, 0, "design")), p)


def fixed_design_bound(
    acc: Accuracy,
    design: ToeplitzPilot,
    noise: NoiseModel,
    n_start: int | None = None,
    max_iter: int = 50,
) -> tuple[int, ProblemParams, "bounds.BoundBreakdown"]:
    """Self-consistent sample count for a measured design.

    The fixed-design bound uses the smallest Gram eigenvalue of the matrix
    actually used, which itself depends on N; iterate N upward until the
    bound evaluated at the materialized matrix no longer exceeds N.
    """
    p = design_dim(design)
    N = max(n_start or 4 * p, p + 1)
    for _ in range(max_iter):
        params = implied_problem_params(design, noise, N_hint=N)
        bd = bounds.n_fixed_design(acc, params)
        target = max(bd.n_ceil, p + 1)
        if target <= N:
            return N, params, bd
        N = target
    raise ParameterError(f"fixed-design bound did not stabilize within {max_iter} iterations")


# ---------------------------------------------------------------------------
# Figure presets


@dataclass(frozen=True)
class PresetOutput:
    csv_paths: tuple[Path, ...]
    svg_path: Path


def _svg_series_from_rows(rows: list[ResultRow]) -> list[tuple[str, list[float], list[float]]]:
    xs = [row.axis_value for row in rows]
    return [
        ("bound", xs, [row.n_bound_real for row in rows]),
        ("p_hat", xs, [row.p_hat for row in rows]),
    ]


def _reproduce_fig1(outdir: Path, trials: int, seed: int, workers: int) -> PresetOutput:
    design = IidBoundedColumns((1.0,) * 8, "scaled-uniform")
    noise = gaussian_mixture_with_param(0.1)
    base = ExperimentSpec(design, noise, N=16, r=0.01, trials=trials, base_seed=seed)
    rows = sweep(base, "eps", [0.1, 0.05, 0.02, 0.01], "main", workers=workers)
    csv_path = outdir / "fig1.csv"
    write_result_csv(csv_path, rows)
    svg_path = outdir / "fig1.svg"
    write_line_plot(
        svg_path,
        _svg_series_from_rows(rows),
        title="required N and tail estimate vs outage target",
        x_label="eps",
        y_label="N / p_hat",
    )
    return PresetOutput((csv_path,), svg_path)


def fig2_models() -> tuple[IidBoundedColumns, Uniform]:
    import math

    return IidBoundedColumns((math.sqrt(0.2), 1.0), "scaled-uniform"), Uniform(1.0)


def _reproduce_fig2(outdir: Path, trials: int, seed: int, workers: int) -> PresetOutput:
    design, noise = fig2_models()
    base = ExperimentSpec(design, noise, N=8, r=1.0, trials=trials, base_seed=seed)
    rows = sweep(base, "r", [0.2, 0.4, 0.8, 1.6], "main", eps=0.01, workers=workers)
    csv_path = outdir / "fig2.csv"
    write_result_csv(csv_path, rows)
    svg_path = outdir / "fig2.svg"
    write_line_plot(
        svg_path,
        _svg_series_from_rows(rows),
        title="required N and tail estimate vs radius (uniform noise)",
        x_label="r",
        y_label="N / p_hat",
    )
    return PresetOutput((csv_path,), svg_path)


def _reproduce_fig3(outdir: Path, trials: int, seed: int, workers: int) -> PresetOutput:
    design = IidBoundedColumns((1.0,) * 4, "scaled-uniform")
    noise = Gaussian(10.0)
    base = ExperimentSpec(design, noise, N=8, r=1.0, trials=trials, base_seed=seed)
    r_grid = [1.0, 2.0, 4.0]
    rows_main = sweep(base, "r", r_grid, "main", eps=0.05, workers=workers)
    rows_mds = sweep(base, "r", r_grid, "mds_subgaussian", eps=0.05, workers=workers)
    main_csv = outdir / "fig3_main.csv"
    mds_csv = outdir / "fig3_mds.csv"
    write_result_csv(main_csv, rows_main)
    write_result_csv(mds_csv, rows_mds)
    svg_path = outdir / "fig3.svg"
    write_line_plot(
        svg_path,
        [
            ("main bound", r_grid, [row.n_bound_real for row in rows_main]),
            ("mds bound", r_grid, [row.n_bound_real for row in rows_mds]),
            ("p_hat (main)", r_grid, [row.p_hat for row in rows_main]),
            ("p_hat (mds)", r_grid, [row.p_hat for row in rows_mds]),
        ],
        title="joint vs martingale bound (Gaussian noise, R=10)",
        x_label="r",
        y_label="N / p_hat",
    )
    return PresetOutput((main_csv, mds_csv), svg_path)


FIG4_CONDITIONS = (1.0, 5.0, 25.0)
FIG4_R_GRIDS = {1.0: (1.0, 2.0, 4.0), 5.0: (2.0, 4.0, 8.0), 25.0: (8.0, 16.0, 32.0)}


def _reproduce_fig4(outdir: Path, trials: int, seed: int, workers: int) -> PresetOutput:
    import math

    noise = Gaussian(10.0)
    csvs = []
    series = []
    for cond in FIG4_CONDITIONS:
        stddevs = (math.sqrt(1.0 / cond), 1.0, 1.0, 1.0)
        design = IidBoundedColumns(stddevs, "scaled-uniform")
        base = ExperimentSpec(design, noise, N=8, r=1.0, trials=trials, base_seed=seed)
        r_grid = list(FIG4_R_GRIDS[cond])
        rows = sweep(base, "r", r_grid, "main", eps=0.05, workers=workers)
        csv_path = outdir / f"fig4_cond{int(cond)}.csv"
        write_result_csv(csv_path, rows)
        csvs.append(csv_path)
        series.append((f"bound cond={int(cond)}", r_grid, [row.n_bound_real for row in rows]))
    svg_path = outdir / "fig4.svg"
    write_line_plot(
        svg_path,
        series,
        title="required N vs radius for several condition numbers",
        x_label="r",
        y_label="N",
    )
    return PresetOutput(tuple(csvs), svg_path)


def fig5_models(seed: int = DEFAULT_SEED) -> tuple[ToeplitzPilot, FirMds]:
    return channel_pilot_design(p=8, seed=seed), fir_mds_with_param(0.1)


def _reproduce_fig5(outdir: Path, trials: int, seed: int, workers: int) -> PresetOutput:
    design, noise = fig5_models(seed)
    rows = []
    for r in (0.05, 0.1, 0.2):
        acc = Accuracy(r=r, eps=0.01)
        N, params, bd = fixed_design_bound(acc, design, noise)
        spec = ExperimentSpec(design, noise, N=N, r=r, trials=trials, base_seed=seed)
        est = run_tail(spec, workers=workers)
        rows.append(
            ResultRow(
                axis_name="r",
                axis_value=r,
                n_bound_real=bd.n_final,
                n_bound_ceil=bd.n_ceil,
                binding_term=bd.binding,
                s_opt_n2=None,
                s_opt_n3=None,
                tau_opt=None,
                p_hat=est.p_hat,
                ci_low=est.ci_low,
                ci_high=est.ci_high,
                trials=est.trials,
                seed=seed,
            )
        )
    csv_path = outdir / "fig5.csv"
    write_result_csv(csv_path, rows)
    svg_path = outdir / "fig5.svg"
    write_line_plot(
        svg_path,
        _svg_series_from_rows(rows),
        title="channel estimation: required N vs radius",
        x_label="r",
        y_label="N / p_hat",
    )
    return PresetOutput((csv_path,), svg_path)


def _reproduce_fig6(outdir: Path, trials: int, seed: int, workers: int) -> PresetOutput:
    design, noise = fig5_models(seed)
    r = 0.01
    rows = []
    for N in (3000, 4500, 6000, 7500):
        params = implied_problem_params(design, noise, N_hint=N)
        eps_bound = bounds.eps_fixed_design(r, N, params)
        spec = ExperimentSpec(design, noise, N=N, r=r, trials=trials, base_seed=seed)
        est = run_tail(spec, workers=workers)
        rows.append(
            ResultRow(
                axis_name="N",
                axis_value=float(N),
                n_bound_real=eps_bound,
                n_bound_ceil=None,
                binding_term=None,
                s_opt_n2=None,
                s_opt_n3=None,
                tau_opt=None,
                p_hat=est.p_hat,
                ci_low=est.ci_low,
                ci_high=est.ci_high,
                trials=est.trials,
                seed=seed,
            )
        )
    csv_path = outdir / "fig6.csv"
    write_result_csv(csv_path, rows)
    svg_path = outdir / "fig6.svg"
    write_line_plot(
        svg_path,
        [
            ("eps bound", [row.axis_value for row in rows], [row.n_bound_real for row in rows]),
            ("p_hat", [row.axis_value for row in rows], [row.p_hat for row in rows]),
        ],
        title="channel estimation: outage vs sample count",
        x_label="N",
        y_label="eps / p_hat",
    )
    return PresetOutput((csv_path,), svg_path)


_BUILDERS = {
    "fig1": _reproduce_fig1,
    "fig2": _reproduce_fig2,
    "fig3": _reproduce_fig3,
    "fig4": _reproduce_fig4,
    "fig5": _reproduce_fig5,
    "fig6": _reproduce_fig6,
}


def reproduce(
    figure: str,
    outdir: str | Path,
    trials: int = DEFAULT_TRIALS,
    base_seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> PresetOutput:
    """Run one figure preset and write its CSV/SVG outputs into outdir."""
    if figure not in _BUILDERS:
        raise ParameterError(f"unknown figure {figure!r}; expected one of {FIGURE_IDS}")
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    return _BUILDERS[figure](out, trials, base_seed, workers)
