"""Monte Carlo replication, scenario presets, OAT sensitivity sweeps and
Welch two-sample t statistics.

Replications of a Monte Carlo experiment use seeds base_seed, base_seed+1,
... and can run in parallel worker processes; results are joined in
replication order, so the aggregate is identical however they were
scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sstats
from threadpoolctl import threadpool_limits

from .engine import TickReport, run
from .params import SimulationParams


@dataclass(frozen=True)
class ScenarioSpec:
    """A named set of dotted-path parameter overrides."""

    name: str
    overrides: tuple[tuple[str, object], ...] = ()

    def apply(self, params: SimulationParams) -> SimulationParams:
        return params.with_overrides(dict(self.overrides))


BASELINE = ScenarioSpec("baseline")
SCENARIO_1 = ScenarioSpec("scenario1", (("economics.suppl_enabled", False),))
SCENARIO_2 = ScenarioSpec("scenario2", (("economics.basic_enabled", False),))
SCENARIO_3 = ScenarioSpec("scenario3", (("economics.premium_neutralized", True),))

SCENARIOS = {
    "baseline": BASELINE,
    "scenario1": SCENARIO_1,
    "scenario2": SCENARIO_2,
    "scenario3": SCENARIO_3,
    "1": SCENARIO_1,
    "2": SCENARIO_2,
    "3": SCENARIO_3,
}


@dataclass(frozen=True)
class SweepSpec:
    """One-at-a-time sweep of a single parameter over a value list."""

    parameter: str           # short name, see SWEEP_PATHS
    values: tuple[float, ...]

    @property
    def path(self) -> str:
        if self.parameter not in SWEEP_PATHS:
            raise ValueError(f"unknown sweep parameter '{self.parameter}'")
        return SWEEP_PATHS[self.parameter]


SWEEP_PATHS = {
    "steps_from_parent": "population.steps_from_parent",
    "n_universities": "population.n_universities",
    "econ_weight": "decision.econ_weight",
    "senior_reach_mean": "network.senior_reach_mean",
    "segregation": "population.segregation",
    "kappa": "decision.kappa",
    "birth_rate": "population.birth_rate",
}

DEFAULT_SWEEPS: tuple[SweepSpec, ...] = (
    SweepSpec("steps_from_parent", (3, 10, 15)),
    SweepSpec("n_universities", (5, 11, 25)),
    SweepSpec("econ_weight", (0.25, 0.5, 0.75, 1.0)),
    SweepSpec("senior_reach_mean", (1, 4, 10)),
    SweepSpec("segregation", (0.25, 0.5, 0.75)),
    SweepSpec("kappa", (0.5, 1.0, 1.8, 2.0)),
    SweepSpec("birth_rate", (0.25, 0.5, 0.75)),
)

METRICS = (
    "completion_rate",
    "completion_rate_edufam",
    "completion_rate_firstgen",
    "avg_loan_edufam",
    "avg_loan_firstgen",
)


@dataclass(frozen=True)
class WelchResult:
    t: float
    dof: float
    p: float


def welch_t(sample_a, sample_b) -> WelchResult:
    """Welch two-sample t statistic with Welch-Satterthwaite degrees of
    freedom and a two-sided Student-t p-value."""
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise ValueError("welch_t needs at least two observations per sample")
    va, vb = a.var(ddof=1), b.var(ddof=1)
    na, nb = a.size, b.size
    se2 = va / na + vb / nb
    if se2 == 0.0:
        # Degenerate zero-variance pair: identical means carry no evidence.
        return WelchResult(t=0.0, dof=float(na + nb - 2), p=1.0)
    t = float((a.mean() - b.mean()) / math.sqrt(se2))
    dof = se2**2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
    p = float(2.0 * sstats.t.sf(abs(t), dof))
    return WelchResult(t=t, dof=float(dof), p=p)


@dataclass
class MetricStat:
    mean: float
    sd: float
    n: int


@dataclass
class RunSummary:
    """Aggregates of one Monte Carlo experiment.

    ``pooled`` holds mean/sd over all valid (replication, tick) samples;
    ``per_rep`` holds mean/sd across replication means, the unit used for
    the Welch comparisons.  Per-tick completion rates only exist for ticks
    with deciders in the group; loan averages only for ticks with
    completers in the group.
    """

    scenario: str
    n_reps: int
    burn_in: int
    pooled: dict[str, MetricStat] = field(default_factory=dict)
    per_rep: dict[str, MetricStat] = field(default_factory=dict)
    rep_means: dict[str, np.ndarray] = field(default_factory=dict)
    welch: dict[str, WelchResult] = field(default_factory=dict)
    n_wage_fallbacks: int = 0
    n_premium_sentinels: int = 0
    reports: list[list[TickReport]] | None = None


def _tick_metric_samples(reports: list[TickReport], burn_in: int) -> dict[str, np.ndarray]:
    """Valid per-tick metric values of one replication."""
    rows = [r for r in reports if r.tick > burn_in]
    out: dict[str, list[float]] = {m: [] for m in METRICS}
    for r in rows:
        if r.n_deciders > 0:
            out["completion_rate"].append(r.n_completers / r.n_deciders)
        if r.n_deciders_edufam > 0:
            out["completion_rate_edufam"].append(r.n_completers_edufam / r.n_deciders_edufam)
        if r.n_deciders_firstgen > 0:
            out["completion_rate_firstgen"].append(
                r.n_completers_firstgen / r.n_deciders_firstgen
            )
        if r.n_completers_edufam > 0:
            out["avg_loan_edufam"].append(r.avg_loan_edufam)
        if r.n_completers_firstgen > 0:
            out["avg_loan_firstgen"].append(r.avg_loan_firstgen)
    return {m: np.array(v, dtype=float) for m, v in out.items()}


def _run_replication(args) -> list[TickReport]:
    params, seed = args
    return run(params, seed)


def _single_threaded_blas() -> None:
    # The engine's matrices are far too small for BLAS threading to pay
    # off; replications are the parallelism axis instead.
    threadpool_limits(limits=1)


def monte_carlo(
    params: SimulationParams,
    scenario: ScenarioSpec = BASELINE,
    n_reps: int | None = None,
    base_seed: int | None = None,
    burn_in: int | None = None,
    workers: int = 1,
    keep_reports: bool = False,
) -> RunSummary:
    """Run n_reps seeded replications of a scenario and aggregate the
    tick-level metrics over the full span."""
    effective = scenario.apply(params)
    exp = effective.experiments
    n_reps = exp.n_reps if n_reps is None else n_reps
    base_seed = exp.base_seed if base_seed is None else base_seed
    burn_in = exp.burn_in if burn_in is None else burn_in
    if n_reps < 1:
        raise ValueError("monte_carlo needs n_reps >= 1")

    jobs = [(effective, base_seed + i) for i in range(n_reps)]
    if workers > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_single_threaded_blas
        ) as pool:
            all_reports = list(pool.map(_run_replication, jobs, chunksize=1))
    else:
        with threadpool_limits(limits=1):
            all_reports = [_run_replication(job) for job in jobs]

    summary = RunSummary(scenario=scenario.name, n_reps=n_reps, burn_in=burn_in)
    per_rep_samples = [_tick_metric_samples(reports, burn_in) for reports in all_reports]
    for metric in METRICS:
        pooled = np.concatenate([s[metric] for s in per_rep_samples])
        rep_means = np.array(
            [s[metric].mean() for s in per_rep_samples if s[metric].size > 0]
        )
        summary.pooled[metric] = _stat(pooled)
        summary.per_rep[metric] = _stat(rep_means)
        summary.rep_means[metric] = rep_means
    pairs = {
        "completion_edufam_vs_firstgen": ("completion_rate_edufam", "completion_rate_firstgen"),
        "loan_edufam_vs_firstgen": ("avg_loan_edufam", "avg_loan_firstgen"),
    }
    for name, (left, right) in pairs.items():
        if summary.rep_means[left].size >= 2 and summary.rep_means[right].size >= 2:
            summary.welch[name] = welch_t(summary.rep_means[left], summary.rep_means[right])
    summary.n_wage_fallbacks = sum(
        r.n_wage_fallbacks for reports in all_reports for r in reports
    )
    summary.n_premium_sentinels = sum(
        r.n_premium_sentinels for reports in all_reports for r in reports
    )
    if keep_reports:
        summary.reports = all_reports
    return summary


def _stat(values: np.ndarray) -> MetricStat:
    if values.size == 0:
        return MetricStat(mean=0.0, sd=0.0, n=0)
    sd = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return MetricStat(mean=float(values.mean()), sd=sd, n=int(values.size))


def compare_scenarios(a: RunSummary, b: RunSummary, metric: str) -> WelchResult:
    """Welch test between two experiments' replication means of a metric."""
    return welch_t(a.rep_means[metric], b.rep_means[metric])


@dataclass
class SweepCell:
    parameter: str
    value: float
    summary: RunSummary


def oat_sensitivity(
    params: SimulationParams,
    sweeps: tuple[SweepSpec, ...] = DEFAULT_SWEEPS,
    n_reps: int | None = None,
    base_seed: int | None = None,
    workers: int = 1,
) -> list[SweepCell]:
    """One-at-a-time sensitivity: vary each parameter over its value list
    while holding everything else at baseline."""
    cells: list[SweepCell] = []
    for sweep in sweeps:
        path = sweep.path
        for value in sweep.values:
            cell_params = params.with_overrides({path: value})
            summary = monte_carlo(
                cell_params,
                BASELINE,
                n_reps=n_reps,
                base_seed=base_seed,
                workers=workers,
            )
            cells.append(SweepCell(parameter=sweep.parameter, value=value, summary=summary))
    return cells
