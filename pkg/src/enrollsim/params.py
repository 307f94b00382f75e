"""Simulation parameters: every exogenous constant in one place.

Parameters are grouped into sections mirroring the config-file layout
([population], [network], [economics], [decision], [engine],
[experiments]).  Any field is addressable by a dotted path such as
``economics.cost_out`` or ``decision.kappa``, which is how scenario
overrides and sensitivity sweeps modify a baseline configuration.

Defaults encode the Dutch calibration: 3000 working-age seniors, 11
universities on a 20x20 grid, CBS/DUO-derived grant and cost levels,
and the five occupation wage bands.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields
from typing import Any, Iterator


class ParamsError(ValueError):
    """Invalid parameter value or unknown parameter path."""


# Parental endowment: (average gross household income EUR/year,
# absolute yearly spending on the child's education EUR/year),
# one row per income decile.
DEFAULT_ENDOWMENT_TABLE: tuple[tuple[float, float], ...] = (
    (13800.0, 2249.40),
    (24300.0, 1992.60),
    (32000.0, 2208.00),
    (41000.0, 2091.00),
    (52000.0, 2704.00),
    (65200.0, 3520.80),
    (80900.0, 4045.00),
    (99900.0, 5294.70),
    (127100.0, 7371.80),
    (229200.0, 12835.20),
)

# Itemized monthly living expenses of a non-resident student (EUR/month).
# The items sum to the non-resident cost of education used in the budget.
LIVING_EXPENSE_ITEMS: dict[str, float] = {
    "rent": 494.0,
    "groceries": 201.0,
    "study_materials": 57.0,
    "tuition": 211.0,
    "leisure": 144.0,
    "clothing": 62.0,
    "transport": 84.0,
    "telephone": 22.0,
    "vacation": 169.0,
}


@dataclass
class PopulationParams:
    n_seniors_init: int = 3000
    n_universities: int = 11
    segregation: float = 0.5          # rho_s: 0 = none, 1 = full
    birth_rate: float = 0.05          # per senior per tick
    carrying_capacity: int = 3500     # max seniors after culling
    retirement_age: int = 45          # seniors older than this are removed
    steps_from_parent: float = 3.0    # child displacement at hatch (spatial units)
    share_educated_init: float = 0.36
    constructor_share: float = 0.036  # among practical seniors at setup
    lives_out_share: float = 0.53     # students living away from home
    decision_age: int = 17
    world_width: float = 20.0
    world_height: float = 20.0


@dataclass
class NetworkParams:
    student_reach: float = 4.5
    senior_reach_mean: float = 5.5
    senior_reach_sd: float = 1.0
    senior_reach_min: float = 0.5     # truncation floor for the base draw
    outlier_share: float = 0.05       # replaced draws, extreme ones included
    extreme_share: float = 0.01       # subset of the replaced draws
    outlier_reach: float = 9.0
    extreme_reach: float = 14.0


@dataclass
class EconomicsParams:
    cost_home: float = 749.0          # EUR/month, living with parents
    cost_out: float = 1444.0          # EUR/month, living independently
    basic_home: float = 121.33
    basic_out: float = 302.39
    suppl_max: float = 457.60
    suppl_full_threshold: float = 36592.92   # EUR/year household income
    suppl_zero_threshold: float = 80000.0
    work_employment_prob: float = 0.72
    work_income_mean: float = 508.0          # EUR/month among the employed
    work_income_sigma_log: float = 0.5       # log-normal shape
    loan_cap: float = 1054.17                # EUR/month
    loan_annual_interest: float = 0.0256
    loan_horizon_months: int = 420           # 35-year repayment
    wage_floor: float = 500.0                # truncation of all band draws
    income_edu_high_mean: float = 5246.5
    income_edu_high_sd: float = 1445.76
    income_edu_low_mean: float = 3665.71
    income_edu_low_sd: float = 211.11
    income_prac_high_mean: float = 3059.43
    income_prac_high_sd: float = 343.62
    income_prac_low_mean: float = 2514.14
    income_prac_low_sd: float = 184.98
    income_constructor_mean: float = 7350.0
    income_constructor_sd: float = 634.29
    edu_high_share: float = 0.5       # high-earning share among new educated
    prac_high_share: float = 0.5      # high-earning share among new practical
    endowment_table: tuple[tuple[float, float], ...] = DEFAULT_ENDOWMENT_TABLE
    # Scenario levers
    suppl_enabled: bool = True
    basic_enabled: bool = True
    premium_neutralized: bool = False


@dataclass
class DecisionParams:
    ability_mean: float = 6.7         # Dutch 1-10 grade scale
    ability_sd: float = 0.9
    attempt_noise_sd: float = 0.4     # per-attempt grade noise
    pass_threshold: float = 5.5
    max_attempts: int = 3
    kappa: float = 1.8                # disposition exponent
    econ_weight: float = 0.75         # omega_1; omega_2 = 1 - omega_1
    openness_mean: float = 0.5
    openness_sd: float = 0.15
    peer_lower_pct: float = 10.0      # ratio percentile band for inversion
    peer_upper_pct: float = 90.0
    min_cohort_for_inversion: int = 10
    premium_sentinel: float = -5.0    # value when educated consumption <= 0
    invert_centrality: bool = False   # substitute 1 - CEN if set


@dataclass
class EngineParams:
    ticks: int = 100
    study_duration_ticks: int = 5


@dataclass
class ExperimentsParams:
    n_reps: int = 100
    base_seed: int = 0
    burn_in: int = 0


@dataclass
class SimulationParams:
    population: PopulationParams = field(default_factory=PopulationParams)
    network: NetworkParams = field(default_factory=NetworkParams)
    economics: EconomicsParams = field(default_factory=EconomicsParams)
    decision: DecisionParams = field(default_factory=DecisionParams)
    engine: EngineParams = field(default_factory=EngineParams)
    experiments: ExperimentsParams = field(default_factory=ExperimentsParams)

    def copy(self) -> "SimulationParams":
        return SimulationParams(
            **{f.name: dataclasses.replace(getattr(self, f.name)) for f in fields(self)}
        )

    def get(self, path: str) -> Any:
        section, name = _split_path(path)
        sec = self._section(section)
        if not any(f.name == name for f in fields(sec)):
            raise ParamsError(f"unknown parameter '{path}'")
        return getattr(sec, name)

    def set(self, path: str, value: Any) -> None:
        section, name = _split_path(path)
        sec = self._section(section)
        for f in fields(sec):
            if f.name == name:
                setattr(sec, name, _coerce(value, f.type, path))
                return
        raise ParamsError(f"unknown parameter '{path}'")

    def with_overrides(self, overrides: dict[str, Any]) -> "SimulationParams":
        out = self.copy()
        for path, value in overrides.items():
            out.set(path, value)
        return out

    def iter_fields(self) -> Iterator[tuple[str, Any]]:
        for sf in fields(self):
            sec = getattr(self, sf.name)
            for f in fields(sec):
                yield f"{sf.name}.{f.name}", getattr(sec, f.name)

    def _section(self, name: str):
        if not any(f.name == name for f in fields(self)):
            raise ParamsError(f"unknown parameter section '{name}'")
        return getattr(self, name)

    @property
    def social_weight(self) -> float:
        """omega_2, the weight of the non-economic preference block."""
        return 1.0 - self.decision.econ_weight

    def validate(self) -> None:
        p, n, e, d = self.population, self.network, self.economics, self.decision
        for path in (
            "population.segregation",
            "population.birth_rate",
            "population.share_educated_init",
            "population.constructor_share",
            "population.lives_out_share",
            "network.outlier_share",
            "network.extreme_share",
            "economics.work_employment_prob",
            "economics.edu_high_share",
            "economics.prac_high_share",
            "decision.econ_weight",
        ):
            v = self.get(path)
            if not 0.0 <= v <= 1.0:
                raise ParamsError(f"{path} must lie in [0, 1], got {v}")
        if p.n_seniors_init < 0:
            raise ParamsError("population.n_seniors_init must be >= 0")
        if p.n_universities < 1:
            raise ParamsError("population.n_universities must be >= 1")
        if p.carrying_capacity < 0:
            raise ParamsError("population.carrying_capacity must be >= 0")
        if p.world_width <= 0 or p.world_height <= 0:
            raise ParamsError("world dimensions must be positive")
        if p.steps_from_parent < 0:
            raise ParamsError("population.steps_from_parent must be >= 0")
        if n.student_reach <= 0 or n.senior_reach_mean <= 0:
            raise ParamsError("social reaches must be positive")
        if n.outlier_reach <= 0 or n.extreme_reach <= 0 or n.senior_reach_min <= 0:
            raise ParamsError("social reaches must be positive")
        if n.extreme_share > n.outlier_share:
            raise ParamsError("network.extreme_share must not exceed outlier_share")
        if e.cost_home <= 0 or e.cost_out <= 0:
            raise ParamsError("education costs must be positive")
        if e.suppl_zero_threshold <= e.suppl_full_threshold:
            raise ParamsError("supplementary grant thresholds must be ordered")
        if e.loan_cap < 0 or e.loan_annual_interest < 0:
            raise ParamsError("loan terms must be non-negative")
        if e.loan_horizon_months < 1:
            raise ParamsError("economics.loan_horizon_months must be >= 1")
        if e.wage_floor <= 0:
            raise ParamsError("economics.wage_floor must be positive")
        if len(e.endowment_table) < 1:
            raise ParamsError("economics.endowment_table must have rows")
        if any(spend <= 0 for _, spend in e.endowment_table):
            raise ParamsError("endowment spending must be positive")
        if sorted(inc for inc, _ in e.endowment_table) != [inc for inc, _ in e.endowment_table]:
            raise ParamsError("endowment incomes must be sorted ascending")
        if d.ability_sd < 0 or d.attempt_noise_sd < 0 or d.openness_sd < 0:
            raise ParamsError("standard deviations must be >= 0")
        if not 1.0 <= d.pass_threshold <= 10.0:
            raise ParamsError("decision.pass_threshold must lie in [1, 10]")
        if d.max_attempts < 1:
            raise ParamsError("decision.max_attempts must be >= 1")
        if not 0.0 <= d.peer_lower_pct < d.peer_upper_pct <= 100.0:
            raise ParamsError("peer percentile band must satisfy 0 <= lower < upper <= 100")
        if self.engine.ticks < 0:
            raise ParamsError("engine.ticks must be >= 0")
        if self.engine.study_duration_ticks < 1:
            raise ParamsError("engine.study_duration_ticks must be >= 1")
        if self.experiments.n_reps < 1:
            raise ParamsError("experiments.n_reps must be >= 1")
        if self.experiments.burn_in < 0:
            raise ParamsError("experiments.burn_in must be >= 0")


def _split_path(path: str) -> tuple[str, str]:
    parts = path.split(".")
    if len(parts) != 2:
        raise ParamsError(f"parameter path must be 'section.name', got '{path}'")
    return parts[0], parts[1]


def _coerce(value: Any, ftype: Any, path: str) -> Any:
    """Coerce a raw (possibly string) value to the declared field type."""
    tname = ftype if isinstance(ftype, str) else getattr(ftype, "__name__", str(ftype))
    try:
        if tname == "bool":
            if isinstance(value, bool):
                return value
            if isinstance(value, str):
                low = value.strip().lower()
                if low in ("true", "yes", "on", "1"):
                    return True
                if low in ("false", "no", "off", "0"):
                    return False
                raise ValueError(value)
            return bool(value)
        if tname == "int":
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if tname == "float":
            return float(value)
        if tname.startswith("tuple"):
            return parse_pair_table(value) if isinstance(value, str) else tuple(
                (float(a), float(b)) for a, b in value
            )
    except (TypeError, ValueError) as exc:
        raise ParamsError(f"cannot interpret {value!r} for '{path}'") from exc
    return value


def parse_pair_table(text: str) -> tuple[tuple[float, float], ...]:
    """Parse 'income:spending, income:spending, ...' into a pair table."""
    rows = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        left, _, right = chunk.partition(":")
        if not right:
            raise ParamsError(f"malformed table entry '{chunk}' (expected income:spending)")
        rows.append((float(left), float(right)))
    return tuple(rows)


def format_pair_table(table: tuple[tuple[float, float], ...]) -> str:
    return ", ".join(f"{a:.2f}:{b:.2f}" for a, b in table)
