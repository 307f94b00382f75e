"""Money flows: costs, grants, parental endowment, work income, loans,
budget constraint, expected wages and the consumption premium.

All operations are pure given (inputs, rng); the scenario levers
``suppl_enabled`` / ``basic_enabled`` / ``premium_neutralized`` live on
:class:`~enrollsim.params.EconomicsParams`.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .agents import (
    CONSTRUCTOR,
    EDU_HIGH,
    EDU_LOW,
    EDUCATED,
    PRAC_HIGH,
    PRAC_LOW,
    Student,
)
from .params import EconomicsParams


@dataclass(slots=True)
class Budget:
    """Monthly resources X, cost E and the X-composition for one student."""

    basic_grant: float
    suppl_grant: float
    endowment: float
    work_income: float
    loan_capacity: float
    cost: float

    @property
    def total(self) -> float:
        return (
            self.basic_grant
            + self.suppl_grant
            + self.endowment
            + self.work_income
            + self.loan_capacity
        )

    @property
    def eligible(self) -> bool:
        return self.total - self.cost > 0.0


def basic_grant(lives_out: bool, econ: EconomicsParams) -> float:
    """Universal monthly stipend; scenario lever can abolish it entirely."""
    if not econ.basic_enabled:
        return 0.0
    return econ.basic_out if lives_out else econ.basic_home


def supplementary_grant(household_income: float, econ: EconomicsParams) -> float:
    """Income-tested stipend: full below the lower threshold, zero above the
    upper one, linear in between."""
    if not econ.suppl_enabled:
        return 0.0
    if household_income <= econ.suppl_full_threshold:
        return econ.suppl_max
    if household_income >= econ.suppl_zero_threshold:
        return 0.0
    span = econ.suppl_zero_threshold - econ.suppl_full_threshold
    return econ.suppl_max * (econ.suppl_zero_threshold - household_income) / span


def endowment_brackets(econ: EconomicsParams) -> list[float]:
    """Upper bracket bounds (midpoints between consecutive decile incomes)."""
    incomes = [inc for inc, _ in econ.endowment_table]
    return [(a + b) / 2.0 for a, b in zip(incomes, incomes[1:])]


def parental_endowment(household_income: float, econ: EconomicsParams) -> float:
    """Monthly parental contribution from the income-decile table."""
    idx = bisect_right(endowment_brackets(econ), household_income)
    return econ.endowment_table[idx][1] / 12.0


def work_income_mu_log(econ: EconomicsParams) -> float:
    """Log-scale location such that the log-normal mean equals the target."""
    return math.log(econ.work_income_mean) - econ.work_income_sigma_log**2 / 2.0


def work_income(econ: EconomicsParams, rng: np.random.Generator) -> float:
    """0 for the non-employed share, otherwise a log-normal monthly wage."""
    if rng.random() >= econ.work_employment_prob:
        return 0.0
    return float(rng.lognormal(work_income_mu_log(econ), econ.work_income_sigma_log))


def compute_budget(student: Student, econ: EconomicsParams, rng: np.random.Generator) -> Budget:
    cost = econ.cost_out if student.lives_out else econ.cost_home
    return Budget(
        basic_grant=basic_grant(student.lives_out, econ),
        suppl_grant=supplementary_grant(student.household_income, econ),
        endowment=parental_endowment(student.household_income, econ),
        work_income=work_income(econ, rng),
        loan_capacity=econ.loan_cap,
        cost=cost,
    )


def loan_take_up(budget: Budget, econ: EconomicsParams) -> float:
    """Minimal-borrowing rule: only the uncovered part of the cost, capped."""
    deficit = budget.cost - (
        budget.basic_grant + budget.suppl_grant + budget.endowment + budget.work_income
    )
    return float(min(max(deficit, 0.0), econ.loan_cap))


def repayment_cost(loan_monthly: float, econ: EconomicsParams, study_years: int = 5) -> float:
    """Monthly annuity repaying the debt accumulated over the study years."""
    debt = loan_monthly * 12.0 * study_years
    if debt <= 0.0:
        return 0.0
    n = econ.loan_horizon_months
    r = econ.loan_annual_interest / 12.0
    if r == 0.0:
        return debt / n
    return debt * r / (1.0 - (1.0 + r) ** (-n))


# Wage bands ---------------------------------------------------------------

BAND_PARAMS = {
    EDU_HIGH: ("income_edu_high_mean", "income_edu_high_sd"),
    EDU_LOW: ("income_edu_low_mean", "income_edu_low_sd"),
    PRAC_HIGH: ("income_prac_high_mean", "income_prac_high_sd"),
    PRAC_LOW: ("income_prac_low_mean", "income_prac_low_sd"),
    CONSTRUCTOR: ("income_constructor_mean", "income_constructor_sd"),
}


def band_moments(band: str, econ: EconomicsParams) -> tuple[float, float]:
    mean_attr, sd_attr = BAND_PARAMS[band]
    return getattr(econ, mean_attr), getattr(econ, sd_attr)


def draw_wage(band: str, econ: EconomicsParams, rng: np.random.Generator) -> float:
    """Normal band draw, redrawn until above the wage floor."""
    mean, sd = band_moments(band, econ)
    while True:
        wage = rng.normal(mean, sd)
        if wage > econ.wage_floor:
            return float(wage)


def branch_mean_wage(branch: str, econ: EconomicsParams, constructor_share: float) -> float:
    """Population mean wage of an education branch; the fallback for students
    whose neighborhood has nobody working in that branch."""
    if branch == EDUCATED:
        return (
            econ.edu_high_share * econ.income_edu_high_mean
            + (1.0 - econ.edu_high_share) * econ.income_edu_low_mean
        )
    base = (
        econ.prac_high_share * econ.income_prac_high_mean
        + (1.0 - econ.prac_high_share) * econ.income_prac_low_mean
    )
    return constructor_share * econ.income_constructor_mean + (1.0 - constructor_share) * base


def weighted_wage_mean(wages: np.ndarray, weights: np.ndarray) -> float:
    """sum(nu_i * w_i) / sum(nu_i) over one branch's neighbors."""
    total = float(np.sum(weights))
    if total <= 0.0:
        raise ValueError("weighted_wage_mean needs a non-empty branch")
    return float(np.dot(wages, weights) / total)


def consumption_premium(
    expected_educated: float,
    expected_practical: float,
    repayment: float,
    econ: EconomicsParams,
    sentinel: float = -5.0,
) -> tuple[float, bool]:
    """log of expected educated consumption (wage net of loan repayment)
    over expected practical consumption.

    Returns (premium, sentinel_used).  When the premium-neutralized
    scenario is active the value is 0 regardless of inputs; when educated
    consumption is non-positive the sentinel stands in and is flagged.
    """
    if econ.premium_neutralized:
        return 0.0, False
    net = expected_educated - repayment
    if net <= 0.0 or expected_practical <= 0.0:
        return sentinel, True
    return math.log(net / expected_practical), False
