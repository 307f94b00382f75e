"""Behavioral pipeline: exam, disposition, peer influence, openness,
centrality and the logistic enroll-and-complete preference.

Preference aggregation:

    P = w1 * premium + (1 - w1) * (PI * SD + PER + CEN)

with the enrollment event Bernoulli(exp(P) / (1 + exp(P))).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .agents import Student, University, WorldGrid
from .params import DecisionParams, SimulationParams


@dataclass(slots=True)
class ExamResult:
    grade: float
    passed: bool


def take_exam(student: Student, dec: DecisionParams, rng: np.random.Generator) -> ExamResult:
    """One attempt: persistent ability plus attempt noise, clipped to the
    1-10 grade scale; pass at or above the threshold."""
    grade = student.ability + rng.normal(0.0, dec.attempt_noise_sd)
    grade = min(max(grade, 1.0), 10.0)
    return ExamResult(grade=float(grade), passed=grade >= dec.pass_threshold)


def student_disposition(grade: float, kappa: float) -> float:
    """SD = (grade/10)^kappa; increasing returns to above-average grades."""
    return (grade / 10.0) ** kappa


def peer_ratio(own_grade: float, classmate_grades: np.ndarray) -> float | None:
    """Class average over own grade; None when there are no classmates."""
    if classmate_grades.size == 0:
        return None
    return float(np.mean(classmate_grades) / own_grade)


def ratio_percentiles(
    cohort_ratios: np.ndarray, dec: DecisionParams
) -> tuple[float, float] | None:
    """(p10, p90) of this tick's cohort ratios via linear-interpolated order
    statistics; None when the cohort is too small for meaningful tails."""
    if cohort_ratios.size < dec.min_cohort_for_inversion:
        return None
    lo, hi = np.percentile(cohort_ratios, [dec.peer_lower_pct, dec.peer_upper_pct])
    return float(lo), float(hi)


def peer_influence(ratio: float | None, band: tuple[float, float] | None) -> float:
    """Pass the ratio through inside the cohort's middle band, invert it in
    either tail; students with no classmates sit at the neutral 1."""
    if ratio is None:
        return 1.0
    if band is None:
        return ratio
    lo, hi = band
    if lo <= ratio <= hi:
        return ratio
    return 1.0 / ratio


def openness(dec: DecisionParams, rng: np.random.Generator) -> float:
    """Openness trait in (0, 1): truncated normal, independent draw."""
    if dec.openness_sd == 0.0:
        return dec.openness_mean
    while True:
        value = rng.normal(dec.openness_mean, dec.openness_sd)
        if 0.0 < value < 1.0:
            return float(value)


def centrality(
    x: float, y: float, universities: list[University], world: WorldGrid
) -> float:
    """Mean Euclidean distance to all universities, normalized by the world
    diagonal; in [0, 1]."""
    if not universities:
        raise ValueError("centrality requires at least one university")
    total = 0.0
    for u in universities:
        total += math.hypot(u.x - x, u.y - y)
    return total / len(universities) / world.diagonal


def preference(
    premium: float,
    peer: float,
    disposition: float,
    personality: float,
    central: float,
    econ_weight: float,
) -> float:
    return econ_weight * premium + (1.0 - econ_weight) * (
        peer * disposition + personality + central
    )


def completion_probability(p: float) -> float:
    """Logistic exp(P)/(1+exp(P)), stable for large |P|."""
    if p >= 0.0:
        return 1.0 / (1.0 + math.exp(-p))
    z = math.exp(p)
    return z / (1.0 + z)


def centrality_term(cen: float, params: SimulationParams) -> float:
    """CEN as used in the preference; optionally flipped so that distance
    penalizes enrollment."""
    return 1.0 - cen if params.decision.invert_centrality else cen
