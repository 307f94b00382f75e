"""Behavioral-pipeline operations against independent oracles: normal CDF
for pass rates, sorted-list percentiles for peer influence, finite
differences for preference linearity, binomial intervals for the
enrollment Bernoulli."""

import math

import numpy as np
import pytest

from enrollsim.agents import University, WorldGrid
from enrollsim.decision import (
    centrality,
    centrality_term,
    completion_probability,
    openness,
    peer_influence,
    peer_ratio,
    preference,
    ratio_percentiles,
    student_disposition,
    take_exam,
)
from enrollsim.params import SimulationParams

REL = 1e-6


def dparams(**overrides):
    d = SimulationParams().decision
    for key, value in overrides.items():
        setattr(d, key, value)
    return d


def make_student(ability=6.7, grade=7.0):
    from tests.test_economics import make_student as _mk

    return _mk(ability=ability, grade=grade)


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


# Exam ---------------------------------------------------------------------


def test_exam_degenerate_cases(rng):
    d = dparams(attempt_noise_sd=0.0)
    top = take_exam(make_student(ability=10.0), d, rng)
    assert top.grade == 10.0 and top.passed
    low = take_exam(make_student(ability=5.0), d, rng)
    assert low.grade == 5.0 and not low.passed


def test_exam_pass_rate_matches_normal_cdf(rng):
    # population ability Normal(6.7, 0.9) plus attempt noise Normal(0, 0.4):
    # pass rate ~ Phi((6.7 - 5.5) / sqrt(0.9^2 + 0.4^2)) ~ 0.889
    d = dparams()
    total_sd = math.hypot(d.ability_sd, d.attempt_noise_sd)
    expected = normal_cdf((d.ability_mean - d.pass_threshold) / total_sd)
    assert expected == pytest.approx(0.889, abs=1e-3)
    n = 40000
    abilities = rng.normal(d.ability_mean, d.ability_sd, size=n).clip(1.0, 10.0)
    passes = sum(
        take_exam(make_student(ability=a), d, rng).passed for a in abilities
    )
    assert passes / n == pytest.approx(expected, abs=0.01)


def test_exam_grades_clipped(rng):
    d = dparams(attempt_noise_sd=5.0)
    grades = [take_exam(make_student(ability=6.7), d, rng).grade for _ in range(2000)]
    assert all(1.0 <= g <= 10.0 for g in grades)


# Disposition ----------------------------------------------------------------


def test_disposition_power_oracle():
    assert student_disposition(10.0, 1.8) == pytest.approx(1.0, rel=REL)
    assert student_disposition(5.0, 1.8) == pytest.approx(
        math.exp(1.8 * math.log(0.5)), rel=REL
    )
    assert student_disposition(5.0, 1.8) == pytest.approx(0.2872, abs=5e-5)
    for grade in (1.0, 3.3, 6.7, 9.9):
        assert student_disposition(grade, 1.0) == pytest.approx(grade / 10.0, rel=REL)


def test_disposition_monotone_grid():
    grades = [float(g) for g in range(1, 11)]
    for kappa in (0.5, 1.0, 1.8, 2.0):
        values = [student_disposition(g, kappa) for g in grades]
        assert all(b > a for a, b in zip(values, values[1:]))
    kappas = (0.5, 1.0, 1.8, 2.0)
    for grade in grades[:-1]:  # grade < 10 so the base is < 1
        values = [student_disposition(grade, k) for k in kappas]
        assert all(b < a for a, b in zip(values, values[1:]))


# Peer influence -------------------------------------------------------------


def percentile_oracle(sorted_values: list[float], q: float) -> float:
    """Linear-interpolated order statistic, computed from scratch."""
    h = (len(sorted_values) - 1) * q / 100.0
    lo = math.floor(h)
    hi = min(lo + 1, len(sorted_values) - 1)
    return sorted_values[lo] + (h - lo) * (sorted_values[hi] - sorted_values[lo])


def fixed_cohort() -> np.ndarray:
    # 20 ratios: a tight middle plus one strong under- and over-performer
    mids = [0.90 + 0.02 * i for i in range(18)]  # 0.90 .. 1.24
    return np.array(mids + [2.0, 0.4])


def test_peer_influence_fixed_cohort_oracle():
    d = dparams()
    ratios = fixed_cohort()
    band = ratio_percentiles(ratios, d)
    assert band is not None
    ordered = sorted(ratios.tolist())
    assert band[0] == pytest.approx(percentile_oracle(ordered, 10.0), rel=REL)
    assert band[1] == pytest.approx(percentile_oracle(ordered, 90.0), rel=REL)
    inside = 7.0 / 6.0
    assert band[0] <= inside <= band[1]
    assert peer_influence(inside, band) == pytest.approx(inside, rel=REL)
    # far-underperformer: ratio 2.0 above p90 is inverted to dissuade
    assert 2.0 > band[1]
    assert peer_influence(2.0, band) == pytest.approx(0.5, rel=REL)
    # far-overperformer: ratio 0.4 below p10 also inverted
    assert 0.4 < band[0]
    assert peer_influence(0.4, band) == pytest.approx(2.5, rel=REL)


def test_peer_influence_neutral_cases():
    band = (0.8, 1.2)
    assert peer_influence(1.0, band) == 1.0
    assert peer_influence(None, band) == 1.0
    # small cohorts skip inversion: pass-through mode
    assert peer_influence(2.0, None) == 2.0


def test_peer_influence_inversion_property(rng):
    d = dparams()
    ratios = np.sort(rng.uniform(0.5, 2.0, size=50))
    band = ratio_percentiles(ratios, d)
    for ratio in ratios:
        value = peer_influence(float(ratio), band)
        if band[0] <= ratio <= band[1]:
            assert value == ratio
        else:
            assert value == pytest.approx(1.0 / ratio, rel=REL)


def test_small_cohort_skips_inversion():
    d = dparams()
    assert ratio_percentiles(np.array([1.0, 1.1, 0.9]), d) is None
    assert ratio_percentiles(np.array([]), d) is None


def test_peer_ratio_mean():
    grades = np.array([6.0, 8.0])
    assert peer_ratio(7.0, grades) == pytest.approx(1.0, rel=REL)
    assert peer_ratio(6.0, np.array([7.0])) == pytest.approx(7.0 / 6.0, rel=REL)
    assert peer_ratio(7.0, np.array([])) is None


# Openness ---------------------------------------------------------------


def test_openness_degenerate_and_range(rng):
    assert openness(dparams(openness_sd=0.0), rng) == 0.5
    d = dparams()
    draws = np.array([openness(d, rng) for _ in range(100000)])
    assert np.all((draws > 0.0) & (draws < 1.0))
    assert draws.mean() == pytest.approx(0.5, abs=0.01)


def test_openness_independent_of_ability(rng):
    d = dparams()
    abilities = rng.normal(d.ability_mean, d.ability_sd, size=100000)
    draws = np.array([openness(d, rng) for _ in range(100000)])
    corr = np.corrcoef(abilities, draws)[0, 1]
    assert abs(corr) <= 0.02


# Centrality --------------------------------------------------------------


def test_centrality_cases():
    world = WorldGrid(20.0, 20.0)
    at_student = [University(id=0, x=3.0, y=4.0)]
    assert centrality(3.0, 4.0, at_student, world) == 0.0
    corner = [University(id=0, x=20.0, y=20.0)]
    assert centrality(0.0, 0.0, corner, world) == pytest.approx(1.0, rel=REL)
    # distances 5 and 15 against the 28.284 diagonal -> 10/28.284
    unis = [University(id=0, x=8.0, y=4.0), University(id=1, x=14.0, y=12.0)]
    expected = ((5.0 + 15.0) / 2.0) / math.hypot(20.0, 20.0)
    assert centrality(5.0, 0.0, unis, world) == pytest.approx(expected, rel=REL)
    assert expected == pytest.approx(0.35355, abs=5e-5)


def test_centrality_requires_universities():
    with pytest.raises(ValueError):
        centrality(1.0, 1.0, [], WorldGrid())


def test_centrality_term_flip():
    params = SimulationParams()
    assert centrality_term(0.3, params) == 0.3
    params.decision.invert_centrality = True
    assert centrality_term(0.3, params) == pytest.approx(0.7)


# Preference and logistic --------------------------------------------------


def test_preference_arithmetic_oracle():
    # 0.75*0.47 + 0.25*(0.287 + 0.5 + 0.3) = 0.62425
    value = preference(0.47, 1.0, 0.287, 0.5, 0.3, 0.75)
    assert value == pytest.approx(0.75 * 0.47 + 0.25 * 1.087, rel=REL)
    assert value == pytest.approx(0.6243, abs=5e-5)
    assert preference(0.8, 1.3, 0.4, 0.6, 0.2, 1.0) == pytest.approx(0.8, rel=REL)
    assert preference(0.0, 0.0, 0.0, 0.0, 0.0, 0.75) == 0.0


def test_preference_linear_in_each_input():
    base = dict(premium=0.47, peer=1.1, disposition=0.3, personality=0.5, central=0.3)
    w1 = 0.75
    slopes = {
        "premium": w1,
        "personality": 1.0 - w1,
        "central": 1.0 - w1,
        "disposition": (1.0 - w1) * base["peer"],
        "peer": (1.0 - w1) * base["disposition"],
    }
    h = 1.0
    for name, slope in slopes.items():
        lo = dict(base)
        hi = dict(base)
        hi[name] += h
        diff = preference(**hi, econ_weight=w1) - preference(**lo, econ_weight=w1)
        assert diff == pytest.approx(slope * h, abs=1e-9)


def test_logistic_values_oracle():
    assert completion_probability(0.0) == 0.5
    assert completion_probability(1.0) == pytest.approx(math.e / (1.0 + math.e), rel=REL)
    assert completion_probability(1.0) == pytest.approx(0.7311, abs=5e-5)
    assert completion_probability(-5.0) == pytest.approx(
        math.exp(-5.0) / (1.0 + math.exp(-5.0)), rel=REL
    )
    assert completion_probability(-5.0) == pytest.approx(0.0067, abs=5e-5)


def test_logistic_shape_and_stability():
    xs = np.linspace(-30.0, 30.0, 601)
    values = [completion_probability(x) for x in xs]
    assert all(0.0 < v < 1.0 for v in values)
    assert all(b > a for a, b in zip(values, values[1:]))
    for x in xs:
        assert completion_probability(-x) == pytest.approx(
            1.0 - completion_probability(x), abs=1e-12
        )
    assert completion_probability(1000.0) == 1.0
    assert completion_probability(-1000.0) == pytest.approx(0.0, abs=1e-300)


def test_enrollment_bernoulli_binomial_interval(rng):
    # fixed preference 0 -> probability 1/2; binomial CI oracle over 10^4
    p = completion_probability(0.0)
    n = 10000
    enrolls = int(np.sum(rng.random(n) < p))
    assert enrolls / n == pytest.approx(0.5, abs=0.015)
