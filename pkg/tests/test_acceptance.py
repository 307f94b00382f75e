"""Acceptance suite: the package's exit criteria, one pass/fail line each.

The heavy fixtures run the full experiment battery once per session:
baseline and the three policy scenarios at 100 replications x 100 ticks,
plus the kappa / economic-weight / segregation sweeps at 10 replications
per cell.  Every threshold is asserted exactly as stated; a FAIL line
means the current calibration genuinely does not meet that target.
"""

import math
import time

import numpy as np
import pytest

from enrollsim.agents import WorldGrid
from enrollsim.decision import completion_probability, peer_influence, ratio_percentiles
from enrollsim.economics import repayment_cost, supplementary_grant, weighted_wage_mean
from enrollsim.engine import run
from enrollsim.experiments import (
    BASELINE,
    SCENARIO_1,
    SCENARIO_2,
    SCENARIO_3,
    SweepSpec,
    monte_carlo,
    oat_sensitivity,
    welch_t,
)
from enrollsim.network import classmates_of, PopulationView
from enrollsim.params import SimulationParams
from enrollsim.population import Population
from enrollsim.reporting import write_ticks_csv

WORKERS = 2
SCENARIO_REPS = 100
SWEEP_REPS = 10


def check(label: str, passed: bool, detail: str) -> None:
    print(f"ACCEPTANCE {label}: {'PASS' if passed else 'FAIL'} - {detail}", flush=True)
    assert passed, f"{label}: {detail}"


@pytest.fixture(scope="module")
def battery():
    params = SimulationParams()
    t0 = time.perf_counter()
    base = monte_carlo(params, BASELINE, n_reps=100, base_seed=0, workers=WORKERS)
    base_elapsed = time.perf_counter() - t0
    scn1 = monte_carlo(params, SCENARIO_1, n_reps=SCENARIO_REPS, base_seed=0, workers=WORKERS)
    scn2 = monte_carlo(params, SCENARIO_2, n_reps=SCENARIO_REPS, base_seed=0, workers=WORKERS)
    scn3 = monte_carlo(params, SCENARIO_3, n_reps=SCENARIO_REPS, base_seed=0, workers=WORKERS)
    return {
        "base": base,
        "base_elapsed": base_elapsed,
        "scn1": scn1,
        "scn2": scn2,
        "scn3": scn3,
    }


@pytest.fixture(scope="module")
def sweeps():
    params = SimulationParams()
    out = {}
    for spec in (
        SweepSpec("kappa", (0.5, 1.0, 1.8, 2.0)),
        SweepSpec("econ_weight", (0.25, 0.5, 0.75, 1.0)),
        SweepSpec("segregation", (0.25, 0.5, 0.75)),
    ):
        cells = oat_sensitivity(params, (spec,), n_reps=SWEEP_REPS, base_seed=1000, workers=WORKERS)
        out[spec.parameter] = [
            (c.value, c.summary.pooled["completion_rate"].mean) for c in cells
        ]
    return out


def completion(summary) -> float:
    return summary.pooled["completion_rate"].mean


def loans(summary) -> tuple[float, float]:
    return (
        summary.pooled["avg_loan_edufam"].mean,
        summary.pooled["avg_loan_firstgen"].mean,
    )


# Criterion 1: baseline calibration ------------------------------------------


def test_criterion_1a_baseline_completion_window(battery):
    mean = completion(battery["base"])
    check(
        "1a",
        0.69 <= mean <= 0.79,
        f"baseline completion {mean * 100:.2f}% vs target window [69, 79]",
    )


def test_criterion_1b_baseline_loan_gap(battery):
    edu, first = loans(battery["base"])
    check(
        "1b",
        edu - first >= 60.0,
        f"avg loan educated-family {edu:.1f} vs first-generation {first:.1f}"
        f" (gap {edu - first:.1f}, required >= 60)",
    )


def test_criterion_1c_baseline_runtime(battery):
    elapsed = battery["base_elapsed"]
    check(
        "1c",
        elapsed <= 300.0,
        f"100 replications x 100 ticks in {elapsed:.1f}s (budget 300s)",
    )


# Criterion 2: supplementary grant abolished ----------------------------------


def test_criterion_2a_loan_convergence(battery):
    edu, first = loans(battery["scn1"])
    check(
        "2a",
        abs(edu - first) <= 30.0,
        f"scenario1 loans educated-family {edu:.1f} vs first-gen {first:.1f}"
        f" (|diff| {abs(edu - first):.1f}, required <= 30)",
    )


def test_criterion_2b_completion_stable(battery):
    delta = abs(completion(battery["scn1"]) - completion(battery["base"]))
    check(
        "2b",
        delta <= 0.02,
        f"scenario1 completion shifts {delta * 100:.2f}pp vs baseline (allowed 2pp)",
    )


# Criterion 3: basic grant abolished ------------------------------------------


def test_criterion_3a_completion_drops(battery):
    drop = completion(battery["base"]) - completion(battery["scn2"])
    check(
        "3a",
        drop >= 0.01,
        f"scenario2 completion drop {drop * 100:.2f}pp vs baseline (required >= 1pp)",
    )


def test_criterion_3b_loans_rise(battery):
    base_edu, base_first = loans(battery["base"])
    scn_edu, scn_first = loans(battery["scn2"])
    rise_edu = scn_edu / base_edu - 1.0
    rise_first = scn_first / base_first - 1.0
    check(
        "3b",
        rise_edu >= 0.25 and rise_first >= 0.25,
        f"scenario2 loan increases: educated-family +{rise_edu * 100:.1f}%,"
        f" first-gen +{rise_first * 100:.1f}% (required >= 25% both)",
    )


# Criterion 4: wage premium neutralized ---------------------------------------


def test_criterion_4a_scenario3_window(battery):
    mean = completion(battery["scn3"])
    check(
        "4a",
        0.48 <= mean <= 0.60,
        f"scenario3 completion {mean * 100:.2f}% vs target window [48, 60]",
    )


def test_criterion_4b_scenario3_drop(battery):
    drop = completion(battery["base"]) - completion(battery["scn3"])
    check(
        "4b",
        drop >= 0.15,
        f"scenario3 completion drop {drop * 100:.2f}pp vs baseline (required >= 15pp)",
    )


# Criterion 5: sensitivity shapes ---------------------------------------------


def test_criterion_5a_kappa_non_increasing(sweeps):
    means = [m for _, m in sweeps["kappa"]]
    diffs = np.diff(means)
    check(
        "5a",
        bool(np.all(diffs <= 1e-12)),
        "kappa sweep completion " + ", ".join(f"{m * 100:.2f}" for m in means),
    )


def test_criterion_5b_weight_increasing_concave(sweeps):
    means = [m for _, m in sweeps["econ_weight"]]
    diffs = np.diff(means)
    concave_tail = (means[3] - means[2]) - (means[2] - means[1]) <= 0.0
    check(
        "5b",
        bool(np.all(diffs >= -1e-12)) and concave_tail,
        "economic-weight sweep completion "
        + ", ".join(f"{m * 100:.2f}" for m in means)
        + " (required non-decreasing with concave tail)",
    )


def test_criterion_5c_segregation_flat(sweeps):
    means = [m for _, m in sweeps["segregation"]]
    spread = max(means) - min(means)
    check(
        "5c",
        spread < 0.02,
        f"segregation sweep spread {spread * 100:.2f}pp (allowed < 2pp)",
    )


# Criterion 6: equation-level oracles ----------------------------------------


def test_criterion_6_deterministic_oracles():
    econ = SimulationParams().economics
    dec = SimulationParams().decision
    rel = 1e-6

    # weighted mean
    wm = weighted_wage_mean(np.array([4000.0, 3000.0]), np.array([1.5, 1.0]))
    ok = math.isclose(wm, 3600.0, rel_tol=rel)

    # logistic
    ok &= math.isclose(completion_probability(1.0), math.e / (1 + math.e), rel_tol=rel)
    ok &= math.isclose(
        completion_probability(-5.0), math.exp(-5) / (1 + math.exp(-5)), rel_tol=rel
    )

    # annuity against an explicit amortization bisection
    from tests.test_economics import amortization_payment_oracle

    debt = 344.0 * 60.0
    oracle = amortization_payment_oracle(debt, econ.loan_annual_interest / 12.0, 420)
    ok &= math.isclose(repayment_cost(344.0, econ), oracle, rel_tol=rel)

    # grant interpolation at the midpoint
    mid = (econ.suppl_full_threshold + econ.suppl_zero_threshold) / 2.0
    ok &= math.isclose(supplementary_grant(mid, econ), 228.80, rel_tol=rel)

    # percentile band + tail inversion on a fixed cohort
    from tests.test_decision import fixed_cohort, percentile_oracle

    ratios = fixed_cohort()
    band = ratio_percentiles(ratios, dec)
    ordered = sorted(ratios.tolist())
    ok &= math.isclose(band[0], percentile_oracle(ordered, 10.0), rel_tol=rel)
    ok &= math.isclose(band[1], percentile_oracle(ordered, 90.0), rel_tol=rel)
    ok &= math.isclose(peer_influence(2.0, band), 0.5, rel_tol=rel)

    # disposition power and premium logarithm
    from enrollsim.decision import preference, student_disposition
    from enrollsim.economics import consumption_premium

    ok &= math.isclose(student_disposition(5.0, 1.8), 0.5**1.8, rel_tol=rel)
    premium, _ = consumption_premium(4000.0, 2500.0, 0.0, econ)
    ok &= math.isclose(premium, math.log(1.6), rel_tol=rel)
    ok &= math.isclose(
        preference(0.47, 1.0, 0.287, 0.5, 0.3, 0.75),
        0.75 * 0.47 + 0.25 * 1.087,
        rel_tol=rel,
    )
    check("6", ok, "deterministic equation oracles at 1e-6 relative tolerance")


# Criterion 7: property battery -----------------------------------------------


def test_criterion_7_property_battery(tmp_path, rng):
    econ = SimulationParams().economics

    # grant monotonicity and continuity on a 1-euro grid
    grid = np.arange(0.0, 100001.0)
    values = np.array([supplementary_grant(float(x), econ) for x in grid[::13]])
    grant_ok = bool(np.all(np.diff(values) <= 1e-12))
    slope = econ.suppl_max / (econ.suppl_zero_threshold - econ.suppl_full_threshold)
    grant_ok &= bool(np.max(np.abs(np.diff(values))) <= 13 * slope + 1e-9)

    # logistic symmetry and monotonicity
    xs = np.linspace(-20.0, 20.0, 401)
    probs = [completion_probability(float(x)) for x in xs]
    logistic_ok = all(b > a for a, b in zip(probs, probs[1:]))
    logistic_ok &= all(
        abs(completion_probability(float(-x)) - (1.0 - completion_probability(float(x))))
        < 1e-12
        for x in xs
    )

    # budget component-sum identity over randomized draws
    from enrollsim.economics import compute_budget
    from tests.test_economics import make_student

    budget_ok = True
    for _ in range(1000):
        student = make_student(
            lives_out=bool(rng.random() < 0.5),
            household_income=float(rng.uniform(0.0, 250000.0)),
        )
        budget = compute_budget(student, econ, rng)
        total = (
            budget.basic_grant
            + budget.suppl_grant
            + budget.endowment
            + budget.work_income
            + budget.loan_capacity
        )
        budget_ok &= math.isclose(budget.total, total, rel_tol=1e-12)

    # classmate reciprocity on 1000 random placements
    from tests.test_network import student as make_net_student

    placed = [
        make_net_student(i, float(x), float(y))
        for i, (x, y) in enumerate(rng.uniform(0.0, 20.0, size=(1000, 2)))
    ]
    view = PopulationView.of(Population(world=WorldGrid(), students=placed))
    mates = {s.id: {m.id for m in classmates_of(s, view)} for s in placed}
    reciprocity_ok = all(s.id in mates[o] for s in placed for o in mates[s.id])

    # seeded determinism: byte-identical tick files from two full runs
    params = SimulationParams()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_ticks_csv(a, [run(params, seed=123)])
    write_ticks_csv(b, [run(params, seed=123)])
    determinism_ok = a.read_bytes() == b.read_bytes()

    # agent conservation asserted inside every tick of a 100-tick run
    conservation_ok = len(run(params, seed=7)) == 100

    ok = (
        grant_ok
        and logistic_ok
        and budget_ok
        and reciprocity_ok
        and determinism_ok
        and conservation_ok
    )
    check(
        "7",
        ok,
        f"grant grid {grant_ok}, logistic {logistic_ok}, budget identity {budget_ok}, "
        f"reciprocity {reciprocity_ok}, determinism {determinism_ok}, "
        f"conservation {conservation_ok}",
    )


# Criterion 8: statistical harness --------------------------------------------


def test_criterion_8_welch_calibration():
    # Welch on two Normal(0,1) samples of n=1000 rejects at the 5% level
    # in ~5% of 10^4 trials
    rng = np.random.default_rng(2024)
    trials = 10000
    n = 1000
    rejections = 0
    for _ in range(trials):
        a = rng.standard_normal(n)
        b = rng.standard_normal(n)
        if welch_t(a, b).p < 0.05:
            rejections += 1
    rate = rejections / trials
    check(
        "8",
        0.035 <= rate <= 0.065,
        f"Welch rejection rate {rate * 100:.2f}% over {trials} null trials"
        " (target 5% +/- 1.5pp)",
    )
