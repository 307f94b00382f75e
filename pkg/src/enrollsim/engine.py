"""Per-tick scheduler: exam, budget, expectations, enrollment decision,
graduation, hatching, aging and culling, in a fixed order.

One tick is one simulated year.  Within a tick the decision pass is
two-phase: phase 1 evaluates every decider against an immutable
population snapshot (budgets, wage expectations, peer ratios), phase 2
applies decisions and agent transitions sequentially in ascending id
order, which makes a (params, seed) pair reproduce the trajectory
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from . import decision as dec
from . import economics as econ
from .agents import DECIDING, EDUCATED, ENROLLED, PRACTICAL, Senior, Student
from .network import PopulationView, batch_branch_wage_stats, batch_peer_ratios
from .params import SimulationParams
from .population import (
    Population,
    cull_and_retire,
    hatch_students,
    init_world,
    make_senior,
)


@dataclass(slots=True)
class TickReport:
    tick: int
    cohort_size: int
    n_budget_fail: int
    n_exam_fail: int
    n_deciders: int
    n_completers: int
    n_completers_firstgen: int
    n_completers_edufam: int
    completion_rate: float
    avg_loan_firstgen: float
    avg_loan_edufam: float
    pop_seniors: int
    share_educated: float
    # extra bookkeeping, not part of the ticks.csv schema
    n_deciders_firstgen: int = 0
    n_deciders_edufam: int = 0
    n_wage_fallbacks: int = 0
    n_premium_sentinels: int = 0
    n_gave_up: int = 0
    n_retired: int = 0
    n_culled: int = 0


class Simulation:
    """State of one replication: population plus its private rng stream."""

    def __init__(self, params: SimulationParams, seed: int):
        params.validate()
        self.params = params
        self.rng = np.random.default_rng(seed)
        self.pop: Population = init_world(params, self.rng)
        self.tick = 0

    def step(self) -> TickReport:
        params, pop, rng = self.params, self.pop, self.rng
        d, e = params.decision, params.economics
        self.tick += 1
        seniors_before = len(pop.seniors)
        new_seniors = 0

        # (a) exams for deciding students; failers retry next tick and give
        # up after the attempt limit, entering the job market practically
        # skilled.
        cohort = [s for s in pop.students if s.state == DECIDING]
        cohort_size = len(cohort)
        passed: list[Student] = []
        gave_up: list[Student] = []
        n_exam_fail = 0
        for student in cohort:
            result = dec.take_exam(student, d, rng)
            student.grade = result.grade
            if result.passed:
                passed.append(student)
            else:
                n_exam_fail += 1
                student.attempts += 1
                if student.attempts >= d.max_attempts:
                    gave_up.append(student)
        for student in gave_up:
            self._student_to_senior(student, PRACTICAL)
            new_seniors += 1

        # (b) living situation was fixed at hatch.

        # (c) phase 1: budgets (rng draws in id order), then expectations,
        # prospective loans, premium and peer ratios against one immutable
        # snapshot of the post-exam population.
        budgets = [econ.compute_budget(s, e, rng) for s in passed]
        eligible = [s for s, b in zip(passed, budgets) if b.eligible]
        budget_failed = [s for s, b in zip(passed, budgets) if not b.eligible]
        budgets = [b for b in budgets if b.eligible]

        view = PopulationView.of(pop)
        wage_stats = batch_branch_wage_stats(view, eligible)
        ratios = batch_peer_ratios(view, eligible)
        fallback_e = econ.branch_mean_wage(EDUCATED, e, params.population.constructor_share)
        fallback_p = econ.branch_mean_wage(PRACTICAL, e, params.population.constructor_share)

        n_wage_fallbacks = 0
        n_premium_sentinels = 0
        loans: list[float] = []
        premiums: list[float] = []
        num_e = wage_stats["num_educated"].tolist()
        den_e = wage_stats["den_educated"].tolist()
        num_p = wage_stats["num_practical"].tolist()
        den_p = wage_stats["den_practical"].tolist()
        for i, budget in enumerate(budgets):
            if den_e[i] > 0.0:
                y_e = num_e[i] / den_e[i]
            else:
                y_e = fallback_e
                n_wage_fallbacks += 1
            if den_p[i] > 0.0:
                y_p = num_p[i] / den_p[i]
            else:
                y_p = fallback_p
                n_wage_fallbacks += 1
            loan = econ.loan_take_up(budget, e)
            repay = econ.repayment_cost(loan, e, params.engine.study_duration_ticks)
            premium, sentinel = econ.consumption_premium(
                y_e, y_p, repay, e, sentinel=d.premium_sentinel
            )
            loans.append(loan)
            premiums.append(premium)
            n_premium_sentinels += sentinel
        band = dec.ratio_percentiles(ratios[~np.isnan(ratios)], d)
        ratio_list = ratios.tolist()

        # (c) phase 2: apply transitions in id order.  Budget failures enter
        # the job market immediately; the rest enroll-and-complete with the
        # logistic probability or turn practical on the spot.
        for student in budget_failed:
            self._student_to_senior(student, PRACTICAL)
            new_seniors += 1
        completers: list[Student] = []
        completer_loans: list[float] = []
        enrolled_now: set[int] = set()
        for i, student in enumerate(eligible):
            ratio = None if math.isnan(ratio_list[i]) else ratio_list[i]
            pi = dec.peer_influence(ratio, band)
            cen = dec.centrality_term(
                dec.centrality(student.x, student.y, pop.universities, pop.world), params
            )
            pref = dec.preference(
                premiums[i],
                pi,
                dec.student_disposition(student.grade, d.kappa),
                student.openness,
                cen,
                d.econ_weight,
            )
            if rng.random() < dec.completion_probability(pref):
                student.state = ENROLLED
                student.ticks_remaining = params.engine.study_duration_ticks
                student.loan_monthly = loans[i]
                enrolled_now.add(student.id)
                completers.append(student)
                completer_loans.append(loans[i])
            else:
                self._student_to_senior(student, PRACTICAL)
                new_seniors += 1

        # (d) study progress: students enrolled in earlier ticks advance one
        # year and graduate when done, so enrollment at tick t graduates at
        # exactly t + study_duration.
        advancing = [
            s for s in pop.students if s.state == ENROLLED and s.id not in enrolled_now
        ]
        for student in advancing:
            student.ticks_remaining -= 1
            if student.ticks_remaining == 0:
                self._student_to_senior(student, EDUCATED)
                new_seniors += 1

        # (e) seniors hatch the next cohort.
        hatched = hatch_students(pop, params, rng)
        pop.students.extend(hatched)
        hatched_ids = {s.id for s in hatched}

        # (f) everyone who existed before the hatch ages one year.
        for senior in pop.seniors:
            senior.age += 1
        for student in pop.students:
            if student.id not in hatched_ids:
                student.age += 1

        # (g) retirement and carrying-capacity culling.
        n_retired, n_culled = cull_and_retire(pop, params, rng)

        # Conservation: every senior entering or leaving is accounted for.
        assert len(pop.seniors) == seniors_before + new_seniors - n_retired - n_culled, (
            "senior bookkeeping out of balance at tick %d" % self.tick
        )

        # (h) per-tick aggregates.
        n_seniors = len(pop.seniors)
        n_educated = sum(1 for s in pop.seniors if s.education == EDUCATED)
        loans_first = [l for s, l in zip(completers, completer_loans) if not s.parent_educated]
        loans_edu = [l for s, l in zip(completers, completer_loans) if s.parent_educated]
        return TickReport(
            tick=self.tick,
            cohort_size=cohort_size,
            n_budget_fail=len(budget_failed),
            n_exam_fail=n_exam_fail,
            n_deciders=len(eligible),
            n_completers=len(completers),
            n_completers_firstgen=len(loans_first),
            n_completers_edufam=len(loans_edu),
            completion_rate=len(completers) / len(eligible) if eligible else 0.0,
            avg_loan_firstgen=float(np.mean(loans_first)) if loans_first else 0.0,
            avg_loan_edufam=float(np.mean(loans_edu)) if loans_edu else 0.0,
            pop_seniors=n_seniors,
            share_educated=n_educated / n_seniors if n_seniors else 0.0,
            n_deciders_firstgen=sum(1 for s in eligible if not s.parent_educated),
            n_deciders_edufam=sum(1 for s in eligible if s.parent_educated),
            n_wage_fallbacks=n_wage_fallbacks,
            n_premium_sentinels=n_premium_sentinels,
            n_gave_up=len(gave_up),
            n_retired=n_retired,
            n_culled=n_culled,
        )

    def _student_to_senior(self, student: Student, education: str) -> Senior:
        """Generational transition: the student leaves education and enters
        the labour market, relocated by the segregation rule."""
        pop, params, rng = self.pop, self.params, self.rng
        pop.students.remove(student)
        senior = make_senior(pop, student.age, education, params, rng)
        # Same person, new status: keep the id assigned at hatch.
        pop.next_id -= 1
        senior.id = student.id
        pop.seniors.append(senior)
        return senior


def run(
    params: SimulationParams,
    seed: int,
    scenario=None,
    ticks: int | None = None,
) -> list[TickReport]:
    """Initialize a world and advance it the configured number of ticks,
    returning the full report series."""
    if scenario is not None:
        params = params.with_overrides(dict(scenario.overrides))
    sim = Simulation(params, seed)
    n = params.engine.ticks if ticks is None else ticks
    return [sim.step() for _ in range(n)]


TICKS_CSV_COLUMNS = (
    "run_id",
    "tick",
    "cohort_size",
    "n_budget_fail",
    "n_exam_fail",
    "n_deciders",
    "n_completers",
    "n_completers_firstgen",
    "n_completers_edufam",
    "completion_rate",
    "avg_loan_firstgen",
    "avg_loan_edufam",
    "pop_seniors",
    "share_educated",
)


def report_row(run_id: int, report: TickReport) -> list:
    """One ticks.csv row in schema order."""
    values = {f.name: getattr(report, f.name) for f in fields(TickReport)}
    return [run_id] + [values[c] for c in TICKS_CSV_COLUMNS[1:]]
