"""Population lifecycle: world setup, segregated placement, hatching,
aging, retirement and carrying-capacity culling.

Event ordering is fixed (agents processed in ascending id order inside
each operation) so that a (params, seed) pair fully determines the
population trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .agents import (
    CONSTRUCTOR,
    EDU_HIGH,
    EDU_LOW,
    EDUCATED,
    PRAC_HIGH,
    PRAC_LOW,
    PRACTICAL,
    Senior,
    Student,
    University,
    WorldGrid,
)
from .decision import openness as draw_openness
from .economics import draw_wage
from .network import assign_social_reach
from .params import SimulationParams


@dataclass
class Population:
    world: WorldGrid
    seniors: list[Senior] = field(default_factory=list)
    students: list[Student] = field(default_factory=list)
    universities: list[University] = field(default_factory=list)
    next_id: int = 0

    def take_id(self) -> int:
        self.next_id += 1
        return self.next_id - 1


def assign_location(
    education: str, params: SimulationParams, world: WorldGrid, rng: np.random.Generator
) -> tuple[float, float]:
    """Place an agent on its own education's half of the grid with
    probability 1/2 + 1/2 * segregation, otherwise on the opposite half;
    uniform within the chosen half."""
    rho = 0.5 + 0.5 * params.population.segregation
    side = education if rng.random() < rho else (
        PRACTICAL if education == EDUCATED else EDUCATED
    )
    lo, hi = world.side_of(side)
    return float(rng.uniform(lo, hi)), float(rng.uniform(0.0, world.height))


def _draw_band(education: str, params: SimulationParams, rng: np.random.Generator) -> str:
    econ = params.economics
    if education == EDUCATED:
        return EDU_HIGH if rng.random() < econ.edu_high_share else EDU_LOW
    return PRAC_HIGH if rng.random() < econ.prac_high_share else PRAC_LOW


def make_senior(
    pop: Population,
    age: int,
    education: str,
    params: SimulationParams,
    rng: np.random.Generator,
    band: str | None = None,
    gender: str | None = None,
) -> Senior:
    if gender is None:
        gender = "M" if rng.random() < 0.5 else "F"
    if band is None:
        band = _draw_band(education, params, rng)
    x, y = assign_location(education, params, pop.world, rng)
    return Senior(
        id=pop.take_id(),
        age=age,
        gender=gender,
        education=education,
        occupation_band=band,
        wage=draw_wage(band, params.economics, rng),
        x=x,
        y=y,
        social_reach=assign_social_reach(params.network, rng),
    )


def init_world(params: SimulationParams, rng: np.random.Generator) -> Population:
    """Create the initial society: seniors, universities and the first
    student cohort, exactly as at t=0."""
    params.validate()
    p = params.population
    world = WorldGrid(p.world_width, p.world_height)
    pop = Population(world=world)
    for _ in range(p.n_seniors_init):
        age = int(rng.integers(25, 35))
        education = EDUCATED if rng.random() < p.share_educated_init else PRACTICAL
        band = None
        if education == PRACTICAL and rng.random() < p.constructor_share:
            band = CONSTRUCTOR
        pop.seniors.append(
            make_senior(pop, age, education, params, rng, band=band)
        )
    for _ in range(p.n_universities):
        pop.universities.append(
            University(
                id=pop.take_id(),
                x=float(rng.uniform(0.0, world.width)),
                y=float(rng.uniform(0.0, world.height)),
            )
        )
    pop.students.extend(hatch_students(pop, params, rng))
    return pop


def hatch_students(
    pop: Population, params: SimulationParams, rng: np.random.Generator
) -> list[Student]:
    """Each senior independently spawns one student with probability
    birth_rate.  The child starts at decision age a fixed number of steps
    from the parent, in a uniformly random direction."""
    p, d, n = params.population, params.decision, params.network
    hatched: list[Student] = []
    births = rng.random(len(pop.seniors)) < p.birth_rate
    for senior, born in zip(pop.seniors, births):
        if not born:
            continue
        angle = rng.uniform(0.0, 2.0 * math.pi)
        x, y = pop.world.clamp(
            senior.x + p.steps_from_parent * math.cos(angle),
            senior.y + p.steps_from_parent * math.sin(angle),
        )
        ability = min(max(rng.normal(d.ability_mean, d.ability_sd), 1.0), 10.0)
        hatched.append(
            Student(
                id=pop.take_id(),
                age=p.decision_age,
                parent_id=senior.id,
                x=x,
                y=y,
                social_reach=n.student_reach,
                ability=ability,
                grade=float("nan"),
                lives_out=bool(rng.random() < p.lives_out_share),
                openness=draw_openness(d, rng),
                household_income=senior.wage * 12.0,
                parent_educated=senior.education == EDUCATED,
                parent_wage=senior.wage,
                parent_weight=1.0 + float(rng.uniform(0.0, 1.0)),
            )
        )
    return hatched


def cull_and_retire(
    pop: Population, params: SimulationParams, rng: np.random.Generator
) -> tuple[int, int]:
    """Remove seniors past retirement age, then uniformly random seniors
    until the count fits the carrying capacity.  Students are never culled.
    Returns (n_retired, n_culled)."""
    p = params.population
    before = len(pop.seniors)
    pop.seniors = [s for s in pop.seniors if s.age <= p.retirement_age]
    retired = before - len(pop.seniors)
    excess = len(pop.seniors) - p.carrying_capacity
    if excess <= 0:
        return retired, 0
    doomed = set(rng.choice(len(pop.seniors), size=excess, replace=False).tolist())
    pop.seniors = [s for k, s in enumerate(pop.seniors) if k not in doomed]
    return retired, excess
