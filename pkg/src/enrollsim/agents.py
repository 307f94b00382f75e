"""Agent and world types shared by all modules."""

from __future__ import annotations

import math
from dataclasses import dataclass

EDUCATED = "educated"
PRACTICAL = "practical"

# Occupation wage bands
EDU_HIGH = "edu_high"
EDU_LOW = "edu_low"
PRAC_HIGH = "prac_high"
PRAC_LOW = "prac_low"
CONSTRUCTOR = "constructor"

PRACTICAL_BANDS = (PRAC_HIGH, PRAC_LOW, CONSTRUCTOR)
EDUCATED_BANDS = (EDU_HIGH, EDU_LOW)

# Student states
DECIDING = "deciding"
ENROLLED = "enrolled"
DONE = "done"


@dataclass(frozen=True)
class WorldGrid:
    """Bounded (non-toroidal) plane; left half is the practical side,
    right half the educated side."""

    width: float = 20.0
    height: float = 20.0

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x < self.width and 0.0 <= y < self.height

    def side_of(self, education: str) -> tuple[float, float]:
        """x-interval [lo, hi) of the half belonging to an education level."""
        half = self.width / 2.0
        if education == PRACTICAL:
            return 0.0, half
        return half, self.width

    def clamp(self, x: float, y: float) -> tuple[float, float]:
        eps = 1e-9
        return (
            min(max(x, 0.0), self.width - eps),
            min(max(y, 0.0), self.height - eps),
        )


@dataclass(slots=True, eq=False)
class Senior:
    id: int
    age: int
    gender: str                  # "M" / "F"; stored, unused by any rule
    education: str               # EDUCATED / PRACTICAL
    occupation_band: str
    wage: float                  # EUR/month gross
    x: float
    y: float
    social_reach: float

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(slots=True, eq=False)
class Student:
    id: int
    age: int
    parent_id: int
    x: float
    y: float
    social_reach: float
    ability: float               # persistent, grade points on the 1-10 scale
    grade: float                 # latest attempt realization (nan before 1st exam)
    lives_out: bool
    openness: float              # in (0, 1)
    household_income: float      # EUR/year gross
    parent_educated: bool
    parent_wage: float           # snapshot at hatch, survives parent removal
    parent_weight: float         # nu = 1 + U(0,1), drawn once per student
    state: str = DECIDING
    ticks_remaining: int = 0     # study ticks left while enrolled
    loan_monthly: float = 0.0    # EUR/month taken while enrolled
    attempts: int = 0            # failed exam attempts so far

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(slots=True, eq=False)
class University:
    id: int
    x: float
    y: float

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)
