"""enrollsim: agent-based simulator of tertiary-education enrollment
decisions with Dutch grant/loan economics."""

from .agents import Senior, Student, University, WorldGrid
from .engine import Simulation, TickReport, run
from .experiments import (
    BASELINE,
    SCENARIO_1,
    SCENARIO_2,
    SCENARIO_3,
    RunSummary,
    ScenarioSpec,
    SweepSpec,
    monte_carlo,
    oat_sensitivity,
    welch_t,
)
from .params import SimulationParams

__version__ = "0.1.0"

__all__ = [
    "BASELINE",
    "SCENARIO_1",
    "SCENARIO_2",
    "SCENARIO_3",
    "RunSummary",
    "ScenarioSpec",
    "Senior",
    "Simulation",
    "SimulationParams",
    "Student",
    "SweepSpec",
    "TickReport",
    "University",
    "WorldGrid",
    "monte_carlo",
    "oat_sensitivity",
    "run",
    "welch_t",
]
