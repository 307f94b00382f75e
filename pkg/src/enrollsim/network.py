"""Social-circles network: reach assignment and radius queries.

An agent perceives every other agent within its own social reach
(Euclidean distance, inclusive, on the bounded plane).  Seniors get a
fat-tailed reach distribution; students share one fixed reach so that
classmate links are reciprocal by construction.

Queries run against a :class:`PopulationView`, an immutable per-tick
snapshot of positions, wages and grades held as numpy arrays.  The
``batch_*`` functions are the vectorized equivalents of the per-agent
queries used on the engine's hot path; a test pins their equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .agents import EDUCATED, Senior, Student
from .params import NetworkParams

if TYPE_CHECKING:
    from .population import Population

# Cap on the size of one distance block (rows x columns) so that sweeps
# with very large cohorts keep a bounded memory footprint.
_BLOCK_CELLS = 4_000_000


def assign_social_reach(profile: NetworkParams, rng: np.random.Generator) -> float:
    """Draw a senior's reach: mostly Normal(mean, sd) truncated above a
    floor, with a small share replaced by an outlier value and a sliver of
    those by an extreme value (fat tail)."""
    u = rng.random()
    if u < profile.extreme_share:
        return profile.extreme_reach
    if u < profile.outlier_share:
        return profile.outlier_reach
    if profile.senior_reach_sd == 0.0:
        return profile.senior_reach_mean
    while True:
        reach = rng.normal(profile.senior_reach_mean, profile.senior_reach_sd)
        if reach > profile.senior_reach_min:
            return float(reach)


@dataclass
class PopulationView:
    """Read-only array snapshot of one tick's population."""

    seniors: list[Senior]
    students: list[Student]
    senior_ids: np.ndarray
    senior_x: np.ndarray
    senior_y: np.ndarray
    senior_wage: np.ndarray
    senior_educated: np.ndarray  # bool
    student_ids: np.ndarray
    student_x: np.ndarray
    student_y: np.ndarray
    student_grade: np.ndarray
    senior_index: dict[int, int] = field(default_factory=dict)

    @classmethod
    def of(cls, pop: "Population") -> "PopulationView":
        seniors, students = pop.seniors, pop.students
        ns, nt = len(seniors), len(students)
        view = cls(
            seniors=seniors,
            students=students,
            senior_ids=np.fromiter((s.id for s in seniors), dtype=np.int64, count=ns),
            senior_x=np.fromiter((s.x for s in seniors), dtype=float, count=ns),
            senior_y=np.fromiter((s.y for s in seniors), dtype=float, count=ns),
            senior_wage=np.fromiter((s.wage for s in seniors), dtype=float, count=ns),
            senior_educated=np.fromiter(
                (s.education == EDUCATED for s in seniors), dtype=bool, count=ns
            ),
            student_ids=np.fromiter((s.id for s in students), dtype=np.int64, count=nt),
            student_x=np.fromiter((s.x for s in students), dtype=float, count=nt),
            student_y=np.fromiter((s.y for s in students), dtype=float, count=nt),
            student_grade=np.fromiter((s.grade for s in students), dtype=float, count=nt),
        )
        view.senior_index = {int(i): k for k, i in enumerate(view.senior_ids)}
        return view

    def senior_mask_within(self, x: float, y: float, reach: float) -> np.ndarray:
        d2 = (self.senior_x - x) ** 2 + (self.senior_y - y) ** 2
        return d2 <= reach * reach

    def student_mask_within(self, x: float, y: float, reach: float) -> np.ndarray:
        d2 = (self.student_x - x) ** 2 + (self.student_y - y) ** 2
        return d2 <= reach * reach


def neighbors_of(agent, view: PopulationView) -> list:
    """All agents (seniors and students) within the agent's reach,
    excluding the agent itself.  Distance test is inclusive."""
    x, y, reach = agent.x, agent.y, agent.social_reach
    out: list = []
    for k in np.flatnonzero(view.senior_mask_within(x, y, reach)):
        senior = view.seniors[k]
        if senior.id != agent.id:
            out.append(senior)
    for k in np.flatnonzero(view.student_mask_within(x, y, reach)):
        student = view.students[k]
        if student.id != agent.id:
            out.append(student)
    return out


def classmates_of(student: Student, view: PopulationView) -> list[Student]:
    """Other students within the student's reach; reciprocal because all
    students share the same reach."""
    mask = view.student_mask_within(student.x, student.y, student.social_reach)
    return [view.students[k] for k in np.flatnonzero(mask) if view.students[k].id != student.id]


def working_neighbor_wages(
    student: Student, view: PopulationView
) -> list[tuple[float, float, str]]:
    """(wage, weight, education) for every senior neighbor, weight 1 each,
    plus the hatch-time parent snapshot with its drawn weight regardless of
    distance (the parent never appears twice)."""
    mask = view.senior_mask_within(student.x, student.y, student.social_reach)
    parent_row = view.senior_index.get(student.parent_id)
    if parent_row is not None:
        mask = mask.copy()
        mask[parent_row] = False
    entries = [
        (float(view.senior_wage[k]), 1.0, EDUCATED if view.senior_educated[k] else "practical")
        for k in np.flatnonzero(mask)
    ]
    parent_edu = EDUCATED if student.parent_educated else "practical"
    entries.append((student.parent_wage, student.parent_weight, parent_edu))
    return entries


def branch_wage_arrays(
    student: Student, view: PopulationView, branch: str
) -> tuple[np.ndarray, np.ndarray]:
    """Wages and weights of the student's neighbors working in one branch
    (parent included only for its own branch)."""
    want_edu = branch == EDUCATED
    mask = view.senior_mask_within(student.x, student.y, student.social_reach)
    parent_row = view.senior_index.get(student.parent_id)
    if parent_row is not None:
        mask = mask.copy()
        mask[parent_row] = False
    mask &= view.senior_educated == want_edu
    wages = view.senior_wage[mask]
    weights = np.ones(wages.shape[0])
    if student.parent_educated == want_edu:
        wages = np.append(wages, student.parent_wage)
        weights = np.append(weights, student.parent_weight)
    return wages, weights


# Vectorized equivalents -----------------------------------------------------


def _row_blocks(n_rows: int, n_cols: int) -> list[tuple[int, int]]:
    step = max(1, _BLOCK_CELLS // max(1, n_cols))
    return [(i, min(i + step, n_rows)) for i in range(0, n_rows, step)]


def _pairwise_sq_dists_factory(cx: np.ndarray, cy: np.ndarray):
    """Squared distances of query points (rows) against fixed points
    (columns), computed blockwise."""

    def sq(qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
        return (cx[None, :] - qx[:, None]) ** 2 + (cy[None, :] - qy[:, None]) ** 2

    return sq


def batch_branch_wage_stats(
    view: PopulationView, students: list[Student]
) -> dict[str, np.ndarray]:
    """Per-student weighted wage sums and weight totals for both branches:
    sum(nu*w) and sum(nu) over senior neighbors within the student's reach
    (parent excluded from the radius scan, added with its own weight to its
    own branch).  A weight total of 0 marks an empty branch."""
    k = len(students)
    sx = np.fromiter((s.x for s in students), dtype=float, count=k)
    sy = np.fromiter((s.y for s in students), dtype=float, count=k)
    reach2 = np.fromiter((s.social_reach**2 for s in students), dtype=float, count=k)
    parent_rows = np.fromiter(
        (view.senior_index.get(s.parent_id, -1) for s in students), dtype=np.int64, count=k
    )
    edu = view.senior_educated.astype(float)
    prac = 1.0 - edu
    # one matmul per block: columns = (wage*edu, edu, wage*prac, prac)
    stacked = np.column_stack((view.senior_wage * edu, edu, view.senior_wage * prac, prac))

    out = np.empty((k, 4))
    sq = _pairwise_sq_dists_factory(view.senior_x, view.senior_y)
    for lo, hi in _row_blocks(k, view.senior_x.size):
        d2 = sq(sx[lo:hi], sy[lo:hi])
        mask = (d2 <= reach2[lo:hi, None]).astype(float)
        for i in range(lo, hi):
            if parent_rows[i] >= 0:
                mask[i - lo, parent_rows[i]] = 0.0
        out[lo:hi] = mask @ stacked
    num_e, den_e, num_p, den_p = out[:, 0], out[:, 1], out[:, 2], out[:, 3]

    p_edu = np.fromiter((s.parent_educated for s in students), dtype=bool, count=k)
    p_wage = np.fromiter((s.parent_wage for s in students), dtype=float, count=k)
    p_nu = np.fromiter((s.parent_weight for s in students), dtype=float, count=k)
    num_e += np.where(p_edu, p_wage * p_nu, 0.0)
    den_e += np.where(p_edu, p_nu, 0.0)
    num_p += np.where(~p_edu, p_wage * p_nu, 0.0)
    den_p += np.where(~p_edu, p_nu, 0.0)
    return {
        "num_educated": num_e,
        "den_educated": den_e,
        "num_practical": num_p,
        "den_practical": den_p,
    }


def batch_peer_ratios(view: PopulationView, students: list[Student]) -> np.ndarray:
    """Per-student mean classmate grade over own grade; nan when a student
    has no classmates in reach."""
    k = len(students)
    sx = np.fromiter((s.x for s in students), dtype=float, count=k)
    sy = np.fromiter((s.y for s in students), dtype=float, count=k)
    reach2 = np.fromiter((s.social_reach**2 for s in students), dtype=float, count=k)
    own_grade = np.fromiter((s.grade for s in students), dtype=float, count=k)
    own_id = np.fromiter((s.id for s in students), dtype=np.int64, count=k)

    col_of = {int(i): col for col, i in enumerate(view.student_ids)}
    sums = np.empty(k)
    counts = np.empty(k)
    sq = _pairwise_sq_dists_factory(view.student_x, view.student_y)
    for lo, hi in _row_blocks(k, view.student_x.size):
        d2 = sq(sx[lo:hi], sy[lo:hi])
        mask = (d2 <= reach2[lo:hi, None]).astype(float)
        # every student trivially lies within its own reach; drop self
        for i in range(lo, hi):
            mask[i - lo, col_of[int(own_id[i])]] = 0.0
        sums[lo:hi] = mask @ view.student_grade
        counts[lo:hi] = mask.sum(axis=1)

    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(counts > 0, sums / counts / own_grade, np.nan)
