"""Brute-force solvers on discretized instances, built to be obviously correct.

These are the ground truth the exact solver is compared against: a tabular
dynamic program over a uniform state grid, and a full enumeration of grid
trajectories that must agree with it bit for bit.  Both truncate the horizon
hard, so callers either use zero-tail coefficients or accept the tail bound
as slack.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .model import LDOProblem, TailPolicy, Trajectory
from .solver import ValueStack, value_at

#: Hard cap on (G+1)^(H+1) grid trajectories for exhaustive enumeration.
ENUMERATION_BUDGET = 10**7


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid with G subdivisions of [0, b] and hard horizon H."""

    g: int
    h: int

    def __post_init__(self):
        if self.g < 1:
            raise ValidationError(f"grid subdivisions must be >= 1, got {self.g}")
        if self.h < 0:
            raise ValidationError(f"horizon must be >= 0, got {self.h}")

    def points(self, b: float) -> list[float]:
        return [b * i / self.g for i in range(self.g + 1)]


def _grid_index(spec: GridSpec, b: float, x0: float) -> int:
    i = round(x0 * spec.g / b)
    if not 0 <= i <= spec.g or abs(x0 - b * i / spec.g) > 1e-12:
        raise ValidationError(f"start {x0!r} is not grid-aligned (G={spec.g})")
    return i


def grid_dp(
    problem: LDOProblem, spec: GridSpec, x0: float
) -> tuple[float, Trajectory]:
    """Exact optimum over grid-valued trajectories x_0..x_H.

    A grid successor is feasible iff it lies in the feasible interval of the
    current grid state (tiny tolerance for grid arithmetic).  Ties break
    toward the smaller successor, which makes the result the
    lexicographically smallest optimal grid trajectory.
    """
    b = problem.b
    i0 = _grid_index(spec, b, x0)
    points = spec.points(b)
    n = len(points)

    feasible = []  # feasible[t][i] = indices j reachable from points[i]
    for t in range(spec.h):
        band = problem.omega.band_at(t)
        rows = []
        for x in points:
            lo, hi = band.interval(x, b)
            rows.append(
                [j for j in range(n) if lo - 1e-12 <= points[j] <= hi + 1e-12]
            )
        feasible.append(rows)

    coeff = [problem.p.coefficient(t) for t in range(spec.h + 1)]
    value = [coeff[spec.h] * x for x in points]
    choice = []
    for t in range(spec.h - 1, -1, -1):
        new_value = []
        new_choice = []
        for i, x in enumerate(points):
            best_j = -1
            best = -float("inf")
            for j in feasible[t][i]:
                if value[j] > best:
                    best, best_j = value[j], j
            if best_j < 0:
                new_value.append(-float("inf"))
                new_choice.append(-1)
            else:
                new_value.append(coeff[t] * x + best)
                new_choice.append(best_j)
        value = new_value
        choice.insert(0, new_choice)

    if value[i0] == -float("inf"):
        raise ValidationError(f"no grid-feasible trajectory from {x0!r}")
    indices = [i0]
    for t in range(spec.h):
        indices.append(choice[t][indices[-1]])
    states = tuple(points[i] for i in indices)
    return value[i0], Trajectory(start_period=0, states=states, tail=TailPolicy.ZERO)


def enumerate_opt(
    problem: LDOProblem, spec: GridSpec, x0: float
) -> tuple[float, Trajectory]:
    """Same contract as :func:`grid_dp` via exhaustive enumeration.

    Visits grid trajectories in lexicographic order and keeps the first one
    attaining the maximum, accumulating the objective back to front so the
    value is float-identical to the dynamic program's.
    """
    if (spec.g + 1) ** (spec.h + 1) > ENUMERATION_BUDGET:
        raise ValidationError(
            f"enumeration budget exceeded: (G+1)^(H+1) > {ENUMERATION_BUDGET}"
        )
    b = problem.b
    i0 = _grid_index(spec, b, x0)
    points = spec.points(b)
    coeff = [problem.p.coefficient(t) for t in range(spec.h + 1)]
    bands = [problem.omega.band_at(t) for t in range(spec.h)]

    best: list = [-float("inf"), None]

    def descend(t: int, prefix: list[int]) -> None:
        if t == spec.h:
            total = 0.0
            for s in range(spec.h, -1, -1):
                total = coeff[s] * points[prefix[s]] + total
            if total > best[0]:
                best[0], best[1] = total, tuple(prefix)
            return
        lo, hi = bands[t].interval(points[prefix[-1]], b)
        for j in range(len(points)):
            if lo - 1e-12 <= points[j] <= hi + 1e-12:
                prefix.append(j)
                descend(t + 1, prefix)
                prefix.pop()

    descend(0, [i0])
    if best[1] is None:
        raise ValidationError(f"no grid-feasible trajectory from {x0!r}")
    states = tuple(points[i] for i in best[1])
    return best[0], Trajectory(start_period=0, states=states, tail=TailPolicy.ZERO)


@dataclass(frozen=True)
class SandwichEntry:
    x0: float
    grid_value: float
    solver_value: float
    lower_ok: bool
    upper_ok: bool


@dataclass(frozen=True)
class SandwichReport:
    ok: bool
    slack: float
    entries: tuple[SandwichEntry, ...]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "slack": self.slack,
            "entries": [
                {
                    "x0": e.x0,
                    "grid_value": e.grid_value,
                    "solver_value": e.solver_value,
                    "lower_ok": e.lower_ok,
                    "upper_ok": e.upper_ok,
                }
                for e in self.entries
            ],
        }


def compare_to_solver(
    stack: ValueStack, problem: LDOProblem, spec: GridSpec, tol: float = 1e-9
) -> SandwichReport:
    """Sandwich the exact solver between grid bounds at every grid start.

    Grid trajectories are feasible, so the grid optimum cannot exceed the true
    value; rounding the true optimum down to the grid stays feasible for cake
    constraints and costs at most sum|p| * (b/G).  Both bounds are asserted
    with ``tol`` float slack.  Requires a cake problem with zero-tail
    coefficients fully inside the grid horizon.
    """
    if not problem.is_cake():
        raise ValidationError("sandwich comparison requires a cake problem")
    if problem.p.abs_sum_from(spec.h + 1) != 0.0:
        raise ValidationError(
            "sandwich comparison requires zero coefficients beyond the grid horizon"
        )
    slack = problem.p.abs_sum() * (problem.b / spec.g)
    entries = []
    for x0 in spec.points(problem.b):
        grid_value, _ = grid_dp(problem, spec, x0)
        solver_value, _ = value_at(stack, 0, x0)
        entries.append(
            SandwichEntry(
                x0=x0,
                grid_value=grid_value,
                solver_value=solver_value,
                lower_ok=grid_value <= solver_value + tol,
                upper_ok=solver_value <= grid_value + slack + tol,
            )
        )
    return SandwichReport(
        ok=all(e.lower_ok and e.upper_ok for e in entries),
        slack=slack,
        entries=tuple(entries),
    )
