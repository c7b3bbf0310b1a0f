"""Optimality certificates for LDO trajectories.

A trajectory is certified by nonnegative shadow prices q_t: the per-period
Euler condition asks the linear form (p^(t) - q_t) y + q_{t+1} z, over the
constraint polygon, to peak at the trajectory's own step, and transversality
asks q_t x_t to vanish along the tail.  Together these are sufficient for
optimality against every feasible competitor.  The polygon is convex, so each
per-period check reduces to its finitely many vertices; certificates declare
a zero tail, so the infinite check reduces to finitely many periods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import plconcave as pl
from .errors import ValidationError
from .model import (
    ConstraintBand,
    LDOProblem,
    Trajectory,
    is_feasible,
)
from .solver import ValueStack


@dataclass(frozen=True)
class EulerCertificate:
    """Nonnegative multipliers q_0..q_K, zero for every later period."""

    q: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(float(v) for v in self.q))
        for t, v in enumerate(self.q):
            if not math.isfinite(v) or v < 0.0:
                raise ValidationError(f"multiplier q_{t} must be nonnegative, got {v!r}")

    def at(self, t: int) -> float:
        return self.q[t] if t < len(self.q) else 0.0


def polygon_vertices(band: ConstraintBand, b: float) -> list[tuple[float, float]]:
    """Vertices of {(y, z) : y in [0, b], lower(y) <= z <= upper(y, b)}.

    The lower boundary is convex piecewise-linear and the upper concave, so
    every extreme point sits at a kink or domain endpoint of one of them.
    """
    ys = {0.0, b}
    if band.beta != 0.0:
        ys.add(-band.alpha / band.beta)
    if band.delta != 0.0:
        ys.add((b - band.gamma) / band.delta)
    vertices = []
    for y in sorted(ys):
        if not 0.0 <= y <= b:
            continue
        lo, hi = band.interval(y, b)
        vertices.append((y, lo))
        if hi != lo:
            vertices.append((y, hi))
    return vertices


@dataclass(frozen=True)
class PeriodMargin:
    """Slack of the Euler inequality at one period (negative = violated)."""

    period: int
    margin: float


@dataclass(frozen=True)
class EulerReport:
    euler_ok: bool
    transversality_ok: bool
    worst_violation: float
    margins: tuple[PeriodMargin, ...]
    tol: float

    @property
    def ok(self) -> bool:
        return self.euler_ok and self.transversality_ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "euler_ok": self.euler_ok,
            "transversality_ok": self.transversality_ok,
            "worst_violation": self.worst_violation,
            "tol": self.tol,
            "margins": [
                {"period": m.period, "margin": m.margin} for m in self.margins
            ],
        }


def verify_euler(
    problem: LDOProblem,
    traj: Trajectory,
    cert: EulerCertificate,
    tol: float = 1e-9,
) -> EulerReport:
    """Check the Euler condition per period and transversality at the tail.

    Periods are checked through two steps past every explicit prefix (states,
    multipliers, coefficients, bands).  Beyond that point the state pair and
    band repeat, the multipliers are zero, and the coefficient is zero or a
    fixed-sign-pattern geometric term, so each remaining period's inequality
    is a nonnegative multiple of one already checked.
    """
    if traj.start_period != 0:
        raise ValidationError(
            f"certified trajectory must start at period 0, got {traj.start_period}"
        )
    feas = is_feasible(problem, traj)
    if not feas.ok:
        raise ValidationError(
            f"trajectory infeasible, {feas.first_violation.describe()}"
        )

    stationary_from = max(
        traj.last_period + 1,
        len(cert.q),
        len(problem.p.prefix),
        len(problem.omega.bands),
    )
    margins = []
    worst = math.inf
    for t in range(stationary_from + 2):
        x_t, x_next = traj.state_at(t), traj.state_at(t + 1)
        q_t, q_next = cert.at(t), cert.at(t + 1)
        c_y = problem.p.coefficient(t) - q_t
        band = problem.omega.band_at(t)
        best = max(
            c_y * y + q_next * z for y, z in polygon_vertices(band, problem.b)
        )
        margin = (c_y * x_t + q_next * x_next) - best
        margins.append(PeriodMargin(period=t, margin=margin))
        worst = min(worst, margin)

    # The declared zero tail makes lim q_t x_t exact beyond the explicit
    # multipliers; the product must already be negligible at the last one.
    if cert.q:
        k = len(cert.q) - 1
        trans_residual = cert.q[k] * traj.state_at(k)
    else:
        trans_residual = 0.0
    return EulerReport(
        euler_ok=worst >= -tol,
        transversality_ok=trans_residual <= tol,
        worst_violation=worst,
        margins=tuple(margins),
        tol=tol,
    )


@dataclass(frozen=True)
class ExtractionRefusal:
    """Multiplier extraction declined: a candidate shadow price is negative.

    The derivative-based construction only certifies trajectories whose value
    functions slope upward along the path; a negative candidate voids that
    hypothesis, and clamping it would fabricate a certificate.
    """

    period: int
    candidate: float


def extract_multipliers(
    stack: ValueStack, traj: Trajectory
) -> EulerCertificate | ExtractionRefusal:
    """Read shadow prices off the value functions along a trajectory.

    q_T is the left derivative of V^T at x_T (right derivative at x_T = 0).
    """
    if traj.start_period != 0:
        raise ValidationError(
            f"trajectory must start at period 0, got {traj.start_period}"
        )
    q = []
    for t in range(stack.horizon + 2):
        x = traj.state_at(t)
        f = stack.values[t]
        candidate = pl.right_deriv(f, x) if x == 0.0 else pl.left_deriv(f, x)
        if candidate < 0.0:
            return ExtractionRefusal(period=t, candidate=candidate)
        q.append(candidate)
    return EulerCertificate(q=tuple(q))


def objective_value(problem: LDOProblem, traj: Trajectory) -> float:
    """sum_t p^(t) x_t with the declared tail folded in closed form."""
    p = problem.p
    total = sum(
        p.coefficient(traj.start_period + i) * x for i, x in enumerate(traj.states)
    )
    tail_value = traj.tail_value
    if tail_value != 0.0:
        total += tail_value * p.signed_sum_from(traj.last_period + 1)
    return total


def dominance_gap(problem: LDOProblem, traj_a: Trajectory, traj_b: Trajectory) -> float:
    """Objective advantage of A over B; positive means A dominates."""
    if traj_a.start_period != 0 or traj_b.start_period != 0:
        raise ValidationError("dominance comparison requires period-0 trajectories")
    if traj_a.states[0] != traj_b.states[0]:
        raise ValidationError(
            f"mismatched starts: {traj_a.states[0]!r} vs {traj_b.states[0]!r}"
        )
    return objective_value(problem, traj_a) - objective_value(problem, traj_b)


def value_bound(problem: LDOProblem) -> float:
    """M = b * sum_t |p^(t)|; no feasible objective can exceed it in magnitude."""
    return problem.b * problem.p.abs_sum()
