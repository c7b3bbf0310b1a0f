"""Backward-induction solver with certified truncation error.

The infinite horizon is cut at the smallest H where the residual objective
mass b * sum_{t > H} |p^(t)| drops below the requested tolerance, and the
continuation value beyond H is replaced by zero.  Because the per-period
update composes a maximum (nonexpansive) with an exact linear term, the
truncation error propagates to every stored value function unchanged: each
V^T is within that bound of the true value function, uniformly on [0, b].
For zero-tail coefficients the stack is exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import plconcave as pl
from .errors import ValidationError
from .model import LDOProblem, TailPolicy, Trajectory, feasible_interval, tail_bound


class Tiebreak(enum.Enum):
    """Selection rule inside a set-valued decision interval."""

    LOWEST = "lowest"
    HIGHEST = "highest"
    MIDPOINT = "midpoint"


@dataclass(frozen=True)
class ValueStack:
    """Value functions V^0..V^{H+1} with a uniform error bound.

    ``values[T]`` approximates the optimal tail value from period T;
    ``values[horizon + 1]`` is identically zero.
    """

    problem: LDOProblem
    horizon: int
    values: tuple[pl.PLConcave, ...]
    err: float


def backward_induce(
    problem: LDOProblem, eps: float, horizon: int | None = None
) -> ValueStack:
    """Solve V^T(z) = p^(T) z + max_{y in Omega_T(z)} V^{T+1}(y) backward.

    Picks the smallest horizon whose tail bound is at most ``eps`` unless an
    explicit ``horizon`` override is given (used to study truncation
    stability).  Zero-tail problems are exact regardless of ``eps``.
    """
    if not eps > 0.0:
        raise ValidationError(f"eps must be positive, got {eps!r}")
    p, b = problem.p, problem.b
    min_horizon = max(p.prefix_end, 0)
    if horizon is None:
        horizon = min_horizon
        while tail_bound(p, b, horizon) > eps:
            horizon += 1
    elif horizon < min_horizon:
        raise ValidationError(
            f"horizon {horizon} must cover the coefficient prefix (>= {min_horizon})"
        )

    values = [pl.zero_function(b)]  # V^{horizon+1}
    for t in range(horizon, -1, -1):
        band = problem.omega.band_at(t)
        values.append(pl.add_linear(pl.sup_over_band(values[-1], band, b), p.coefficient(t)))
    values.reverse()
    return ValueStack(
        problem=problem,
        horizon=horizon,
        values=tuple(values),
        err=tail_bound(p, b, horizon),
    )


def value_at(stack: ValueStack, t: int, x: float) -> tuple[float, float]:
    """Stored V^t evaluated at x, with the stack's uniform error bound."""
    if not 0 <= t <= stack.horizon + 1:
        raise ValidationError(
            f"period {t} outside stored range 0..{stack.horizon + 1}"
        )
    return pl.evaluate(stack.values[t], x), stack.err


def decision_rule(
    stack: ValueStack, problem: LDOProblem, t: int, x: float
) -> tuple[float, float]:
    """Maximizer interval of V^{t+1} over the feasible successors of x."""
    if not 0 <= t <= stack.horizon:
        raise ValidationError(f"period {t} outside decision range 0..{stack.horizon}")
    lo, hi = feasible_interval(problem, t, x)
    return pl.argmax_interval(stack.values[t + 1], lo, hi)


def roll_trajectory(
    stack: ValueStack,
    problem: LDOProblem,
    x0: float,
    tiebreak: Tiebreak = Tiebreak.LOWEST,
) -> Trajectory:
    """Follow the decision rules from x0 through the stored horizon.

    Within a set-valued rule all selections give equal value; the tiebreak
    policy only decides which optimal trajectory comes back.
    """
    if not 0.0 <= x0 <= problem.b:
        raise ValidationError(f"x0 {x0!r} outside [0, {problem.b!r}]")
    states = [x0]
    for t in range(stack.horizon + 1):
        lo, hi = decision_rule(stack, problem, t, states[-1])
        if tiebreak is Tiebreak.LOWEST:
            states.append(lo)
        elif tiebreak is Tiebreak.HIGHEST:
            states.append(hi)
        else:
            states.append(0.5 * (lo + hi))
    return Trajectory(start_period=0, states=tuple(states), tail=TailPolicy.HOLD_LAST)


@dataclass(frozen=True)
class BellmanReport:
    ok: bool
    max_residual: float
    worst_period: int
    worst_state: float
    tol: float

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "max_residual": self.max_residual,
            "worst_period": self.worst_period,
            "worst_state": self.worst_state,
            "tol": self.tol,
        }


def verify_bellman(
    stack: ValueStack,
    problem: LDOProblem,
    num_samples: int = 0,
    tol: float = 1e-9,
) -> BellmanReport:
    """Recheck the recursion residual at sampled states of every period.

    Samples every breakpoint and segment midpoint of V^t (residuals of
    piecewise-linear identities are extremal there) plus ``num_samples``
    evenly spaced states, and recomputes the inner maximum independently of
    the stored composition.
    """
    b = problem.b
    worst = (-1.0, 0, 0.0)
    for t in range(stack.horizon + 1):
        vt, vnext = stack.values[t], stack.values[t + 1]
        zs = set(vt.xs)
        zs.update(
            0.5 * (vt.xs[i] + vt.xs[i + 1]) for i in range(len(vt.xs) - 1)
        )
        zs.update(b * i / (num_samples - 1) for i in range(num_samples) if num_samples > 1)
        for z in sorted(zs):
            lo, hi = feasible_interval(problem, t, z)
            m1, _ = pl.argmax_interval(vnext, lo, hi)
            residual = abs(
                pl.evaluate(vt, z) - problem.p.coefficient(t) * z - pl.evaluate(vnext, m1)
            )
            if residual > worst[0]:
                worst = (residual, t, z)
    return BellmanReport(
        ok=worst[0] <= tol,
        max_residual=worst[0],
        worst_period=worst[1],
        worst_state=worst[2],
        tol=tol,
    )


def stack_csv_rows(stack: ValueStack) -> list[tuple[int, float, float]]:
    """One row (T, x, V^T(x)) per breakpoint per period."""
    rows = []
    for t, f in enumerate(stack.values):
        rows.extend((t, x, v) for x, v in f.points())
    return rows


def stack_summary(stack: ValueStack) -> dict:
    return {
        "horizon": stack.horizon,
        "err": stack.err,
        "breakpoints_per_period": [len(f.xs) for f in stack.values],
    }
