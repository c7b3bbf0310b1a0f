"""Cake-eating specializations: closed forms and structural checks.

For cake problems (successors of x are [0, x]) feasibility is exactly
"non-increasing", which buys closed-form optima in the sign-uniform cases
and a two-phase structure whenever the coefficients are positive through
some period and negative from a later one: hold the whole cake through the
positive head, finish it before the negative tail, and place the middle drop
where the running coefficient sum peaks.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import plconcave as pl
from .errors import ValidationError
from .model import (
    CoefficientSequence,
    GeometricTail,
    LDOProblem,
    TailPolicy,
    Trajectory,
)
from .solver import ValueStack, decision_rule, value_at


@dataclass(frozen=True)
class TwoPhaseStructure:
    """Sign structure: positive through t_plus, negative from t_minus on."""

    t_plus: int
    t_minus: int
    middle: tuple[float, ...]


def classify_two_phase(p: CoefficientSequence) -> TwoPhaseStructure | None:
    """Detect a strictly positive head and a strictly negative infinite tail.

    The negative phase must hold for every remaining period, so only a
    geometric tail with a < 0 and 0 < r < 1 qualifies; a zero tail never does.
    Returns None when either phase is absent.
    """
    prefix = p.prefix
    if not prefix or prefix[0] <= 0.0:
        return None
    if not isinstance(p.tail, GeometricTail):
        return None
    if not (p.tail.a < 0.0 and 0.0 < p.tail.r < 1.0):
        return None

    t_plus = 0
    while t_plus + 1 < len(prefix) and prefix[t_plus + 1] > 0.0:
        t_plus += 1

    t_minus = len(prefix)  # the tail is all-negative from here
    while t_minus - 1 > t_plus and prefix[t_minus - 1] < 0.0:
        t_minus -= 1
    if t_minus <= t_plus:
        return None
    return TwoPhaseStructure(
        t_plus=t_plus,
        t_minus=t_minus,
        middle=tuple(prefix[t_plus + 1 : t_minus]),
    )


def solve_two_phase(problem: LDOProblem, x: float) -> Trajectory:
    """Closed-form optimum of a two-phase cake problem from start x.

    Optima hold x through t_plus and are zero from t_minus; the middle is a
    chain polytope whose vertices are step paths, so a linear objective drops
    from x to 0 at a single period tau.  The step at tau is worth
    x * sum_{t <= tau} p^(t), maximized over tau in [t_plus, t_minus - 1] via
    the running sum of the middle coefficients (ties go to the earliest drop).
    The hold/exhaust boundary is structural; the middle placement rule is
    validated against the brute-force grid solver in the test suite.
    """
    if not problem.is_cake():
        raise ValidationError("two-phase closed form requires a cake problem")
    structure = classify_two_phase(problem.p)
    if structure is None:
        raise ValidationError("coefficients do not have two-phase structure")
    if not 0.0 <= x <= problem.b:
        raise ValidationError(f"start {x!r} outside [0, {problem.b!r}]")

    best_tau = structure.t_plus
    best_sum = 0.0
    running = 0.0
    for tau in range(structure.t_plus + 1, structure.t_minus):
        running += problem.p.coefficient(tau)
        if running > best_sum:
            best_sum = running
            best_tau = tau
    states = (x,) * (best_tau + 1) + (0.0,)
    return Trajectory(start_period=0, states=states, tail=TailPolicy.ZERO)


def solve_sign_uniform(problem: LDOProblem, x: float) -> Trajectory | None:
    """Closed-form optimum when every coefficient has one strict sign.

    All positive: never consume (constant trajectory).  All negative: consume
    everything in period 0.  Returns None for any mixed or eventually-zero
    sign pattern, including zero tails.
    """
    if not problem.is_cake():
        raise ValidationError("sign-uniform closed form requires a cake problem")
    if not 0.0 <= x <= problem.b:
        raise ValidationError(f"start {x!r} outside [0, {problem.b!r}]")
    tail = problem.p.tail
    if not isinstance(tail, GeometricTail) or not 0.0 < tail.r < 1.0:
        return None
    prefix = problem.p.prefix
    if tail.a > 0.0 and all(c > 0.0 for c in prefix):
        return Trajectory(start_period=0, states=(x,), tail=TailPolicy.HOLD_LAST)
    if tail.a < 0.0 and all(c < 0.0 for c in prefix):
        return Trajectory(start_period=0, states=(x, 0.0), tail=TailPolicy.ZERO)
    return None


@dataclass(frozen=True)
class PeriodMonotonicity:
    period: int
    coefficient: float
    min_slope: float
    asserted: bool
    ok: bool


@dataclass(frozen=True)
class MonotonicityReport:
    ok: bool
    periods: tuple[PeriodMonotonicity, ...]

    def first_violation(self) -> PeriodMonotonicity | None:
        return next((e for e in self.periods if not e.ok), None)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "periods": [
                {
                    "period": e.period,
                    "coefficient": e.coefficient,
                    "min_slope": e.min_slope,
                    "asserted": e.asserted,
                    "ok": e.ok,
                }
                for e in self.periods
            ],
        }


def monotonicity_report(
    stack: ValueStack, problem: LDOProblem, slack: float = 1e-12
) -> MonotonicityReport:
    """Check value-function monotonicity on every induced period.

    Raising the start of a cake problem can only help when the current
    coefficient is nonnegative, so V^T must be nondecreasing there; a strictly
    positive coefficient forces every slope up to at least its value (the
    constant continuation already earns p^(T) per unit).  Negative-coefficient
    periods are reported without assertion: their monotonicity depends on
    where the optimal continuation lands.  The zero boundary function beyond
    the horizon stands in for a truncated tail and is not asserted either.
    """
    if not problem.is_cake():
        raise ValidationError("monotonicity analysis requires a cake problem")
    entries = []
    for t in range(stack.horizon + 1):
        c = problem.p.coefficient(t)
        slopes = stack.values[t].slopes()
        min_slope = min(slopes)
        if c > 0.0:
            asserted, ok = True, min_slope >= c - slack
        elif c == 0.0:
            asserted, ok = True, min_slope >= -slack
        else:
            asserted, ok = False, True
        entries.append(
            PeriodMonotonicity(
                period=t, coefficient=c, min_slope=min_slope, asserted=asserted, ok=ok
            )
        )
    return MonotonicityReport(ok=all(e.ok for e in entries), periods=tuple(entries))


def stay_put_check(
    stack: ValueStack, problem: LDOProblem, t: int, x: float
) -> bool:
    """Is never consuming from period t on optimal at x?

    Requires every later stored value function to be nondecreasing (checked
    first; a violation rejects the query rather than answering it).  Then the
    answer is yes iff x belongs to its own decision interval and the constant
    continuation achieves the stored value within the truncation error.
    """
    if not problem.is_cake():
        raise ValidationError("stay-put analysis requires a cake problem")
    for s in range(t + 1, stack.horizon + 2):
        if min(stack.values[s].slopes()) < -1e-12:
            raise ValidationError(
                f"monotonicity precondition fails at period {s}: V^{s} decreases"
            )
    lo, hi = decision_rule(stack, problem, t, x)
    if not lo - 1e-9 <= x <= hi + 1e-9:
        return False
    constant_value = x * problem.p.signed_sum_from(t)
    stored, err = value_at(stack, t, x)
    return abs(constant_value - stored) <= err + 1e-9


@dataclass(frozen=True)
class PolicyCounterexample:
    x: float
    y: float
    x_next: float
    y_next: float


@dataclass(frozen=True)
class PolicyMonotonicityReport:
    ok: bool
    pairs_checked: int
    counterexamples: tuple[PolicyCounterexample, ...]
    strictness_ties: int

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "pairs_checked": self.pairs_checked,
            "strictness_ties": self.strictness_ties,
            "counterexamples": [
                {"x": c.x, "y": c.y, "x_next": c.x_next, "y_next": c.y_next}
                for c in self.counterexamples
            ],
        }


def policy_monotonicity_test(
    stack: ValueStack, problem: LDOProblem, t: int, grid: int
) -> PolicyMonotonicityReport:
    """Conditional monotonicity of the period-t decision rule on a state grid.

    For starts x > y, a successor chosen at y but unavailable at x, with y at
    least the successor chosen at x, cannot exceed the latter.  The weak form
    (>=) is asserted; pairs where equality holds are tallied separately since
    strictness is not guaranteed by the supporting argument.
    """
    if not problem.is_cake():
        raise ValidationError("policy monotonicity analysis requires a cake problem")
    if grid < 2:
        raise ValidationError(f"grid must have at least 2 points, got {grid}")
    xs = [problem.b * i / (grid - 1) for i in range(grid)]
    rules = {x: decision_rule(stack, problem, t, x) for x in xs}
    counterexamples = []
    ties = 0
    pairs = 0
    for x in xs:
        for y in xs:
            if not x > y:
                continue
            hx, hy = rules[x], rules[y]
            for x_next in hx:
                for y_next in hy:
                    pairs += 1
                    inside_hx = hx[0] - 1e-9 <= y_next <= hx[1] + 1e-9
                    if inside_hx or y < x_next - 1e-9:
                        continue
                    if x_next < y_next - 1e-9:
                        counterexamples.append(
                            PolicyCounterexample(x, y, x_next, y_next)
                        )
                    elif abs(x_next - y_next) <= 1e-9:
                        ties += 1
    return PolicyMonotonicityReport(
        ok=not counterexamples,
        pairs_checked=pairs,
        counterexamples=tuple(counterexamples),
        strictness_ties=ties,
    )


def trajectory_csv_rows(traj: Trajectory) -> list[tuple[int, float]]:
    """Rows (t, x_t) for the explicitly listed states."""
    return [(traj.start_period + i, x) for i, x in enumerate(traj.states)]


def is_non_increasing(traj: Trajectory, tol: float = 0.0) -> bool:
    pairs = zip(traj.states, traj.states[1:])
    steps_ok = all(b <= a + tol for a, b in pairs)
    return steps_ok and traj.tail_value <= traj.states[-1] + tol
