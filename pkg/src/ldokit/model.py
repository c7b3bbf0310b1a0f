"""Problem data for linear dynamic optimization (LDO) on a state interval [0, b].

An LDO problem maximizes sum_t p^(t) x_t over state sequences x_0, x_1, ...
in [0, b], subject to two-period constraints (x_t, x_{t+1}) in Omega_t and a
fixed start x_0.  Objective weights are an explicit prefix plus a summable
tail (zero or geometric), so tail sums and truncation errors have closed
forms.  Constraint sets are affine bands clamped to [0, b], eventually
stationary, which keeps every Omega_t a convex polygon with enumerable
vertices.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import ValidationError

#: Default absolute tolerance for feasibility checks, in state units.
FEASIBILITY_TOL = 1e-9


# ---------------------------------------------------------------------------
# Objective coefficients


@dataclass(frozen=True)
class ZeroTail:
    """Coefficients are identically zero beyond the prefix."""

    kind = "zero"


@dataclass(frozen=True)
class GeometricTail:
    """Coefficients a * r^(t - start) for t >= start, with |r| < 1.

    ``start`` always equals the prefix length of the owning sequence.
    """

    a: float
    r: float

    kind = "geometric"

    def __post_init__(self):
        if not math.isfinite(self.a) or not math.isfinite(self.r):
            raise ValidationError("geometric tail parameters must be finite")
        if abs(self.r) >= 1.0:
            raise ValidationError(
                f"geometric tail ratio must satisfy |r| < 1, got r={self.r!r}"
            )


@dataclass(frozen=True)
class CoefficientSequence:
    """Objective weights p^(0), p^(1), ... with absolutely summable tail."""

    prefix: tuple[float, ...]
    tail: ZeroTail | GeometricTail = field(default_factory=ZeroTail)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(float(c) for c in self.prefix))
        for i, c in enumerate(self.prefix):
            if not math.isfinite(c):
                raise ValidationError(f"coefficient p^({i}) must be finite, got {c!r}")

    @property
    def start(self) -> int:
        """First period governed by the tail."""
        return len(self.prefix)

    @property
    def prefix_end(self) -> int:
        """Last explicitly listed period (-1 for an empty prefix)."""
        return len(self.prefix) - 1

    def coefficient(self, t: int) -> float:
        if t < 0:
            raise ValidationError(f"period must be nonnegative, got {t}")
        if t < len(self.prefix):
            return self.prefix[t]
        if isinstance(self.tail, ZeroTail):
            return 0.0
        return self.tail.a * self.tail.r ** (t - self.start)

    def abs_sum_from(self, t0: int) -> float:
        """sum_{t >= t0} |p^(t)|, in closed form."""
        t0 = max(t0, 0)
        total = sum(abs(c) for c in self.prefix[t0:])
        if isinstance(self.tail, GeometricTail):
            k = max(t0 - self.start, 0)
            total += abs(self.tail.a) * abs(self.tail.r) ** k / (1.0 - abs(self.tail.r))
        return total

    def abs_sum(self) -> float:
        """sum_t |p^(t)| (finite by construction)."""
        return self.abs_sum_from(0)

    def signed_sum_from(self, t0: int) -> float:
        """sum_{t >= t0} p^(t), in closed form."""
        t0 = max(t0, 0)
        total = sum(self.prefix[t0:])
        if isinstance(self.tail, GeometricTail):
            k = max(t0 - self.start, 0)
            total += self.tail.a * self.tail.r ** k / (1.0 - self.tail.r)
        return total


def tail_bound(p: CoefficientSequence, b: float, horizon: int) -> float:
    """Bound b * sum_{t > horizon} |p^(t)| on the objective mass beyond ``horizon``.

    Any feasible continuation past ``horizon`` contributes at most this much,
    since every state lies in [0, b].
    """
    return b * p.abs_sum_from(horizon + 1)


# ---------------------------------------------------------------------------
# Constraints


@dataclass(frozen=True)
class ConstraintBand:
    """One two-period constraint set, as an affine band clamped to [0, b].

    The feasible successors of state x are
    ``max(0, alpha + beta*x) <= y <= min(b, gamma + delta*x)``.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValidationError(f"band coefficient {name} must be finite")
            object.__setattr__(self, name, v)

    def lower(self, x: float) -> float:
        return max(0.0, self.alpha + self.beta * x)

    def upper(self, x: float, b: float) -> float:
        return min(b, self.gamma + self.delta * x)

    def interval(self, x: float, b: float) -> tuple[float, float]:
        return self.lower(x), self.upper(x, b)

    def validate_for(self, b: float) -> None:
        """Check the band is nonempty at every x in [0, b].

        lower is convex and upper is concave in x, so lower - upper is convex
        and attains its maximum at an endpoint: checking x = 0 and x = b
        covers the whole interval.
        """
        for x in (0.0, b):
            lo, hi = self.interval(x, b)
            if lo > hi:
                raise ValidationError(
                    f"empty constraint band at x={x!r}: lower {lo!r} > upper {hi!r}"
                )


CAKE_BAND = ConstraintBand(alpha=0.0, beta=0.0, gamma=0.0, delta=1.0)


@dataclass(frozen=True)
class ConstraintFamily:
    """Per-period constraint bands, stationary beyond the listed prefix."""

    bands: tuple[ConstraintBand, ...]
    stationary_tail: ConstraintBand
    b: float

    def __post_init__(self):
        object.__setattr__(self, "bands", tuple(self.bands))
        object.__setattr__(self, "b", float(self.b))
        if not (math.isfinite(self.b) and self.b > 0.0):
            raise ValidationError(f"state bound b must be positive, got {self.b!r}")
        for t, band in enumerate(self.bands):
            try:
                band.validate_for(self.b)
            except ValidationError as exc:
                raise ValidationError(f"band at period {t}: {exc}") from None
        self.stationary_tail.validate_for(self.b)

    def band_at(self, t: int) -> ConstraintBand:
        if t < 0:
            raise ValidationError(f"period must be nonnegative, got {t}")
        if t < len(self.bands):
            return self.bands[t]
        return self.stationary_tail

    @property
    def prefix_end(self) -> int:
        return len(self.bands) - 1


# ---------------------------------------------------------------------------
# Problems


@dataclass(frozen=True)
class LDOProblem:
    """Objective coefficients plus constraint family on the interval [0, b]."""

    p: CoefficientSequence
    omega: ConstraintFamily
    b: float

    def __post_init__(self):
        object.__setattr__(self, "b", float(self.b))
        if self.b != self.omega.b:
            raise ValidationError(
                f"problem bound b={self.b!r} disagrees with constraint bound {self.omega.b!r}"
            )

    def is_cake(self) -> bool:
        """True when every band restricts successors to [0, x]."""
        all_bands = (*self.omega.bands, self.omega.stationary_tail)
        return all(band == CAKE_BAND for band in all_bands)


def build_cake_eating(p: CoefficientSequence, b: float) -> LDOProblem:
    """Cake-eating problem: successors of x are [0, x] in every period."""
    if not (math.isfinite(b) and b > 0.0):
        raise ValidationError(f"state bound b must be positive, got {b!r}")
    omega = ConstraintFamily(bands=(), stationary_tail=CAKE_BAND, b=b)
    return LDOProblem(p=p, omega=omega, b=b)


def build_wealth_accumulation(
    u: list[float], mu: list[float], b: float
) -> LDOProblem:
    """Wealth-accumulation problem from per-period utilities and growth rates.

    Period-t expenditure is mu_t*x_t - x_{t+1} with average utility u_t, so in
    state coefficients p^(0) = u_0*mu_0 and p^(t) = u_t*mu_t - u_{t-1}.  Both
    input lists are zero beyond their common length.  Successor bands are
    [0, min(mu_t*x, b)].
    """
    if len(u) != len(mu):
        raise ValidationError(
            f"u and mu must have equal length, got {len(u)} and {len(mu)}"
        )
    if not u:
        raise ValidationError("u and mu must be nonempty")
    if not (math.isfinite(b) and b > 0.0):
        raise ValidationError(f"state bound b must be positive, got {b!r}")
    u = [float(v) for v in u]
    mu = [float(v) for v in mu]
    for name, seq in (("u", u), ("mu", mu)):
        for t, v in enumerate(seq):
            if not math.isfinite(v) or v < 0.0:
                raise ValidationError(f"{name}[{t}] must be nonnegative, got {v!r}")

    n = len(u)
    prefix = [u[0] * mu[0]]
    prefix += [u[t] * mu[t] - u[t - 1] for t in range(1, n)]
    # u_n = mu_n = 0 beyond the lists, leaving one more term -u_{n-1}.
    prefix.append(-u[n - 1])
    if prefix[-1] == 0.0:
        prefix.pop()
    p = CoefficientSequence(prefix=tuple(prefix), tail=ZeroTail())

    bands = tuple(
        ConstraintBand(alpha=0.0, beta=0.0, gamma=0.0, delta=m) for m in mu
    )
    zero_band = ConstraintBand(alpha=0.0, beta=0.0, gamma=0.0, delta=0.0)
    omega = ConstraintFamily(bands=bands, stationary_tail=zero_band, b=b)
    return LDOProblem(p=p, omega=omega, b=b)


def build_survival_coefficients(
    pi: list[float], v: list[float]
) -> CoefficientSequence:
    """State coefficients for expected satisfaction under survival probabilities.

    pi_t is the probability the problem carries on into period t (pi_0 = 1),
    v_t the average satisfaction per unit consumed.  Summation by parts of
    sum_t pi_t*v_t*(x_t - x_{t+1}) gives p^(0) = v_0 and
    p^(t) = pi_t*v_t - pi_{t-1}*v_{t-1}.  The first period with pi_t = 0
    contributes the final adjustment; all later coefficients vanish.
    """
    if len(pi) != len(v):
        raise ValidationError(
            f"pi and v must have equal length, got {len(pi)} and {len(v)}"
        )
    if not pi:
        raise ValidationError("pi and v must be nonempty")
    pi = [float(x) for x in pi]
    v = [float(x) for x in v]
    for t, prob in enumerate(pi):
        if not math.isfinite(prob) or not 0.0 <= prob <= 1.0:
            raise ValidationError(f"pi[{t}] must lie in [0, 1], got {prob!r}")
    if pi[0] != 1.0:
        raise ValidationError(f"pi[0] must equal 1, got {pi[0]!r}")

    prefix = [v[0]]
    terminated = pi[0] == 0.0
    for t in range(1, len(pi)):
        if terminated:
            prefix.append(0.0)
        else:
            prefix.append(pi[t] * v[t] - pi[t - 1] * v[t - 1])
            terminated = pi[t] == 0.0
    return CoefficientSequence(prefix=tuple(prefix), tail=ZeroTail())


def feasible_interval(problem: LDOProblem, t: int, x: float) -> tuple[float, float]:
    """Closed interval of feasible successors of state x at period t."""
    if not 0.0 <= x <= problem.b:
        raise ValidationError(f"state {x!r} outside [0, {problem.b!r}]")
    return problem.omega.band_at(t).interval(x, problem.b)


# ---------------------------------------------------------------------------
# Trajectories


class TailPolicy(enum.Enum):
    """How a finite state path continues past its last listed state."""

    HOLD_LAST = "hold_last"
    ZERO = "zero"


@dataclass(frozen=True)
class Trajectory:
    """Finite state path plus a declared continuation beyond it."""

    start_period: int
    states: tuple[float, ...]
    tail: TailPolicy = TailPolicy.HOLD_LAST

    def __post_init__(self):
        if self.start_period < 0:
            raise ValidationError(
                f"start period must be nonnegative, got {self.start_period}"
            )
        object.__setattr__(self, "states", tuple(float(x) for x in self.states))
        if not self.states:
            raise ValidationError("trajectory must list at least one state")
        for x in self.states:
            if not math.isfinite(x):
                raise ValidationError(f"trajectory state must be finite, got {x!r}")

    @property
    def last_period(self) -> int:
        return self.start_period + len(self.states) - 1

    @property
    def tail_value(self) -> float:
        return self.states[-1] if self.tail is TailPolicy.HOLD_LAST else 0.0

    def state_at(self, t: int) -> float:
        if t < self.start_period:
            raise ValidationError(
                f"period {t} precedes trajectory start {self.start_period}"
            )
        i = t - self.start_period
        return self.states[i] if i < len(self.states) else self.tail_value


@dataclass(frozen=True)
class StepViolation:
    """First infeasible step found while checking a trajectory."""

    period: int
    state: float
    successor: float
    lower: float
    upper: float

    def describe(self) -> str:
        return (
            f"step at period {self.period}: successor {self.successor!r} outside "
            f"[{self.lower!r}, {self.upper!r}] from state {self.state!r}"
        )


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    first_violation: StepViolation | None = None


def is_feasible(
    problem: LDOProblem, traj: Trajectory, tol: float = FEASIBILITY_TOL
) -> FeasibilityReport:
    """Check every consecutive step, including the declared continuation.

    Steps are checked through one period past both the listed states and the
    constraint prefix; beyond that the pair (tail value, tail value) repeats
    against the stationary band, so a single check covers the infinite tail.
    """
    b = problem.b
    t_end = max(traj.last_period, problem.omega.prefix_end, traj.start_period) + 1
    for t in range(traj.start_period, t_end + 1):
        x = traj.state_at(t)
        if not -tol <= x <= b + tol:
            return FeasibilityReport(
                ok=False,
                first_violation=StepViolation(t, x, x, 0.0, b),
            )
        y = traj.state_at(t + 1)
        lo, hi = problem.omega.band_at(t).interval(x, b)
        if not lo - tol <= y <= hi + tol:
            return FeasibilityReport(
                ok=False,
                first_violation=StepViolation(t, x, y, lo, hi),
            )
    return FeasibilityReport(ok=True)
