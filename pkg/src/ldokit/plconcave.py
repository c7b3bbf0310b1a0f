"""Exact algebra of piecewise-linear concave functions on [0, b].

Every value function produced by the backward recursion lives in this class:
under affine-band constraints, taking the running maximum of a concave
piecewise-linear function over a band and adding a linear term both return a
concave piecewise-linear function.  Computing in this representation leaves
horizon truncation as the only source of approximation.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable

from .errors import ConcavityError, ValidationError
from .model import ConstraintBand

#: Adjacent segments whose slopes differ by at most this much are merged;
#: a slope increase beyond it is a concavity violation.
SLOPE_MERGE_TOL = 1e-12


@dataclass(frozen=True)
class PLConcave:
    """Piecewise-linear concave function given by breakpoints and values.

    Invariants (enforced by :func:`make`): breakpoints strictly increase from
    0 to the domain bound, and segment slopes strictly decrease after
    collinear merging.
    """

    xs: tuple[float, ...]
    vs: tuple[float, ...]

    @property
    def b(self) -> float:
        return self.xs[-1]

    def slopes(self) -> tuple[float, ...]:
        return tuple(
            (self.vs[i + 1] - self.vs[i]) / (self.xs[i + 1] - self.xs[i])
            for i in range(len(self.xs) - 1)
        )

    def points(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.xs, self.vs))


def make(points: Iterable[tuple[float, float]]) -> PLConcave:
    """Build a validated PLConcave from (x, value) pairs.

    Merges collinear breakpoints (slope difference <= 1e-12) and rejects any
    slope increase beyond that tolerance.
    """
    pts = [(float(x), float(v)) for x, v in points]
    if len(pts) < 2:
        raise ValidationError("need at least two points to span a domain")
    for x, v in pts:
        if not (math.isfinite(x) and math.isfinite(v)):
            raise ValidationError(f"non-finite point ({x!r}, {v!r})")
    if pts[0][0] != 0.0:
        raise ValidationError(f"domain must start at 0, got {pts[0][0]!r}")
    for (x0, _), (x1, _) in zip(pts, pts[1:]):
        if x1 <= x0:
            raise ValidationError(
                f"breakpoints must strictly increase, got {x0!r} then {x1!r}"
            )

    def slope(a: tuple[float, float], c: tuple[float, float]) -> float:
        return (c[1] - a[1]) / (c[0] - a[0])

    kept: list[tuple[float, float]] = [pts[0], pts[1]]
    for pt in pts[2:]:
        while len(kept) >= 2:
            s_prev = slope(kept[-2], kept[-1])
            s_new = slope(kept[-1], pt)
            if abs(s_new - s_prev) <= SLOPE_MERGE_TOL:
                kept.pop()  # collinear within tolerance: drop the middle point
                continue
            if s_new > s_prev + SLOPE_MERGE_TOL:
                raise ConcavityError(
                    f"slope increases from {s_prev!r} to {s_new!r} at x={kept[-1][0]!r}"
                )
            break
        kept.append(pt)
    return PLConcave(xs=tuple(x for x, _ in kept), vs=tuple(v for _, v in kept))


def zero_function(b: float) -> PLConcave:
    return PLConcave(xs=(0.0, float(b)), vs=(0.0, 0.0))


def evaluate(f: PLConcave, x: float) -> float:
    """Evaluate by linear interpolation; exact at breakpoints."""
    if not f.xs[0] <= x <= f.xs[-1]:
        raise ValidationError(f"{x!r} outside domain [0, {f.xs[-1]!r}]")
    i = bisect_right(f.xs, x) - 1
    if i == len(f.xs) - 1 or x == f.xs[i]:
        return f.vs[i]
    t = (x - f.xs[i]) / (f.xs[i + 1] - f.xs[i])
    return f.vs[i] + t * (f.vs[i + 1] - f.vs[i])


def add_linear(f: PLConcave, c: float) -> PLConcave:
    """Return g(x) = c*x + f(x); shifts every slope by c."""
    return make((x, v + c * x) for x, v in zip(f.xs, f.vs))


def add(f: PLConcave, g: PLConcave) -> PLConcave:
    """Pointwise sum over the union of breakpoints (domains must match)."""
    if f.xs[-1] != g.xs[-1]:
        raise ValidationError(
            f"domain mismatch: [0, {f.xs[-1]!r}] vs [0, {g.xs[-1]!r}]"
        )
    xs = sorted(set(f.xs) | set(g.xs))
    return make((x, evaluate(f, x) + evaluate(g, x)) for x in xs)


def argmax_interval(f: PLConcave, lo: float, hi: float) -> tuple[float, float]:
    """Exact maximizer set of f restricted to [lo, hi].

    Concavity makes the maximizer set a closed interval: the global flat top
    of f clipped to [lo, hi], or the nearest endpoint when [lo, hi] misses it.
    """
    if not (f.xs[0] <= lo <= hi <= f.xs[-1]):
        raise ValidationError(
            f"[{lo!r}, {hi!r}] is not a subinterval of [0, {f.xs[-1]!r}]"
        )
    g1, g2 = _global_argmax(f)
    if hi < g1:  # f still increasing at hi
        return hi, hi
    if lo > g2:  # f already decreasing at lo
        return lo, lo
    return max(lo, g1), min(hi, g2)


def _global_argmax(f: PLConcave) -> tuple[float, float]:
    s = f.slopes()
    n = len(s)
    k = 0
    while k < n and s[k] > 0.0:
        k += 1
    if k == n:
        return f.xs[-1], f.xs[-1]
    j = k
    while j < n and s[j] == 0.0:
        j += 1
    return f.xs[k], f.xs[j]


def left_deriv(f: PLConcave, x: float) -> float:
    """Slope immediately left of x; defined on (0, b]."""
    if not f.xs[0] < x <= f.xs[-1]:
        raise ValidationError(f"left derivative undefined at {x!r}")
    i = bisect_left(f.xs, x)
    return (f.vs[i] - f.vs[i - 1]) / (f.xs[i] - f.xs[i - 1])


def right_deriv(f: PLConcave, x: float) -> float:
    """Slope immediately right of x; defined on [0, b)."""
    if not f.xs[0] <= x < f.xs[-1]:
        raise ValidationError(f"right derivative undefined at {x!r}")
    i = bisect_right(f.xs, x) - 1
    return (f.vs[i + 1] - f.vs[i]) / (f.xs[i + 1] - f.xs[i])


def sup_over_band(f: PLConcave, band: ConstraintBand, b: float) -> PLConcave:
    """M(z) = max of f over the band's feasible interval at z, exactly.

    With [m1, m2] the global maximizer interval of f: where the band straddles
    it M equals the maximum value; where the band lies fully left of m1 the
    maximum sits at the upper bound (f increasing there); fully right of m2,
    at the lower bound.  M is concave because the band region between a convex
    lower and concave upper boundary is convex.
    """
    m1, m2 = _global_argmax(f)
    fmax = evaluate(f, m1)

    zs = {0.0, b}
    # Kinks of the clamped bounds, plus every z where an unclamped bound crosses
    # a breakpoint of f: between consecutive candidates M is a single affine map.
    if band.beta != 0.0:
        zs.add(-band.alpha / band.beta)
        for w in f.xs:
            zs.add((w - band.alpha) / band.beta)
    if band.delta != 0.0:
        zs.add((b - band.gamma) / band.delta)
        for w in f.xs:
            zs.add((w - band.gamma) / band.delta)

    keep: list[float] = []
    for z in sorted(zs):
        if not 0.0 <= z <= b:
            continue
        if keep and z - keep[-1] <= 1e-12 * max(1.0, b):
            continue
        keep.append(z)

    points = []
    for z in keep:
        lo, hi = band.interval(z, b)
        if hi < m1:
            v = evaluate(f, hi)
        elif lo > m2:
            v = evaluate(f, lo)
        else:
            v = fmax
        points.append((z, v))
    return make(points)


def assert_concave(f: PLConcave, tol: float = SLOPE_MERGE_TOL) -> None:
    """Raise unless segment slopes are non-increasing within ``tol``."""
    s = f.slopes()
    for i in range(len(s) - 1):
        if s[i + 1] > s[i] + tol:
            raise ConcavityError(
                f"slope increases from {s[i]!r} to {s[i + 1]!r} at x={f.xs[i + 1]!r}"
            )


def max_slope_increase(f: PLConcave) -> float:
    """Largest slope increase between adjacent segments (<= 0 when concave)."""
    s = f.slopes()
    if len(s) < 2:
        return -math.inf
    return max(s[i + 1] - s[i] for i in range(len(s) - 1))


def to_csv_rows(f: PLConcave) -> list[tuple[float, float]]:
    """Breakpoint rows (x, value) for plotting."""
    return list(zip(f.xs, f.vs))
