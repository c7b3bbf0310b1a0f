"""Piecewise-linear concave algebra, checked against brute-force maximization."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldokit import (
    ConcavityError,
    ConstraintBand,
    ValidationError,
    add,
    add_linear,
    argmax_interval,
    evaluate,
    left_deriv,
    make,
    right_deriv,
    sup_over_band,
    zero_function,
)
from ldokit.plconcave import assert_concave, max_slope_increase


@pytest.fixture
def tent():
    """Concave tent: up with slope 2 to (0.5, 1), down with slope -1 to (1, 0.5)."""
    return make([(0.0, 0.0), (0.5, 1.0), (1.0, 0.5)])


def grid_points(lo, hi, n):
    return [min(lo + (hi - lo) * i / n, hi) for i in range(n + 1)]


def brute_max(f, lo, hi, n=10000):
    """Exact for piecewise-linear f: checks a dense grid plus every breakpoint."""
    candidates = grid_points(lo, hi, n) if hi > lo else [lo]
    candidates += [x for x in f.xs if lo <= x <= hi]
    return max(evaluate(f, c) for c in candidates)


def random_concave(rng: random.Random, b: float = 1.0):
    n_breaks = rng.randint(0, 5)
    xs = sorted({0.0, b, *(rng.uniform(0.05, b - 0.05) for _ in range(n_breaks))})
    slopes = sorted((rng.uniform(-3, 3) for _ in range(len(xs) - 1)), reverse=True)
    v = rng.uniform(-1, 1)
    points = [(xs[0], v)]
    for (x0, x1), s in zip(zip(xs, xs[1:]), slopes):
        v += s * (x1 - x0)
        points.append((x1, v))
    return make(points)


def random_valid_band(rng: random.Random, b: float = 1.0):
    while True:
        band = ConstraintBand(
            alpha=rng.uniform(-0.5, 0.3),
            beta=rng.uniform(-0.8, 0.8),
            gamma=rng.uniform(0.0, 1.2),
            delta=rng.uniform(-0.8, 1.2),
        )
        try:
            band.validate_for(b)
            return band
        except ValidationError:
            continue


class TestMake:
    def test_zero_function(self):
        f = make([(0.0, 0.0), (1.0, 0.0)])
        assert f.points() == ((0.0, 0.0), (1.0, 0.0))

    def test_tent(self, tent):
        assert tent.slopes() == (2.0, -1.0)

    def test_rejects_convex_corner(self):
        with pytest.raises(ConcavityError):
            make([(0.0, 0.0), (0.5, 0.0), (1.0, 1.0)])

    def test_merges_collinear(self):
        f = make([(0.0, 0.0), (0.3, 0.3), (0.6, 0.6), (1.0, 0.2)])
        assert f.xs == (0.0, 0.6, 1.0)

    def test_rejects_non_increasing_breakpoints(self):
        with pytest.raises(ValidationError):
            make([(0.0, 0.0), (0.5, 1.0), (0.5, 0.5)])

    def test_rejects_domain_not_starting_at_zero(self):
        with pytest.raises(ValidationError):
            make([(0.1, 0.0), (1.0, 0.0)])


class TestEvaluate:
    def test_interpolation(self, tent):
        assert evaluate(tent, 0.25) == 0.5

    def test_exact_at_breakpoint(self, tent):
        assert evaluate(tent, 0.5) == 1.0

    def test_endpoint(self, tent):
        assert evaluate(tent, 1.0) == 0.5

    def test_rejects_out_of_domain(self, tent):
        with pytest.raises(ValidationError):
            evaluate(tent, 1.5)


class TestAddLinear:
    def test_zero_plus_identity(self):
        f = add_linear(zero_function(1.0), 1.0)
        assert f.points() == ((0.0, 0.0), (1.0, 1.0))

    def test_tent_minus_two(self, tent):
        g = add_linear(tent, -2.0)
        assert g.points() == ((0.0, 0.0), (0.5, 0.0), (1.0, -1.5))

    def test_identity_case(self, tent):
        assert add_linear(tent, 0.0) == tent


class TestArgmaxInterval:
    def test_unique_peak(self, tent):
        assert argmax_interval(tent, 0.0, 1.0) == (0.5, 0.5)

    def test_flat_function_returns_whole_interval(self):
        assert argmax_interval(zero_function(1.0), 0.2, 0.9) == (0.2, 0.9)

    def test_boundary_maximizer(self, tent):
        # f decreasing on [0.6, 1]; brute force agrees
        assert argmax_interval(tent, 0.6, 1.0) == (0.6, 0.6)
        assert evaluate(tent, 0.6) == pytest.approx(brute_max(tent, 0.6, 1.0), abs=1e-8)

    def test_values_at_endpoints_match_and_dominate(self):
        rng = random.Random(3)
        for _ in range(60):
            f = random_concave(rng)
            lo = rng.uniform(0, 0.6)
            hi = rng.uniform(lo, 1.0)
            m1, m2 = argmax_interval(f, lo, hi)
            v1, v2 = evaluate(f, m1), evaluate(f, m2)
            assert v1 == pytest.approx(v2, abs=1e-12)
            for y in grid_points(lo, hi, 100):
                assert evaluate(f, y) <= v1 + 1e-12


class TestDerivatives:
    def test_tent_kink(self, tent):
        assert left_deriv(tent, 0.5) == 2.0
        assert right_deriv(tent, 0.5) == -1.0

    def test_linear_interior(self):
        f = add_linear(zero_function(1.0), 1.0)
        assert left_deriv(f, 0.3) == right_deriv(f, 0.3) == 1.0

    def test_segment_interior(self, tent):
        assert left_deriv(tent, 0.25) == right_deriv(tent, 0.25) == 2.0

    def test_unsupported_endpoints_rejected(self, tent):
        with pytest.raises(ValidationError):
            left_deriv(tent, 0.0)
        with pytest.raises(ValidationError):
            right_deriv(tent, 1.0)

    def test_concave_one_sided_order(self):
        # left derivative dominates the right one at every kink
        rng = random.Random(5)
        for _ in range(50):
            f = random_concave(rng)
            for x in f.xs[1:-1]:
                assert left_deriv(f, x) >= right_deriv(f, x)


class TestSupOverBand:
    CAKE = ConstraintBand(alpha=0.0, beta=0.0, gamma=0.0, delta=1.0)

    def test_tent_under_cake_band(self, tent):
        m = sup_over_band(tent, self.CAKE, 1.0)
        for i in range(201):
            z = i / 200
            expected = evaluate(tent, z) if z <= 0.5 else 1.0
            assert evaluate(m, z) == pytest.approx(expected, abs=1e-12)

    def test_zero_function_any_band(self):
        rng = random.Random(9)
        for _ in range(20):
            band = random_valid_band(rng)
            m = sup_over_band(zero_function(1.0), band, 1.0)
            assert max(abs(v) for v in m.vs) == 0.0

    def test_decreasing_function_clamps_to_lower_bound(self):
        f = add_linear(zero_function(1.0), -1.0)  # f(y) = -y
        m = sup_over_band(f, self.CAKE, 1.0)
        for i in range(101):
            assert evaluate(m, i / 100) == 0.0

    def test_matches_brute_force_on_random_instances(self):
        rng = random.Random(17)
        for _ in range(25):
            f = random_concave(rng)
            band = random_valid_band(rng)
            m = sup_over_band(f, band, 1.0)
            assert_concave(m)
            for _ in range(200):
                z = rng.uniform(0.0, 1.0)
                lo, hi = band.interval(z, 1.0)
                assert evaluate(m, z) == pytest.approx(
                    brute_max(f, lo, hi), abs=1e-6
                )


class TestConcavityClosure:
    def test_closed_under_operations(self):
        rng = random.Random(23)
        for _ in range(40):
            f = random_concave(rng)
            g = random_concave(rng)
            band = random_valid_band(rng)
            for h in (
                add_linear(f, rng.uniform(-2, 2)),
                add(f, g),
                sup_over_band(f, band, 1.0),
            ):
                assert max_slope_increase(h) <= 1e-12


# Hypothesis strategies: concave functions from decreasing slopes.
@st.composite
def concave_functions(draw):
    n_seg = draw(st.integers(min_value=1, max_value=5))
    gaps = draw(
        st.lists(
            st.floats(min_value=0.05, max_value=1.0),
            min_size=n_seg,
            max_size=n_seg,
        )
    )
    slopes = sorted(
        draw(
            st.lists(
                st.floats(min_value=-4, max_value=4),
                min_size=n_seg,
                max_size=n_seg,
            )
        ),
        reverse=True,
    )
    x = 0.0
    v = draw(st.floats(min_value=-1, max_value=1))
    points = [(x, v)]
    for gap, s in zip(gaps, slopes):
        x += gap
        v += s * gap
        points.append((x, v))
    return make(points)


@settings(max_examples=60, deadline=None)
@given(f=concave_functions(), data=st.data())
def test_supergradient_inequality(f, data):
    """f(y) <= f(x) + f'(x-) (y - x) for every breakpoint x and any y."""
    b = f.xs[-1]
    for x in f.xs[1:]:
        slope = left_deriv(f, x)
        for _ in range(10):
            y = data.draw(st.floats(min_value=0.0, max_value=b))
            assert evaluate(f, y) <= evaluate(f, x) + slope * (y - x) + 1e-9


@settings(max_examples=60, deadline=None)
@given(f=concave_functions(), data=st.data())
def test_argmax_is_maximizer_set(f, data):
    b = f.xs[-1]
    lo = data.draw(st.floats(min_value=0.0, max_value=b))
    hi = data.draw(st.floats(min_value=lo, max_value=b))
    m1, m2 = argmax_interval(f, lo, hi)
    assert lo <= m1 <= m2 <= hi
    top = evaluate(f, m1)
    for y in (grid_points(lo, hi, 49) if hi > lo else [lo]):
        assert evaluate(f, y) <= top + 1e-9
