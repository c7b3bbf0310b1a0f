"""Problem data: builders, coefficient tails, feasibility."""

import math
import random

import pytest

from ldokit import (
    CoefficientSequence,
    ConstraintBand,
    ConstraintFamily,
    GeometricTail,
    TailPolicy,
    Trajectory,
    ValidationError,
    ZeroTail,
    build_cake_eating,
    build_survival_coefficients,
    build_wealth_accumulation,
    feasible_interval,
    is_feasible,
    tail_bound,
)


def explicit_tail_sum(p: CoefficientSequence, b: float, horizon: int, terms: int = 60) -> float:
    """Independent oracle: sum |p^(t)| term by term well past convergence."""
    return b * sum(abs(p.coefficient(t)) for t in range(horizon + 1, horizon + 1 + terms))


class TestCoefficientSequence:
    def test_zero_tail_coefficients(self):
        p = CoefficientSequence(prefix=(1.0, -0.5, 0.25))
        assert [p.coefficient(t) for t in range(5)] == [1.0, -0.5, 0.25, 0.0, 0.0]
        assert p.abs_sum() == 1.75

    def test_geometric_coefficients(self):
        p = CoefficientSequence(prefix=(2.0,), tail=GeometricTail(a=-0.1, r=0.5))
        assert p.coefficient(0) == 2.0
        assert p.coefficient(1) == -0.1
        assert p.coefficient(3) == -0.025
        assert p.abs_sum() == pytest.approx(2.0 + 0.2, abs=1e-15)

    def test_geometric_ratio_must_converge(self):
        with pytest.raises(ValidationError):
            GeometricTail(a=1.0, r=1.0)
        with pytest.raises(ValidationError):
            GeometricTail(a=1.0, r=-1.5)

    def test_abs_sum_example(self):
        # a=1, r=0.5 from t=0: sum = 2, so the value bound at b=2 is 4
        p = CoefficientSequence(prefix=(), tail=GeometricTail(a=1.0, r=0.5))
        assert p.abs_sum() == 2.0
        assert 2.0 * p.abs_sum() == 4.0

    def test_signed_sum_alternating(self):
        p = CoefficientSequence(prefix=(), tail=GeometricTail(a=1.0, r=-0.5))
        explicit = sum(p.coefficient(t) for t in range(200))
        assert p.signed_sum_from(0) == pytest.approx(explicit, abs=1e-15)
        assert p.signed_sum_from(3) == pytest.approx(explicit - sum(p.coefficient(t) for t in range(3)), abs=1e-15)


class TestTailBound:
    def test_zero_tail_is_exact(self):
        p = CoefficientSequence(prefix=(1.0, -1.0))
        assert tail_bound(p, 1.0, 1) == 0.0
        assert tail_bound(p, 1.0, 7) == 0.0

    def test_geometric_closed_form_against_explicit_sum(self):
        p = CoefficientSequence(
            prefix=(1.0, 0.5, -0.2, 0.4), tail=GeometricTail(a=-0.1, r=0.5)
        )
        got = tail_bound(p, 1.0, 4)
        assert got == pytest.approx(0.1, abs=1e-12)
        assert got == pytest.approx(explicit_tail_sum(p, 1.0, 4), abs=1e-15)

    def test_geometric_closed_form_second_example(self):
        p = CoefficientSequence(prefix=(), tail=GeometricTail(a=1.0, r=0.5))
        got = tail_bound(p, 2.0, 3)
        assert got == pytest.approx(0.25, abs=1e-12)
        assert got == pytest.approx(explicit_tail_sum(p, 2.0, 3), abs=1e-12)

    @pytest.mark.parametrize("r", [0.5, -0.5, 0.9, 0.0])
    def test_monotone_decay_to_zero(self, r):
        p = CoefficientSequence(prefix=(0.3, -0.7), tail=GeometricTail(a=0.4, r=r))
        bounds = [tail_bound(p, 1.0, h) for h in range(1, 400)]
        assert all(b1 >= b2 for b1, b2 in zip(bounds, bounds[1:]))
        assert bounds[-1] < 1e-9


class TestBuilders:
    def test_cake_bands(self):
        p = CoefficientSequence(prefix=(1.0,))
        problem = build_cake_eating(p, 1.0)
        assert problem.is_cake()
        for t in (0, 3, 17):
            assert feasible_interval(problem, t, 0.7) == (0.0, 0.7)
        assert feasible_interval(problem, 0, 0.0) == (0.0, 0.0)

    def test_cake_rejects_bad_bound(self):
        p = CoefficientSequence(prefix=(1.0,))
        with pytest.raises(ValidationError):
            build_cake_eating(p, 0.0)

    def test_wealth_coefficients(self):
        problem = build_wealth_accumulation(u=[1, 1, 0], mu=[2, 1, 0], b=1.0)
        assert problem.p.prefix == (2.0, 0.0, -1.0)
        assert isinstance(problem.p.tail, ZeroTail)

    def test_wealth_zero_utility(self):
        problem = build_wealth_accumulation(u=[0, 0], mu=[1, 1], b=1.0)
        assert problem.p.prefix == (0.0, 0.0)

    def test_wealth_keeps_final_inherited_term(self):
        # u ends nonzero: the unconsumable leftover still costs -u at the end
        problem = build_wealth_accumulation(u=[1, 1], mu=[1, 1], b=1.0)
        assert problem.p.prefix == (1.0, 0.0, -1.0)

    def test_wealth_band_clamps_to_b(self):
        problem = build_wealth_accumulation(u=[1, 0], mu=[3, 0], b=1.0)
        assert feasible_interval(problem, 0, 0.5) == (0.0, 1.0)
        assert feasible_interval(problem, 0, 0.2) == (0.0, pytest.approx(0.6))

    def test_wealth_rejects_negative_rates(self):
        with pytest.raises(ValidationError):
            build_wealth_accumulation(u=[1, -1], mu=[1, 1], b=1.0)
        with pytest.raises(ValidationError):
            build_wealth_accumulation(u=[1], mu=[-2], b=1.0)

    def test_survival_formula(self):
        p = build_survival_coefficients(pi=[1, 0.5, 0.25], v=[1, 1, 1])
        assert p.prefix == (1.0, -0.5, -0.25)

    def test_survival_terminates_after_first_zero(self):
        p = build_survival_coefficients(pi=[1, 0, 0], v=[1, 7, 9])
        assert p.prefix == (1.0, -1.0, 0.0)

    def test_survival_constant(self):
        p = build_survival_coefficients(pi=[1, 1], v=[3.5, 3.5])
        assert p.prefix == (3.5, 0.0)

    def test_survival_rejects_bad_probabilities(self):
        with pytest.raises(ValidationError):
            build_survival_coefficients(pi=[1, 1.5], v=[1, 1])
        with pytest.raises(ValidationError):
            build_survival_coefficients(pi=[0.9, 0.5], v=[1, 1])


class TestConstraintBand:
    def test_nonempty_everywhere_on_grid(self):
        rng = random.Random(7)
        for _ in range(50):
            band = _random_valid_band(rng, b=1.0)
            for i in range(201):
                x = i / 200
                lo, hi = band.interval(x, 1.0)
                assert 0.0 <= lo <= hi <= 1.0

    def test_empty_band_rejected(self):
        band = ConstraintBand(alpha=0.8, beta=0.0, gamma=0.1, delta=0.0)
        with pytest.raises(ValidationError):
            band.validate_for(1.0)

    def test_family_reports_offending_period(self):
        bad = ConstraintBand(alpha=0.8, beta=0.0, gamma=0.1, delta=0.0)
        good = ConstraintBand(alpha=0.0, beta=0.0, gamma=0.0, delta=1.0)
        with pytest.raises(ValidationError, match="period 1"):
            ConstraintFamily(bands=(good, bad), stationary_tail=good, b=1.0)


def _random_valid_band(rng: random.Random, b: float) -> ConstraintBand:
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


class TestTrajectories:
    def test_state_at_honors_tail_policy(self):
        hold = Trajectory(0, (1.0, 0.5), TailPolicy.HOLD_LAST)
        drop = Trajectory(0, (1.0, 0.5), TailPolicy.ZERO)
        assert hold.state_at(5) == 0.5
        assert drop.state_at(5) == 0.0

    def test_cake_non_increasing_is_feasible(self):
        problem = build_cake_eating(CoefficientSequence(prefix=(1.0,)), 1.0)
        traj = Trajectory(0, (1.0, 0.5, 0.5, 0.0), TailPolicy.ZERO)
        assert is_feasible(problem, traj).ok

    def test_cake_increase_is_infeasible(self):
        problem = build_cake_eating(CoefficientSequence(prefix=(1.0,)), 1.0)
        report = is_feasible(problem, Trajectory(0, (0.5, 0.6), TailPolicy.ZERO))
        assert not report.ok
        assert report.first_violation.period == 0

    def test_cake_hold_last_tail_checked(self):
        problem = build_cake_eating(CoefficientSequence(prefix=(1.0,)), 1.0)
        # holding any level is fine for cake
        assert is_feasible(problem, Trajectory(0, (1.0, 0.4), TailPolicy.HOLD_LAST)).ok

    def test_wealth_growth_step(self):
        problem = build_wealth_accumulation(u=[1, 1], mu=[2, 2], b=1.0)
        assert is_feasible(problem, Trajectory(0, (0.4, 0.8), TailPolicy.ZERO)).ok
        report = is_feasible(problem, Trajectory(0, (0.4, 0.9), TailPolicy.ZERO))
        assert not report.ok

    def test_wealth_hold_last_beyond_horizon_infeasible(self):
        # beyond the listed rates nothing can be carried forward
        problem = build_wealth_accumulation(u=[1], mu=[1], b=1.0)
        assert not is_feasible(problem, Trajectory(0, (0.5,), TailPolicy.HOLD_LAST)).ok
        assert is_feasible(problem, Trajectory(0, (0.5, 0.0), TailPolicy.ZERO)).ok


class TestWealthStructuralProperties:
    """Shrinking later states or raising the start preserves feasibility."""

    def _random_feasible(self, problem, rng, x0, length):
        states = [x0]
        for t in range(length - 1):
            lo, hi = feasible_interval(problem, t, states[-1])
            states.append(rng.uniform(lo, hi))
        return states

    def test_successor_sets_downward_closed(self):
        # disposing of carried wealth is always allowed: (x, y) feasible and
        # y' <= y imply (x, y') feasible
        rng = random.Random(11)
        problem = build_wealth_accumulation(u=[1, 1, 1], mu=[1.5, 0.8, 1.2], b=1.0)
        for _ in range(200):
            t = rng.randrange(4)
            x = rng.uniform(0, 1)
            lo, hi = feasible_interval(problem, t, x)
            assert lo == 0.0
            y = rng.uniform(lo, hi)
            assert lo <= y * rng.uniform(0, 1) <= hi

    def test_progressive_disposal_preserves_feasibility(self):
        # shrinking later states by non-increasing factors stays feasible
        rng = random.Random(11)
        problem = build_wealth_accumulation(u=[1, 1, 1], mu=[1.5, 0.8, 1.2], b=1.0)
        for _ in range(100):
            states = self._random_feasible(problem, rng, rng.uniform(0, 1), 5)
            traj = Trajectory(0, tuple(states), TailPolicy.ZERO)
            assert is_feasible(problem, traj).ok
            theta = 1.0
            shrunk = [states[0]]
            for x in states[1:]:
                theta *= rng.uniform(0, 1)
                shrunk.append(x * theta)
            assert is_feasible(problem, Trajectory(0, tuple(shrunk), TailPolicy.ZERO)).ok

    def test_monotone_in_start_state(self):
        rng = random.Random(13)
        problem = build_wealth_accumulation(u=[1, 1, 1], mu=[1.5, 0.8, 1.2], b=1.0)
        for _ in range(100):
            x0 = rng.uniform(0, 0.9)
            states = self._random_feasible(problem, rng, x0, 5)
            raised = [rng.uniform(x0, 1.0)] + states[1:]
            assert is_feasible(problem, Trajectory(0, tuple(raised), TailPolicy.ZERO)).ok


class TestFeasibleIntervalDomain:
    def test_rejects_out_of_domain_state(self):
        problem = build_cake_eating(CoefficientSequence(prefix=(1.0,)), 1.0)
        with pytest.raises(ValidationError):
            feasible_interval(problem, 0, 1.2)
        with pytest.raises(ValidationError):
            feasible_interval(problem, 0, -0.1)
