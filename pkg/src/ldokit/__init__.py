"""Solver and certifier toolkit for infinite-horizon linear dynamic
optimization on a bounded interval state space."""

from .cake import (
    MonotonicityReport,
    PolicyMonotonicityReport,
    TwoPhaseStructure,
    classify_two_phase,
    monotonicity_report,
    policy_monotonicity_test,
    solve_sign_uniform,
    solve_two_phase,
    stay_put_check,
)
from .certify import (
    EulerCertificate,
    EulerReport,
    ExtractionRefusal,
    dominance_gap,
    extract_multipliers,
    objective_value,
    polygon_vertices,
    value_bound,
    verify_euler,
)
from .errors import ConcavityError, LDOError, ValidationError
from .model import (
    CAKE_BAND,
    CoefficientSequence,
    ConstraintBand,
    ConstraintFamily,
    FeasibilityReport,
    GeometricTail,
    LDOProblem,
    TailPolicy,
    Trajectory,
    ZeroTail,
    build_cake_eating,
    build_survival_coefficients,
    build_wealth_accumulation,
    feasible_interval,
    is_feasible,
    tail_bound,
)
from .oracle import GridSpec, SandwichReport, compare_to_solver, enumerate_opt, grid_dp
from .plconcave import (
    PLConcave,
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
from .problemfile import (
    load_certificate,
    load_problem,
    load_trajectory,
    problem_from_dict,
    problem_to_dict,
)
from .solver import (
    BellmanReport,
    Tiebreak,
    ValueStack,
    backward_induce,
    decision_rule,
    roll_trajectory,
    value_at,
    verify_bellman,
)

__version__ = "0.1.0"
