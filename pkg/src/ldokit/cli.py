"""Command-line frontend.

Subcommands: solve, rule, roll, certify, two-phase, oracle-check.  Each reads
a problem JSON file and writes CSV/JSON artifacts into --out.  Exit status 0
on success, 1 when a verification fails (certificate rejected, sandwich bound
violated), 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .cake import classify_two_phase, solve_two_phase, trajectory_csv_rows
from .certify import dominance_gap, objective_value, verify_euler
from .errors import LDOError, ValidationError
from .ioutil import write_csv, write_json
from .model import feasible_interval
from .oracle import GridSpec, compare_to_solver
from .problemfile import (
    load_certificate,
    load_problem,
    load_trajectory,
    trajectory_to_csv_text,
)
from .solver import (
    Tiebreak,
    backward_induce,
    decision_rule,
    roll_trajectory,
    stack_csv_rows,
    stack_summary,
    value_at,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldokit",
        description="Solve and certify linear dynamic optimization problems on [0, b].",
    )
    parser.add_argument("--version", action="version", version=f"ldokit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, x0: bool = False) -> None:
        p.add_argument("--problem", required=True, type=Path, help="problem JSON file")
        p.add_argument("--out", required=True, type=Path, help="output directory")
        p.add_argument(
            "--eps", type=float, default=1e-9, help="horizon truncation tolerance"
        )
        if x0:
            p.add_argument("--x0", type=float, required=True, help="initial state")

    p_solve = sub.add_parser("solve", help="compute the value-function stack")
    common(p_solve)
    p_solve.add_argument("--x0", type=float, default=None, help="also report V(x0)")

    p_rule = sub.add_parser("rule", help="tabulate decision-rule intervals")
    common(p_rule)
    p_rule.add_argument(
        "--grid", type=int, default=10, help="state-grid subdivisions for the table"
    )

    p_roll = sub.add_parser("roll", help="roll an optimal trajectory")
    common(p_roll, x0=True)
    p_roll.add_argument(
        "--tiebreak",
        choices=[t.value for t in Tiebreak],
        default=Tiebreak.LOWEST.value,
        help="selection inside set-valued decision intervals",
    )

    p_cert = sub.add_parser("certify", help="verify an Euler/transversality certificate")
    common(p_cert)
    p_cert.add_argument("--trajectory", required=True, type=Path, help="trajectory CSV")
    p_cert.add_argument("--certificate", required=True, type=Path, help="certificate JSON")
    p_cert.add_argument("--tol", type=float, default=1e-9)

    p_two = sub.add_parser("two-phase", help="closed-form two-phase solution")
    common(p_two, x0=True)

    p_oracle = sub.add_parser("oracle-check", help="sandwich the solver between grid bounds")
    common(p_oracle)
    p_oracle.add_argument("--grid", type=int, default=8, help="grid subdivisions")
    p_oracle.add_argument("--horizon", type=int, default=None, help="grid horizon (default: coefficient prefix)")

    return parser


def _cmd_solve(args) -> int:
    problem = load_problem(args.problem)
    stack = backward_induce(problem, args.eps)
    write_csv(
        args.out / "value_functions.csv",
        ["T", "x", "v"],
        stack_csv_rows(stack),
    )
    summary = stack_summary(stack)
    if args.x0 is not None:
        value, err = value_at(stack, 0, args.x0)
        summary["x0"] = args.x0
        summary["value_at_x0"] = value
    write_json(args.out / "summary.json", summary)
    return 0


def _cmd_rule(args) -> int:
    problem = load_problem(args.problem)
    stack = backward_induce(problem, args.eps)
    rows = []
    for t in range(stack.horizon + 1):
        for i in range(args.grid + 1):
            x = problem.b * i / args.grid
            lo, hi = decision_rule(stack, problem, t, x)
            rows.append((t, x, lo, hi))
    write_csv(args.out / "decision_rules.csv", ["T", "x", "h_lo", "h_hi"], rows)
    return 0


def _cmd_roll(args) -> int:
    problem = load_problem(args.problem)
    stack = backward_induce(problem, args.eps)
    traj = roll_trajectory(stack, problem, args.x0, Tiebreak(args.tiebreak))
    (args.out / "trajectory.csv").write_text(
        trajectory_to_csv_text(traj), encoding="utf-8"
    )
    return 0


def _cmd_certify(args) -> int:
    problem = load_problem(args.problem)
    traj = load_trajectory(args.trajectory)
    cert = load_certificate(args.certificate)
    report = verify_euler(problem, traj, cert, tol=args.tol)
    payload = report.to_dict()
    payload["objective_value"] = objective_value(problem, traj)
    write_json(args.out / "certify_report.json", payload)
    return 0 if report.ok else 1


def _cmd_two_phase(args) -> int:
    problem = load_problem(args.problem)
    structure = classify_two_phase(problem.p)
    if structure is None:
        raise ValidationError("problem coefficients are not two-phase")
    traj = solve_two_phase(problem, args.x0)
    write_csv(
        args.out / "two_phase_trajectory.csv",
        ["t", "x"],
        trajectory_csv_rows(traj),
        comments=[f"tail: {traj.tail.value}"],
    )
    write_json(
        args.out / "two_phase.json",
        {
            "t_plus": structure.t_plus,
            "t_minus": structure.t_minus,
            "drop_after": len(traj.states) - 2,
            "value": objective_value(problem, traj),
        },
    )
    return 0


def _cmd_oracle_check(args) -> int:
    problem = load_problem(args.problem)
    stack = backward_induce(problem, args.eps)
    horizon = args.horizon
    if horizon is None:
        horizon = max(problem.p.prefix_end, 0)
    report = compare_to_solver(stack, problem, GridSpec(g=args.grid, h=horizon))
    write_json(args.out / "oracle_check.json", report.to_dict())
    return 0 if report.ok else 1


_COMMANDS = {
    "solve": _cmd_solve,
    "rule": _cmd_rule,
    "roll": _cmd_roll,
    "certify": _cmd_certify,
    "two-phase": _cmd_two_phase,
    "oracle-check": _cmd_oracle_check,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](args)
    except (LDOError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
