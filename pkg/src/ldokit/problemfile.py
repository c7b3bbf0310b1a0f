"""File formats: problem JSON (with shorthand kinds), trajectory CSV,
certificate JSON.

Problem documents either spell out coefficients and constraint bands in full,
or use a shorthand ``kind`` ("cake", "wealth", "survival") expanded through
the model builders.  Parse errors carry a JSON-pointer-style path to the
offending field.
"""

from __future__ import annotations

import json
from pathlib import Path

from .certify import EulerCertificate
from .errors import ValidationError
from .model import (
    CAKE_BAND,
    CoefficientSequence,
    ConstraintBand,
    ConstraintFamily,
    GeometricTail,
    LDOProblem,
    TailPolicy,
    Trajectory,
    ZeroTail,
    build_cake_eating,
    build_survival_coefficients,
    build_wealth_accumulation,
)


def _require(doc: dict, key: str, path: str):
    if not isinstance(doc, dict):
        raise ValidationError("expected an object", path=path or "/")
    if key not in doc:
        raise ValidationError(f"missing field {key!r}", path=path or "/")
    return doc[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"expected a number, got {value!r}", path=path)
    return float(value)


def _number_list(value, path: str) -> list[float]:
    if not isinstance(value, list):
        raise ValidationError(f"expected a list of numbers, got {value!r}", path=path)
    return [_number(v, f"{path}/{i}") for i, v in enumerate(value)]


def _coefficients_from_dict(doc, path: str) -> CoefficientSequence:
    prefix = _number_list(_require(doc, "prefix", path), f"{path}/prefix")
    tail_doc = _require(doc, "tail", path)
    kind = _require(tail_doc, "kind", f"{path}/tail")
    if kind == "zero":
        tail: ZeroTail | GeometricTail = ZeroTail()
    elif kind == "geometric":
        a = _number(_require(tail_doc, "a", f"{path}/tail"), f"{path}/tail/a")
        r = _number(_require(tail_doc, "r", f"{path}/tail"), f"{path}/tail/r")
        if abs(r) >= 1.0:
            raise ValidationError(
                f"geometric ratio must satisfy |r| < 1, got {r!r}", path=f"{path}/tail/r"
            )
        if "start" in tail_doc:
            start = tail_doc["start"]
            if start != len(prefix):
                raise ValidationError(
                    f"tail start {start!r} must equal the prefix length {len(prefix)}",
                    path=f"{path}/tail/start",
                )
        tail = GeometricTail(a=a, r=r)
    else:
        raise ValidationError(
            f"unknown tail kind {kind!r} (expected 'zero' or 'geometric')",
            path=f"{path}/tail/kind",
        )
    return CoefficientSequence(prefix=tuple(prefix), tail=tail)


def _band_from_dict(doc, path: str) -> ConstraintBand:
    return ConstraintBand(
        alpha=_number(_require(doc, "alpha", path), f"{path}/alpha"),
        beta=_number(_require(doc, "beta", path), f"{path}/beta"),
        gamma=_number(_require(doc, "gamma", path), f"{path}/gamma"),
        delta=_number(_require(doc, "delta", path), f"{path}/delta"),
    )


def problem_from_dict(doc: dict) -> LDOProblem:
    if not isinstance(doc, dict):
        raise ValidationError("problem document must be a JSON object", path="/")
    kind = doc.get("kind")
    if kind == "wealth":
        return build_wealth_accumulation(
            u=_number_list(_require(doc, "u", ""), "/u"),
            mu=_number_list(_require(doc, "mu", ""), "/mu"),
            b=_number(_require(doc, "b", ""), "/b"),
        )
    if kind == "survival":
        p = build_survival_coefficients(
            pi=_number_list(_require(doc, "pi", ""), "/pi"),
            v=_number_list(_require(doc, "v", ""), "/v"),
        )
        return build_cake_eating(p, b=_number(_require(doc, "b", ""), "/b"))
    if kind == "cake":
        p = _coefficients_from_dict(_require(doc, "coefficients", ""), "/coefficients")
        return build_cake_eating(p, b=_number(_require(doc, "b", ""), "/b"))
    if kind is not None:
        raise ValidationError(
            f"unknown problem kind {kind!r} (expected 'cake', 'wealth', or 'survival')",
            path="/kind",
        )

    b = _number(_require(doc, "b", ""), "/b")
    p = _coefficients_from_dict(_require(doc, "coefficients", ""), "/coefficients")
    constraints = _require(doc, "constraints", "")
    bands_doc = _require(constraints, "bands", "/constraints")
    if not isinstance(bands_doc, list):
        raise ValidationError("expected a list of bands", path="/constraints/bands")
    bands = tuple(
        _band_from_dict(band, f"/constraints/bands/{i}")
        for i, band in enumerate(bands_doc)
    )
    tail_band = _band_from_dict(
        _require(constraints, "stationary_tail", "/constraints"),
        "/constraints/stationary_tail",
    )
    try:
        omega = ConstraintFamily(bands=bands, stationary_tail=tail_band, b=b)
        return LDOProblem(p=p, omega=omega, b=b)
    except ValidationError as exc:
        raise ValidationError(str(exc), path="/constraints") from None


def problem_to_dict(problem: LDOProblem) -> dict:
    tail = problem.p.tail
    if isinstance(tail, GeometricTail):
        tail_doc = {
            "kind": "geometric",
            "a": tail.a,
            "r": tail.r,
            "start": problem.p.start,
        }
    else:
        tail_doc = {"kind": "zero"}

    def band_doc(band: ConstraintBand) -> dict:
        return {
            "alpha": band.alpha,
            "beta": band.beta,
            "gamma": band.gamma,
            "delta": band.delta,
        }

    return {
        "b": problem.b,
        "coefficients": {"prefix": list(problem.p.prefix), "tail": tail_doc},
        "constraints": {
            "bands": [band_doc(band) for band in problem.omega.bands],
            "stationary_tail": band_doc(problem.omega.stationary_tail),
        },
    }


def load_problem(path: Path) -> LDOProblem:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {path}: {exc}") from None
    return problem_from_dict(doc)


# ---------------------------------------------------------------------------
# Trajectory CSV


def trajectory_to_csv_text(traj: Trajectory) -> str:
    from .ioutil import fmt

    lines = [f"# tail: {traj.tail.value}", "t,x"]
    lines.extend(
        f"{traj.start_period + i},{fmt(x)}" for i, x in enumerate(traj.states)
    )
    return "\n".join(lines) + "\n"


def trajectory_from_csv_text(text: str) -> Trajectory:
    tail = TailPolicy.HOLD_LAST
    rows: list[tuple[int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            meta = line[1:].strip()
            if meta.startswith("tail:"):
                name = meta.split(":", 1)[1].strip()
                try:
                    tail = TailPolicy(name)
                except ValueError:
                    raise ValidationError(
                        f"line {lineno}: unknown tail policy {name!r}"
                    ) from None
            continue
        if line == "t,x":
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValidationError(f"line {lineno}: expected 't,x', got {raw!r}")
        try:
            rows.append((int(parts[0]), float(parts[1])))
        except ValueError:
            raise ValidationError(f"line {lineno}: bad row {raw!r}") from None
    if not rows:
        raise ValidationError("trajectory file lists no states")
    for (t0, _), (t1, _) in zip(rows, rows[1:]):
        if t1 != t0 + 1:
            raise ValidationError(f"non-consecutive periods {t0} then {t1}")
    return Trajectory(
        start_period=rows[0][0],
        states=tuple(x for _, x in rows),
        tail=tail,
    )


def load_trajectory(path: Path) -> Trajectory:
    return trajectory_from_csv_text(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Certificate JSON


def certificate_to_dict(cert: EulerCertificate) -> dict:
    return {"q": list(cert.q), "tail": "zero"}


def certificate_from_dict(doc: dict) -> EulerCertificate:
    q = _number_list(_require(doc, "q", ""), "/q")
    tail = doc.get("tail", "zero")
    if tail != "zero":
        raise ValidationError(
            f"only zero-tail certificates are supported, got {tail!r}", path="/tail"
        )
    return EulerCertificate(q=tuple(q))


def load_certificate(path: Path) -> EulerCertificate:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {path}: {exc}") from None
    return certificate_from_dict(doc)
