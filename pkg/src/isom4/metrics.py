"""Left-invariant metrics as inner products on the Lie algebra.

An inner product is stored as its Gram matrix ``S`` in the basis e1..e4.
Normal forms are given by upper-triangular matrices ``M`` with positive
diagonal, mapped to Gram matrices by ``phi(M) = (M^-1)^T M^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .catalog import GroupName
from .exact import (
    IrrationalFactorError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    RationalMatrix,
    SingularMatrixError,
    cholesky_upper,
    fmt,
    inverse,
    is_positive_definite,
    leading_minors,
    to_rational,
)

PARAM_ALIASES = {"α": "alpha", "β": "beta", "γ": "gamma", "μ": "mu", "ν": "nu"}

_RELATIONS: dict[str, tuple[str, Callable[[Fraction], bool]]] = {
    "pos": ("> 0", lambda v: v > 0),
    "nonneg": (">= 0", lambda v: v >= 0),
    "nonzero": ("!= 0", lambda v: v != 0),
    "zero": ("= 0", lambda v: v == 0),
    "any": ("in R", lambda v: True),
}


class MetricConstraintError(ValueError):
    pass


@dataclass(frozen=True)
class MetricClass:
    """Normal form M(params) for one group, with its cases and their displayed Gram matrices."""

    group: GroupName
    params: tuple[str, ...]
    base: Mapping[str, str]
    build_m: Callable[[Mapping[str, Fraction]], list]
    cases: Mapping[int, tuple[Mapping[str, str], Callable[[Mapping[str, Fraction]], list]]]

    def constraints(self, case) -> dict[str, str]:
        rel = dict(self.base)
        if case != "other":
            rel.update(self.cases[case][0])
        return rel


def _inv(x):
    return 1 / x


def _nil3xr_m(p):
    return [[p["alpha"], 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def _nil4_m(p):
    a, b, g = p["alpha"], p["beta"], p["gamma"]
    return [[a, b, 0, 0], [0, g, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def _nil4_g2(p):
    a, b, g = p["alpha"], p["beta"], p["gamma"]
    off = -b / (a * a * g)
    return [
        [1 / (a * a), off, 0, 0],
        [off, 1 / (g * g) + b * b / (a * a * g * g), 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
    ]


def _solmn_m(p):
    a, b, g, mu = p["alpha"], p["beta"], p["gamma"], p["mu"]
    return [[1, a, b, 0], [0, 1, g, 0], [0, 0, 1, 0], [0, 0, 0, mu]]


def _solmn_g2(p):
    a, mu = p["alpha"], p["mu"]
    return [[1, -a, 0, 0], [-a, 1 + a * a, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1 / (mu * mu)]]


def _solmn_g3(p):
    a, b, g, mu = p["alpha"], p["beta"], p["gamma"], p["mu"]
    k = a * g - b
    s23 = -a * k - g
    return [
        [1, -a, k, 0],
        [-a, 1 + a * a, s23, 0],
        [k, s23, k * k + g * g + 1, 0],
        [0, 0, 0, 1 / (mu * mu)],
    ]


def _sol04_m(p):
    a, b = p["alpha"], p["beta"]
    return [[1, 0, a, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, b]]


def _sol04_g2(p):
    a, b = p["alpha"], p["beta"]
    return [[1, 0, -a, 0], [0, 1, 0, 0], [-a, 0, 1 + a * a, 0], [0, 0, 0, 1 / (b * b)]]


def _sol0p4_m(p):
    a, b, g, mu = p["alpha"], p["beta"], p["gamma"], p["mu"]
    return [[1, 0, b, 0], [0, a, g, 0], [0, 0, 1, 0], [0, 0, 0, mu]]


def _sol0p4_g2(p):
    a, b, mu = p["alpha"], p["beta"], p["mu"]
    return [
        [1, 0, -b, 0],
        [0, 1 / (a * a), 0, 0],
        [-b, 0, 1 + b * b, 0],
        [0, 0, 0, 1 / (mu * mu)],
    ]


def _sol14_m(p):
    a, b, g, mu, nu = p["alpha"], p["beta"], p["gamma"], p["mu"], p["nu"]
    return [[a, b, g, 0], [0, 1, mu, 0], [0, 0, 1, 0], [0, 0, 0, nu]]


def _sol14_g2(p):
    a, b, nu = p["alpha"], p["beta"], p["nu"]
    return [
        [1 / (a * a), -b / (a * a), 0, 0],
        [-b / (a * a), 1 + (b / a) ** 2, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1 / (nu * nu)],
    ]


def _sol14_g3(p):
    a, b, mu, nu = p["alpha"], p["beta"], p["mu"], p["nu"]
    s23 = -b * b * mu / (a * a) - mu
    return [
        [1 / (a * a), -b / (a * a), b * mu / (a * a), 0],
        [-b / (a * a), 1 + (b / a) ** 2, s23, 0],
        [b * mu / (a * a), s23, (b * mu / a) ** 2 + mu * mu + 1, 0],
        [0, 0, 0, 1 / (nu * nu)],
    ]


def _diag(*fs):
    def build(p):
        vals = [f(p) for f in fs]
        return [[vals[i] if i == j else 0 for j in range(4)] for i in range(4)]

    return build


_one = lambda p: 1  # noqa: E731

_SOLMN_CASES = {
    1: ({"alpha": "zero", "beta": "zero", "gamma": "zero"},
        _diag(_one, _one, _one, lambda p: 1 / p["mu"] ** 2)),
    2: ({"alpha": "pos", "beta": "zero", "gamma": "zero"}, _solmn_g2),
    3: ({"alpha": "pos", "beta": "nonzero", "gamma": "any"}, _solmn_g3),
}

METRIC_CLASSES: dict[GroupName, MetricClass] = {
    GroupName.NIL3XR: MetricClass(
        GroupName.NIL3XR, ("alpha",), {"alpha": "pos"}, _nil3xr_m,
        {1: ({}, _diag(lambda p: 1 / p["alpha"] ** 2, _one, _one, _one))},
    ),
    GroupName.NIL4: MetricClass(
        GroupName.NIL4, ("alpha", "beta", "gamma"),
        {"alpha": "pos", "gamma": "pos", "beta": "nonneg"}, _nil4_m,
        {
            1: ({"beta": "zero"},
                _diag(lambda p: 1 / p["alpha"] ** 2, lambda p: 1 / p["gamma"] ** 2, _one, _one)),
            2: ({"beta": "pos"}, _nil4_g2),
        },
    ),
    GroupName.SOLMN4: MetricClass(
        GroupName.SOLMN4, ("alpha", "beta", "gamma", "mu"),
        {"mu": "pos", "alpha": "nonneg", "gamma": "nonneg", "beta": "any"}, _solmn_m, _SOLMN_CASES,
    ),
    GroupName.SOL3XR: MetricClass(
        GroupName.SOL3XR, ("alpha", "beta", "gamma", "mu"),
        {"mu": "pos", "alpha": "nonneg", "gamma": "nonneg", "beta": "any"}, _solmn_m, _SOLMN_CASES,
    ),
    GroupName.SOL04: MetricClass(
        GroupName.SOL04, ("alpha", "beta"), {"alpha": "nonneg", "beta": "pos"}, _sol04_m,
        {
            1: ({"alpha": "zero"}, _diag(_one, _one, _one, lambda p: 1 / p["beta"] ** 2)),
            2: ({"alpha": "pos"}, _sol04_g2),
        },
    ),
    GroupName.SOL0P4: MetricClass(
        GroupName.SOL0P4, ("alpha", "beta", "gamma", "mu"),
        {"alpha": "pos", "mu": "pos", "beta": "nonneg", "gamma": "any"}, _sol0p4_m,
        {
            1: ({"beta": "zero", "gamma": "zero"},
                _diag(_one, lambda p: 1 / p["alpha"] ** 2, _one, lambda p: 1 / p["mu"] ** 2)),
            2: ({"beta": "nonzero", "gamma": "zero"}, _sol0p4_g2),
        },
    ),
    GroupName.SOL14: MetricClass(
        GroupName.SOL14, ("alpha", "beta", "gamma", "mu", "nu"),
        {"alpha": "pos", "nu": "pos", "beta": "nonneg", "mu": "nonneg", "gamma": "any"}, _sol14_m,
        {
            1: ({"beta": "zero", "gamma": "zero", "mu": "zero"},
                _diag(lambda p: 1 / p["alpha"] ** 2, _one, _one, lambda p: 1 / p["nu"] ** 2)),
            2: ({"beta": "pos", "gamma": "zero", "mu": "zero"}, _sol14_g2),
            3: ({"beta": "pos", "mu": "pos", "gamma": "zero"}, _sol14_g3),
        },
    ),
}


def metric_class(group) -> MetricClass:
    return METRIC_CLASSES[GroupName.parse(group)]


def case_ids(group) -> list[int]:
    return sorted(metric_class(group).cases)


def parse_case(case) -> "int | str":
    if case is None:
        return 1
    if isinstance(case, str):
        if case.strip().lower() == "other":
            return "other"
        return int(case)
    return int(case)


def default_params(group, case=1) -> dict[str, Fraction]:
    """All-ones admissible choice, with zeros where the case forces them."""
    mc = metric_class(group)
    case = parse_case(case)
    rel = mc.constraints(case)
    return {p: Fraction(0 if rel.get(p) == "zero" else 1) for p in mc.params}


def normalize_params(params: Mapping[str, object] | None) -> dict[str, Fraction]:
    out = {}
    for k, v in (params or {}).items():
        key = PARAM_ALIASES.get(k.strip(), k.strip().lower())
        out[key] = Fraction(v) if isinstance(v, str) else to_rational(v)
    return out


@dataclass(frozen=True)
class UpperTriangularMetricParam:
    m: RationalMatrix
    group: GroupName
    case_id: "int | str"
    params: Mapping[str, Fraction] = field(default_factory=dict)


def _resolve(group, case, params) -> tuple[MetricClass, "int | str", dict[str, Fraction]]:
    mc = metric_class(group)
    case = parse_case(case)
    if case != "other" and case not in mc.cases:
        raise MetricConstraintError(
            f"{mc.group.value} has cases {sorted(mc.cases)} (or 'other'), not {case}"
        )
    rel = mc.constraints(case)
    vals = normalize_params(params)
    unknown = set(vals) - set(mc.params)
    if unknown:
        raise MetricConstraintError(
            f"{mc.group.value} takes parameters {list(mc.params)}; unknown {sorted(unknown)}"
        )
    for p in mc.params:
        if p not in vals:
            if rel.get(p) == "zero":
                vals[p] = Fraction(0)
            else:
                raise MetricConstraintError(f"{mc.group.value} case {case}: missing parameter {p}")
    for p in mc.params:
        text, ok = _RELATIONS[rel.get(p, "any")]
        if not ok(vals[p]):
            raise MetricConstraintError(
                f"{mc.group.value} case {case} requires {p} {text} (got {fmt(vals[p])})"
            )
    return mc, case, vals


def metric_param(group, case=1, params=None) -> UpperTriangularMetricParam:
    mc, case, vals = _resolve(group, case, params)
    return UpperTriangularMetricParam(RationalMatrix(mc.build_m(vals)), mc.group, case, vals)


def check_upper_param(m: RationalMatrix) -> None:
    if not m.is_square or not m.is_upper_triangular():
        raise ValueError("normal form must be square upper triangular")
    if any(m[i, i] <= 0 for i in range(m.rows)):
        raise ValueError("normal form needs a strictly positive diagonal")


def phi(b: "UpperTriangularMetricParam | RationalMatrix") -> RationalMatrix:
    """(B^-1)^T (B^-1)."""
    m = b.m if isinstance(b, UpperTriangularMetricParam) else b
    check_upper_param(m)
    binv = inverse(m)
    return binv.T @ binv


def phi_inverse(s: RationalMatrix) -> RationalMatrix:
    """Upper-triangular B with positive diagonal and phi(B) == s.

    B is the inverse of the upper Cholesky factor of ``s``. Raises
    IrrationalFactorError (carrying the leading-minor certificate) when B
    is not rational.
    """
    return inverse(cholesky_upper(s))


def check_metric(s: RationalMatrix) -> RationalMatrix:
    if not s.is_symmetric():
        raise NotSymmetricError("metric matrix is not symmetric")
    if not is_positive_definite(s):
        raise NotPositiveDefiniteError(leading_minors(s))
    return s


def displayed_metric(group, case, params=None) -> RationalMatrix:
    """The Gram matrix as written in closed form for the case (no phi involved)."""
    mc, case, vals = _resolve(group, case, params)
    if case == "other":
        raise MetricConstraintError("free-form cases have no closed-form display")
    return RationalMatrix(mc.cases[case][1](vals))


def metric_matrix(group, case=1, params=None) -> RationalMatrix:
    """Gram matrix for a normal-form case, cross-checked against phi of its M."""
    b = metric_param(group, case, params)
    s = phi(b)
    if b.case_id != "other":
        shown = displayed_metric(group, b.case_id, b.params)
        if shown != s:
            raise AssertionError(
                f"{b.group.value} case {b.case_id}: closed form disagrees with phi(M)"
            )
    return s


def pullback_metric(theta: RationalMatrix, s: RationalMatrix) -> RationalMatrix:
    """Gram matrix of theta^* g: the solution X of s = theta^T X theta."""
    if theta.det() == 0:
        raise SingularMatrixError("pullback by a singular matrix")
    ti = inverse(theta)
    return ti.T @ s @ ti


def all_cases() -> list[tuple[GroupName, int]]:
    return [(g, c) for g in GroupName for c in case_ids(g)]


__all__ = [
    "IrrationalFactorError",
    "MetricClass",
    "MetricConstraintError",
    "UpperTriangularMetricParam",
    "all_cases",
    "case_ids",
    "check_metric",
    "default_params",
    "displayed_metric",
    "metric_class",
    "metric_matrix",
    "metric_param",
    "normalize_params",
    "phi",
    "phi_inverse",
    "pullback_metric",
]
