import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isom4.catalog import aut_family
from isom4.exact import (
    IrrationalFactorError,
    NotPositiveDefiniteError,
    RationalMatrix,
    SingularMatrixError,
    leading_minors,
)
from isom4.metrics import (
    MetricConstraintError,
    all_cases,
    check_metric,
    default_params,
    displayed_metric,
    metric_class,
    metric_matrix,
    metric_param,
    phi,
    phi_inverse,
    pullback_metric,
)

I4 = RationalMatrix.identity(4)


def test_phi_examples():
    assert phi(RationalMatrix.diag(2, 1, 1, 1)) == RationalMatrix.diag(F(1, 4), 1, 1, 1)
    assert phi(I4) == I4
    nil4 = metric_param("Nil4", 2, dict(alpha=1, beta=1, gamma=1))
    assert phi(nil4) == RationalMatrix([[1, -1, 0, 0], [-1, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_phi_inverse_examples():
    assert phi_inverse(I4) == I4
    assert phi_inverse(RationalMatrix.diag(F(1, 4), 1, 1, 1)) == RationalMatrix.diag(2, 1, 1, 1)
    s = RationalMatrix([[1, -1, 0, 0], [-1, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert phi_inverse(s) == RationalMatrix([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_phi_inverse_irrational_reports_minors():
    with pytest.raises(IrrationalFactorError) as info:
        phi_inverse(RationalMatrix.diag(2, 1, 1, 1))
    assert all(m > 0 for m in info.value.minors)


def test_metric_matrix_examples():
    assert metric_matrix("Sol04", 1, {"beta": 3}) == RationalMatrix.diag(1, 1, 1, F(1, 9))
    expected = RationalMatrix([[1, -1, 0, 0], [-1, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert metric_matrix("SolMN4", 2, {"alpha": 1, "mu": 1}) == expected
    s = metric_matrix("Sol14", 3, dict(alpha=1, beta=1, mu=1, nu=1))
    assert s[0, 2] == 1 and s[2, 2] == 3


def test_greek_aliases():
    assert metric_matrix("Nil3xR", 1, {"α": 2}) == RationalMatrix.diag(F(1, 4), 1, 1, 1)


@pytest.mark.parametrize(
    "group, case, params, fragment",
    [
        ("Nil4", 2, dict(alpha=1, beta=0, gamma=1), "beta > 0"),
        ("Nil4", 1, dict(alpha=-1, gamma=1), "alpha > 0"),
        ("SolMN4", 3, dict(alpha=1, beta=0, gamma=0, mu=1), "beta != 0"),
        ("Sol0p4", 2, dict(alpha=1, beta=1, gamma=1, mu=1), "gamma = 0"),
        ("Sol14", 4, dict(alpha=1, nu=1), "cases"),
        ("Sol04", 1, dict(alpha=0), "missing parameter beta"),
        ("Sol04", 1, dict(beta=1, kappa=2), "unknown"),
    ],
)
def test_constraint_violations_echo_the_constraint(group, case, params, fragment):
    with pytest.raises(MetricConstraintError, match=fragment):
        metric_matrix(group, case, params)


def test_other_case_has_no_display():
    s = metric_matrix("SolMN4", "other", dict(alpha=2, beta=1, gamma=1, mu=1))
    assert check_metric(s) is s
    with pytest.raises(MetricConstraintError):
        displayed_metric("SolMN4", "other", dict(alpha=2, beta=1, gamma=1, mu=1))


def test_check_metric_failures():
    with pytest.raises(ValueError):
        check_metric(RationalMatrix([[1, 2], [0, 1]]))
    with pytest.raises(NotPositiveDefiniteError):
        check_metric(RationalMatrix([[1, 2], [2, 1]]))


def test_pullback_examples():
    s = metric_matrix("Nil4", 1, default_params("Nil4", 1))
    assert pullback_metric(I4, s) == s
    assert pullback_metric(RationalMatrix.diag(2, 1, 1, 1), I4) == RationalMatrix.diag(F(1, 4), 1, 1, 1)
    stab = RationalMatrix.diag(1, -1, 1, -1)
    assert pullback_metric(stab, s) == s
    with pytest.raises(SingularMatrixError):
        pullback_metric(RationalMatrix.zeros(4), s)


def test_pullback_solves_the_matrix_equation():
    rng = random.Random(2)
    fam = aut_family("Sol14")
    s = metric_matrix("Sol14", 3, dict(alpha=2, beta=1, mu=3, nu=1))
    for _ in range(10):
        b = rng.choice(fam.branches)
        th = b.instantiate(b.sample(rng))
        x = pullback_metric(th, s)
        assert th.T @ x @ th == s


def test_pullback_composition_order():
    rng = random.Random(4)
    b = aut_family("Sol04").identity_branch
    s = metric_matrix("Sol04", 2, dict(alpha=1, beta=2))
    for _ in range(10):
        th, ph = b.instantiate(b.sample(rng)), b.instantiate(b.sample(rng))
        # the matrix convention composes as a left action
        assert pullback_metric(th @ ph, s) == pullback_metric(th, pullback_metric(ph, s))


positive = st.fractions(min_value=F(1, 9), max_value=9, max_denominator=9)
signed = st.fractions(min_value=-9, max_value=9, max_denominator=9)


@st.composite
def admissible(draw):
    group, case = draw(st.sampled_from(all_cases()))
    rel = metric_class(group).constraints(case)
    params = {}
    for p in metric_class(group).params:
        r = rel.get(p, "any")
        if r == "zero":
            params[p] = F(0)
        elif r == "pos":
            params[p] = draw(positive)
        elif r == "nonneg":
            params[p] = draw(st.one_of(st.just(F(0)), positive))
        elif r == "nonzero":
            params[p] = draw(positive) * draw(st.sampled_from([1, -1]))
        else:
            params[p] = draw(signed)
    return group, case, params


@given(admissible())
@settings(max_examples=120, deadline=None)
def test_phi_round_trip_and_positivity(inst):
    group, case, params = inst
    b = metric_param(group, case, params)
    s = phi(b)
    assert s.is_symmetric() and all(m > 0 for m in leading_minors(s))
    assert phi_inverse(s) == b.m
    assert displayed_metric(group, case, params) == s
