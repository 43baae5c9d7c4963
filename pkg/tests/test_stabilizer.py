import itertools
import random
from fractions import Fraction as F

import pytest

from isom4.catalog import AutFamily, Branch, Param, algebra, aut_family
from isom4.exact import RationalMatrix, inverse
from isom4.expr import MPoly
from isom4.lie import LieAlgebra, is_automorphism, is_derivation
from isom4.metrics import all_cases, default_params, metric_matrix, pullback_metric
from isom4.stabilizer import (
    CircleParam,
    NonlinearResidualError,
    RotationBlock,
    discrete_stabilizer,
    groebner_basis,
    isotropy_algebra,
    linear_forcing_system,
    randomized_completeness_check,
    stabilizer,
)

D = RationalMatrix.diag


def run(group, case, params=None, **kw):
    p = default_params(group, case)
    p.update(params or {})
    s = metric_matrix(group, case, p)
    return stabilizer(algebra(group), aut_family(group), s, **kw), s


def test_isotropy_nil3xr_rotates_last_block():
    s = metric_matrix("Nil3xR", 1, {"alpha": 2})
    iso = isotropy_algebra(algebra("Nil3xR"), s)
    assert len(iso) == 1
    d = iso[0]
    assert RotationBlock.from_generator(d).plane == [2, 3]
    assert d.T @ s + s @ d == RationalMatrix.zeros(4)
    assert is_derivation(algebra("Nil3xR"), d)


def test_isotropy_dimensions():
    assert isotropy_algebra(algebra("Nil4"), metric_matrix("Nil4", 1, dict(alpha=1, gamma=1))) == []
    iso = isotropy_algebra(algebra("Sol04"), metric_matrix("Sol04", 1, {"beta": 1}))
    assert len(iso) == 1 and RotationBlock.from_generator(iso[0]).plane == [0, 1]


def test_nil4_case1_elements():
    st, _ = run("Nil4", 1)
    expected = {D(1, 1, 1, 1), D(1, -1, 1, -1), D(-1, -1, -1, 1), D(-1, 1, -1, -1)}
    assert set(st.component_reps) == expected


def test_solmn4_case1_signed_diagonals():
    st, _ = run("SolMN4", 1)
    expected = {D(a, b, c, 1) for a, b, c in itertools.product((1, -1), repeat=3)}
    assert set(st.component_reps) == expected


def test_sol14_case3_trivial():
    st, _ = run("Sol14", 3)
    assert st.component_reps == [RationalMatrix.identity(4)]


def test_finite_orders():
    assert run("Sol3xR", 1)[0].finite_order == 16
    assert run("Sol0p4", 2, dict(alpha=1, mu=1, beta=1))[0].finite_order == 2


def test_nil3xr_components_are_four():
    # The first diagonal entry equals det of the O(2) block, so diag(-1, 1, 1, 1) is
    # not an automorphism and the sign of entry (1,1) is not free.
    g = algebra("Nil3xR")
    assert not is_automorphism(g, D(-1, 1, 1, 1))
    assert is_automorphism(g, D(-1, 1, 1, -1))
    st, _ = run("Nil3xR", 1, {"alpha": 2})
    assert st.identity_component_dim == 1 and st.components == 4
    assert st.finite_order == "infinite"


@pytest.mark.parametrize("group, case", all_cases())
def test_elements_certified_and_closed(group, case):
    st, s = run(group, case, trials=0)
    g = algebra(group)
    for a in st.component_reps:
        assert a.T @ s @ a == s and is_automorphism(g, a)
    if st.identity_component_dim == 0:
        pool = set(st.component_reps)
        for a in st.component_reps:
            assert a.inverse() in pool
            assert all(a @ b in pool for b in st.component_reps)


def test_rotations_tangent_addition_and_half_turn():
    st, s = run("Sol04", 1)
    block = st.continuous_block
    rng = random.Random(0)
    for _ in range(20):
        t1, t2 = F(rng.randint(-9, 9), rng.randint(1, 5)), F(rng.randint(-9, 9), rng.randint(1, 5))
        t3 = block.compose_params(t1, t2)
        assert block.rotation(t1) @ block.rotation(t2) == block.rotation(t3)
        r = block.rotation(t1)
        assert r.T @ s @ r == s and block.contains(r)
    half = block.rotation(None)
    assert half == D(-1, -1, 1, 1)
    c, s_ = CircleParam(F(1, 2)).cos_sin()
    assert c * c + s_ * s_ == 1 and (c, s_) == (F(3, 5), F(4, 5))


def test_continuous_reps_in_distinct_components():
    st, _ = run("Sol04", 1)
    block = st.continuous_block
    for a, b in itertools.combinations(st.component_reps, 2):
        assert not block.contains(inverse(a) @ b)


def test_completeness_evidence():
    st, s = run("Nil4", 2, trials=300, seed=3)
    assert st.evidence.trials == 300 and st.evidence.hits > 0 and st.evidence.ok
    empty = randomized_completeness_check(algebra("Nil4"), aut_family("Nil4"), s, st.component_reps, 0, 1)
    assert empty.trials == 0 and empty.hits == 0 and empty.ok


def test_completeness_rediscovers_removed_element():
    st, s = run("Sol3xR", 1)
    removed = st.component_reps[5]
    found = [a for a in st.component_reps if a != removed]
    ev = randomized_completeness_check(algebra("Sol3xR"), aut_family("Sol3xR"), s, found, 500, 0)
    assert ev.violations == [removed]


def test_scaling_invariance():
    st, s = run("Sol3xR", 1, trials=0)
    g, fam = algebra("Sol3xR"), aut_family("Sol3xR")
    for c in (F(1, 7), F(5, 2), F(9)):
        assert stabilizer(g, fam, s * c, trials=0).component_reps == st.component_reps


@pytest.mark.parametrize("group, case", all_cases())
def test_conjugation_covariance(group, case):
    st, s = run(group, case, trials=0)
    g, fam = algebra(group), aut_family(group)
    rng = random.Random(17)
    for _ in range(5):
        b = rng.choice(fam.branches)
        th = b.instantiate(b.sample(rng))
        moved = stabilizer(g, fam, pullback_metric(th, s), trials=0)
        conj = [th @ a @ inverse(th) for a in st.component_reps]
        if st.continuous_block is None:
            assert sorted(conj, key=RationalMatrix.sort_key) == moved.component_reps
        else:
            blk = moved.continuous_block
            assert len(moved.component_reps) == len(conj)
            for x in conj:
                assert sum(blk.contains(inverse(r) @ x) for r in moved.component_reps) == 1


def test_nil4_forcing_determinant():
    branch = aut_family("Nil4").identity_branch
    alpha, beta, gamma = F(2), F(3, 2), F(5, 3)
    s = metric_matrix("Nil4", 2, dict(alpha=alpha, beta=beta, gamma=gamma))
    coeffs, _ = linear_forcing_system(branch, s, ("x", "e"), [(0, 2), (1, 2)])
    det = coeffs.det()
    for a, d, e in [(1, 1, 0), (2, -3, 5), (F(1, 2), 7, F(-2, 3))]:
        vals = {"a": F(a), "d": F(d), "e": F(e)}
        assert det.evaluate(vals) == F(a) ** 2 * F(d) ** 3 / (alpha ** 2 * gamma ** 2)


def test_groebner_certifies_empty_branch():
    b, c = MPoly.var("b"), MPoly.var("c")
    assert groebner_basis([b * b - 2, b * c - 1, c - 1]) == [MPoly.const(1)]


def test_nonlinear_residual_is_reported():
    # a^2 + b^2 = 1 has infinitely many rational points and no linear or
    # univariate consequence, so the solver has to give up loudly
    fam = AutFamily((
        Branch(
            (Param("a"), Param("b")),
            (("a", "-b", "0", "0"), ("b", "a", "0", "0"), ("0", "0", "1", "0"), ("0", "0", "0", "1")),
        ),
    ))
    with pytest.raises(NonlinearResidualError):
        discrete_stabilizer(LieAlgebra(4), fam, RationalMatrix.identity(4))
