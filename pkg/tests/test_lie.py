import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isom4.catalog import GroupName, algebra, aut_family
from isom4.exact import Polynomial, RationalMatrix, SingularMatrixError, char_poly
from isom4.expr import MPoly, PolyMatrix
from isom4.lie import (
    LieAlgebra,
    ad,
    basis_vector,
    bracket,
    check_jacobi,
    derivations,
    derived_series,
    is_automorphism,
    is_derivation,
    is_nilpotent,
    is_solvable,
    is_type_R_sampled,
    is_unimodular,
    lower_central_series,
    random_vector,
)

ABELIAN = LieAlgebra(4)
e = [basis_vector(4, i) for i in range(4)]
NILPOTENT = (GroupName.NIL3XR, GroupName.NIL4)
coords = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=3), min_size=4, max_size=4)


def test_abelian_basics():
    assert check_jacobi(ABELIAN) and is_unimodular(ABELIAN)
    assert is_nilpotent(ABELIAN) and is_solvable(ABELIAN)
    assert len(derivations(ABELIAN)) == 16
    assert ad(ABELIAN, e[0]).is_zero()
    assert is_type_R_sampled(ABELIAN, 20, 0)


def test_catalog_brackets():
    assert bracket(algebra("Nil4"), e[2], e[3]) == e[1]
    assert bracket(algebra("Sol14"), e[1], e[2]) == e[0]
    assert bracket(algebra("Nil4"), e[3], e[3]) == (0, 0, 0, 0)


def test_jacobi_failure_detected():
    g = LieAlgebra(3, {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]})
    # the cyclic sum at (e1, e2, e3) equals -e3
    assert not check_jacobi(g)


@pytest.mark.parametrize("name", list(GroupName))
def test_catalog_predicates(name):
    g = algebra(name)
    assert check_jacobi(g)
    assert is_unimodular(g)
    assert is_nilpotent(g) == (name in NILPOTENT)
    assert is_solvable(g)


def test_non_unimodular_example():
    assert not is_unimodular(LieAlgebra(2, {(0, 1): [0, 1]}))


def test_series_dimensions():
    assert lower_central_series(algebra("Nil4")) == [4, 2, 1, 0]
    assert lower_central_series(algebra("Nil3xR")) == [4, 1, 0]
    assert derived_series(algebra("Sol14")) == [4, 3, 1, 0]
    assert lower_central_series(algebra("Sol14"))[-1] != 0


def test_ad_examples():
    a = ad(algebra("Sol04"), e[3])
    assert char_poly(a) == Polynomial.from_roots([1, 1, -2, 0])
    n = ad(algebra("Nil4"), e[3])
    n2 = n @ n
    assert n2.apply(e[2])[0] in (1, -1) and (n2 @ n).is_zero()
    sol3 = ad(algebra("Sol3xR"), e[3])
    assert char_poly(sol3) == Polynomial.from_roots([0, 0, 1, -1])


def test_solmn_ad_e4_matches_minor_expansion():
    a = ad(algebra("SolMN4"), e[3])
    lam = MPoly.var("lam")
    by_minors = PolyMatrix([[lam * (i == j) - a[i, j] for j in range(4)] for i in range(4)]).det()
    assert by_minors.univariate("lam") == char_poly(a)
    assert char_poly(a) == Polynomial.from_roots([0, 1, 2, -3]) or char_poly(a) == Polynomial.from_roots(
        [0, -1, -2, 3]
    )


@pytest.mark.parametrize(
    "name, dim", [("Nil3xR", 10), ("Nil4", 7), ("SolMN4", 6), ("Sol3xR", 6), ("Sol04", 8), ("Sol0p4", 6), ("Sol14", 5)]
)
def test_derivation_dimensions_match_family(name, dim):
    ds = derivations(algebra(name))
    assert len(ds) == dim == aut_family(name).parameter_count()
    assert all(is_derivation(algebra(name), d) for d in ds)


def test_type_r_failure_has_witness():
    # rotation block for ad e4: [e4,e1] = e2, [e4,e2] = -e1
    g = LieAlgebra(4, {(3, 0): [0, 1, 0, 0], (3, 1): [-1, 0, 0, 0]})
    rep = is_type_R_sampled(g, 10, 0)
    assert not rep.passed and rep.witness == e[3]


@pytest.mark.parametrize("name", list(GroupName))
def test_type_r_sampling_on_catalog(name):
    rep = is_type_R_sampled(algebra(name), 50, 7)
    assert rep.passed and all(c.ok for c in rep.certificates)


def test_automorphism_examples():
    g = algebra("Nil4")
    fam = aut_family("Nil4")
    member = fam.identity_branch.instantiate(dict(a=1, d=1, b=2, e=3, x=4, y=5, z=6))
    assert is_automorphism(g, member)
    assert is_automorphism(g, RationalMatrix.identity(4))
    swap = RationalMatrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert not is_automorphism(g, swap)
    with pytest.raises(SingularMatrixError):
        is_automorphism(g, RationalMatrix.zeros(4))


def test_json_round_trip():
    for name in GroupName:
        g = algebra(name)
        assert LieAlgebra.from_json(g.to_json()) == g


@pytest.mark.parametrize("name", list(GroupName))
@given(x=coords, y=coords)
@settings(max_examples=15, deadline=None)
def test_bracket_antisymmetry_and_ad_homomorphism(name, x, y):
    g = algebra(name)
    assert bracket(g, x, y) == tuple(-c for c in bracket(g, y, x))
    lhs = ad(g, bracket(g, x, y))
    assert lhs == ad(g, x) @ ad(g, y) - ad(g, y) @ ad(g, x)


@pytest.mark.parametrize("name", list(GroupName))
def test_first_order_family_consistency(name):
    # coefficient of t in [(I+tD)x, (I+tD)y] - (I+tD)[x, y]
    g = algebra(name)
    for d in derivations(g):
        for i in range(4):
            for j in range(i + 1, 4):
                lin = [
                    a + b - c
                    for a, b, c in zip(
                        bracket(g, d.col(i), e[j]), bracket(g, e[i], d.col(j)), d.apply(bracket(g, e[i], e[j]))
                    )
                ]
                assert not any(lin)


@pytest.mark.parametrize("name", list(GroupName))
def test_automorphisms_closed_under_products_and_inverses(name):
    g = algebra(name)
    rng = random.Random(3)
    for _ in range(10):
        fam = aut_family(name)
        b1, b2 = rng.choice(fam.branches), rng.choice(fam.branches)
        a = b1.instantiate(b1.sample(rng))
        b = b2.instantiate(b2.sample(rng))
        assert is_automorphism(g, a @ b)
        assert is_automorphism(g, a.inverse())


@pytest.mark.parametrize("name", NILPOTENT)
def test_nilpotent_ad_is_nilpotent(name):
    g = algebra(name)
    rng = random.Random(11)
    for _ in range(20):
        a = ad(g, random_vector(rng, 4))
        assert (a @ a @ a @ a).is_zero()


def test_sampling_is_deterministic():
    g = algebra("Sol14")
    r1, r2 = is_type_R_sampled(g, 30, 5), is_type_R_sampled(g, 30, 5)
    assert [c.x for c in r1.certificates] == [c.x for c in r2.certificates]
    with pytest.raises(ValueError):
        is_type_R_sampled(g, 0, 5)


def test_dimension_errors():
    with pytest.raises(ValueError):
        bracket(algebra("Nil4"), (1, 0, 0), e[0])
    with pytest.raises(ValueError):
        LieAlgebra(2, {(0, 0): [1, 0]})
    assert F(0) in bracket(ABELIAN, e[0], e[1])
