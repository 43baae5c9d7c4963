import random
from fractions import Fraction as F

import pytest

from isom4.catalog import (
    AutFamily,
    GroupName,
    algebra,
    aut_family,
    catalog_json,
    check_weights,
    load_catalog,
    verify_aut_family,
    write_catalog,
)
from isom4.exact import RationalMatrix
from isom4.lie import LieAlgebra, check_jacobi, is_unimodular


def test_names_parse_loosely():
    assert GroupName.parse("sol3xr") is GroupName.SOL3XR
    assert GroupName.parse("NIL4") is GroupName.NIL4
    with pytest.raises(ValueError):
        GroupName.parse("Heis3")


def test_identity_members():
    b = aut_family("Nil3xR").identity_branch
    vals = dict(a=1, b=0, c=0, d=1, e=1, x=0, y=0, z=0, u=0, v=0)
    assert b.instantiate(vals) == RationalMatrix.identity(4)


def test_nil4_member_entries():
    m = aut_family("Nil4").identity_branch.instantiate(dict(a=1, d=1, e=5, b=0, x=0, y=0, z=0))
    assert m[0, 1] == 5 and m[1, 2] == 5


def test_sol14_second_branch():
    m = aut_family("Sol14").branches[1].instantiate(dict(b=1, c=1, p=0, q=0, x=0))
    assert m == RationalMatrix([[-1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]])


def test_inadmissible_parameters_rejected():
    b = aut_family("Nil3xR").identity_branch
    with pytest.raises(ValueError):
        b.instantiate(dict(a=1, b=1, c=1, d=1, e=1, x=0, y=0, z=0, u=0, v=0))


@pytest.mark.parametrize("name", list(GroupName))
def test_families_are_automorphisms(name):
    assert verify_aut_family(name, 200, 0)


def test_fault_injection_breaks_family():
    broken = LieAlgebra(4, {(1, 3): [1, 0, 0, 0], (1, 2): [1, 0, 0, 0]})
    assert not verify_aut_family("Nil4", 50, 0, target=broken)


def test_abelian_target_accepts_any_family():
    # every invertible matrix is an automorphism of the abelian algebra
    assert verify_aut_family("Nil4", 50, 0, target=LieAlgebra(4))


@pytest.mark.parametrize("name", ["Sol3xR", "Sol14"])
def test_second_branch_products_land_in_first(name):
    fam = aut_family(name)
    rng = random.Random(1)
    b2 = fam.branches[1]
    for _ in range(10):
        p = b2.instantiate(b2.sample(rng)) @ b2.instantiate(b2.sample(rng))
        assert p[3, 3] == 1


def test_weights_validation():
    assert check_weights((1, 2, -3)) == (1, 2, -3)
    for bad in [(1, 1, -2), (0, 1, -1), (1, 2, 3), (1, 2)]:
        with pytest.raises(ValueError):
            check_weights(bad)
    g = algebra("SolMN4", (F(1, 2), F(1, 3), F(-5, 6)))
    assert check_jacobi(g) and is_unimodular(g)


def test_parameter_classes():
    assert aut_family("Nil4").identity_branch.scale_params() == ("a", "d")
    assert aut_family("SolMN4").identity_branch.translation_params() == ("x", "y", "z")


def test_catalog_file_round_trip(tmp_path):
    path = tmp_path / "catalog.json"
    write_catalog(path)
    loaded = load_catalog(path)
    assert set(loaded) == set(GroupName)
    for name, entry in loaded.items():
        assert entry.algebra == algebra(name)
        assert entry.family == aut_family(name)
    assert AutFamily.from_json(catalog_json()["groups"]["Sol14"]["aut_family"]) == aut_family("Sol14")
