"""Finite matrix groups: closure, invariants and naming.

Naming is deliberately narrow. A group is matched on the tuple
(order, abelian, element-order profile, center order) against the handful
of types that occur for the catalog metrics; everything else comes back
as ``unidentified`` with its invariants attached.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .catalog import GroupName
from .exact import RationalMatrix, SingularMatrixError
from .lie import LieAlgebra, is_nilpotent, is_solvable, is_type_R_sampled, is_unimodular
from .stabilizer import StabilizerResult


class GroupClosureError(ValueError):
    pass


class PredicateError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteMatrixGroup:
    elements: tuple[RationalMatrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, m: RationalMatrix) -> bool:
        return m in set(self.elements)

    @classmethod
    def from_elements(cls, elements: Iterable[RationalMatrix]) -> "FiniteMatrixGroup":
        """Wrap a set that is already a group; raises if it is not closed."""
        elems = sorted(set(elements), key=RationalMatrix.sort_key)
        if not elems:
            raise GroupClosureError("empty set is not a group")
        pool = set(elems)
        n = elems[0].rows
        if RationalMatrix.identity(n) not in pool:
            raise GroupClosureError("identity missing")
        for a in elems:
            if a.inverse() not in pool:
                raise GroupClosureError("not closed under inversion")
            for b in elems:
                if a @ b not in pool:
                    raise GroupClosureError("not closed under multiplication")
        return cls(tuple(elems))


def closure(generators: Sequence[RationalMatrix], cap: int = 64) -> FiniteMatrixGroup:
    """Breadth-first saturation under right multiplication by generators."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    gens = list(generators)
    if not gens:
        raise ValueError("closure needs at least one generator")
    for g in gens:
        if g.det() == 0:
            raise SingularMatrixError("singular generator")
    eye = RationalMatrix.identity(gens[0].rows)
    seen = {eye}
    frontier = [eye]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise GroupClosureError(f"more than {cap} elements; group may be infinite")
                    nxt.append(y)
        frontier = nxt
    # a finite monoid of invertible matrices is a group, so inverses are already in
    return FiniteMatrixGroup(tuple(sorted(seen, key=RationalMatrix.sort_key)))


def element_order(m: RationalMatrix, cap: int = 64) -> int:
    eye = RationalMatrix.identity(m.rows)
    p = m
    for k in range(1, cap + 1):
        if p == eye:
            return k
        p = p @ m
    raise GroupClosureError(f"element order exceeds {cap}")


def order_profile(g: FiniteMatrixGroup) -> dict[int, int]:
    out: dict[int, int] = {}
    for m in g.elements:
        k = element_order(m)
        out[k] = out.get(k, 0) + 1
    return dict(sorted(out.items()))


def is_abelian(g: FiniteMatrixGroup) -> bool:
    return all(a @ b == b @ a for i, a in enumerate(g.elements) for b in g.elements[i + 1:])


def center_order(g: FiniteMatrixGroup) -> int:
    return sum(1 for a in g.elements if all(a @ b == b @ a for b in g.elements))


def invariants(g: FiniteMatrixGroup) -> tuple:
    return (g.order, is_abelian(g), tuple(order_profile(g).items()), center_order(g))


_LABELS = {
    "trivial": "1",
    "Z2": "Z₂",
    "Z2xZ2": "(Z₂)²",
    "Z2xZ2xZ2": "(Z₂)³",
    "Z4": "Z₄",
    "D4": "D(4)",
    "D4xZ2": "D(4)×Z₂",
}


@dataclass(frozen=True)
class GroupType:
    """Isomorphism type name plus the invariants it was read from.

    ``name`` is one of trivial, Z2, Z2xZ2, Z2xZ2xZ2, Z4, D4, D4xZ2,
    O2_extension or unidentified.
    """

    name: str
    order: "int | str"
    profile: dict = field(default_factory=dict)
    invariants: tuple = ()
    components: int | None = None
    finite_part: "GroupType | None" = None

    @property
    def label(self) -> str:
        if self.name == "O2_extension":
            inner = self.finite_part
            if inner is None or inner.name == "trivial":
                return "O(2)"
            return f"O(2)×{inner.label}"
        if self.name == "unidentified":
            return f"unidentified{self.invariants}"
        return _LABELS[self.name]

    def to_json(self) -> dict:
        out = {"type": self.name, "order": self.order, "profile": {str(k): v for k, v in self.profile.items()}}
        if self.components is not None:
            out["components"] = self.components
        if self.finite_part is not None:
            out["finite_part"] = self.finite_part.name
        if self.name == "unidentified":
            order, abelian, profile, center = self.invariants
            out["invariants"] = {
                "order": order,
                "abelian": abelian,
                "profile": {str(k): v for k, v in profile},
                "center_order": center,
            }
        return out


def identify(g: FiniteMatrixGroup) -> GroupType:
    inv = invariants(g)
    order, abelian, profile_items, _center = inv
    profile = dict(profile_items)
    involutions_only = set(profile) <= {1, 2}
    name = "unidentified"
    if order == 1:
        name = "trivial"
    elif order == 2:
        name = "Z2"
    elif order == 4 and abelian and involutions_only:
        name = "Z2xZ2"
    elif order == 4 and 4 in profile:
        name = "Z4"
    elif order == 8 and abelian and involutions_only:
        name = "Z2xZ2xZ2"
    elif order == 8 and not abelian and profile == {1: 1, 2: 5, 4: 2}:
        name = "D4"
    elif order == 16 and not abelian and profile == {1: 1, 2: 11, 4: 4}:
        name = "D4xZ2"
    return GroupType(name, order, profile, inv)


def dihedral_witness(g: FiniteMatrixGroup) -> tuple[RationalMatrix, RationalMatrix] | None:
    """(r, s) with r^4 = s^2 = 1, s r s = r^-1 generating g, if g is dihedral of order 8."""
    if g.order != 8:
        return None
    eye = RationalMatrix.identity(g.elements[0].rows)
    for r in g.elements:
        if element_order(r) != 4:
            continue
        rinv = r.inverse()
        for s in g.elements:
            if s != eye and s @ s == eye and s @ r @ s == rinv and closure([r, s]).order == 8:
                return r, s
    return None


def stabilizer_type(st: StabilizerResult) -> GroupType:
    """Finite type, or O2_extension carrying the component count and pi_0 invariants."""
    if st.identity_component_dim == 0:
        return identify(FiniteMatrixGroup.from_elements(st.component_reps))
    pi0 = FiniteMatrixGroup.from_elements(st.component_reps)
    inner = identify(FiniteMatrixGroup.from_elements(st.reflection_free_reps()))
    return GroupType(
        "O2_extension",
        "infinite",
        order_profile(pi0),
        invariants(pi0),
        components=pi0.order,
        finite_part=inner,
    )


@dataclass(frozen=True)
class IsometryDescriptor:
    group: GroupName
    case: "int | str"
    stabilizer: GroupType
    dim: int
    structure: str

    def to_json(self) -> dict:
        return {
            "group": self.group.value,
            "case": self.case,
            "stabilizer": self.stabilizer.to_json(),
            "isometry_group": self.structure,
        }


def check_formula_predicates(g: LieAlgebra, samples: int = 100, seed: int = 0) -> str:
    """Which semidirect-product formula applies: 'nilpotent' or 'type-R'."""
    if is_nilpotent(g):
        return "nilpotent"
    if is_solvable(g) and is_unimodular(g) and is_type_R_sampled(g, samples, seed):
        return "type-R"
    raise PredicateError("algebra is neither nilpotent nor unimodular solvable of type (R)")


def isom_descriptor(
    name: "GroupName | str",
    st: StabilizerResult,
    case: "int | str" = 1,
    g: LieAlgebra | None = None,
) -> IsometryDescriptor:
    from .catalog import algebra

    name = GroupName.parse(name)
    check_formula_predicates(g if g is not None else algebra(name))
    t = stabilizer_type(st)
    base = name.display
    if t.name == "trivial":
        structure = base
    else:
        label = t.label
        if "×" in label and not label.startswith("("):
            label = f"({label})"
        structure = f"{base} ⋊ {label}"
        if t.name == "O2_extension":
            structure += f" [{t.components} components, dim {st.identity_component_dim}]"
    return IsometryDescriptor(name, case, t, st.identity_component_dim, structure)
