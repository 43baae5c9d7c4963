"""The seven simply connected unimodular 4-dimensional groups of interest.

Each group comes with its Lie algebra in the basis (e1, e2, e3, e4) and the
parameterized family describing its automorphism group. The structure
constants are the ones for which every family member preserves the bracket;
:func:`verify_aut_family` checks that on random members.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Mapping, Sequence

from .exact import RationalMatrix, SingularMatrixError, fmt, to_rational
from .expr import MPoly, PolyMatrix, parse_expr
from .lie import LieAlgebra, is_automorphism


class GroupName(str, enum.Enum):
    NIL3XR = "Nil3xR"
    NIL4 = "Nil4"
    SOLMN4 = "SolMN4"
    SOL3XR = "Sol3xR"
    SOL04 = "Sol04"
    SOL0P4 = "Sol0p4"
    SOL14 = "Sol14"

    @classmethod
    def parse(cls, text: "str | GroupName") -> "GroupName":
        if isinstance(text, GroupName):
            return text
        key = text.strip().lower()
        for g in cls:
            if g.value.lower() == key:
                return g
        raise ValueError(f"unknown group {text!r}; expected one of {[g.value for g in cls]}")

    @property
    def display(self) -> str:
        return _DISPLAY[self]

    @property
    def nilpotent(self) -> bool:
        return self in (GroupName.NIL3XR, GroupName.NIL4)


_DISPLAY = {
    GroupName.NIL3XR: "Nil³×ℝ",
    GroupName.NIL4: "Nil⁴",
    GroupName.SOLMN4: "Sol⁴ₘ,ₙ",
    GroupName.SOL3XR: "Sol³×ℝ",
    GroupName.SOL04: "Sol₀⁴",
    GroupName.SOL0P4: "Sol₀'⁴",
    GroupName.SOL14: "Sol₁⁴",
}

DEFAULT_WEIGHTS = (Fraction(1), Fraction(2), Fraction(-3))


def check_weights(weights: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    """Validate a Sol⁴ₘ,ₙ weight triple: three distinct nonzero rationals summing to 0."""
    w = tuple(to_rational(x) for x in weights)
    if len(w) != 3:
        raise ValueError(f"need three weights, got {len(w)}")
    if sum(w) != 0:
        raise ValueError(f"weights {[fmt(x) for x in w]} do not sum to 0")
    if len(set(w)) != 3 or 0 in w:
        raise ValueError(f"weights {[fmt(x) for x in w]} must be distinct and nonzero")
    return w


def _e(k: int, c=1) -> list:
    v = [0, 0, 0, 0]
    v[k - 1] = c
    return v


def algebra(name: "GroupName | str", weights: Sequence | None = None) -> LieAlgebra:
    name = GroupName.parse(name)
    if weights is not None and name is not GroupName.SOLMN4:
        raise ValueError("weights only apply to SolMN4")
    # brackets keyed 1-based here, converted below
    if name is GroupName.NIL3XR:
        br = {(3, 4): _e(1)}
    elif name is GroupName.NIL4:
        br = {(2, 4): _e(1), (3, 4): _e(2)}
    elif name is GroupName.SOLMN4:
        w = check_weights(DEFAULT_WEIGHTS if weights is None else weights)
        br = {(4, i): _e(i, w[i - 1]) for i in (1, 2, 3)}
    elif name is GroupName.SOL3XR:
        br = {(4, 2): _e(2), (4, 3): _e(3, -1)}
    elif name is GroupName.SOL04:
        br = {(4, 1): _e(1), (4, 2): _e(2), (4, 3): _e(3, -2)}
    elif name is GroupName.SOL0P4:
        br = {(4, 1): _e(1), (4, 2): [1, 1, 0, 0], (4, 3): _e(3, -2)}
    else:
        br = {(2, 3): _e(1), (4, 2): _e(2), (4, 3): _e(3, -1)}
    return LieAlgebra(4, {(i - 1, j - 1): v for (i, j), v in br.items()})


# ---------------------------------------------------------------------------
# automorphism families


@dataclass(frozen=True)
class Param:
    name: str
    domain: str = "free"  # "free" | "nonzero" | "positive"

    def admits(self, value: Fraction) -> bool:
        if self.domain == "nonzero":
            return value != 0
        if self.domain == "positive":
            return value > 0
        return True


@dataclass(frozen=True)
class Branch:
    """One connected piece of an automorphism family.

    ``template`` is a 4x4 grid of expressions in the parameters;
    ``nonzero`` lists extra expressions that must not vanish (e.g. the
    determinant of a GL(2) block).
    """

    params: tuple[Param, ...]
    template: tuple[tuple[str, ...], ...]
    nonzero: tuple[str, ...] = ()

    @cached_property
    def matrix(self) -> PolyMatrix:
        return PolyMatrix([[parse_expr(x) for x in row] for row in self.template])

    @cached_property
    def nonzero_polys(self) -> tuple[MPoly, ...]:
        return tuple(parse_expr(x) for x in self.nonzero)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def param(self, name: str) -> Param:
        return next(p for p in self.params if p.name == name)

    def admissible(self, values: Mapping[str, Fraction]) -> bool:
        if any(not p.admits(values[p.name]) for p in self.params if p.name in values):
            return False
        for expr in self.nonzero_polys:
            if expr.variables() <= values.keys() and expr.evaluate(values) == 0:
                return False
        return True

    def instantiate(self, values: Mapping[str, object]) -> RationalMatrix:
        vals = {k: to_rational(v) for k, v in values.items()}
        missing = set(self.names) - vals.keys()
        if missing:
            raise ValueError(f"missing parameters {sorted(missing)}")
        if not self.admissible(vals):
            raise ValueError(f"inadmissible parameters {({k: fmt(v) for k, v in vals.items()})}")
        return self.matrix.evaluate(vals)

    def sample(self, rng: random.Random) -> dict[str, Fraction]:
        """Random admissible assignment on the p/q grid (|p| <= 9, q in {1,2,3})."""
        while True:
            vals = {
                p.name: Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3))) for p in self.params
            }
            if self.admissible(vals):
                return vals

    def entry_positions(self) -> dict[str, tuple[int, int]]:
        """For each parameter written alone in some entry, that entry's position."""
        out = {}
        for i, row in enumerate(self.template):
            for j, text in enumerate(row):
                t = text.strip()
                if t in self.names and t not in out:
                    out[t] = (i, j)
        return out

    def scale_params(self) -> tuple[str, ...]:
        """Parameters sitting in diagonal or block positions.

        A parameter is scale-type when it occurs on the diagonal, below it, or
        at (i, j) with a nonzero mirror entry (j, i); the rest are
        translation-type and get forced linearly by the metric.
        """
        m = self.matrix
        scale: set[str] = set()
        for i in range(m.rows):
            for j in range(m.cols):
                if i >= j or not m[j, i].is_zero():
                    scale |= m[i, j].variables()
        return tuple(n for n in self.names if n in scale)

    def translation_params(self) -> tuple[str, ...]:
        s = set(self.scale_params())
        return tuple(n for n in self.names if n not in s)

    def to_json(self) -> dict:
        return {
            "params": [{"name": p.name, "domain": p.domain} for p in self.params],
            "nonzero": list(self.nonzero),
            "template": [list(r) for r in self.template],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Branch":
        return cls(
            params=tuple(Param(p["name"], p.get("domain", "free")) for p in data["params"]),
            template=tuple(tuple(r) for r in data["template"]),
            nonzero=tuple(data.get("nonzero", ())),
        )


@dataclass(frozen=True)
class AutFamily:
    branches: tuple[Branch, ...]

    @property
    def identity_branch(self) -> Branch:
        return self.branches[0]

    def parameter_count(self) -> int:
        return len(self.identity_branch.params)

    def to_json(self) -> dict:
        return {"branches": [b.to_json() for b in self.branches]}

    @classmethod
    def from_json(cls, data: Mapping) -> "AutFamily":
        return cls(tuple(Branch.from_json(b) for b in data["branches"]))


def _params(nonzero: str, free: str) -> tuple[Param, ...]:
    return tuple(Param(n, "nonzero") for n in nonzero.split()) + tuple(
        Param(n) for n in free.split()
    )


def _grid(text: str) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(cell.strip() for cell in row.split(",")) for row in text.strip().split(";"))


_FAMILIES: dict[GroupName, AutFamily] = {
    GroupName.NIL3XR: AutFamily((
        Branch(
            _params("e", "a b c d x y z u v"),
            _grid("a*d - b*c, x, y, u; 0, e, z, v; 0, 0, a, b; 0, 0, c, d"),
            nonzero=("a*d - b*c",),
        ),
    )),
    GroupName.NIL4: AutFamily((
        Branch(
            _params("a d", "b e x y z"),
            _grid("a*d*d, e*d, x, y; 0, a*d, e, z; 0, 0, a, b; 0, 0, 0, d"),
        ),
    )),
    GroupName.SOLMN4: AutFamily((
        Branch(
            _params("a b c", "x y z"),
            _grid("a, 0, 0, x; 0, b, 0, y; 0, 0, c, z; 0, 0, 0, 1"),
        ),
    )),
    GroupName.SOL3XR: AutFamily((
        Branch(
            _params("e a d", "x y z"),
            _grid("e, 0, 0, x; 0, a, 0, y; 0, 0, d, z; 0, 0, 0, 1"),
        ),
        Branch(
            _params("e b c", "x y z"),
            _grid("e, 0, 0, x; 0, 0, b, y; 0, c, 0, z; 0, 0, 0, -1"),
        ),
    )),
    GroupName.SOL04: AutFamily((
        Branch(
            _params("e", "a b c d x y z"),
            _grid("a, b, 0, x; c, d, 0, y; 0, 0, e, z; 0, 0, 0, 1"),
            nonzero=("a*d - b*c",),
        ),
    )),
    GroupName.SOL0P4: AutFamily((
        Branch(
            _params("a e", "b x y z"),
            _grid("a, b, 0, x; 0, a, 0, y; 0, 0, e, z; 0, 0, 0, 1"),
        ),
    )),
    GroupName.SOL14: AutFamily((
        Branch(
            _params("a d", "x p q"),
            _grid("a*d, -a*q, -d*p, x; 0, a, 0, p; 0, 0, d, q; 0, 0, 0, 1"),
        ),
        Branch(
            _params("b c", "x p q"),
            _grid("-b*c, c*p, b*q, x; 0, 0, b, p; 0, c, 0, q; 0, 0, 0, -1"),
        ),
    )),
}


def aut_family(name: "GroupName | str") -> AutFamily:
    return _FAMILIES[GroupName.parse(name)]


def verify_aut_family(
    name: "GroupName | str",
    n_samples: int,
    seed: int,
    *,
    target: LieAlgebra | None = None,
    family: AutFamily | None = None,
) -> bool:
    """Every sampled member of every branch is a nonsingular automorphism.

    ``target`` and ``family`` override the catalog entries (used for
    fault injection and for checking a loaded catalog file).
    """
    g = target if target is not None else algebra(name)
    fam = family if family is not None else aut_family(name)
    rng = random.Random(seed)
    for branch in fam.branches:
        for _ in range(n_samples):
            a = branch.instantiate(branch.sample(rng))
            try:
                if not is_automorphism(g, a):
                    return False
            except SingularMatrixError:
                return False
    return True


# ---------------------------------------------------------------------------
# catalog.json


def catalog_json(weights: Sequence | None = None) -> dict:
    return {
        "groups": {
            g.value: {
                "algebra": algebra(g, weights if g is GroupName.SOLMN4 else None).to_json(),
                "aut_family": aut_family(g).to_json(),
            }
            for g in GroupName
        }
    }


def write_catalog(path: "str | Path", weights: Sequence | None = None) -> None:
    Path(path).write_text(json.dumps(catalog_json(weights), indent=2) + "\n")


@dataclass
class CatalogEntry:
    algebra: LieAlgebra
    family: AutFamily = field(repr=False)


def load_catalog(path: "str | Path") -> dict[GroupName, CatalogEntry]:
    data = json.loads(Path(path).read_text())
    out = {}
    for key, entry in data["groups"].items():
        g = GroupName.parse(key)
        out[g] = CatalogEntry(
            LieAlgebra.from_json(entry["algebra"]),
            AutFamily.from_json(entry["aut_family"]) if "aut_family" in entry else aut_family(g),
        )
    return out
