"""Re-derive every isometry-group result at default parameters and compare.

``EXPECTED`` holds the published claims verbatim: one row per (group,
metric case) with the stabilizer type and, for the continuous cases, the
identity-component dimension and the number of components. The order
census for Sol3xR metric 1 is checked as part of its row.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .catalog import GroupName, algebra, aut_family
from .exact import fmt
from .groupid import isom_descriptor
from .metrics import case_ids, default_params, metric_matrix, normalize_params
from .stabilizer import StabilizerError, stabilizer


@dataclass(frozen=True)
class Expected:
    group: GroupName
    case: int
    type: str
    order: "int | str"
    dim: int = 0
    components: int | None = None
    profile: Mapping[int, int] | None = None
    claim: str = ""


G = GroupName
EXPECTED: tuple[Expected, ...] = (
    Expected(G.NIL3XR, 1, "O2_extension", "infinite", 1, 8, claim="diag{±1, ±1, O(2)}"),
    Expected(G.NIL4, 1, "Z2xZ2", 4, claim="(Z₂)²"),
    Expected(G.NIL4, 2, "Z2", 2, claim="Z₂"),
    Expected(G.SOLMN4, 1, "Z2xZ2xZ2", 8, claim="(Z₂)³"),
    Expected(G.SOLMN4, 2, "Z2xZ2", 4, claim="(Z₂)²"),
    Expected(G.SOLMN4, 3, "Z2", 2, claim="Z₂"),
    Expected(G.SOL3XR, 1, "D4xZ2", 16, profile={1: 1, 2: 11, 4: 4}, claim="D(4)×Z₂"),
    Expected(G.SOL3XR, 2, "Z2xZ2", 4, claim="(Z₂)²"),
    Expected(G.SOL3XR, 3, "Z2", 2, claim="Z₂"),
    Expected(G.SOL04, 1, "O2_extension", "infinite", 1, 4, claim="diag{O(2), ±1, 1}"),
    Expected(G.SOL04, 2, "Z2xZ2", 4, claim="(Z₂)²"),
    Expected(G.SOL0P4, 1, "Z2xZ2", 4, claim="(Z₂)²"),
    Expected(G.SOL0P4, 2, "Z2", 2, claim="Z₂"),
    Expected(G.SOL14, 1, "D4", 8, claim="D(4)"),
    Expected(G.SOL14, 2, "Z2", 2, claim="Z₂"),
    Expected(G.SOL14, 3, "trivial", 1, claim="{I₄}"),
)


@dataclass
class Row:
    group: GroupName
    case: int
    params: dict[str, Fraction]
    expected: Expected
    computed_type: str = ""
    computed_order: "int | str" = ""
    computed_dim: int | None = None
    computed_components: int | None = None
    computed_profile: dict[int, int] = field(default_factory=dict)
    structure: str = ""
    hits: int = 0
    violations: int = 0
    error: str = ""
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.error

    def expected_text(self) -> str:
        e = self.expected
        if e.type == "O2_extension":
            return f"dim {e.dim}, {e.components} components"
        return f"{e.type} (order {e.order})"

    def computed_text(self) -> str:
        if self.error:
            return f"error: {self.error}"
        if self.computed_type == "O2_extension":
            return f"dim {self.computed_dim}, {self.computed_components} components"
        return f"{self.computed_type} (order {self.computed_order})"

    def to_json(self) -> dict:
        return {
            "group": self.group.value,
            "case": self.case,
            "params": {k: fmt(v) for k, v in sorted(self.params.items())},
            "claim": self.expected.claim,
            "expected": self.expected_text(),
            "computed": self.computed_text(),
            "profile": {str(k): v for k, v in self.computed_profile.items()},
            "isometry_group": self.structure,
            "evidence": {"hits": self.hits, "violations": self.violations},
            "status": "match" if self.ok else "MISMATCH",
            "mismatches": self.mismatches,
        }


def _compare(row: Row) -> None:
    e = row.expected
    pairs = [("type", e.type, row.computed_type), ("order", e.order, row.computed_order)]
    if e.type == "O2_extension":
        pairs += [("dim", e.dim, row.computed_dim), ("components", e.components, row.computed_components)]
    else:
        pairs.append(("dim", 0, row.computed_dim))
    if e.profile is not None:
        pairs.append(("profile", dict(e.profile), row.computed_profile))
    if row.violations:
        pairs.append(("completeness violations", 0, row.violations))
    row.mismatches = [f"{k}: expected {a}, computed {b}" for k, a, b in pairs if a != b]


def run_row(
    exp: Expected,
    params: Mapping[str, Fraction] | None = None,
    weights: Sequence | None = None,
    trials: int = 200,
    seed: int = 0,
) -> Row:
    p = default_params(exp.group, exp.case)
    p.update(normalize_params(params or {}))
    row = Row(exp.group, exp.case, p, exp)
    g = algebra(exp.group, weights if exp.group is GroupName.SOLMN4 else None)
    try:
        s = metric_matrix(exp.group, exp.case, p)
        st = stabilizer(g, aut_family(exp.group), s, trials=trials, seed=seed)
    except (StabilizerError, ValueError) as err:
        row.error = str(err)
        return row
    desc = isom_descriptor(exp.group, st, exp.case, g)
    row.computed_type = desc.stabilizer.name
    row.computed_order = st.finite_order
    row.computed_dim = st.identity_component_dim
    row.computed_components = st.components if st.identity_component_dim else None
    row.computed_profile = dict(desc.stabilizer.profile)
    row.structure = desc.structure
    row.hits = st.evidence.hits
    row.violations = len(st.evidence.violations)
    _compare(row)
    return row


@dataclass
class Report:
    rows: list[Row]
    seed: int
    trials: int
    weights: tuple[Fraction, ...] | None = None

    @property
    def matched(self) -> int:
        return sum(r.ok for r in self.rows)

    @property
    def ok(self) -> bool:
        return self.matched == len(self.rows)


def reproduce(
    weights: Sequence | None = None,
    trials: int = 200,
    seed: int = 0,
    params: Mapping[str, Fraction] | None = None,
    only: Sequence[tuple[GroupName, int]] | None = None,
) -> Report:
    """Run every expected row; ``params`` overrides defaults where a case admits them."""
    rows = []
    for exp in EXPECTED:
        if only is not None and (exp.group, exp.case) not in only:
            continue
        assert exp.case in case_ids(exp.group)
        rows.append(run_row(exp, params, weights, trials, seed))
    w = tuple(Fraction(x) for x in weights) if weights is not None else None
    return Report(rows, seed, trials, w)


# ---------------------------------------------------------------------------
# rendering

_COLUMNS = ("group", "case", "claim", "expected", "computed", "isometry group", "status")


def _cells(r: Row) -> list[str]:
    return [
        r.group.value,
        str(r.case),
        r.expected.claim,
        r.expected_text(),
        r.computed_text(),
        r.structure,
        "match" if r.ok else "MISMATCH",
    ]


def render_table(rep: Report) -> str:
    body = [list(_COLUMNS)] + [_cells(r) for r in rep.rows]
    widths = [max(len(row[k]) for row in body) for k in range(len(_COLUMNS))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in body]
    lines.insert(1, "  ".join("-" * w for w in widths))
    for r in rep.rows:
        for m in r.mismatches:
            lines.append(f"{r.group.value} case {r.case}: {m}")
    lines.append(f"{rep.matched}/{len(rep.rows)} match (seed {rep.seed}, trials {rep.trials})")
    return "\n".join(lines) + "\n"


def render_json(rep: Report) -> str:
    data = {
        "seed": rep.seed,
        "trials": rep.trials,
        "weights": None if rep.weights is None else [fmt(w) for w in rep.weights],
        "matched": rep.matched,
        "total": len(rep.rows),
        "rows": [r.to_json() for r in rep.rows],
    }
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def render_csv(rep: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["group", "case", "claim", "expected", "computed", "isometry_group", "status", "mismatches"])
    for r in rep.rows:
        cells = _cells(r)
        w.writerow(cells[:6] + [cells[6], "; ".join(r.mismatches)])
    return buf.getvalue()


RENDERERS = {"table": render_table, "json": render_json, "csv": render_csv}
