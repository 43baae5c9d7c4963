"""Isometric automorphisms: {A in Aut(g) : A^T S A = S} for a Gram matrix S.

The identity component comes from the isotropy subalgebra. The component
group comes from an exact branch-by-branch solve of A^T S A = S over
the automorphism family. A seeded random search supplies extra evidence
that nothing was missed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .catalog import AutFamily, Branch
from .exact import (
    Polynomial,
    RationalMatrix,
    exact_sqrt,
    fmt,
    inverse,
    poly_gcd,
    rational_roots,
    rref,
    rref_nullspace,
)
from .expr import MPoly, PolyMatrix
from .lie import LieAlgebra, derivations, is_automorphism


class StabilizerError(RuntimeError):
    pass


class NonlinearResidualError(StabilizerError):
    """The residual system has no linear or univariate equation left to use."""

    def __init__(self, branch: int, equations: Sequence[MPoly]):
        self.branch = branch
        self.equations = list(equations)
        shown = "; ".join(str(e) for e in self.equations[:4])
        super().__init__(f"branch {branch}: nonlinear residual system ({shown})")


class IrrationalSolutionError(StabilizerError):
    def __init__(self, branch: int, var: str, poly):
        super().__init__(f"branch {branch}: {var} has irrational real roots of {poly!r}")


class UnderdeterminedError(StabilizerError):
    def __init__(self, branch: int, free: Sequence[str]):
        super().__init__(f"branch {branch}: parameters {sorted(free)} remain free")


class UnsupportedIsotropyError(StabilizerError):
    pass


# ---------------------------------------------------------------------------
# identity component


def isotropy_algebra(g: LieAlgebra, s: RationalMatrix) -> list[RationalMatrix]:
    """Basis of {D in Der(g) : D^T S + S D = 0}."""
    basis = derivations(g)
    if not basis:
        return []
    n = g.dim
    skew = [d.T @ s + s @ d for d in basis]
    rows = [[k[i, j] for k in skew] for i in range(n) for j in range(i, n)]
    out = []
    for v in rref_nullspace(RationalMatrix(rows)):
        coeffs = v.col(0)
        d = RationalMatrix.zeros(n)
        for c, b in zip(coeffs, basis):
            if c:
                d = d + b * c
        out.append(d)
    return out


@dataclass(frozen=True)
class CircleParam:
    """Rational point t on the circle; ``None`` stands for t = infinity."""

    t: Fraction | None

    def cos_sin(self) -> tuple[Fraction, Fraction]:
        if self.t is None:
            return Fraction(-1), Fraction(0)
        t2 = self.t * self.t
        return (1 - t2) / (1 + t2), 2 * self.t / (1 + t2)


@dataclass(frozen=True)
class RotationBlock:
    """One-parameter compact subgroup generated by D with D^3 = -omega2 * D."""

    generator: RationalMatrix
    omega2: Fraction

    @classmethod
    def from_generator(cls, d: RationalMatrix) -> "RotationBlock":
        omega2 = -(d @ d).trace() / 2
        if d.rank() != 2 or omega2 <= 0 or d @ d @ d != d * (-omega2):
            raise UnsupportedIsotropyError("isotropy generator is not a planar rotation")
        w = exact_sqrt(omega2)
        if w is not None:
            d, omega2 = d * (1 / w), Fraction(1)
        return cls(d, omega2)

    @property
    def plane(self) -> list[int]:
        """0-based indices touched by the generator."""
        d = self.generator
        return [i for i in range(d.rows) if any(d[i, j] or d[j, i] for j in range(d.cols))]

    def rotation(self, p: "CircleParam | Fraction | int | None") -> RationalMatrix:
        """Cayley transform (I - tD)^-1 (I + tD); t = infinity is the half turn."""
        if not isinstance(p, CircleParam):
            p = CircleParam(None if p is None else Fraction(p))
        d = self.generator
        n = d.rows
        eye = RationalMatrix.identity(n)
        if p.t is None:
            return eye + (d @ d) * (2 / self.omega2)
        return inverse(eye - d * p.t) @ (eye + d * p.t)

    def compose_params(self, t1: Fraction, t2: Fraction) -> Fraction | None:
        """Parameter of R(t1) R(t2) (tangent addition)."""
        den = 1 - self.omega2 * t1 * t2
        return None if den == 0 else (t1 + t2) / den

    def contains(self, b: RationalMatrix) -> bool:
        """B lies in the identity component {R(t)}."""
        d = self.generator
        if b @ d != d @ b or b.det() != 1:
            return False
        return all(b.apply(v.col(0)) == v.col(0) for v in rref_nullspace(d))

    def slice_vectors(self) -> tuple[tuple, tuple]:
        """(v0, v1 = D v0) spanning the rotation plane."""
        d = self.generator
        j = next(j for j in range(d.cols) if any(d.col(j)))
        v0 = (d @ d).col(j)
        return v0, d.apply(v0)

    def to_json(self) -> dict:
        return {
            "indices": [i + 1 for i in self.plane],
            "generator": self.generator.to_json(),
            "omega2": fmt(self.omega2),
            "parameterization": "cayley: R(t) = (I - tD)^-1 (I + tD), t in Q or infinity",
        }


# ---------------------------------------------------------------------------
# branch equations


def _block_starts(m: PolyMatrix) -> list[int]:
    """Start indices of the finest block-upper-triangular partition."""
    n = m.rows
    return [0] + [
        k for k in range(1, n)
        if all(m[i, j].is_zero() for i in range(k, n) for j in range(k))
    ]


def metric_equations(branch: Branch, s: RationalMatrix) -> list[MPoly]:
    """Polynomial equations (= 0) for A^T S A = S on a branch.

    Besides the upper triangle of A^T S A - S, each diagonal block A_kk of
    the block-triangular template must be an isometry of the quotient
    metric on its layer of the invariant flag. Those block equations are
    implied by the full ones but involve fewer parameters, which is what
    makes the elimination below go through.
    """
    a = branch.matrix
    n = a.rows
    starts = _block_starts(a) + [n]
    eqs: list[MPoly] = []
    for lo, hi in zip(starts, starts[1:]):
        p = list(range(hi))
        blk = list(range(lo, hi))
        inner = inverse(s.submatrix(p, p))
        g = inverse(inner.submatrix([i for i in blk], [i for i in blk]))
        akk = PolyMatrix([[a[i, j] for j in blk] for i in blk])
        r = akk.T @ g @ akk - g
        eqs += [r[i, j] for i in range(len(blk)) for j in range(i, len(blk))]
    full = a.T @ s @ a - s
    eqs += [full[i, j] for i in range(n) for j in range(i, n)]
    return [e for e in eqs if not e.is_zero()]


def slice_equations(branch: Branch, block: RotationBlock, sigma: int) -> list[MPoly]:
    """A v0 = v0 and A v1 = sigma v1."""
    v0, v1 = block.slice_vectors()
    a = branch.matrix
    out = [x - c for x, c in zip(a.apply(v0), v0)]
    out += [x - sigma * c for x, c in zip(a.apply(v1), v1)]
    return [e for e in out if not e.is_zero()]


def _compose(p: MPoly, binding: Mapping[str, MPoly]) -> MPoly:
    if not binding or not (p.variables() & binding.keys()):
        return p
    out = MPoly()
    for mono, c in p.terms.items():
        term = MPoly.const(c)
        for v, e in mono:
            term = term * (binding[v] ** e if v in binding else MPoly.var(v) ** e)
        out = out + term
    return out


def _domain_ok(branch: Branch, values: Mapping[str, Fraction]) -> bool:
    return all(branch.param(k).admits(v) for k, v in values.items() if k in branch.names)


class _Solver:
    def __init__(self, branch: Branch, index: int):
        self.branch = branch
        self.index = index
        self.solutions: list[dict[str, Fraction]] = []

    def run(self, eqs: list[MPoly]) -> list[dict[str, Fraction]]:
        self._dfs(eqs, {}, [])
        return self.solutions

    def _dfs(self, eqs, values: dict, bindings: list, reduced: bool = False) -> None:
        try:
            self._step(eqs, values, bindings)
        except (IrrationalSolutionError, NonlinearResidualError):
            if reduced:
                raise
            basis = groebner_basis([e for e in eqs if not e.is_zero()])
            if basis == [MPoly.const(1)]:
                return
            if set(basis) == {e for e in eqs if not e.is_zero()}:
                raise
            self._dfs(basis, values, bindings, reduced=True)

    def _step(self, eqs, values: dict, bindings: list) -> None:
        live = []
        for e in eqs:
            if e.is_zero():
                continue
            if e.is_constant():
                return
            live.append(e)
        if not _domain_ok(self.branch, values):
            return
        bound = {v for v, _ in bindings}
        free = set(self.branch.names) - values.keys() - bound
        if not live:
            if free:
                raise UnderdeterminedError(self.index, free)
            self._finish(values, bindings)
            return

        linear = [e for e in live if e.total_degree() <= 1]
        if linear:
            names = sorted(set().union(*(e.variables() for e in linear)))
            rows = []
            for e in linear:
                coeffs, const = e.linear_form()
                rows.append([coeffs.get(v, Fraction(0)) for v in names] + [const])
            red, pivots = rref(RationalMatrix(rows))
            if pivots and pivots[-1] == len(names):
                return
            new_vals, new_bind = {}, {}
            for row, p in zip(red, pivots):
                others = {names[k]: row[k] for k in range(len(names)) if k != p and row[k]}
                expr = MPoly.const(-row[-1])
                for v, c in others.items():
                    expr = expr - MPoly.var(v) * c
                if others:
                    new_bind[names[p]] = expr
                else:
                    new_vals[names[p]] = -row[-1]
            nxt = [_compose(e.subs(new_vals), new_bind) for e in live]
            self._dfs(
                nxt,
                {**values, **new_vals},
                bindings + [(v, x.subs(new_vals)) for v, x in new_bind.items()],
            )
            return

        by_var: dict[str, Polynomial] = {}
        for e in live:
            if len(e.variables()) == 1:
                (var,) = e.variables()
                q = e.univariate(var)
                by_var[var] = q if var not in by_var else poly_gcd(by_var[var], q)
        if by_var:
            if any(q.degree < 1 for q in by_var.values()):
                return
            irrational_at = None
            for var in sorted(by_var, key=lambda v: (by_var[v].degree, v)):
                roots, irrational = rational_roots(by_var[var])
                if irrational:
                    irrational_at = irrational_at or (var, by_var[var])
                    continue
                for r in roots:
                    if var in self.branch.names and not self.branch.param(var).admits(r):
                        continue
                    self._dfs([q.subs({var: r}) for q in live], {**values, var: r}, bindings)
                return
            raise IrrationalSolutionError(self.index, *irrational_at)
        raise NonlinearResidualError(self.index, live)

    def _finish(self, values: dict, bindings: list) -> None:
        vals = dict(values)
        for var, expr in reversed(bindings):
            vals[var] = expr.evaluate(vals)
        if _domain_ok(self.branch, vals) and self.branch.admissible(vals):
            self.solutions.append(vals)


def groebner_basis(eqs: Sequence[MPoly]) -> list[MPoly]:
    """Reduced lex Groebner basis over Q; [1] certifies that eqs have no common zero."""
    import sympy

    names = sorted(set().union(*(e.variables() for e in eqs)))
    if not names:
        return [MPoly.const(1)] if any(not e.is_zero() for e in eqs) else []
    gens = sympy.symbols(names)
    index = {n: k for k, n in enumerate(names)}
    polys = []
    for e in eqs:
        terms = {}
        for mono, c in e.terms.items():
            exps = [0] * len(names)
            for v, k in mono:
                exps[index[v]] = k
            terms[tuple(exps)] = sympy.Rational(c.numerator, c.denominator)
        polys.append(sympy.Poly.from_dict(terms, *gens, domain="QQ"))
    out = []
    for q in sympy.groebner(polys, *gens, order="lex", domain="QQ").polys:
        terms = {}
        for exps, c in q.terms():
            mono = tuple((names[k], x) for k, x in enumerate(exps) if x)
            terms[mono] = Fraction(int(c.numerator), int(c.denominator))
        out.append(MPoly(terms))
    return out


def _certified(g: LieAlgebra, s: RationalMatrix, a: RationalMatrix) -> bool:
    return a.det() != 0 and a.T @ s @ a == s and is_automorphism(g, a)


def _canonical(ms) -> list[RationalMatrix]:
    return sorted(set(ms), key=RationalMatrix.sort_key)


def discrete_stabilizer(
    g: LieAlgebra,
    fam: AutFamily,
    s: RationalMatrix,
    block: RotationBlock | None = None,
) -> list[RationalMatrix]:
    """All stabilizer elements (finite case) or one representative per component.

    With a rotation block, each component has exactly one element that
    fixes v0 and sends v1 to +-v1; those slice conditions are added as
    linear equations.
    """
    found = []
    for idx, branch in enumerate(fam.branches):
        base = metric_equations(branch, s)
        systems = [base] if block is None else [
            slice_equations(branch, block, sg) + base for sg in (1, -1)
        ]
        for eqs in systems:
            for vals in _Solver(branch, idx).run(eqs):
                a = branch.instantiate(vals)
                if _certified(g, s, a):
                    found.append(a)
    return _canonical(found)


def linear_forcing_system(
    branch: Branch,
    s: RationalMatrix,
    unknowns: Sequence[str],
    entries: Sequence[tuple[int, int]],
) -> tuple[PolyMatrix, list[MPoly]]:
    """Coefficient matrix and remainder of selected entries of A^T S A - S.

    Row r lists the coefficients of ``unknowns`` in entry ``entries[r]``
    (0-based), as produced by :meth:`MPoly.split_by`.
    """
    full = branch.matrix.T @ s @ branch.matrix - s
    rows, rest = [], []
    for i, j in entries:
        coeffs, r = full[i, j].split_by(unknowns)
        rows.append([coeffs[u] for u in unknowns])
        rest.append(r)
    return PolyMatrix(rows), rest


# ---------------------------------------------------------------------------
# randomized completeness evidence


@dataclass
class CompletenessEvidence:
    trials: int
    seed: int
    hits: int = 0
    violations: list[RationalMatrix] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "hits": self.hits,
            "violations": [v.to_json() for v in self.violations],
        }


def _sample_scale(rng: random.Random, bound2: Fraction) -> Fraction:
    root = exact_sqrt(bound2)
    if root is not None and root != 0 and rng.random() < 0.75:
        return root if rng.random() < 0.5 else -root
    while True:
        v = Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))
        if v * v <= bound2:
            return v


def _force_linear(eqs: list[MPoly]) -> dict[str, Fraction] | None:
    """Values forced by the linear part alone, iterated; None if inconsistent."""
    values: dict[str, Fraction] = {}
    while True:
        eqs = [e.subs(values) for e in eqs]
        if any(e.is_constant() and not e.is_zero() for e in eqs):
            return None
        linear = [e for e in eqs if not e.is_zero() and e.total_degree() <= 1]
        if not linear:
            return values
        names = sorted(set().union(*(e.variables() for e in linear)))
        rows = []
        for e in linear:
            coeffs, const = e.linear_form()
            rows.append([coeffs.get(v, Fraction(0)) for v in names] + [const])
        red, pivots = rref(RationalMatrix(rows))
        if pivots and pivots[-1] == len(names):
            return None
        new = {
            names[p]: -row[-1]
            for row, p in zip(red, pivots)
            if sum(1 for x in row[:-1] if x) == 1
        }
        if not new:
            return values
        values.update(new)


def randomized_completeness_check(
    g: LieAlgebra,
    fam: AutFamily,
    s: RationalMatrix,
    found: Sequence[RationalMatrix],
    trials: int,
    seed: int,
    block: RotationBlock | None = None,
) -> CompletenessEvidence:
    """Sample scale parameters inside the isometry box and look for stray solutions.

    For A^T S A = S the columns satisfy a_j^T S a_j = S_jj, which bounds
    A_ij^2 <= S_jj (S^-1)_ii. Scale parameters are drawn from that box,
    translation parameters are then forced linearly, and every certified
    solution must be one of ``found`` (or lie in the component of one of
    them when ``block`` is given). Membership is checked against the set
    itself, not its closure, so a missing element shows up as a violation.
    """
    ev = CompletenessEvidence(trials, seed)
    if trials <= 0:
        return ev
    rng = random.Random(seed)
    sinv = inverse(s)
    found_set = set(found)
    for _ in range(trials):
        branch = fam.branches[rng.randrange(len(fam.branches))]
        pos = branch.entry_positions()
        vals = {}
        for name in branch.scale_params():
            if name in pos:
                i, j = pos[name]
                vals[name] = _sample_scale(rng, s[j, j] * sinv[i, i])
            else:
                vals[name] = Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))
        eqs = [e.subs(vals) for e in metric_equations(branch, s)]
        forced = _force_linear(eqs)
        if forced is None:
            continue
        vals.update(forced)
        if set(branch.names) - vals.keys() or not branch.admissible(vals):
            continue
        a = branch.matrix.evaluate(vals)
        if not _certified(g, s, a):
            continue
        ev.hits += 1
        if block is None:
            member = a in found_set
        else:
            member = any(block.contains(inverse(r) @ a) for r in found)
        if not member and a not in ev.violations:
            ev.violations.append(a)
    return ev


# ---------------------------------------------------------------------------
# assembly


@dataclass
class StabilizerResult:
    identity_component_dim: int
    component_reps: list[RationalMatrix]
    finite_order: "int | str"
    continuous_block: RotationBlock | None
    evidence: CompletenessEvidence

    @property
    def components(self) -> int:
        return len(self.component_reps)

    @property
    def elements(self) -> list[RationalMatrix]:
        if self.identity_component_dim:
            raise StabilizerError("the stabilizer is infinite")
        return self.component_reps

    def reflection_free_reps(self) -> list[RationalMatrix]:
        """Representatives acting trivially on the rotation plane's orientation."""
        if self.continuous_block is None:
            return list(self.component_reps)
        v0, v1 = self.continuous_block.slice_vectors()
        return [r for r in self.component_reps if r.apply(v1) == v1]

    def to_json(self) -> dict:
        return {
            "dim": self.identity_component_dim,
            "order": self.finite_order,
            "components": [r.to_json() for r in self.component_reps],
            "continuous_block": None if self.continuous_block is None
            else self.continuous_block.to_json(),
            "evidence": self.evidence.to_json(),
        }


def random_circle_params(rng: random.Random, k: int) -> list[Fraction]:
    return [Fraction(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(k)]


def stabilizer(
    g: LieAlgebra,
    fam: AutFamily,
    s: RationalMatrix,
    trials: int = 200,
    seed: int = 0,
) -> StabilizerResult:
    iso = isotropy_algebra(g, s)
    if len(iso) > 1:
        raise UnsupportedIsotropyError(f"isotropy dimension {len(iso)} is outside the catalog")
    block = RotationBlock.from_generator(iso[0]) if iso else None
    reps = discrete_stabilizer(g, fam, s, block)
    if not reps:
        raise StabilizerError("no stabilizer element found (the identity should always be)")
    if block is not None:
        rng = random.Random(seed)
        for t in random_circle_params(rng, 20) + [None]:
            r = block.rotation(t)
            if not _certified(g, s, r):
                raise StabilizerError(f"rotation at t={t} is not an isometric automorphism")
        for i, a in enumerate(reps):
            for b in reps[i + 1:]:
                if block.contains(inverse(a) @ b):
                    raise StabilizerError("two representatives share a component")
    ev = randomized_completeness_check(g, fam, s, reps, trials, seed, block)
    return StabilizerResult(
        identity_component_dim=len(iso),
        component_reps=reps,
        finite_order=len(reps) if block is None else "infinite",
        continuous_block=block,
        evidence=ev,
    )
