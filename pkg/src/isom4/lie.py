"""Structure-constant Lie algebras over Q.

Basis vectors are 0-based internally; the JSON form and all user-facing
messages use 1-based indices to match the usual e1..en notation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import (
    DimensionError,
    Polynomial,
    RationalMatrix,
    SingularMatrixError,
    char_poly,
    fmt,
    rref,
    rref_nullspace,
    sign_changes_at_infinity,
    squarefree_part,
    sturm_chain,
    to_rational,
)

Vector = tuple  # tuple of Fractions


class LieAlgebra:
    """Lie algebra given by brackets of basis vectors.

    ``brackets`` maps 0-based pairs (i, j) to the coordinate vector of
    [e_i, e_j]. Pairs may be given in either order; the opposite order is
    filled in by antisymmetry. Jacobi is not enforced here; see
    :func:`check_jacobi`.
    """

    def __init__(self, dim: int, brackets: Mapping[tuple[int, int], Sequence] | None = None):
        self.dim = dim
        zero = (Fraction(0),) * dim
        table = [[zero] * dim for _ in range(dim)]
        for (i, j), v in (brackets or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionError(f"bracket index ({i + 1}, {j + 1}) outside dimension {dim}")
            if i == j:
                raise ValueError("[e_i, e_i] must vanish")
            vec = tuple(to_rational(x) for x in v)
            if len(vec) != dim:
                raise DimensionError(f"bracket value of length {len(vec)} in dimension {dim}")
            table[i][j] = vec
            table[j][i] = tuple(-x for x in vec)
        self._c = tuple(tuple(r) for r in table)

    def structure(self, i: int, j: int) -> Vector:
        """[e_i, e_j] (0-based)."""
        return self._c[i][j]

    def nonzero_brackets(self) -> dict[tuple[int, int], Vector]:
        return {
            (i, j): self._c[i][j]
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
            if any(self._c[i][j])
        }

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self._c == other._c

    def __repr__(self) -> str:
        parts = []
        for (i, j), v in self.nonzero_brackets().items():
            rhs = " + ".join(f"{fmt(c)}*e{k + 1}" for k, c in enumerate(v) if c)
            parts.append(f"[e{i + 1},e{j + 1}]={rhs}")
        return f"LieAlgebra(dim={self.dim}; {', '.join(parts) or 'abelian'})"

    def to_json(self) -> dict:
        out = []
        for (i, j), v in self.nonzero_brackets().items():
            out.append(
                {"i": i + 1, "j": j + 1, "coeffs": [[k + 1, fmt(c)] for k, c in enumerate(v) if c]}
            )
        return {"dim": self.dim, "brackets": out}

    @classmethod
    def from_json(cls, data: Mapping) -> "LieAlgebra":
        dim = int(data["dim"])
        brackets = {}
        for entry in data.get("brackets", []):
            vec = [Fraction(0)] * dim
            for k, c in entry["coeffs"]:
                vec[int(k) - 1] += Fraction(c) if isinstance(c, str) else to_rational(c)
            key = (int(entry["i"]) - 1, int(entry["j"]) - 1)
            if key in brackets or key[::-1] in brackets:
                raise ValueError(f"bracket [e{key[0] + 1}, e{key[1] + 1}] given twice")
            brackets[key] = vec
        return cls(dim, brackets)


def basis_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if k == i else 0) for k in range(n))


def _check_vec(g: LieAlgebra, x: Sequence) -> Vector:
    if len(x) != g.dim:
        raise DimensionError(f"vector of length {len(x)} in a {g.dim}-dimensional algebra")
    return tuple(to_rational(c) for c in x)


def bracket(g: LieAlgebra, x: Sequence, y: Sequence) -> Vector:
    x, y = _check_vec(g, x), _check_vec(g, y)
    out = [Fraction(0)] * g.dim
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            c = xi * yj
            for k, v in enumerate(g._c[i][j]):
                if v:
                    out[k] += c * v
    return tuple(out)


def check_jacobi(g: LieAlgebra) -> bool:
    n = g.dim
    e = [basis_vector(n, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = [
                    a + b + c
                    for a, b, c in zip(
                        bracket(g, bracket(g, e[i], e[j]), e[k]),
                        bracket(g, bracket(g, e[j], e[k]), e[i]),
                        bracket(g, bracket(g, e[k], e[i]), e[j]),
                    )
                ]
                if any(s):
                    return False
    return True


def ad(g: LieAlgebra, x: Sequence) -> RationalMatrix:
    """Matrix of y -> [x, y]; column j is [x, e_j]."""
    x = _check_vec(g, x)
    return RationalMatrix.from_columns(
        [bracket(g, x, basis_vector(g.dim, j)) for j in range(g.dim)]
    )


def is_unimodular(g: LieAlgebra) -> bool:
    return all(ad(g, basis_vector(g.dim, i)).trace() == 0 for i in range(g.dim))


def _span(vectors: Sequence[Vector], n: int) -> list[Vector]:
    """Row-reduced basis of the span."""
    if not vectors:
        return []
    red, _ = rref(RationalMatrix(vectors))
    return [tuple(r) for r in red]


def _bracket_space(g: LieAlgebra, a: Sequence[Vector], b: Sequence[Vector]) -> list[Vector]:
    return _span([bracket(g, x, y) for x in a for y in b], g.dim)


def lower_central_series(g: LieAlgebra) -> list[int]:
    """Dimensions of g, [g,g], [g,[g,g]], ... until the dimension stabilizes."""
    full = [basis_vector(g.dim, i) for i in range(g.dim)]
    cur = full
    dims = [len(cur)]
    while cur:
        nxt = _bracket_space(g, full, cur)
        if len(nxt) == len(cur):
            break
        cur = nxt
        dims.append(len(cur))
    return dims


def derived_series(g: LieAlgebra) -> list[int]:
    cur = [basis_vector(g.dim, i) for i in range(g.dim)]
    dims = [len(cur)]
    while cur:
        nxt = _bracket_space(g, cur, cur)
        if len(nxt) == len(cur):
            break
        cur = nxt
        dims.append(len(cur))
    return dims


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g)[-1] == 0


def is_solvable(g: LieAlgebra) -> bool:
    return derived_series(g)[-1] == 0


# ---------------------------------------------------------------------------
# type (R) evidence


@dataclass(frozen=True)
class SturmCertificate:
    """Evidence that ad x has only real eigenvalues.

    The square-free part of the characteristic polynomial has as many
    distinct real roots (Sturm sign changes at -inf minus +inf) as its degree.
    """

    x: Vector
    char_poly: Polynomial
    squarefree_degree: int
    changes_neg_inf: int
    changes_pos_inf: int

    @property
    def real_roots(self) -> int:
        return self.changes_neg_inf - self.changes_pos_inf

    @property
    def ok(self) -> bool:
        return self.real_roots == self.squarefree_degree

    def to_json(self) -> dict:
        return {
            "x": [fmt(c) for c in self.x],
            "char_poly": [fmt(c) for c in self.char_poly.coeffs],
            "squarefree_degree": self.squarefree_degree,
            "sturm_changes": [self.changes_neg_inf, self.changes_pos_inf],
            "ok": self.ok,
        }


def sturm_certificate(g: LieAlgebra, x: Sequence) -> SturmCertificate:
    p = char_poly(ad(g, x))
    sf = squarefree_part(p)
    chain = sturm_chain(sf)
    return SturmCertificate(
        x=_check_vec(g, x),
        char_poly=p,
        squarefree_degree=sf.degree,
        changes_neg_inf=sign_changes_at_infinity(chain, False),
        changes_pos_inf=sign_changes_at_infinity(chain, True),
    )


def random_vector(rng: random.Random, n: int) -> Vector:
    """Coordinates p/q with p in [-9, 9] and q in {1, 2, 3}."""
    return tuple(Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3))) for _ in range(n))


@dataclass
class TypeRReport:
    passed: bool
    certificates: list[SturmCertificate] = field(default_factory=list)
    witness: Vector | None = None

    def __bool__(self) -> bool:
        return self.passed


def is_type_R_sampled(g: LieAlgebra, n_samples: int, seed: int) -> TypeRReport:
    """Check real-rootedness of char(ad x) on the basis and on seeded random x.

    Evidence only: a pass does not prove type (R). The basis vectors are
    checked first, so a failing basis direction is reported as the witness.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = random.Random(seed)
    samples = [basis_vector(g.dim, i) for i in range(g.dim)]
    samples += [random_vector(rng, g.dim) for _ in range(n_samples)]
    certs = []
    for x in samples:
        cert = sturm_certificate(g, x)
        certs.append(cert)
        if not cert.ok:
            return TypeRReport(False, certs, x)
    return TypeRReport(True, certs)


# ---------------------------------------------------------------------------
# derivations and automorphisms


def derivation_system(g: LieAlgebra) -> RationalMatrix:
    """Rows of D[e_i,e_j] - [D e_i, e_j] - [e_i, D e_j] = 0 in the n^2 entries of D.

    Unknown D[r][s] sits at column r*n + s.
    """
    n = g.dim
    c = g._c
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            cij = c[i][j]
            for k in range(n):
                row = [Fraction(0)] * (n * n)
                for s in range(n):
                    if cij[s]:
                        row[k * n + s] += cij[s]
                for r in range(n):
                    if c[r][j][k]:
                        row[r * n + i] -= c[r][j][k]
                    if c[i][r][k]:
                        row[r * n + j] -= c[i][r][k]
                rows.append(row)
    if not rows:
        rows = [[Fraction(0)] * (n * n)]
    return RationalMatrix(rows)


def vec_to_matrix(v: RationalMatrix, n: int) -> RationalMatrix:
    flat = v.col(0)
    return RationalMatrix([flat[r * n:(r + 1) * n] for r in range(n)])


def derivations(g: LieAlgebra) -> list[RationalMatrix]:
    """Basis of Der(g) from the exact kernel of the Leibniz system."""
    return [vec_to_matrix(v, g.dim) for v in rref_nullspace(derivation_system(g))]


def is_derivation(g: LieAlgebra, d: RationalMatrix) -> bool:
    n = g.dim
    e = [basis_vector(n, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = d.apply(bracket(g, e[i], e[j]))
            rhs = [a + b for a, b in zip(bracket(g, d.col(i), e[j]), bracket(g, e[i], d.col(j)))]
            if list(lhs) != rhs:
                return False
    return True


def is_automorphism(g: LieAlgebra, a: RationalMatrix) -> bool:
    """a[e_i, e_j] == [a e_i, a e_j] for all i < j; a must be nonsingular."""
    if a.shape != (g.dim, g.dim):
        raise DimensionError(f"{a.rows}x{a.cols} matrix for a {g.dim}-dimensional algebra")
    if a.det() == 0:
        raise SingularMatrixError("automorphism candidate is singular")
    cols = [a.col(j) for j in range(g.dim)]
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            if a.apply(g._c[i][j]) != bracket(g, cols[i], cols[j]):
                return False
    return True
