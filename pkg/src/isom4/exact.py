"""Exact rational scalars, dense matrices and univariate polynomials.

Scalars are :class:`fractions.Fraction`. Nothing in this module touches
floating point; every result is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

Rational = Fraction


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


class NotSymmetricError(ValueError):
    pass


class NotPositiveDefiniteError(ValueError):
    def __init__(self, minors):
        self.minors = tuple(minors)
        super().__init__(f"not positive definite; leading minors {fmt_seq(self.minors)}")


class IrrationalFactorError(ValueError):
    """The Cholesky factor exists but has irrational entries.

    ``minors`` holds the leading principal minors, all > 0, which certify
    positive definiteness without the factor.
    """

    def __init__(self, minors):
        self.minors = tuple(minors)
        super().__init__(
            "irrational factor; positive definite by leading minors " + fmt_seq(self.minors)
        )


def to_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def fmt(q: Fraction) -> str:
    """``'p/q'``, or ``'p'`` when the denominator is 1."""
    return str(q)


def fmt_seq(values: Iterable[Fraction]) -> str:
    return "[" + ", ".join(fmt(v) for v in values) + "]"


def exact_sqrt(q: Fraction) -> Fraction | None:
    """Rational square root of ``q`` or None when it is irrational."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class RationalMatrix:
    """Immutable dense matrix of Fractions, row-major."""

    __slots__ = ("rows", "cols", "_e", "_hash")

    def __init__(self, entries: Sequence[Sequence] | "RationalMatrix"):
        if isinstance(entries, RationalMatrix):
            self.rows, self.cols, self._e = entries.rows, entries.cols, entries._e
            self._hash = None
            return
        rows = [tuple(to_rational(x) for x in row) for row in entries]
        if not rows:
            raise DimensionError("matrix needs at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        self.rows = len(rows)
        self.cols = width
        self._e = tuple(rows)
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple) -> "RationalMatrix":
        m = object.__new__(cls)
        m._e = rows
        m.rows = len(rows)
        m.cols = len(rows[0]) if rows else 0
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        cols = rows if cols is None else cols
        zero = Fraction(0)
        return cls._raw(tuple((zero,) * cols for _ in range(rows)))

    @classmethod
    def diag(cls, *values) -> "RationalMatrix":
        n = len(values)
        vals = [to_rational(v) for v in values]
        zero = Fraction(0)
        return cls._raw(tuple(tuple(vals[i] if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RationalMatrix":
        cols = [tuple(to_rational(x) for x in c) for c in columns]
        return cls._raw(tuple(zip(*cols)))

    # -- access -------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._e)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._e]

    def entries(self) -> tuple:
        """Row-major flat tuple."""
        return tuple(x for r in self._e for x in r)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix._raw(tuple(zip(*self._e)))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix._raw(tuple(tuple(self._e[i][j] for j in cols) for i in rows))

    # -- arithmetic ---------------------------------------------------------

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return matmul(self, other)

    def apply(self, v: Sequence[Fraction]) -> tuple:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self._e)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} + {other.shape}")
        return RationalMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._e, other._e))
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} - {other.shape}")
        return RationalMatrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._e, other._e))
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._raw(tuple(tuple(-a for a in r) for r in self._e))

    def scale(self, c) -> "RationalMatrix":
        c = to_rational(c)
        return RationalMatrix._raw(tuple(tuple(c * a for a in r) for r in self._e))

    def __mul__(self, c):
        if isinstance(c, RationalMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RationalMatrix":
        if not self.is_square:
            raise DimensionError("power of a non-square matrix")
        result = RationalMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    # -- predicates ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self._e == other._e

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._e)
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(fmt(x) for x in r) for r in self._e)
        return f"RationalMatrix[{body}]"

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._e for x in r)

    def is_identity(self) -> bool:
        return self.is_square and all(
            x == (1 if i == j else 0) for i, r in enumerate(self._e) for j, x in enumerate(r)
        )

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self._e[i][j] == self._e[j][i] for i in range(self.rows) for j in range(i)
        )

    def is_upper_triangular(self) -> bool:
        return all(self._e[i][j] == 0 for i in range(self.rows) for j in range(min(i, self.cols)))

    def trace(self) -> Fraction:
        if not self.is_square:
            raise DimensionError("trace of a non-square matrix")
        return sum((self._e[i][i] for i in range(self.rows)), Fraction(0))

    def det(self) -> Fraction:
        return det(self)

    def inverse(self) -> "RationalMatrix":
        return inverse(self)

    def rank(self) -> int:
        return len(rref(self)[1])

    def sort_key(self) -> tuple:
        return self.entries()

    # -- serialization ------------------------------------------------------

    def to_json(self) -> list[list[str]]:
        return [[fmt(x) for x in r] for r in self._e]

    @classmethod
    def from_json(cls, data) -> "RationalMatrix":
        return cls([[Fraction(x) if isinstance(x, str) else to_rational(x) for x in r] for r in data])


def matmul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bt = tuple(zip(*b._e))
    zero = Fraction(0)
    return RationalMatrix._raw(
        tuple(
            tuple(sum((x * y for x, y in zip(r, c) if x and y), zero) for c in bt)
            for r in a._e
        )
    )


def rref(m: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form as (rows, pivot columns); zero rows dropped."""
    rows = [list(r) for r in m._e]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rref_nullspace(m: RationalMatrix) -> list[RationalMatrix]:
    """Basis of the exact kernel as column vectors; empty iff the kernel is trivial."""
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(RationalMatrix._raw(tuple((x,) for x in v)))
    return basis


def solve_linear(a: RationalMatrix, b: Sequence[Fraction]):
    """Solve ``a x = b``.

    Returns (particular solution, kernel basis) or None if inconsistent.
    """
    if len(b) != a.rows:
        raise DimensionError("right-hand side length mismatch")
    aug = RationalMatrix._raw(tuple(r + (to_rational(bi),) for r, bi in zip(a._e, b)))
    red, pivots = rref(aug)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [Fraction(0)] * a.cols
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return tuple(x), rref_nullspace(a)


def det(m: RationalMatrix) -> Fraction:
    if not m.is_square:
        raise DimensionError("determinant of a non-square matrix")
    rows = [list(r) for r in m._e]
    n = m.rows
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            result = -result
        pv = rows[c][c]
        result *= pv
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / pv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return result


def inverse(m: RationalMatrix) -> RationalMatrix:
    if not m.is_square:
        raise DimensionError("inverse of a non-square matrix")
    n = m.rows
    one, zero = Fraction(1), Fraction(0)
    aug = RationalMatrix._raw(
        tuple(r + tuple(one if i == j else zero for j in range(n)) for i, r in enumerate(m._e))
    )
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise SingularMatrixError("matrix is singular")
    return RationalMatrix._raw(tuple(tuple(r[n:]) for r in red))


def leading_minors(s: RationalMatrix) -> list[Fraction]:
    return [det(s.submatrix(range(k), range(k))) for k in range(1, s.rows + 1)]


def is_positive_definite(s: RationalMatrix) -> bool:
    """Sylvester's criterion on a symmetric matrix."""
    return s.is_symmetric() and all(d > 0 for d in leading_minors(s))


def cholesky_upper(s: RationalMatrix) -> RationalMatrix:
    """Upper-triangular ``r`` with positive diagonal and ``r.T @ r == s``.

    Raises IrrationalFactorError when ``s`` is positive definite but the
    factor is not rational.
    """
    if not s.is_symmetric():
        raise NotSymmetricError("matrix is not symmetric")
    minors = leading_minors(s)
    if any(d <= 0 for d in minors):
        raise NotPositiveDefiniteError(minors)
    n = s.rows
    r = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        piv = exact_sqrt(s[i, i] - sum((r[k][i] ** 2 for k in range(i)), Fraction(0)))
        if piv is None:
            raise IrrationalFactorError(minors)
        r[i][i] = piv
        for j in range(i + 1, n):
            r[i][j] = (s[i, j] - sum((r[k][i] * r[k][j] for k in range(i)), Fraction(0))) / piv
    return RationalMatrix(r)


# ---------------------------------------------------------------------------
# univariate polynomials


class Polynomial:
    """Univariate polynomial over Q, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [to_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Polynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-to_rational(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({fmt_seq(self.coeffs)})"

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    def __neg__(self) -> "Polynomial":
        return Polynomial(-x for x in self.coeffs)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = to_rational(other)
            return Polynomial(c * x for x in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        q = [Fraction(0)] * max(len(rem) - dq, 1)
        while len(rem) - 1 >= dq and rem:
            shift = len(rem) - 1 - dq
            f = rem[-1] / other.lead
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial(q), Polynomial(rem)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "Polynomial":
        return self * (1 / self.lead) if self.coeffs else self

    def eval_matrix(self, m: RationalMatrix) -> RationalMatrix:
        """Horner evaluation at a square matrix."""
        n = m.rows
        acc = RationalMatrix.zeros(n)
        eye = RationalMatrix.identity(n)
        for c in reversed(self.coeffs):
            acc = acc @ m + eye.scale(c)
        return acc


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, divmod(a, b)[1]
    return a.monic()


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.degree <= 0:
        return p.monic()
    g = poly_gcd(p, p.derivative())
    return divmod(p, g)[0].monic()


def char_poly(m: RationalMatrix) -> Polynomial:
    """det(lambda*I - m) by the Faddeev-LeVerrier recurrence."""
    if not m.is_square:
        raise DimensionError("characteristic polynomial of a non-square matrix")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    eye = RationalMatrix.identity(n)
    mk = RationalMatrix.zeros(n)
    for k in range(1, n + 1):
        mk = m @ mk + eye.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ mk).trace() / k
    return Polynomial(coeffs)


def sturm_chain(p: Polynomial) -> list[Polynomial]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-divmod(chain[-2], chain[-1])[1])
    chain.pop()
    return chain


def _sign_changes(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sign_changes_at(chain: Sequence[Polynomial], x) -> int:
    return _sign_changes(q(x) for q in chain)


def sign_changes_at_infinity(chain: Sequence[Polynomial], positive: bool) -> int:
    vals = []
    for q in chain:
        s = q.lead
        if not positive and q.degree % 2:
            s = -s
        vals.append(s)
    return _sign_changes(vals)


def _nonzero(p: Polynomial) -> None:
    if p.is_zero():
        raise ValueError("zero polynomial has no root count")


def count_real_roots(p: Polynomial) -> int:
    """Number of distinct real roots, by Sturm's theorem on the square-free part."""
    _nonzero(p)
    chain = sturm_chain(squarefree_part(p))
    return sign_changes_at_infinity(chain, False) - sign_changes_at_infinity(chain, True)


def is_real_rooted(p: Polynomial) -> bool:
    """True iff every complex root of ``p`` is real (multiplicity included)."""
    _nonzero(p)
    sf = squarefree_part(p)
    return count_real_roots(sf) == sf.degree


def root_bound(p: Polynomial) -> Fraction:
    """Cauchy bound: every root lies in (-B, B)."""
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: Polynomial, width: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (a, b], each of length <= width, one per distinct real root."""
    _nonzero(p)
    sf = squarefree_part(p)
    if sf.degree < 1:
        return []
    chain = sturm_chain(sf)
    bound = root_bound(sf)
    out = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = sign_changes_at(chain, a) - sign_changes_at(chain, b)
        if n == 0:
            continue
        if n == 1 and b - a <= width:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((mid, b))
        stack.append((a, mid))
    return sorted(out)


def rational_roots(p: Polynomial) -> tuple[list[Fraction], int]:
    """Distinct rational roots of ``p`` and the number of distinct irrational real roots.

    A rational root of the primitive integer form c_n x^n + ... has a
    denominator dividing c_n, so two candidates are at least 1/c_n^2 apart;
    each real root is isolated tighter than that and snapped to the only
    possible fraction, which is then checked exactly.
    """
    _nonzero(p)
    sf = squarefree_part(p)
    if sf.degree < 1:
        return [], 0
    den = 1
    for c in sf.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    lead = abs((sf.lead * den).numerator)
    found, irrational = [], 0
    for a, b in isolate_real_roots(sf, Fraction(1, 4 * lead * lead)):
        if sf(b) == 0:
            found.append(b)
            continue
        cand = ((a + b) / 2).limit_denominator(lead)
        if a < cand <= b and sf(cand) == 0:
            found.append(cand)
        else:
            irrational += 1
    return found, irrational

