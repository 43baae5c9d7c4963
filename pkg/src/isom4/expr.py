"""Multivariate polynomials over Q and the template expression grammar.

Automorphism-family templates are written as small expressions::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '·') unary)*
    unary  := '-' unary | atom
    atom   := INT ('/' INT)? | NAME | '(' expr ')'

The parser is hand-written recursive descent and yields :class:`MPoly`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .exact import Polynomial, RationalMatrix, fmt, to_rational

Monomial = tuple  # sorted tuple of (name, exponent)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class MPoly:
    """Sparse polynomial: mapping monomial -> nonzero Fraction coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c) -> "MPoly":
        return cls({(): to_rational(c)})

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls({((name, 1),): Fraction(1)})

    @staticmethod
    def lift(x) -> "MPoly":
        return x if isinstance(x, MPoly) else MPoly.const(x)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "MPoly":
        other = MPoly.lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        return self + (-MPoly.lift(other))

    def __rsub__(self, other) -> "MPoly":
        return MPoly.lift(other) - self

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            c = to_rational(other)
            return MPoly({m: c * v for m, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return MPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        out = MPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            try:
                other = MPoly.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self.terms), default=0)

    def linear_form(self) -> tuple[dict[str, Fraction], Fraction]:
        """(coefficients, constant) of a polynomial of total degree <= 1."""
        if self.total_degree() > 1:
            raise ValueError("polynomial is not affine")
        coeffs = {m[0][0]: c for m, c in self.terms.items() if m}
        return coeffs, self.constant()

    def univariate(self, name: str) -> Polynomial:
        if self.variables() - {name}:
            raise ValueError(f"polynomial is not univariate in {name}")
        coeffs = [Fraction(0)] * (self.degree_in(name) + 1)
        for m, c in self.terms.items():
            coeffs[dict(m).get(name, 0)] += c
        return Polynomial(coeffs)

    def subs(self, values: Mapping[str, Fraction]) -> "MPoly":
        """Substitute rational values for some variables."""
        if not values:
            return self
        out: dict = {}
        for m, c in self.terms.items():
            rest = []
            for v, e in m:
                if v in values:
                    c = c * values[v] ** e
                else:
                    rest.append((v, e))
            if c:
                key = tuple(rest)
                out[key] = out.get(key, 0) + c
        return MPoly(out)

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        p = self.subs(values)
        if not p.is_constant():
            raise ValueError(f"unassigned variables {sorted(p.variables())}")
        return p.constant()

    def split_by(self, unknowns: Iterable[str]) -> tuple[dict[str, "MPoly"], "MPoly"]:
        """Write self = sum_u coeff[u] * u + rest.

        Each monomial goes to the first unknown (in the given order) it
        contains; ``rest`` collects monomials free of all unknowns.
        """
        order = list(unknowns)
        coeffs: dict[str, dict] = {u: {} for u in order}
        rest: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            target = next((u for u in order if d.get(u, 0) > 0), None)
            if target is None:
                rest[m] = c
                continue
            d[target] -= 1
            key = tuple(sorted((v, e) for v, e in d.items() if e))
            coeffs[target][key] = coeffs[target].get(key, 0) + c
        return {u: MPoly(t) for u, t in coeffs.items()}, MPoly(rest)

    def __repr__(self) -> str:
        return f"MPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            body = "*".join(v if e == 1 else "*".join([v] * e) for v, e in m)
            if not body:
                parts.append(fmt(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{fmt(c)}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


class PolyMatrix:
    """Small dense matrix with MPoly entries (templates and their products)."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries):
        self._e = tuple(tuple(MPoly.lift(x) for x in r) for r in entries)
        self.rows = len(self._e)
        self.cols = len(self._e[0])

    @classmethod
    def from_rational(cls, m: RationalMatrix) -> "PolyMatrix":
        return cls(m.tolist())

    def __getitem__(self, ij) -> MPoly:
        i, j = ij
        return self._e[i][j]

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix(tuple(zip(*self._e)))

    def __matmul__(self, other) -> "PolyMatrix":
        if isinstance(other, RationalMatrix):
            other = PolyMatrix.from_rational(other)
        cols = tuple(zip(*other._e))
        out = []
        for r in self._e:
            row = []
            for c in cols:
                acc = MPoly()
                for x, y in zip(r, c):
                    if x.terms and y.terms:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def __rmatmul__(self, other) -> "PolyMatrix":
        return PolyMatrix.from_rational(other) @ self

    def __sub__(self, other) -> "PolyMatrix":
        if isinstance(other, RationalMatrix):
            other = PolyMatrix.from_rational(other)
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)])

    def apply(self, v) -> list[MPoly]:
        return [sum((x * to_rational(c) for x, c in zip(r, v)), MPoly()) for r in self._e]

    def subs(self, values) -> "PolyMatrix":
        return PolyMatrix([[x.subs(values) for x in r] for r in self._e])

    def evaluate(self, values) -> RationalMatrix:
        return RationalMatrix([[x.evaluate(values) for x in r] for r in self._e])

    def variables(self) -> set[str]:
        return set().union(*(x.variables() for r in self._e for x in r))

    def det(self) -> MPoly:
        """Laplace expansion; only used on small matrices."""
        n = self.rows
        if n == 1:
            return self._e[0][0]
        total = MPoly()
        for j in range(n):
            if self._e[0][j].is_zero():
                continue
            minor = PolyMatrix([r[:j] + r[j + 1:] for r in self._e[1:]])
            term = self._e[0][j] * minor.det()
            total = total + (term if j % 2 == 0 else -term)
        return total

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._e]


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ExpressionError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("name", name))
        elif op in "+-*·/()":
            tokens.append(("op", "*" if op == "·" else op))
        else:
            raise ExpressionError(f"unexpected character {op!r} in {text!r}")
        pos = m.end()
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str]:
        return self.tokens[self.i]

    def take(self, kind: str, value: str | None = None) -> str:
        k, v = self.tokens[self.i]
        if k != kind or (value is not None and v != value):
            raise ExpressionError(f"expected {value or kind} at token {self.i} in {self.text!r}")
        self.i += 1
        return v

    def expr(self) -> MPoly:
        out = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take("op")
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> MPoly:
        out = self.unary()
        while self.peek() == ("op", "*"):
            self.take("op")
            out = out * self.unary()
        return out

    def unary(self) -> MPoly:
        if self.peek() == ("op", "-"):
            self.take("op")
            return -self.unary()
        return self.atom()

    def atom(self) -> MPoly:
        kind, value = self.peek()
        if kind == "num":
            self.take("num")
            num = int(value)
            if self.peek() == ("op", "/"):
                self.take("op")
                return MPoly.const(Fraction(num, int(self.take("num"))))
            return MPoly.const(num)
        if kind == "name":
            return MPoly.var(self.take("name"))
        if (kind, value) == ("op", "("):
            self.take("op")
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise ExpressionError(f"unexpected token {value!r} in {self.text!r}")


def parse_expr(text: str) -> MPoly:
    p = _Parser(text)
    out = p.expr()
    p.take("end")
    return out
