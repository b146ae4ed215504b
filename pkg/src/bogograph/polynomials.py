"""Sparse multivariate polynomials over exact rationals.

A polynomial in ``m`` variables is stored as a map from dense exponent
tuples of length ``m`` to nonzero coefficients.  Coefficients are exact:
plain ``int`` where possible, ``Fraction`` otherwise.  Terms are ordered
graded-lex (total degree first, then lexicographic) for printing, for the
leading term, and for exact division.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional, Union

from .errors import ArityMismatch, OutOfRange

Coeff = Union[int, Fraction]


def _norm(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def grlex_key(exponents: tuple[int, ...]) -> tuple:
    return (sum(exponents), exponents)


class SparsePoly:
    """Immutable sparse polynomial; never mutate ``terms`` after creation."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Optional[Mapping[tuple[int, ...], Coeff]] = None):
        if arity < 0:
            raise OutOfRange(f"arity must be nonnegative, got {arity}")
        cleaned: dict[tuple[int, ...], Coeff] = {}
        for exp, coeff in (terms or {}).items():
            if len(exp) != arity:
                raise ArityMismatch(f"exponent vector {exp} has length {len(exp)}, expected {arity}")
            if coeff != 0:
                cleaned[tuple(exp)] = _norm(coeff)
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    # ------------------------------------------------------------------
    # builders

    @classmethod
    def zero(cls, arity: int) -> "SparsePoly":
        return cls(arity, {})

    @classmethod
    def constant(cls, arity: int, value: Coeff) -> "SparsePoly":
        return cls(arity, {(0,) * arity: value})

    @classmethod
    def variable(cls, arity: int, index: int) -> "SparsePoly":
        if not 0 <= index < arity:
            raise OutOfRange(f"variable index {index} outside [0, {arity})")
        exp = tuple(1 if i == index else 0 for i in range(arity))
        return cls(arity, {exp: 1})

    @classmethod
    def monomial(cls, arity: int, exponents: Iterable[int], coeff: Coeff = 1) -> "SparsePoly":
        return cls(arity, {tuple(exponents): coeff})

    # ------------------------------------------------------------------
    # ring operations

    def _check_arity(self, other: "SparsePoly") -> None:
        if self.arity != other.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")

    def __add__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(self.arity, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check_arity(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            out[exp] = out.get(exp, 0) + coeff
        return SparsePoly(self.arity, out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(self.arity, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SparsePoly":
        return (-self) + other

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return SparsePoly.zero(self.arity)
            return SparsePoly(self.arity, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check_arity(other)
        out: dict[tuple[int, ...], Coeff] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                out[exp] = out.get(exp, 0) + ca * cb
        return SparsePoly(self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparsePoly":
        if not isinstance(n, int) or n < 0:
            raise OutOfRange(f"exponent must be a nonnegative integer, got {n}")
        result = SparsePoly.constant(self.arity, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(self.arity, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    # ------------------------------------------------------------------
    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.terms, key=grlex_key, reverse=True)

    def coefficient(self, exponents: tuple[int, ...]) -> Fraction:
        return Fraction(self.terms.get(tuple(exponents), 0))

    def total_degree(self) -> int:
        """Maximum term degree; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> Optional[int]:
        """Common total degree of all terms, or None.  Zero poly gives 0."""
        degrees = {sum(e) for e in self.terms}
        if not degrees:
            return 0
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def leading(self) -> tuple[tuple[int, ...], Coeff]:
        exp = max(self.terms, key=grlex_key)
        return exp, self.terms[exp]

    # ------------------------------------------------------------------
    # substitution and evaluation

    def substitute_zero(self, var: int) -> "SparsePoly":
        """Set variable ``var`` to 0: drop terms with positive exponent in it."""
        if not 0 <= var < self.arity:
            raise OutOfRange(f"variable index {var} outside [0, {self.arity})")
        return SparsePoly(self.arity, {e: c for e, c in self.terms.items() if e[var] == 0})

    def substitute(self, values: Mapping[int, Fraction]) -> "SparsePoly":
        """Partially evaluate some variables; arity is unchanged."""
        for var in values:
            if not 0 <= var < self.arity:
                raise OutOfRange(f"variable index {var} outside [0, {self.arity})")
        out: dict[tuple[int, ...], Coeff] = {}
        for exp, coeff in self.terms.items():
            factor: Coeff = 1
            new_exp = list(exp)
            for var, value in values.items():
                if exp[var]:
                    factor *= Fraction(value) ** exp[var]
                    new_exp[var] = 0
            key = tuple(new_exp)
            out[key] = out.get(key, 0) + coeff * factor
        return SparsePoly(self.arity, out)

    def rename(self, mapping: Mapping[int, int], out_arity: int) -> "SparsePoly":
        """Send variable i to mapping[i]; merged targets add exponents."""
        out: dict[tuple[int, ...], Coeff] = {}
        for exp, coeff in self.terms.items():
            new_exp = [0] * out_arity
            for i, e in enumerate(exp):
                if e:
                    new_exp[mapping[i]] += e
            key = tuple(new_exp)
            out[key] = out.get(key, 0) + coeff
        return SparsePoly(out_arity, out)

    def evaluate(self, point: Iterable[Fraction]) -> Fraction:
        values = [Fraction(x) for x in point]
        if len(values) != self.arity:
            raise ArityMismatch(f"point of length {len(values)}, expected {self.arity}")
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            term = Fraction(coeff)
            for value, e in zip(values, exp):
                if e:
                    term *= value ** e
            total += term
        return total

    # ------------------------------------------------------------------
    # division

    def divide_exact(self, divisor: "SparsePoly") -> Optional["SparsePoly"]:
        """Quotient self/divisor when the remainder is exactly zero, else None.

        Trial division by graded-lex leading-term reduction.
        """
        self._check_arity(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_exp, lead_coeff = divisor.leading()
        quotient: dict[tuple[int, ...], Coeff] = {}
        remainder = self
        while not remainder.is_zero():
            rexp, rcoeff = remainder.leading()
            diff = tuple(a - b for a, b in zip(rexp, lead_exp))
            if any(d < 0 for d in diff):
                return None
            c = Fraction(rcoeff) / Fraction(lead_coeff)
            quotient[diff] = quotient.get(diff, 0) + c
            remainder = remainder - SparsePoly.monomial(self.arity, diff, c) * divisor
        return SparsePoly(self.arity, quotient)

    # ------------------------------------------------------------------
    # rendering

    def render(self, names: Optional[list[str]] = None) -> str:
        """Text form like ``5/12*l1^2*l2 + l3`` in graded-lex order."""
        if not self.terms:
            return "0"
        if names is None:
            names = [f"l{i + 1}" for i in range(self.arity)]
        pieces = []
        for exp in self.support():
            coeff = self.terms[exp]
            factors = [
                names[i] if e == 1 else f"{names[i]}^{e}"
                for i, e in enumerate(exp)
                if e
            ]
            magnitude = abs(coeff) if isinstance(coeff, int) else abs(Fraction(coeff))
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)
            pieces.append(("-" if coeff < 0 else "+", body))
        sign, body = pieces[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"SparsePoly({self.arity}, {self.render()})"


def elementary_symmetric(k: int, m: int) -> SparsePoly:
    """The k-th elementary symmetric polynomial in m variables."""
    if not 0 <= k <= m:
        raise OutOfRange(f"need 0 <= k <= m, got k={k}, m={m}")
    terms = {}
    for subset in combinations(range(m), k):
        exp = [0] * m
        for i in subset:
            exp[i] = 1
        terms[tuple(exp)] = 1
    return SparsePoly(m, terms)
