"""Exact Laurent polynomials in one variable ``A`` with integer coefficients."""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping

__all__ = [
    "LaurentPolynomial",
    "A",
    "SIGMA",
    "canon_poly",
    "poly_mirror",
    "sigma_to_laurent",
    "parse_poly",
]


class LaurentPolynomial:
    """Sparse Laurent polynomial; immutable and hashable.

    Stored as a sorted tuple of ``(exponent, coefficient)`` pairs with no zero
    coefficients.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | int = 0) -> None:
        if isinstance(terms, int):
            items = [(0, terms)]
        elif isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict[int, int] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self._hash = hash(self._terms)

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> LaurentPolynomial:
        return cls(((exponent, coefficient),))

    # -- views ------------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        """Ascending ``(exponent, coefficient)`` pairs."""
        return self._terms

    def to_dict(self) -> dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    @property
    def min_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return self._terms[0][0]

    @property
    def max_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return self._terms[-1][0]

    def coefficient(self, exponent: int) -> int:
        for e, c in self._terms:
            if e == exponent:
                return c
        return 0

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other: object) -> LaurentPolynomial | None:
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, int):
            return LaurentPolynomial(other)
        return None

    def __add__(self, other: object) -> LaurentPolynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LaurentPolynomial(self._terms + o._terms)

    __radd__ = __add__

    def __neg__(self) -> LaurentPolynomial:
        return LaurentPolynomial((e, -c) for e, c in self._terms)

    def __sub__(self, other: object) -> LaurentPolynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> LaurentPolynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> LaurentPolynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in o._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPolynomial:
        if n < 0:
            if not self.is_monomial() or abs(self._terms[0][1]) != 1:
                raise ValueError("only units can be inverted")
            e, c = self._terms[0]
            return LaurentPolynomial.monomial(e * n, c ** (-n))
        result = LaurentPolynomial(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> LaurentPolynomial:
        """Multiply by ``A**k``."""
        return LaurentPolynomial((e + k, c) for e, c in self._terms)

    def divide_exact(self, other: LaurentPolynomial) -> LaurentPolynomial | None:
        """Exact quotient ``self / other`` or None when it does not exist."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = dict(self._terms)
        q: dict[int, int] = {}
        lead_e, lead_c = other._terms[-1]
        # an exact quotient has no exponent below this one
        floor = (self._terms[0][0] - other._terms[0][0]) if self._terms else 0
        while rem:
            top = max(rem)
            c = rem[top]
            if c % lead_c:
                return None
            qe, qc = top - lead_e, c // lead_c
            if qe < floor:
                return None
            q[qe] = qc
            for e, oc in other._terms:
                k = e + qe
                v = rem.get(k, 0) - qc * oc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
            if rem and max(rem) >= top:
                return None
        return LaurentPolynomial(q)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        """Total order used for deterministic tie-breaks (descending terms)."""
        return tuple(reversed(self._terms))

    def __lt__(self, other: LaurentPolynomial) -> bool:
        return self.sort_key() < other.sort_key()

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for e, c in reversed(self._terms):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                var = "A" if e == 1 else f"A^{e}"
                body = var if a == 1 else f"{a}{var}"
            out.append(sign + body)
        s = "".join(out)
        return s[1:] if s.startswith("+") else s

    def __repr__(self) -> str:
        return f"LaurentPolynomial({str(self)!r})"

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in self._terms}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> LaurentPolynomial:
        return cls({int(e): int(c) for e, c in data.items()})


A = LaurentPolynomial.monomial(1)
SIGMA = LaurentPolynomial({-1: 1, 0: 1, 1: 1})

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(A(?:\^\{?(-?\d+)\}?)?)?")


def parse_poly(text: str) -> LaurentPolynomial:
    """Parse ``"-A^4-A^3-2A^2-A-1"``; LaTeX braces ``A^{4}`` are accepted."""
    s = text.replace(" ", "").replace("$", "")
    if s in ("", "0"):
        return LaurentPolynomial()
    acc: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at position {pos}: {text!r}")
        sign, digits, var, exp = m.groups()
        if not digits and not var:
            raise ValueError(f"cannot parse polynomial at position {pos}: {text!r}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        e = 0
        if var:
            e = int(exp) if exp is not None else 1
        acc[e] = acc.get(e, 0) + c
        pos = m.end()
    return LaurentPolynomial(acc)


def canon_poly(p: LaurentPolynomial) -> LaurentPolynomial:
    """Representative of ``{±A^n p}``: lowest exponent 0, positive leading coefficient."""
    if p.is_zero():
        return p
    q = p.shift(-p.min_degree)
    if q.terms[-1][1] < 0:
        q = -q
    return q


def poly_mirror(p: LaurentPolynomial) -> LaurentPolynomial:
    """Substitute ``A -> A^-1``."""
    return LaurentPolynomial((-e, c) for e, c in p.terms)


_SIGMA_POWERS: list[LaurentPolynomial] = [LaurentPolynomial(1)]


def _sigma_power(j: int) -> LaurentPolynomial:
    while len(_SIGMA_POWERS) <= j:
        _SIGMA_POWERS.append(_SIGMA_POWERS[-1] * SIGMA)
    return _SIGMA_POWERS[j]


def sigma_to_laurent(coeffs: Iterable[int]) -> LaurentPolynomial:
    """Evaluate ``sum c_j sigma^j`` with ``sigma = A + 1 + A^-1``."""
    acc: dict[int, int] = {}
    for j, c in enumerate(coeffs):
        if c:
            for e, s in _sigma_power(j).terms:
                acc[e] = acc.get(e, 0) + c * s
    return LaurentPolynomial(acc)
