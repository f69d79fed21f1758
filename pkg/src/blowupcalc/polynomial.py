"""Exact multivariate polynomials with rational coefficients.

Variables are named symbols: base sizes "mu0", "mu1", ..., blow-up
weights "eps1", ..., second-homology coordinates "lam1", ..., and the
formal fiber-volume symbol "V".  The canonical variable order is
mu < eps < lam < V, each family by index; monomials are compared in
graded lexicographic order over that variable order.  No zero
coefficients are ever stored, so equal polynomials have identical
canonical forms.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = ["VolumePolynomial", "variable_sort_key", "monomial_key"]

_VAR_RE = re.compile(r"^(mu|eps|lam)([0-9]*)$")
_FAMILY_RANK = {"mu": 0, "eps": 1, "lam": 2}


def variable_sort_key(name: str) -> tuple[int, int, str]:
    """Canonical ordering key: mu-family, eps-family, lam-family, V, other."""
    if name == "V":
        return (3, 0, name)
    m = _VAR_RE.match(name)
    if m:
        return (_FAMILY_RANK[m.group(1)], int(m.group(2) or 0), name)
    return (4, 0, name)


def monomial_key(exp: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Graded lexicographic key (total degree, exponent vector)."""
    return (sum(exp), exp)


def _coerce(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    return Fraction(value)


class VolumePolynomial:
    """Polynomial as a map from exponent vectors to rational coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping[tuple[int, ...], object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variables in {variables!r}")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(variables):
                raise ValueError(f"exponent {exp} does not match variables {variables}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = _coerce(coef)
            if c != 0:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if clean[exp] == 0:
                    del clean[exp]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "VolumePolynomial":
        return cls((), {})

    @classmethod
    def constant(cls, c) -> "VolumePolynomial":
        c = _coerce(c)
        return cls((), {(): c} if c != 0 else {})

    @classmethod
    def variable(cls, name: str) -> "VolumePolynomial":
        return cls((name,), {(1,): Fraction(1)})

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def used_variables(self) -> tuple[str, ...]:
        used = [any(exp[i] for exp in self.terms) for i in range(len(self.variables))]
        return tuple(v for v, u in zip(self.variables, used) if u)

    def canonical(self) -> "VolumePolynomial":
        """Equivalent polynomial over the sorted tuple of used variables."""
        new_vars = tuple(sorted(self.used_variables(), key=variable_sort_key))
        pos = {v: i for i, v in enumerate(new_vars)}
        terms = {}
        for exp, coef in self.terms.items():
            new_exp = [0] * len(new_vars)
            for v, e in zip(self.variables, exp):
                if e:
                    new_exp[pos[v]] = e
            terms[tuple(new_exp)] = coef
        return VolumePolynomial(new_vars, terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in descending graded-lexicographic order (leading first)."""
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)

    def total_degree(self) -> int:
        return max((sum(exp) for exp in self.terms), default=0)

    def coefficient(self, monomial: Mapping[str, int]) -> Fraction:
        """Coefficient of the monomial prod(var^exp); absent vars mean 0."""
        for v, e in monomial.items():
            if e > 0 and v not in self.variables:
                return Fraction(0)
        target = tuple(monomial.get(v, 0) for v in self.variables)
        return self.terms.get(target, Fraction(0))

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        """Exact evaluation; every variable of the polynomial must be given."""
        vals = []
        for v in self.variables:
            if v not in values:
                raise ValueError(f"no value for variable {v}")
            vals.append(_coerce(values[v]))
        total = Fraction(0)
        for exp, coef in self.terms.items():
            term = coef
            for val, e in zip(vals, exp):
                term *= val ** e
            total += term
        return total

    # -- arithmetic ---------------------------------------------------

    def _align(self, other: "VolumePolynomial") -> tuple[tuple[str, ...], dict, dict]:
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        merged = tuple(sorted(set(self.variables) | set(other.variables), key=variable_sort_key))

        def remap(poly: VolumePolynomial) -> dict:
            pos = {v: i for i, v in enumerate(merged)}
            idx = [pos[v] for v in poly.variables]
            out = {}
            for exp, coef in poly.terms.items():
                new_exp = [0] * len(merged)
                for i, e in zip(idx, exp):
                    new_exp[i] = e
                out[tuple(new_exp)] = coef
            return out

        return merged, remap(self), remap(other)

    @staticmethod
    def _as_poly(value) -> "VolumePolynomial":
        if isinstance(value, VolumePolynomial):
            return value
        return VolumePolynomial.constant(value)

    def __add__(self, other) -> "VolumePolynomial":
        try:
            other = self._as_poly(other)
        except TypeError:
            return NotImplemented
        variables, a, b = self._align(other)
        terms = dict(a)
        for exp, coef in b.items():
            terms[exp] = terms.get(exp, Fraction(0)) + coef
        return VolumePolynomial(variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "VolumePolynomial":
        return VolumePolynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "VolumePolynomial":
        try:
            other = self._as_poly(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "VolumePolynomial":
        return self._as_poly(other) - self

    def __mul__(self, other) -> "VolumePolynomial":
        try:
            other = self._as_poly(other)
        except TypeError:
            return NotImplemented
        variables, a, b = self._align(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                terms[exp] = terms.get(exp, Fraction(0)) + c1 * c2
        return VolumePolynomial(variables, terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "VolumePolynomial":
        c = _coerce(scalar)
        if c == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        return VolumePolynomial(self.variables, {e: k / c for e, k in self.terms.items()})

    def __pow__(self, n: int) -> "VolumePolynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        out = VolumePolynomial.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def exact_divide(self, divisor: "VolumePolynomial") -> "VolumePolynomial | None":
        """Quotient self/divisor when the division is exact, else None.

        Single-divisor multivariate division in graded-lex order; for a
        principal ideal the remainder vanishes iff the division is exact,
        so the first term that cannot be reduced settles the answer.
        """
        divisor = self._as_poly(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division of a polynomial by zero")
        variables, rem, dterms = self._align(divisor)
        rem = dict(rem)
        lead_exp, lead_coef = max(dterms.items(), key=lambda t: monomial_key(t[0]))
        quotient: dict[tuple[int, ...], Fraction] = {}
        while rem:
            exp, coef = max(rem.items(), key=lambda t: monomial_key(t[0]))
            diff = tuple(a - b for a, b in zip(exp, lead_exp))
            if any(d < 0 for d in diff):
                return None
            q = coef / lead_coef
            quotient[diff] = quotient.get(diff, Fraction(0)) + q
            for dexp, dcoef in dterms.items():
                tgt = tuple(a + b for a, b in zip(diff, dexp))
                new = rem.get(tgt, Fraction(0)) - q * dcoef
                if new == 0:
                    rem.pop(tgt, None)
                else:
                    rem[tgt] = new
        return VolumePolynomial(variables, quotient)

    # -- comparisons & display ----------------------------------------

    def _canonical_key(self):
        canon = self.canonical()
        return (canon.variables, tuple(canon.sorted_terms()))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = VolumePolynomial.constant(other)
        if not isinstance(other, VolumePolynomial):
            return NotImplemented
        return self._canonical_key() == other._canonical_key()

    def __hash__(self):
        return hash(self._canonical_key())

    def __repr__(self) -> str:
        return f"VolumePolynomial({self})"

    def __str__(self) -> str:
        canon = self.canonical()
        if canon.is_zero():
            return "0"
        chunks = []
        for exp, coef in canon.sorted_terms():
            factors = [
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(canon.variables, exp)
                if e
            ]
            body = "*".join(factors)
            mag = abs(coef)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            chunks.append(("- " if coef < 0 else "+ ") + text)
        out = " ".join(chunks)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]
