"""Fractions of superpolynomials with regular even denominators.

Transition maps between Hilbert-scheme charts are regular away from
removed loci such as the diagonal, so their components need denominators
that are not plain monomials.  A `LocalizedPoly` is num/den with den an
even polynomial whose odd-free part is nonzero; such elements are never
zero divisors, so cross-multiplication is a sound equality test and the
arithmetic below is exact.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotAUnit, ParityMismatch
from .ring import ParityClass, SuperPoly, invert, try_exact_divide


class LocalizedPoly:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = SuperPoly.promote(num)
        den = SuperPoly.one() if den is None else SuperPoly.promote(den)
        if den.parity_class() is not ParityClass.EVEN:
            raise ParityMismatch("denominator must be even")
        if den.bosonic().is_zero():
            raise ZeroDivisionError("denominator is a zero divisor (or zero)")
        # Fold unit denominators (single monomial in invertible variables)
        # back into the numerator so plain polynomials stay plain.
        try:
            num = num * invert(den)
            den = SuperPoly.one()
        except NotAUnit:
            lead = den.constant_term()
            if lead:
                num = num * (Fraction(1) / lead)
                den = den * (Fraction(1) / lead)
        self.num = num
        self.den = den

    def bosonic_denominator(self) -> "LocalizedPoly":
        """Clear nilpotent terms out of the denominator by multiplying
        with the conjugate: (B + N)(B - N) = B^2 - N^2 squares the soul
        away in finitely many passes."""
        out = self
        for _ in range(8):
            soul = out.den.soul()
            if soul.is_zero():
                return out
            conj = out.den.bosonic() - soul
            fresh = LocalizedPoly.__new__(LocalizedPoly)
            fresh.num = out.num * conj
            fresh.den = out.den * conj
            out = fresh
        raise AssertionError("denominator soul failed to vanish")

    def simplified(self) -> "LocalizedPoly":
        """Cancel the denominator when it divides the numerator exactly.

        Worth calling on long-lived values (transition rules); fractions
        that are secretly Laurent polynomials collapse to den = 1.
        """
        if self.is_polynomial():
            return self
        out = self.bosonic_denominator()
        quotient = try_exact_divide(out.num, out.den, max_steps=64)
        if quotient is None:
            return out
        fresh = LocalizedPoly.__new__(LocalizedPoly)
        fresh.num = quotient
        fresh.den = SuperPoly.one()
        return fresh

    @staticmethod
    def promote(x) -> "LocalizedPoly":
        if isinstance(x, LocalizedPoly):
            return x
        return LocalizedPoly(x)

    # -- inspection --------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == SuperPoly.one()

    def as_poly(self) -> SuperPoly:
        if not self.is_polynomial():
            raise NotAUnit(f"denominator {self.den!r} is not a unit")
        return self.num

    def parity_class(self) -> ParityClass:
        return self.num.parity_class()

    def bosonic(self) -> "LocalizedPoly":
        return LocalizedPoly(self.num.bosonic(), self.den.bosonic())

    # -- arithmetic --------------------------------------------------

    def __eq__(self, other):
        other = LocalizedPoly.promote(other)
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __add__(self, other):
        other = LocalizedPoly.promote(other)
        if self.den == other.den:
            return LocalizedPoly(self.num + other.num, self.den)
        return LocalizedPoly(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        out = LocalizedPoly.__new__(LocalizedPoly)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        return self + (-LocalizedPoly.promote(other))

    def __rsub__(self, other):
        return LocalizedPoly.promote(other) + (-self)

    def __mul__(self, other):
        other = LocalizedPoly.promote(other)
        return LocalizedPoly(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def reciprocal(self) -> "LocalizedPoly":
        if self.num.parity_class() is not ParityClass.EVEN:
            raise NotAUnit("cannot invert an odd element")
        if self.num.bosonic().is_zero():
            raise NotAUnit("cannot invert a nilpotent element")
        return LocalizedPoly(self.den, self.num)

    def __truediv__(self, other):
        return self * LocalizedPoly.promote(other).reciprocal()

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        out = LocalizedPoly(SuperPoly.one())
        base = self
        for _ in range(n):
            out = out * base
        return out

    def substitute(self, assignment) -> "LocalizedPoly":
        num = substitute_localized(self.num, assignment)
        den = substitute_localized(self.den, assignment)
        return num / den

    def diff(self, var) -> "LocalizedPoly":
        return LocalizedPoly(
            self.num.diff(var) * self.den - self.num * self.den.diff(var),
            self.den * self.den,
        )

    def __repr__(self):
        from .parser import pretty

        if self.is_polynomial():
            return f"LocalizedPoly({pretty(self.num)})"
        return f"LocalizedPoly(({pretty(self.num)}) / ({pretty(self.den)}))"


def substitute_localized(p: SuperPoly, assignment) -> LocalizedPoly:
    """Substitute LocalizedPoly values into a SuperPoly, term by term.

    Factors multiply in the monomial's canonical variable order, which
    keeps the Koszul signs consistent with `SuperPoly.substitute`.
    """
    assignment = {v: LocalizedPoly.promote(val) for v, val in assignment.items()}
    for v, val in assignment.items():
        if val.is_zero():
            continue
        want = ParityClass.EVEN if v.parity.value == 0 else ParityClass.ODD
        if val.parity_class() is not want:
            raise ParityMismatch(
                f"replacement for {v.name} has parity {val.parity_class().value}"
            )
    out = LocalizedPoly(SuperPoly.zero())
    cache = {}
    for m, c in p.terms.items():
        acc = LocalizedPoly(SuperPoly.const(c))
        for v, e in m.factors:
            rep = assignment.get(v)
            if rep is None:
                acc = acc * LocalizedPoly(SuperPoly.var(v, e))
                continue
            key = (v, e)
            val = cache.get(key)
            if val is None:
                val = rep ** e
                cache[key] = val
            acc = acc * val
        out = out + acc
    return out
