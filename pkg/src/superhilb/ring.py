"""Exact arithmetic in supercommutative polynomial rings.

Coefficients are exact rationals (`fractions.Fraction`); there is no
floating point anywhere.  Monomials keep their variables in a single
global order (by name) with the Koszul sign of any reordering absorbed
into the coefficient, so equality of polynomials is equality of term
maps.  All values are immutable after construction and every operation
is a pure function, safe for unrestricted concurrent use.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from .errors import (
    InvertibleOddVariable,
    NegativePowerOfNonInvertible,
    NotAUnit,
    ParityMismatch,
)


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    def __mul__(self, other):
        return Parity((self.value + other.value) % 2)


class ParityClass(enum.Enum):
    """Parity of a polynomial; zero counts as even, MIXED is inhomogeneous."""

    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


class VarSymbol:
    """Interned variable symbol: equal (name, parity, invertible) triples
    are the same object, so hashing and comparison are cheap."""

    __slots__ = ("name", "parity", "invertible", "_hash")
    _intern: dict = {}

    def __new__(cls, name, parity, invertible=False):
        key = (name, parity, invertible)
        obj = cls._intern.get(key)
        if obj is None:
            if invertible and parity is Parity.ODD:
                raise InvertibleOddVariable(
                    f"odd variable {name!r} cannot be invertible"
                )
            obj = object.__new__(cls)
            obj.name = name
            obj.parity = parity
            obj.invertible = invertible
            obj._hash = hash(key)
            cls._intern[key] = obj
        return obj

    def __hash__(self):
        return self._hash

    def __repr__(self):
        tag = "even" if self.parity is Parity.EVEN else "odd"
        inv = " inv" if self.invertible else ""
        return f"<{tag} {self.name}{inv}>"


def even(name: str, invertible: bool = False) -> VarSymbol:
    return VarSymbol(name, Parity.EVEN, invertible)


def odd(name: str) -> VarSymbol:
    return VarSymbol(name, Parity.ODD)


def _inversions(left, right):
    """Number of pairs (u, v) in left x right with u.name > v.name."""
    count = 0
    for u in left:
        for v in right:
            if u.name > v.name:
                count += 1
    return count


class SuperMonomial:
    """Product of variable powers, stored sorted by variable name.

    Odd exponents are exactly 0 or 1; negative exponents are only legal
    on invertible variables.  Instances are immutable with a cached hash.
    """

    __slots__ = ("factors", "odds", "_hash")

    def __init__(self, factors: tuple):
        self.factors = factors
        self.odds = tuple(v for v, _ in factors if v.parity is Parity.ODD)
        self._hash = hash(factors)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SuperMonomial):
            return NotImplemented
        return self._hash == other._hash and self.factors == other.factors

    @staticmethod
    def make(exponents) -> "SuperMonomial":
        items = []
        for v, e in exponents.items():
            if e == 0:
                continue
            if v.parity is Parity.ODD and e != 1:
                raise ValueError(f"odd variable {v.name} with exponent {e}")
            if e < 0 and not v.invertible:
                raise NegativePowerOfNonInvertible(
                    f"negative power of non-invertible variable {v.name}"
                )
            items.append((v, e))
        items.sort(key=lambda it: it[0].name)
        return SuperMonomial(tuple(items))

    @staticmethod
    def one() -> "SuperMonomial":
        return _MONOMIAL_ONE

    @property
    def is_one(self) -> bool:
        return not self.factors

    def exponent(self, var: VarSymbol) -> int:
        for v, e in self.factors:
            if v is var:
                return e
        return 0

    def variables(self):
        return tuple(v for v, _ in self.factors)

    def odd_variables(self):
        return self.odds

    def parity(self) -> Parity:
        return Parity(len(self.odds) % 2)

    def total_degree(self) -> int:
        return sum(e for _, e in self.factors)

    def mul(self, other: "SuperMonomial"):
        """Product with Koszul sign; returns (sign, monomial) or None if zero."""
        o1 = self.odds
        o2 = other.odds
        if o1 and o2:
            if set(o1) & set(o2):
                return None
            sign = -1 if _inversions(o1, o2) % 2 else 1
        else:
            sign = 1
        f1, f2 = self.factors, other.factors
        if not f1:
            return sign, other
        if not f2:
            return sign, self
        merged = []
        i = j = 0
        n1, n2 = len(f1), len(f2)
        while i < n1 and j < n2:
            v1, e1 = f1[i]
            v2, e2 = f2[j]
            if v1 is v2:
                e = e1 + e2
                if e:
                    merged.append((v1, e))
                i += 1
                j += 1
            elif v1.name < v2.name:
                merged.append(f1[i])
                i += 1
            elif v1.name > v2.name:
                merged.append(f2[j])
                j += 1
            else:
                raise ValueError(
                    f"distinct variables share the name {v1.name!r}"
                )
        merged.extend(f1[i:])
        merged.extend(f2[j:])
        return sign, SuperMonomial(tuple(merged))

    def split(self, split_vars):
        """Split into (rest, sub, sign) with sub over split_vars.

        The sign is such that rest * sub == sign * self as ring elements.
        """
        sub = []
        rest = []
        for item in self.factors:
            if item[0] in split_vars:
                sub.append(item)
            else:
                rest.append(item)
        rest_m = SuperMonomial(tuple(rest))
        sub_m = SuperMonomial(tuple(sub))
        inv = _inversions(rest_m.odds, sub_m.odds)
        return rest_m, sub_m, (-1 if inv % 2 else 1)

    def __repr__(self):
        if not self.factors:
            return "1"
        return "*".join(
            f"{v.name}^{e}" if e != 1 else v.name for v, e in self.factors
        )


_MONOMIAL_ONE = SuperMonomial(())


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class SuperPoly:
    """Finite sum of monomials with exact rational coefficients.

    The term map is the normal form: two polynomials are equal iff their
    maps are equal.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _frac(c)
                if c != 0:
                    clean[m] = c
        self._terms = clean

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero() -> "SuperPoly":
        return _ZERO

    @staticmethod
    def one() -> "SuperPoly":
        return _ONE

    @staticmethod
    def const(c) -> "SuperPoly":
        return SuperPoly({SuperMonomial.one(): _frac(c)})

    @staticmethod
    def var(v: VarSymbol, exp: int = 1) -> "SuperPoly":
        if exp == 0:
            return _ONE
        return SuperPoly({SuperMonomial.make({v: exp}): Fraction(1)})

    @staticmethod
    def promote(x) -> "SuperPoly":
        if isinstance(x, SuperPoly):
            return x
        if isinstance(x, VarSymbol):
            return SuperPoly.var(x)
        return SuperPoly.const(x)

    # -- inspection --------------------------------------------------

    @property
    def terms(self):
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(SuperMonomial.one(), Fraction(0))

    def as_constant(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and SuperMonomial.one() in self._terms:
            return self._terms[SuperMonomial.one()]
        raise ValueError(f"not a constant: {self!r}")

    def parity_class(self) -> ParityClass:
        seen = set()
        for m in self._terms:
            seen.add(m.parity())
            if len(seen) == 2:
                return ParityClass.MIXED
        if not seen or seen == {Parity.EVEN}:
            return ParityClass.EVEN
        return ParityClass.ODD

    def variables(self):
        out = set()
        for m in self._terms:
            out.update(m.variables())
        return out

    def odd_variables(self):
        out = set()
        for m in self._terms:
            out.update(m.odd_variables())
        return out

    def bosonic(self) -> "SuperPoly":
        """The part of the polynomial free of odd variables."""
        return SuperPoly(
            {m: c for m, c in self._terms.items() if not m.odd_variables()}
        )

    def soul(self) -> "SuperPoly":
        return SuperPoly(
            {m: c for m, c in self._terms.items() if m.odd_variables()}
        )

    def degree_in(self, var: VarSymbol):
        """Max exponent of var over the support; None for the zero polynomial."""
        if not self._terms:
            return None
        return max(m.exponent(var) for m in self._terms)

    def min_degree_in(self, var: VarSymbol):
        if not self._terms:
            return None
        return min(m.exponent(var) for m in self._terms)

    # -- arithmetic --------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SuperPoly.const(other)
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __add__(self, other):
        other = SuperPoly.promote(other)
        if not self._terms:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        res = SuperPoly.__new__(SuperPoly)
        res._terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = SuperPoly.__new__(SuperPoly)
        res._terms = {m: -c for m, c in self._terms.items()}
        return res

    def __sub__(self, other):
        return self + (-SuperPoly.promote(other))

    def __rsub__(self, other):
        return SuperPoly.promote(other) + (-self)

    def __mul__(self, other):
        other = SuperPoly.promote(other)
        if not self._terms or not other._terms:
            return _ZERO
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                prod = m1.mul(m2)
                if prod is None:
                    continue
                sign, m = prod
                c = c1 * c2 * sign
                s = out.get(m, Fraction(0)) + c
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        res = SuperPoly.__new__(SuperPoly)
        res._terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return invert(self) ** (-n)
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- structure ---------------------------------------------------

    def as_coeff_map(self, split_vars):
        """View the polynomial in split_vars with coefficients elsewhere.

        Returns {sub_monomial: coefficient}, where sum(coeff * sub) == self
        with the coefficient multiplying from the left.
        """
        split_vars = set(split_vars)
        out = {}
        for m, c in self._terms.items():
            rest, sub, sign = m.split(split_vars)
            bucket = out.setdefault(sub, {})
            s = bucket.get(rest, Fraction(0)) + c * sign
            if s:
                bucket[rest] = s
            else:
                bucket.pop(rest, None)
        result = {}
        for sub, bucket in out.items():
            if bucket:
                p = SuperPoly.__new__(SuperPoly)
                p._terms = bucket
                result[sub] = p
        return result

    def coeff_of(self, sub_monomial: SuperMonomial, split_vars) -> "SuperPoly":
        return self.as_coeff_map(split_vars).get(sub_monomial, _ZERO)

    def substitute(self, assignment) -> "SuperPoly":
        """Apply the ring homomorphism sending each variable to its value.

        Unassigned variables map to themselves.  Values must match the
        variable's parity; negative powers of a replaced invertible
        variable resolve through `invert`.
        """
        assignment = {v: SuperPoly.promote(val) for v, val in assignment.items()}
        for v, val in assignment.items():
            if val.is_zero():
                continue
            want = ParityClass.EVEN if v.parity is Parity.EVEN else ParityClass.ODD
            if val.parity_class() is not want:
                raise ParityMismatch(
                    f"replacement for {v.name} has parity "
                    f"{val.parity_class().value}, expected {want.value}"
                )
        out = _ZERO
        cache = {}
        for m, c in self._terms.items():
            acc = SuperPoly.const(c)
            for v, e in m.factors:
                rep = assignment.get(v)
                if rep is None:
                    acc = acc * SuperPoly.var(v, e)
                    continue
                key = (v, e)
                val = cache.get(key)
                if val is None:
                    val = rep ** e if e >= 0 else invert(rep) ** (-e)
                    cache[key] = val
                acc = acc * val
            out = out + acc
        return out

    def diff(self, var: VarSymbol) -> "SuperPoly":
        """Formal partial derivative with respect to an even variable."""
        if var.parity is not Parity.EVEN:
            raise ParityMismatch("diff is only defined for even variables")
        out = {}
        for m, c in self._terms.items():
            e = m.exponent(var)
            if e == 0:
                continue
            exps = {v: k for v, k in m.factors}
            exps[var] = e - 1
            nm = SuperMonomial.make(exps)
            s = out.get(nm, Fraction(0)) + c * e
            if s:
                out[nm] = s
            else:
                out.pop(nm, None)
        return SuperPoly(out)

    def __repr__(self):
        from .parser import pretty

        return f"SuperPoly({pretty(self)})"


_ZERO = SuperPoly()
_ONE = SuperPoly.const(1)


def parity_of(p: SuperPoly) -> ParityClass:
    return p.parity_class()


def _mono_key(m: SuperMonomial, names):
    exps = {v.name: e for v, e in m.factors}
    return tuple(exps.get(nm, 0) for nm in names)


def try_exact_divide(num: SuperPoly, den: SuperPoly, max_steps: int = 10_000):
    """num/den as a polynomial if den divides num exactly, else None.

    Single-divisor division under a lex order on exponent vectors; a
    Koszul kill of the would-be leading term makes the attempt fail,
    which only means the fraction stays unsimplified.  Each step emits
    one quotient term, so max_steps bounds the quotient size.
    """
    if den.is_zero():
        return None
    if num.is_zero():
        return _ZERO
    num_vars = num.variables()
    den_vars = den.variables()
    if not den_vars <= num_vars:
        # heuristic early exit; a miss only leaves the fraction unsimplified
        return None
    names = sorted({v.name for v in num_vars | den_vars})
    # shift Laurent exponents away; the shifts are invertible monomials
    shift = {}
    for poly in (num, den):
        for m in poly.terms:
            for v, e in m.factors:
                if e < 0:
                    shift[v] = max(shift.get(v, 0), -e)
    if shift:
        # scaling both sides by the same unit leaves the quotient alone
        shift_poly = SuperPoly({SuperMonomial.make(shift): Fraction(1)})
        num = num * shift_poly
        den = den * shift_poly

    key_cache = {}

    def key_of(m):
        k = key_cache.get(m)
        if k is None:
            k = _mono_key(m, names)
            key_cache[m] = k
        return k

    den_lead_m = max(den.terms, key=key_of)
    den_lead_c = den.terms[den_lead_m]
    acc = {}
    rem = num
    for _ in range(max_steps):
        if rem.is_zero():
            return SuperPoly(acc)
        lead_m = max(rem.terms, key=key_of)
        lead_c = rem.terms[lead_m]
        exps = {v: e for v, e in lead_m.factors}
        for v, e in den_lead_m.factors:
            exps[v] = exps.get(v, 0) - e
        if any(e < 0 and not v.invertible for v, e in exps.items()):
            return None
        if any(e not in (0, 1) and v.parity is Parity.ODD
               for v, e in exps.items()):
            return None
        q_mono = SuperMonomial.make(exps)
        prod = q_mono.mul(den_lead_m)
        if prod is None:
            return None
        sign, back = prod
        if back != lead_m:
            return None
        term = SuperPoly({q_mono: lead_c / den_lead_c * sign})
        step = term * den
        if step.terms.get(lead_m) != lead_c:
            return None
        rem = rem - step
        for m, c in term.terms.items():
            s = acc.get(m, Fraction(0)) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
    return None


def invert(p: SuperPoly) -> SuperPoly:
    """Inverse of a unit u*(1 + n): single invertible monomial times
    a nonzero rational, plus a nilpotent part.

    Computed as u^{-1} * sum((-n)^j), a finite geometric series since
    every term of n carries an odd variable.
    """
    body = [(m, c) for m, c in p.terms.items() if not m.odd_variables()]
    if not body:
        raise NotAUnit("zero constant part: every term is nilpotent")
    if len(body) > 1:
        raise NotAUnit("more than one non-nilpotent term")
    m0, c0 = body[0]
    if any(not v.invertible for v in m0.variables()):
        raise NotAUnit(
            f"unit part {m0!r} involves a variable not declared invertible"
        )
    u_inv = SuperPoly(
        {SuperMonomial.make({v: -e for v, e in m0.factors}): Fraction(1) / c0}
    )
    soul = p.soul()
    if soul.is_zero():
        return u_inv
    n = u_inv * soul
    neg_n = -n
    acc = _ONE
    term = _ONE
    for _ in range(len(n.odd_variables()) + 2):
        term = term * neg_n
        if term.is_zero():
            break
        acc = acc + term
    else:
        raise AssertionError("nilpotent series failed to terminate")
    return acc * u_inv
