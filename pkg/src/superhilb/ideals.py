"""Canonical ideals of 0-dimensional families on the (1|1) affine
superline, super long division, reduction onto the (p|q) monomial basis,
and the flattening-stratification generators.

A rank-(p|q) family with q <= p has the canonical presentation

    f = (x^q + b)(x^{p-q} + a) + B (theta + A)
    g = (x^q + b)(theta + A)

with a = sum a_i x^i (i < p-q), b = sum b_i x^i (i < q), A = sum
alpha_i x^i (i < p-q) odd, B = sum beta_i x^i (i < q) odd.  The raw
presentation (general coefficients on x^i and x^i*theta) reduces to this
shape plus residual terms sum c_i x^i and sum gamma_i x^i; the residuals
cut out the locus where the family really is flat of rank (p|q).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonMonicDivisor, RankOrderViolation
from .ring import SuperMonomial, SuperPoly, VarSymbol, even, odd

_REDUCE_LIMIT = 2000


def _check_rank(p: int, q: int):
    if not (0 <= q <= p):
        raise RankOrderViolation(f"need 0 <= q <= p, got (p, q) = ({p}, {q})")


def _poly_from_coeffs(coeffs, x: VarSymbol, offset: int = 0) -> SuperPoly:
    out = SuperPoly.zero()
    for i, c in enumerate(coeffs):
        out = out + SuperPoly.promote(c) * SuperPoly.var(x, i + offset)
    return out


def coeff_list(poly: SuperPoly, x: VarSymbol, length: int):
    """Coefficients of 1, x, ..., x^{length-1}; fails if higher powers remain."""
    cmap = poly.as_coeff_map({x})
    out = [SuperPoly.zero()] * length
    for mono, coeff in cmap.items():
        e = mono.exponent(x)
        if e >= length or e < 0:
            raise ValueError(f"unexpected x-degree {e}")
        out[e] = coeff
    return out


# ---------------------------------------------------------------------------
# Long division


def super_divmod(dividend: SuperPoly, divisor: SuperPoly, x: VarSymbol,
                 theta: VarSymbol | None = None):
    """Divide by a divisor monic in x whose coefficients are free of x
    (and of theta when given).  Returns (quotient, remainder) with the
    remainder of x-degree strictly below the divisor's."""
    dmap = divisor.as_coeff_map({x})
    if not dmap:
        raise NonMonicDivisor("divisor is zero")
    deg = max(m.exponent(x) for m in dmap)
    if min(m.exponent(x) for m in dmap) < 0:
        raise NonMonicDivisor("divisor has negative x-powers")
    lead = dmap.get(SuperMonomial.make({x: deg}))
    if lead != SuperPoly.one():
        raise NonMonicDivisor("leading x-coefficient is not 1")
    if theta is not None:
        for coeff in dmap.values():
            if any(v == theta for v in coeff.variables()):
                raise NonMonicDivisor("divisor coefficients involve theta")
    if (dividend.min_degree_in(x) or 0) < 0:
        raise NonMonicDivisor("dividend has negative x-powers")

    quotient = SuperPoly.zero()
    rem = dividend
    for _ in range(_REDUCE_LIMIT):
        rmap = rem.as_coeff_map({x})
        top = None
        for mono, coeff in rmap.items():
            e = mono.exponent(x)
            if e >= deg and (top is None or e > top[0]):
                top = (e, coeff)
        if top is None:
            break
        e, coeff = top
        step = coeff * SuperPoly.var(x, e - deg)
        quotient = quotient + step
        rem = rem - step * divisor
    else:
        raise AssertionError("long division failed to terminate")
    return quotient, rem


# ---------------------------------------------------------------------------
# Ideal presentations


@dataclass(frozen=True)
class RawIdeal:
    """Generators x^p + sum a_i x^i + sum alpha_i x^i theta and
    x^q theta + sum b_i x^i theta + sum beta_i x^i, with free coefficients."""

    p: int
    q: int
    x: VarSymbol
    theta: VarSymbol
    a: tuple  # p even symbols
    b: tuple  # q even symbols
    alpha: tuple  # q odd symbols
    beta: tuple  # p odd symbols
    f: SuperPoly
    g: SuperPoly

    @staticmethod
    def generic(p: int, q: int, tag: str = "") -> "RawIdeal":
        _check_rank(p, q)
        x = even("x")
        theta = odd("theta")
        a = tuple(even(f"at{i}{tag}") for i in range(p))
        b = tuple(even(f"bt{i}{tag}") for i in range(q))
        alpha = tuple(odd(f"alphat{i}{tag}") for i in range(q))
        beta = tuple(odd(f"betat{i}{tag}") for i in range(p))
        f = (
            SuperPoly.var(x, p)
            + _poly_from_coeffs([SuperPoly.var(s) for s in a], x)
            + _poly_from_coeffs([SuperPoly.var(s) for s in alpha], x)
            * SuperPoly.var(theta)
        )
        g = (
            SuperPoly.var(x, q) * SuperPoly.var(theta)
            + _poly_from_coeffs([SuperPoly.var(s) for s in b], x)
            * SuperPoly.var(theta)
            + _poly_from_coeffs([SuperPoly.var(s) for s in beta], x)
        )
        return RawIdeal(p, q, x, theta, a, b, alpha, beta, f, g)


def canonical_pair(p, q, x, theta, a_vals, b_vals, alpha_vals, beta_vals):
    """Build (f, g) of the canonical shape from coefficient values."""
    _check_rank(p, q)
    bq = SuperPoly.var(x, q) + _poly_from_coeffs(b_vals, x)
    apq = SuperPoly.var(x, p - q) + _poly_from_coeffs(a_vals, x)
    theta_a = SuperPoly.var(theta) + _poly_from_coeffs(alpha_vals, x)
    beta_poly = _poly_from_coeffs(beta_vals, x)
    f = bq * apq + beta_poly * theta_a
    g = bq * theta_a
    return f, g


@dataclass(frozen=True)
class CanonicalIdeal:
    p: int
    q: int
    x: VarSymbol
    theta: VarSymbol
    a: tuple
    b: tuple
    alpha: tuple
    beta: tuple
    f: SuperPoly
    g: SuperPoly

    @staticmethod
    def generic(p: int, q: int, tag: str = "") -> "CanonicalIdeal":
        _check_rank(p, q)
        if p < 1:
            raise RankOrderViolation("canonical ideals need p >= 1")
        x = even("x")
        theta = odd("theta")
        a = tuple(even(f"a{i}{tag}") for i in range(p - q))
        b = tuple(even(f"b{i}{tag}") for i in range(q))
        alpha = tuple(odd(f"alpha{i}{tag}") for i in range(p - q))
        beta = tuple(odd(f"beta{i}{tag}") for i in range(q))
        f, g = canonical_pair(
            p,
            q,
            x,
            theta,
            [SuperPoly.var(s) for s in a],
            [SuperPoly.var(s) for s in b],
            [SuperPoly.var(s) for s in alpha],
            [SuperPoly.var(s) for s in beta],
        )
        return CanonicalIdeal(p, q, x, theta, a, b, alpha, beta, f, g)

    def with_values(self, values) -> tuple[SuperPoly, SuperPoly]:
        """(f, g) with the parameter symbols replaced by given polynomials."""
        return (self.f.substitute(values), self.g.substitute(values))

    def serialize(self) -> str:
        from .parser import pretty

        return f"f = {pretty(self.f)}\ng = {pretty(self.g)}\n"


# ---------------------------------------------------------------------------
# Reduction onto the monomial basis


@dataclass(frozen=True)
class BasisVector:
    """Coordinates over 1, x, ..., x^{p-1}, theta, x theta, ...,
    x^{q-1} theta, plus the cofactors certifying the reduction."""

    evens: tuple
    odds: tuple
    cofactor_f: SuperPoly
    cofactor_g: SuperPoly

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.evens) and all(
            o.is_zero() for o in self.odds
        )

    def __eq__(self, other):
        if not isinstance(other, BasisVector):
            return NotImplemented
        return self.evens == other.evens and self.odds == other.odds


def reduce_to_basis(poly: SuperPoly, ideal: CanonicalIdeal) -> BasisVector:
    """Normal form of poly modulo (f, g) on the monomial basis.

    theta-terms of x-degree >= q fall to g (monic x^q theta), even terms
    of x-degree >= p fall to f (monic x^p); the returned cofactors
    satisfy poly = sum(evens_i x^i) + sum(odds_j x^j theta)
    + cofactor_f * f + cofactor_g * g exactly.
    """
    x, theta = ideal.x, ideal.theta
    p, q = ideal.p, ideal.q
    u = SuperPoly.zero()
    v = SuperPoly.zero()
    rem = poly
    for _ in range(_REDUCE_LIMIT):
        cmap = rem.as_coeff_map({x, theta})
        worst = None
        for mono, coeff in cmap.items():
            e = mono.exponent(x)
            has_theta = mono.exponent(theta) == 1
            if has_theta and e >= q:
                weight = e + (p - q)
            elif not has_theta and e >= p:
                weight = e
            else:
                continue
            if worst is None or weight > worst[0]:
                worst = (weight, e, has_theta, coeff)
        if worst is None:
            break
        _, e, has_theta, coeff = worst
        if has_theta:
            step = coeff * SuperPoly.var(x, e - q)
            v = v + step
            rem = rem - step * ideal.g
        else:
            step = coeff * SuperPoly.var(x, e - p)
            u = u + step
            rem = rem - step * ideal.f
    else:
        raise AssertionError("basis reduction failed to terminate")

    cmap = rem.as_coeff_map({x, theta})
    evens = [SuperPoly.zero()] * p
    odds = [SuperPoly.zero()] * q
    for mono, coeff in cmap.items():
        e = mono.exponent(x)
        if mono.exponent(theta):
            odds[e] = coeff
        else:
            evens[e] = coeff
    return BasisVector(tuple(evens), tuple(odds), u, v)


def basis_expansion(vec: BasisVector, ideal: CanonicalIdeal) -> SuperPoly:
    out = SuperPoly.zero()
    for i, c in enumerate(vec.evens):
        out = out + c * SuperPoly.var(ideal.x, i)
    for j, c in enumerate(vec.odds):
        out = out + c * SuperPoly.var(ideal.x, j) * SuperPoly.var(ideal.theta)
    return out


def verify_reduction(poly: SuperPoly, vec: BasisVector,
                     ideal: CanonicalIdeal) -> bool:
    recomposed = (
        basis_expansion(vec, ideal)
        + vec.cofactor_f * ideal.f
        + vec.cofactor_g * ideal.g
    )
    return recomposed == poly


def membership(poly: SuperPoly, ideal: CanonicalIdeal) -> bool:
    return reduce_to_basis(poly, ideal).is_zero()


# ---------------------------------------------------------------------------
# Coordinate change raw -> canonical


def _canonical_from_raw_coeffs(p, q, x, theta, a_t, b_t, alpha_t, beta_t):
    """Run the division-based derivation on raw coefficient values.

    Returns (a, b, alpha, beta, c, gamma) coefficient lists such that

        x^p + sum a_t x^i + (sum alpha_t x^i) theta
            = (x^q + b)(x^{p-q} + a) + c + B(theta + A)
        x^q theta + (sum b_t x^i) theta + sum beta_t x^i
            = (x^q + b)(theta + A) + gamma

    with B = sum beta_i x^i and A = sum alpha_i x^i.
    """
    _check_rank(p, q)
    b_vals = [SuperPoly.promote(v) for v in b_t]
    bq = SuperPoly.var(x, q) + _poly_from_coeffs(b_vals, x)

    beta_raw_poly = _poly_from_coeffs(beta_t, x)
    delta, eps = super_divmod(beta_raw_poly, bq, x, theta)
    alpha_vals = coeff_list(delta, x, max(p - q, 1))[: p - q]
    gamma_vals = coeff_list(eps, x, max(q, 1))[:q]

    even_raw = SuperPoly.var(x, p) + _poly_from_coeffs(a_t, x)
    cprime_full, dprime = super_divmod(even_raw, bq, x, theta)

    beta_vals = [SuperPoly.promote(v) for v in alpha_t]
    beta_poly = _poly_from_coeffs(beta_vals, x)
    residual_even = dprime - beta_poly * delta
    e_quo, r = super_divmod(residual_even, bq, x, theta)
    a_full = cprime_full + e_quo - SuperPoly.var(x, p - q)
    a_vals = coeff_list(a_full, x, max(p - q, 1))[: p - q]
    c_vals = coeff_list(r, x, max(q, 1))[:q]
    return a_vals, b_vals, alpha_vals, beta_vals, c_vals, gamma_vals


@dataclass(frozen=True)
class CoordinateChange:
    """Invertible parameter substitution between raw and canonical
    coordinates, with the residual stratification coefficients."""

    p: int
    q: int
    raw: RawIdeal
    x: VarSymbol
    theta: VarSymbol
    a: tuple
    b: tuple
    alpha: tuple
    beta: tuple
    c: tuple
    gamma: tuple
    forward: dict  # raw symbol -> SuperPoly in canonical+residual symbols
    backward: dict  # canonical/residual symbol -> SuperPoly in raw symbols
    f_canonical: SuperPoly
    g_canonical: SuperPoly
    c_poly: SuperPoly
    gamma_poly: SuperPoly


def raw_to_canonical(p: int, q: int, tag: str = "") -> CoordinateChange:
    """Coordinate change taking the raw generators to canonical shape
    plus residuals; both directions are verified as exact identities."""
    _check_rank(p, q)
    raw = RawIdeal.generic(p, q, tag)
    x, theta = raw.x, raw.theta

    a = tuple(even(f"a{i}{tag}") for i in range(p - q))
    b = tuple(even(f"b{i}{tag}") for i in range(q))
    alpha = tuple(odd(f"alpha{i}{tag}") for i in range(p - q))
    beta = tuple(odd(f"beta{i}{tag}") for i in range(q))
    c = tuple(even(f"c{i}{tag}") for i in range(q))
    gamma = tuple(odd(f"gamma{i}{tag}") for i in range(q))

    backward_vals = _canonical_from_raw_coeffs(
        p,
        q,
        x,
        theta,
        [SuperPoly.var(s) for s in raw.a],
        [SuperPoly.var(s) for s in raw.b],
        [SuperPoly.var(s) for s in raw.alpha],
        [SuperPoly.var(s) for s in raw.beta],
    )
    backward = {}
    for symbols, values in zip((a, b, alpha, beta, c, gamma), backward_vals):
        for s, val in zip(symbols, values):
            backward[s] = val

    a_p = _poly_from_coeffs([SuperPoly.var(s) for s in a], x)
    b_p = _poly_from_coeffs([SuperPoly.var(s) for s in b], x)
    alpha_p = _poly_from_coeffs([SuperPoly.var(s) for s in alpha], x)
    beta_p = _poly_from_coeffs([SuperPoly.var(s) for s in beta], x)
    c_p = _poly_from_coeffs([SuperPoly.var(s) for s in c], x)
    gamma_p = _poly_from_coeffs([SuperPoly.var(s) for s in gamma], x)
    bq = SuperPoly.var(x, q) + b_p

    even_image = (
        bq * (SuperPoly.var(x, p - q) + a_p) + c_p + beta_p * alpha_p
        - SuperPoly.var(x, p)
    )
    beta_image = bq * alpha_p + gamma_p
    forward = {}
    for s, val in zip(raw.a, coeff_list(even_image, x, p)):
        forward[s] = val
    for s, val in zip(raw.b, [SuperPoly.var(t) for t in b]):
        forward[s] = val
    for s, val in zip(raw.alpha, [SuperPoly.var(t) for t in beta]):
        forward[s] = val
    for s, val in zip(raw.beta, coeff_list(beta_image, x, max(p, 1))[:p]):
        forward[s] = val

    f_can, g_can = canonical_pair(
        p,
        q,
        x,
        theta,
        [SuperPoly.var(s) for s in a],
        [SuperPoly.var(s) for s in b],
        [SuperPoly.var(s) for s in alpha],
        [SuperPoly.var(s) for s in beta],
    )

    change = CoordinateChange(
        p, q, raw, x, theta, a, b, alpha, beta, c, gamma,
        forward, backward, f_can, g_can, c_p, gamma_p,
    )
    _verify_change(change)
    return change


def _verify_change(ch: CoordinateChange):
    raw = ch.raw
    f_image = raw.f.substitute(ch.forward)
    g_image = raw.g.substitute(ch.forward)
    assert f_image == ch.f_canonical + ch.c_poly, "even generator mismatch"
    assert g_image == ch.g_canonical + ch.gamma_poly, "odd generator mismatch"
    for s in (*ch.a, *ch.b, *ch.alpha, *ch.beta, *ch.c, *ch.gamma):
        assert ch.backward[s].substitute(ch.forward) == SuperPoly.var(s), (
            f"backward o forward is not the identity on {s.name}"
        )
    for s in (*raw.a, *raw.b, *raw.alpha, *raw.beta):
        assert ch.forward[s].substitute(ch.backward) == SuperPoly.var(s), (
            f"forward o backward is not the identity on {s.name}"
        )


# ---------------------------------------------------------------------------
# Kernel witnesses and stratification


def kernel_witnesses(p: int, q: int, tag: str = ""):
    """The two relations among the basis generators that hold modulo the
    raw ideal: f(theta + A) - g(x^{p-q} + a) and g(theta + A).

    Both expansions land inside the basis span and carry only residual
    (c, gamma) coefficients; the construction identities are asserted.
    """
    _check_rank(p, q)
    if q < 1:
        raise RankOrderViolation("kernel witnesses need q >= 1")
    ch = raw_to_canonical(p, q, tag)
    x, theta = ch.x, ch.theta
    a_p = sum(
        (SuperPoly.var(s) * SuperPoly.var(x, i) for i, s in enumerate(ch.a)),
        SuperPoly.zero(),
    )
    alpha_p = sum(
        (SuperPoly.var(s) * SuperPoly.var(x, i) for i, s in enumerate(ch.alpha)),
        SuperPoly.zero(),
    )
    f_full = ch.f_canonical + ch.c_poly
    g_full = ch.g_canonical + ch.gamma_poly
    theta_a = SuperPoly.var(theta) + alpha_p
    xpq_a = SuperPoly.var(x, p - q) + a_p

    h_expansion = f_full * theta_a - g_full * xpq_a
    k_expansion = g_full * theta_a
    assert h_expansion == ch.c_poly * theta_a - ch.gamma_poly * xpq_a
    assert k_expansion == ch.gamma_poly * theta_a

    ideal = CanonicalIdeal(
        p, q, x, theta, ch.a, ch.b, ch.alpha, ch.beta,
        ch.f_canonical, ch.g_canonical,
    )
    h_vec = _expansion_to_vector(h_expansion, ideal)
    k_vec = _expansion_to_vector(k_expansion, ideal)
    return h_vec, k_vec


def _expansion_to_vector(expansion: SuperPoly, ideal: CanonicalIdeal):
    cmap = expansion.as_coeff_map({ideal.x, ideal.theta})
    evens = [SuperPoly.zero()] * ideal.p
    odds = [SuperPoly.zero()] * ideal.q
    for mono, coeff in cmap.items():
        e = mono.exponent(ideal.x)
        if mono.exponent(ideal.theta):
            assert e < ideal.q, "witness leaves the basis span"
            odds[e] = coeff
        else:
            assert e < ideal.p, "witness leaves the basis span"
            evens[e] = coeff
    return BasisVector(
        tuple(evens), tuple(odds), SuperPoly.zero(), SuperPoly.zero()
    )


def _in_variable_ideal(poly: SuperPoly, generators) -> bool:
    gen_names = {s.name for s in generators}
    return all(
        any(v.name in gen_names for v in mono.variables())
        for mono in poly.terms
    )


def stratification_generators(p: int, q: int, tag: str = ""):
    """The residual coefficients (c_0..c_{q-1}, gamma_0..gamma_{q-1}),
    verified: the kernel witnesses vanish modulo them, and the canonical
    generators keep unit leading coefficients at x^p and x^q theta with
    the degree bounds that make basis reduction injective."""
    _check_rank(p, q)
    if p == 0:
        return []
    ch = raw_to_canonical(p, q, tag)
    gens = [SuperPoly.var(s) for s in (*ch.c, *ch.gamma)]
    if q >= 1:
        h_vec, k_vec = kernel_witnesses(p, q, tag)
        for vec in (h_vec, k_vec):
            for entry in (*vec.evens, *vec.odds):
                assert _in_variable_ideal(entry, (*ch.c, *ch.gamma)), (
                    "kernel witness does not vanish on the stratum"
                )

    x, theta = ch.x, ch.theta
    split = {x, theta}
    assert ch.f_canonical.coeff_of(SuperMonomial.make({x: p}), split) == 1
    assert (
        ch.g_canonical.coeff_of(SuperMonomial.make({x: q, theta: 1}), split) == 1
    )
    f_theta = [
        m for m in ch.f_canonical.as_coeff_map(split)
        if m.exponent(theta) == 1
    ]
    assert all(m.exponent(x) < q for m in f_theta)
    g_even = [
        m for m in ch.g_canonical.as_coeff_map(split)
        if m.exponent(theta) == 0
    ]
    assert all(m.exponent(x) < p for m in g_even)

    free_even = len(ch.a) + len(ch.b)
    free_odd = len(ch.alpha) + len(ch.beta)
    assert (free_even, free_odd) == (p, p), "residual dimension is not (p|p)"
    return gens
