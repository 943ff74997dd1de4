"""Chart atlases for rank-(1|1) and rank-(2|1) point families on the
parity-reversed line bundle of twist k over the projective line.

Coordinates follow the four-chart cover: V1 carries the canonical
(2|1)-pair over the x-side, V4 its mirror over the y-side, while V2 and
V3 are products of a (1|1)-point chart and a (1|0)-point chart sitting
in opposite affine patches (with the diagonal removed).  Transitions
into the canonical charts are computed by moving point factors across
the patches, multiplying the ideals and canonicalizing; transitions into
the product charts are the exact inverses of those maps, and carry
denominators supported on the removed loci.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ChartMismatch,
    NotAUnit,
    NotCanonicalizable,
    ParityMismatch,
)
from .ideals import _canonical_from_raw_coeffs, super_divmod
from .localized import LocalizedPoly
from .ring import Parity, SuperMonomial, SuperPoly, VarSymbol, even, invert, odd

V = SuperPoly.var

_REDUCE_LIMIT = 2000


# ---------------------------------------------------------------------------
# Charts, transitions, atlases


@dataclass(frozen=True)
class SuperChart:
    name: str
    evens: tuple
    odds: tuple
    units: tuple = ()  # loci invertible on this chart
    role: str = ""

    def __post_init__(self):
        names = [v.name for v in self.coordinates]
        if len(set(names)) != len(names):
            raise ChartMismatch(f"duplicate coordinate names on {self.name}")

    @property
    def coordinates(self):
        return self.evens + self.odds


@dataclass(frozen=True)
class TransitionMap:
    """Rules give each target coordinate as an expression in source
    coordinates, regular on the overlap."""

    target: SuperChart
    source: SuperChart
    rules: dict  # VarSymbol (target coord) -> LocalizedPoly (source coords)

    def __post_init__(self):
        for coord in self.target.coordinates:
            if coord not in self.rules:
                raise ChartMismatch(f"missing rule for {coord.name}")
        for coord, value in self.rules.items():
            value = LocalizedPoly.promote(value).simplified()
            self.rules[coord] = value
            if value.is_zero():
                continue
            want = "even" if coord.parity is Parity.EVEN else "odd"
            if value.parity_class().value != want:
                raise ParityMismatch(
                    f"rule for {coord.name} has parity "
                    f"{value.parity_class().value}"
                )

    def rule(self, coord: VarSymbol) -> LocalizedPoly:
        return self.rules[coord]


@dataclass
class Atlas:
    name: str
    twist: int
    charts: tuple
    transitions: dict  # (target name, source name) -> TransitionMap

    def chart(self, name: str) -> SuperChart:
        for ch in self.charts:
            if ch.name == name:
                return ch
        raise ChartMismatch(f"no chart named {name}")

    def transition(self, target: str, source: str) -> TransitionMap:
        return self.transitions[(target, source)]


def compose_rules(outer: TransitionMap, inner: TransitionMap) -> dict:
    """Rules of outer with its source coordinates replaced through inner."""
    if outer.source.name != inner.target.name:
        raise ChartMismatch(
            f"cannot compose {outer.source.name} with {inner.target.name}"
        )
    mapping = dict(inner.rules)
    return {
        coord: value.substitute(mapping).simplified()
        for coord, value in outer.rules.items()
    }


def rules_equal(lhs: dict, rhs: dict) -> bool:
    if set(lhs) != set(rhs):
        return False
    return all(LocalizedPoly.promote(lhs[c]) == LocalizedPoly.promote(rhs[c])
               for c in lhs)


def verify_cocycle(atlas: Atlas):
    """Check every ordered composite against the stored transition.

    Triples (i, j, i) check inverse consistency; (i, j, l) with distinct
    charts check transitivity.  Returns (True, None) or (False, witness)
    where the witness names the first failing triple and coordinate.
    """
    names = [ch.name for ch in atlas.charts]
    for i in names:
        for j in names:
            if i == j or (i, j) not in atlas.transitions:
                continue
            t_ij = atlas.transitions[(i, j)]
            for l in names:
                if l == j or (j, l) not in atlas.transitions:
                    continue
                t_jl = atlas.transitions[(j, l)]
                composed = compose_rules(t_ij, t_jl)
                if l == i:
                    expected = {
                        c: LocalizedPoly(V(c)) for c in atlas.chart(i).coordinates
                    }
                else:
                    expected = atlas.transitions[(i, l)].rules
                for coord in composed:
                    if composed[coord] != LocalizedPoly.promote(expected[coord]):
                        return False, (i, j, l, coord.name)
    return True, None


# ---------------------------------------------------------------------------
# Ideals on charts


@dataclass(frozen=True)
class IdealOnChart:
    chart: SuperChart
    side: str  # "x" or "y": which affine patch the generators live on
    generators: tuple

    def __post_init__(self):
        for g in self.generators:
            if g.parity_class().value == "mixed":
                raise ChartMismatch("generators must have definite parity")


def product_ideal(lhs: IdealOnChart, rhs: IdealOnChart) -> IdealOnChart:
    if lhs.chart.name != rhs.chart.name or lhs.side != rhs.side:
        raise ChartMismatch("product requires a common chart and patch")
    gens = tuple(
        a * b for a in lhs.generators for b in rhs.generators
    )
    return IdealOnChart(lhs.chart, lhs.side, gens)


# ---------------------------------------------------------------------------
# Ambient patches x/y with the twist-k gluing


@dataclass(frozen=True)
class Ambient:
    k: int
    x: VarSymbol
    y: VarSymbol
    theta: VarSymbol
    psi: VarSymbol

    @staticmethod
    def fresh(k: int) -> "Ambient":
        return Ambient(
            k,
            even("x", invertible=True),
            even("y", invertible=True),
            odd("theta"),
            odd("psi"),
        )

    def coords(self, side: str):
        return (self.x, self.theta) if side == "x" else (self.y, self.psi)

    def pullback_to(self, side: str) -> dict:
        """Substitution rewriting the other patch's coordinates."""
        if side == "x":
            return {
                self.y: V(self.x, -1),
                self.psi: V(self.x, -self.k) * V(self.theta),
            }
        return {
            self.x: V(self.y, -1),
            self.theta: V(self.y, -self.k) * V(self.psi),
        }


def _divide_by_linear(dividend: SuperPoly, divisor: SuperPoly, w, tp):
    """Exact division by a monic linear polynomial in w, allowing Laurent
    exponents in the dividend (w is invertible on the overlap)."""
    low = dividend.min_degree_in(w)
    if low is None:
        return SuperPoly.zero()
    shift = -low if low < 0 else 0
    quo, rem = super_divmod(dividend * V(w, shift), divisor, w, tp)
    assert rem.is_zero()
    return quo * V(w, -shift) if shift else quo


def transport_point(amb: Ambient, rank: str, to_side: str, sgn: int,
                    u: SuperPoly, v: SuperPoly):
    """Move a single-point family across the patch gluing.

    rank "11": the family  s + sgn*(u + v*t)  on the patch opposite
    to_side; rank "10": the pair  (s + sgn*u, t + sgn*v).  Returns the
    parameters (u', v') of the same shape on to_side.  The construction
    identity is asserted with an explicit cofactor.
    """
    u = SuperPoly.promote(u)
    v = SuperPoly.promote(v)
    from_side = "y" if to_side == "x" else "x"
    s, t = amb.coords(from_side)
    w, tp = amb.coords(to_side)
    pull = amb.pullback_to(to_side)
    sg = SuperPoly.const(sgn)

    u_new = invert(u)
    w_value = -sg * u_new

    if rank == "11":
        gen = V(s) + sg * (u + v * V(t))
        pulled = gen.substitute(pull)
        split = pulled.as_coeff_map({tp})
        a_part = split.get(SuperMonomial.one(), SuperPoly.zero())
        c_part = split.get(SuperMonomial.make({tp: 1}), SuperPoly.zero())
        m_unit = V(w) * invert(sg * u)
        a_norm = a_part * m_unit
        assert a_norm == V(w) + sg * u_new
        c_norm = c_part * m_unit
        c_final = c_norm.substitute({w: w_value})
        quo = _divide_by_linear(c_norm - c_final, a_norm, w, tp)
        target = a_norm + c_final * V(tp)
        assert target == m_unit * pulled - a_norm * quo * V(tp)
        v_new = sg * c_final
        return u_new, v_new

    if rank == "10":
        gen1 = V(s) + sg * u
        gen2 = V(t) + sg * v
        pulled1 = gen1.substitute(pull)
        pulled2 = gen2.substitute(pull)
        m_unit = V(w) * invert(sg * u)
        a_norm = pulled1 * m_unit
        assert a_norm == V(w) + sg * u_new
        cleared2 = pulled2 * V(w, amb.k)
        split = cleared2.as_coeff_map({tp})
        c_part = split.get(SuperMonomial.one(), SuperPoly.zero())
        lead = split.get(SuperMonomial.make({tp: 1}), SuperPoly.zero())
        assert lead == SuperPoly.one()
        c_final = c_part.substitute({w: w_value})
        quo = _divide_by_linear(c_part - c_final, a_norm, w, tp)
        target2 = V(tp) + c_final
        assert target2 == cleared2 - a_norm * quo
        v_new = sg * c_final
        return u_new, v_new

    raise ValueError(f"unknown rank {rank!r}")


# ---------------------------------------------------------------------------
# Canonicalization of a two-generator family on a patch


def _leading_unit(by_degree):
    """(degree, inverse of leading coefficient) for a {w-degree: coeff}
    view of a generator part; the lead must be a unit on the chart."""
    if not by_degree:
        raise NotCanonicalizable("zero generator")
    deg = max(by_degree)
    try:
        lead_inv = invert(by_degree[deg])
    except NotAUnit:
        raise NotCanonicalizable(
            "leading coefficient is not a unit on this chart"
        ) from None
    return deg, lead_inv


def _pair_reduce(target, f_hat, g_hat, w, tp, d_f, d_g):
    """Reduce target modulo the monicized pair: theta-terms of w-degree
    >= d_g fall to g_hat, even terms of w-degree >= d_f fall to f_hat."""
    rem = target
    for _ in range(_REDUCE_LIMIT):
        cmap = rem.as_coeff_map({w, tp})
        worst = None
        for mono, coeff in cmap.items():
            e = mono.exponent(w)
            has_t = mono.exponent(tp) == 1
            if has_t and e >= d_g:
                weight = e + (d_f - d_g)
            elif not has_t and e >= d_f:
                weight = e
            else:
                continue
            if worst is None or weight > worst[0]:
                worst = (weight, e, has_t, coeff)
        if worst is None:
            return rem
        _, e, has_t, coeff = worst
        if has_t:
            rem = rem - coeff * V(w, e - d_g) * g_hat
        else:
            rem = rem - coeff * V(w, e - d_f) * f_hat
    raise NotCanonicalizable("pair reduction failed to terminate")


def _clear_laurent(poly: SuperPoly, w: VarSymbol) -> SuperPoly:
    low = poly.min_degree_in(w)
    if low is None or low >= 0:
        return poly
    return poly * V(w, -low)


def canonicalize(ideal: IdealOnChart, p: int, q: int, amb: Ambient):
    """Match a two-generator family against the canonical (p|q) shape.

    Returns {"a0": .., "b0": .., "alpha0": .., "beta0": .., ...}: the
    unique canonical coefficients generating the same localized ideal.
    Ideal equality is certified by two-sided reduction to zero; failure
    of any leading coefficient to be a unit means the family leaves the
    chart and raises NotCanonicalizable.
    """
    w, tp = amb.coords(ideal.side)
    gens = list(ideal.generators)
    if len(gens) != 2:
        raise NotCanonicalizable("expected one even and one odd generator")
    evens_ = [g for g in gens if g.parity_class().value == "even"]
    odds_ = [g for g in gens if g.parity_class().value == "odd"]
    if len(evens_) != 1 or len(odds_) != 1:
        raise NotCanonicalizable("expected one even and one odd generator")
    f_in = _clear_laurent(evens_[0], w)
    g_in = _clear_laurent(odds_[0], w)

    f_map = f_in.as_coeff_map({w, tp})
    f_even = {m.exponent(w): c for m, c in f_map.items() if not m.exponent(tp)}
    d_f, f_lead_inv = _leading_unit(f_even)
    if d_f != p:
        raise NotCanonicalizable(f"even generator has rank {d_f}, expected {p}")
    f_hat = f_lead_inv * f_in

    g_map = g_in.as_coeff_map({w, tp})
    g_theta = {m.exponent(w): c for m, c in g_map.items() if m.exponent(tp)}
    d_g, g_lead_inv = _leading_unit(g_theta)
    if d_g != q:
        raise NotCanonicalizable(f"odd generator has rank {d_g}, expected {q}")
    g_hat = g_lead_inv * g_in

    red_x = _pair_reduce(V(w, p), f_hat, g_hat, w, tp, p, q)
    red_t = _pair_reduce(V(w, q) * V(tp), f_hat, g_hat, w, tp, p, q)

    rx = red_x.as_coeff_map({w, tp})
    a_t = [SuperPoly.zero()] * p
    alpha_t = [SuperPoly.zero()] * q
    for mono, coeff in rx.items():
        e = mono.exponent(w)
        if mono.exponent(tp):
            alpha_t[e] = -coeff
        else:
            a_t[e] = -coeff
    rt = red_t.as_coeff_map({w, tp})
    b_t = [SuperPoly.zero()] * q
    beta_t = [SuperPoly.zero()] * p
    for mono, coeff in rt.items():
        e = mono.exponent(w)
        if mono.exponent(tp):
            b_t[e] = -coeff
        else:
            beta_t[e] = -coeff

    a_v, b_v, alpha_v, beta_v, c_v, gamma_v = _canonical_from_raw_coeffs(
        p, q, w, tp, a_t, b_t, alpha_t, beta_t
    )
    if any(not c.is_zero() for c in c_v) or any(
        not g.is_zero() for g in gamma_v
    ):
        raise NotCanonicalizable("nonzero stratification residue: the family "
                                 "is not flat of this rank")

    from .ideals import canonical_pair

    f_can, g_can = canonical_pair(p, q, w, tp, a_v, b_v, alpha_v, beta_v)
    for gen in (f_in, g_in):
        if not _pair_reduce(gen, f_can, g_can, w, tp, p, q).is_zero():
            raise NotCanonicalizable("input generator escapes the canonical "
                                     "ideal")
    for gen in (f_can, g_can):
        if not _pair_reduce(gen, f_hat, g_hat, w, tp, d_f, d_g).is_zero():
            raise NotCanonicalizable("canonical generator escapes the input "
                                     "ideal")

    out = {}
    for i, val in enumerate(a_v):
        out[f"a{i}"] = val
    for i, val in enumerate(b_v):
        out[f"b{i}"] = val
    for i, val in enumerate(alpha_v):
        out[f"alpha{i}"] = val
    for i, val in enumerate(beta_v):
        out[f"beta{i}"] = val
    return out


# ---------------------------------------------------------------------------
# Transition inversion


def _single_term_rule(poly: SuperPoly):
    """(variable, exponent, coefficient) of a one-term Laurent rule."""
    terms = list(poly.terms.items())
    if len(terms) != 1:
        raise NotCanonicalizable(f"bosonic rule is not a monomial: {poly!r}")
    mono, coeff = terms[0]
    if len(mono.factors) != 1:
        raise NotCanonicalizable(f"bosonic rule is not a single power: {poly!r}")
    var, exp = mono.factors[0]
    if exp not in (1, -1):
        raise NotCanonicalizable(f"bosonic rule has exponent {exp}")
    return var, exp, coeff


def invert_transition(tmap: TransitionMap) -> TransitionMap:
    """Exact inverse of a chart transition.

    Bosonic parts must be single powers c*s^(+-1) of distinct source
    coordinates; the odd block is a square matrix over the bosonic ring
    inverted through its adjugate, and the quadratic corrections to the
    even rules follow by differentiating the bosonic inverse (exact,
    since the corrections square to zero).  The composition identities
    are asserted before returning.
    """
    target, source = tmap.target, tmap.source
    odds_s = source.odds
    odds_t = target.odds
    if len(odds_s) != len(odds_t) or len(odds_s) not in (1, 2):
        raise NotCanonicalizable("transition inversion needs matching odd "
                                 "ranks 1 or 2")
    if len(target.evens) != len(source.evens):
        raise NotCanonicalizable("transition inversion needs matching even "
                                 "ranks")

    zero_odds = {o: SuperPoly.zero() for o in odds_s}
    bos_inv = {}
    matched = {}
    for t_coord in target.evens:
        rule = tmap.rule(t_coord).as_poly()
        bos = rule.substitute(zero_odds)
        var, exp, coeff = _single_term_rule(bos)
        if var in bos_inv:
            raise NotCanonicalizable("two even rules share a source variable")
        if exp == 1:
            bos_inv[var] = V(t_coord) * (Fraction(1) / coeff)
        else:
            bos_inv[var] = SuperPoly.var(t_coord, -1) * coeff
        matched[t_coord] = (var, exp, coeff)
    if set(bos_inv) != set(source.evens):
        raise NotCanonicalizable("even rules do not cover the source chart")

    # odd block: tau_m = sum_n H[m][n] sigma_n with even entries
    h = []
    for t_odd in odds_t:
        rule = tmap.rule(t_odd).as_poly()
        row = []
        for s_odd in odds_s:
            entry = rule.coeff_of(SuperMonomial.make({s_odd: 1}), set(odds_s))
            row.append(entry)
        h.append(row)
    if len(odds_s) == 1:
        det_h = h[0][0]
        adj = [[SuperPoly.one()]]
    else:
        det_h = h[0][0] * h[1][1] - h[0][1] * h[1][0]
        adj = [[h[1][1], -h[0][1]], [-h[1][0], h[0][0]]]
    det_loc = LocalizedPoly(det_h)
    bos_inv_loc = {v: LocalizedPoly(e) for v, e in bos_inv.items()}
    det_at_t = det_loc.substitute(bos_inv_loc)

    rules = {}
    for n, s_odd in enumerate(odds_s):
        total = LocalizedPoly(SuperPoly.zero())
        for m, t_odd in enumerate(odds_t):
            entry = LocalizedPoly(adj[n][m]) / det_loc
            entry = entry.substitute(bos_inv_loc)
            total = total + entry * LocalizedPoly(V(t_odd))
        rules[s_odd] = total

    if len(odds_t) == 2:
        tau_frame = LocalizedPoly(V(odds_t[0]) * V(odds_t[1]))
    else:
        tau_frame = LocalizedPoly(SuperPoly.zero())
    for t_coord in target.evens:
        var, exp, coeff = matched[t_coord]
        rule = tmap.rule(t_coord).as_poly()
        bos = rule.substitute(zero_odds)
        quad = rule - bos
        base = LocalizedPoly(bos_inv[var])
        if quad.is_zero() or len(odds_s) < 2:
            rules[var] = base
            continue
        g_coeff = quad.coeff_of(
            SuperMonomial.make({odds_s[0]: 1, odds_s[1]: 1}), set(odds_s)
        )
        if not (quad - g_coeff * V(odds_s[0]) * V(odds_s[1])).is_zero():
            raise NotCanonicalizable("even rule has stray odd terms")
        deriv = LocalizedPoly(bos_inv[var].diff(t_coord))
        g_at_t = LocalizedPoly(g_coeff).substitute(bos_inv_loc)
        correction = deriv * g_at_t * tau_frame / det_at_t
        rules[var] = base - correction

    inverse = TransitionMap(target=source, source=target, rules=rules)
    ident_s = {c: LocalizedPoly(V(c)) for c in source.coordinates}
    ident_t = {c: LocalizedPoly(V(c)) for c in target.coordinates}
    assert rules_equal(compose_rules(inverse, tmap), ident_s)
    assert rules_equal(compose_rules(tmap, inverse), ident_t)
    return inverse


# ---------------------------------------------------------------------------
# Atlases


def pi_v_atlas(k: int) -> Atlas:
    """The two-chart atlas of the (1|1)-supercurve itself: patches
    (x|theta) and (y|psi) glued by y = 1/x, psi = x^-k theta."""
    amb = Ambient.fresh(k)
    u0 = SuperChart("U0", (amb.x,), (amb.theta,), role="patch-x")
    u1 = SuperChart("U1", (amb.y,), (amb.psi,), role="patch-y")
    t10 = TransitionMap(
        target=u1,
        source=u0,
        rules={
            amb.y: LocalizedPoly(V(amb.x, -1)),
            amb.psi: LocalizedPoly(V(amb.x, -k) * V(amb.theta)),
        },
    )
    t01 = TransitionMap(
        target=u0,
        source=u1,
        rules={
            amb.x: LocalizedPoly(V(amb.y, -1)),
            amb.theta: LocalizedPoly(V(amb.y, -k) * V(amb.psi)),
        },
    )
    return Atlas(
        "pi_v", k, (u0, u1), {("U1", "U0"): t10, ("U0", "U1"): t01}
    )


def _point_chart_symbols():
    return {
        "a": even("a", invertible=True),
        "b": even("b", invertible=True),
        "alpha": odd("alpha"),
        "beta": odd("beta"),
    }


def hilb11_atlas(k: int) -> Atlas:
    """Rank-(1|1) families: one point with its odd direction.

    Chart A parameterizes the family located at x = a + alpha*theta
    (generator x - a - alpha*theta), chart B its mirror over y.  The
    transition is computed by moving the generator across the gluing,
    and comes out as b = 1/a, beta = -a^(k-2) alpha.
    """
    amb = Ambient.fresh(k)
    syms = _point_chart_symbols()
    a, b = syms["a"], syms["b"]
    alpha, beta = syms["alpha"], syms["beta"]
    chart_a = SuperChart("A", (a,), (alpha,), role="point-x")
    chart_b = SuperChart("B", (b,), (beta,), role="point-y")

    u_ba, v_ba = transport_point(amb, "11", "y", -1, V(a), V(alpha))
    t_ba = TransitionMap(
        target=chart_b,
        source=chart_a,
        rules={b: LocalizedPoly(u_ba), beta: LocalizedPoly(v_ba)},
    )
    u_ab, v_ab = transport_point(amb, "11", "x", -1, V(b), V(beta))
    t_ab = TransitionMap(
        target=chart_a,
        source=chart_b,
        rules={a: LocalizedPoly(u_ab), alpha: LocalizedPoly(v_ab)},
    )
    expected_beta = -SuperPoly.var(a, k - 2) * V(alpha)
    assert t_ba.rule(b) == LocalizedPoly(V(a, -1))
    assert t_ba.rule(beta) == LocalizedPoly(expected_beta)
    atlas = Atlas(
        "hilb11", k, (chart_a, chart_b),
        {("B", "A"): t_ba, ("A", "B"): t_ab},
    )
    ok, witness = verify_cocycle(atlas)
    assert ok, witness
    return atlas


def _hilb21_charts(amb: Ambient):
    a1 = even("a1", invertible=True)
    a2 = even("a2", invertible=True)
    alpha1, alpha2 = odd("alpha1"), odd("alpha2")
    b1 = even("b1", invertible=True)
    b2 = even("b2", invertible=True)
    beta1, beta2 = odd("beta1"), odd("beta2")
    c1 = even("c1", invertible=True)
    c2 = even("c2", invertible=True)
    gamma1, gamma2 = odd("gamma1"), odd("gamma2")
    d1 = even("d1", invertible=True)
    d2 = even("d2", invertible=True)
    delta1, delta2 = odd("delta1"), odd("delta2")
    v1 = SuperChart("V1", (a1, a2), (alpha1, alpha2), role="canonical-x")
    v2 = SuperChart(
        "V2", (b1, b2), (beta1, beta2),
        units=(V(b1) * V(b2) - 1,), role="product-y-x",
    )
    v3 = SuperChart(
        "V3", (c1, c2), (gamma1, gamma2),
        units=(V(c1) * V(c2) - 1,), role="product-x-y",
    )
    v4 = SuperChart("V4", (d1, d2), (delta1, delta2), role="canonical-y")
    return v1, v2, v3, v4


def _product_into_canonical(amb, chart_target, chart_source, side, factor_11,
                            factor_10):
    """Glue a (1|1)-point and a (1|0)-point into the canonical (2|1) chart.

    factor_11 = (side, u, v) describes x + u + v*theta (or its y-mirror);
    factor_10 likewise describes (x + u, theta + v).  Both factors are
    moved to `side`, multiplied, and canonicalized.
    """
    w, tp = amb.coords(side)
    (side11, u11, v11) = factor_11
    if side11 != side:
        u11, v11 = transport_point(amb, "11", side, 1, u11, v11)
    (side10, u10, v10) = factor_10
    if side10 != side:
        u10, v10 = transport_point(amb, "10", side, 1, u10, v10)
    gen11 = V(w) + u11 + v11 * V(tp)
    lhs = IdealOnChart(chart_source, side, (gen11,))
    rhs = IdealOnChart(chart_source, side, (V(w) + u10, V(tp) + v10))
    prod = product_ideal(lhs, rhs)
    slots = canonicalize(prod, 2, 1, amb)
    t1, t2 = chart_target.evens
    o1, o2 = chart_target.odds
    return TransitionMap(
        target=chart_target,
        source=chart_source,
        rules={
            t1: LocalizedPoly(slots["b0"]),
            t2: LocalizedPoly(slots["a0"]),
            o1: LocalizedPoly(slots["beta0"]),
            o2: LocalizedPoly(slots["alpha0"]),
        },
    )


def _expected_13(k, v1, v3):
    c1, c2 = v3.evens
    g1, g2 = v3.odds
    a1, a2 = v1.evens
    al1, al2 = v1.odds
    sign = Fraction(-1) ** k
    mc2k = sign * V(c2, -k)  # (-c2)^(-k) expanded
    return {
        a1: LocalizedPoly(V(c1) - V(g1) * V(g2) * mc2k),
        a2: LocalizedPoly(V(c2, -1)),
        al1: LocalizedPoly(V(g1) * (V(c2, -1) - V(c1))),
        al2: LocalizedPoly(V(g2) * mc2k),
    }


def _expected_12(k, v1, v2):
    b1, b2 = v2.evens
    be1, be2 = v2.odds
    a1, a2 = v1.evens
    al1, al2 = v1.odds
    sign = Fraction(-1) ** (k - 2)
    mb1k2 = sign * V(b1, k - 2)  # (-b1)^(k-2) expanded
    return {
        a1: LocalizedPoly(V(b1, -1) + V(be1) * V(be2) * mb1k2),
        a2: LocalizedPoly(V(b2)),
        al1: LocalizedPoly(-V(be1) * mb1k2 * (V(b2) - V(b1, -1))),
        al2: LocalizedPoly(V(be2)),
    }


def hilb21_atlas(k: int) -> Atlas:
    """The four-chart atlas of rank-(2|1) families.

    Every transition is pipeline-computed: targets V1/V4 by product +
    canonicalize, the product pair V2/V3 factor by factor, and the
    remaining directions as exact inverses or composites.  The V1<-V3
    and V1<-V2 maps are asserted against their closed forms.
    """
    amb = Ambient.fresh(k)
    v1, v2, v3, v4 = _hilb21_charts(amb)
    b1, b2 = v2.evens
    be1, be2 = v2.odds
    c1, c2 = v3.evens
    g1, g2 = v3.odds

    transitions = {}

    transitions[("V1", "V3")] = _product_into_canonical(
        amb, v1, v3, "x", ("x", V(c1), V(g1)), ("y", V(c2), V(g2))
    )
    transitions[("V1", "V2")] = _product_into_canonical(
        amb, v1, v2, "x", ("y", V(b1), V(be1)), ("x", V(b2), V(be2))
    )
    transitions[("V4", "V2")] = _product_into_canonical(
        amb, v4, v2, "y", ("y", V(b1), V(be1)), ("x", V(b2), V(be2))
    )
    transitions[("V4", "V3")] = _product_into_canonical(
        amb, v4, v3, "y", ("x", V(c1), V(g1)), ("y", V(c2), V(g2))
    )

    assert rules_equal(transitions[("V1", "V3")].rules, _expected_13(k, v1, v3))
    assert rules_equal(transitions[("V1", "V2")].rules, _expected_12(k, v1, v2))

    # factorwise product-to-product maps
    u_b1, v_b1 = transport_point(amb, "11", "y", 1, V(c1), V(g1))
    u_b2, v_b2 = transport_point(amb, "10", "x", 1, V(c2), V(g2))
    transitions[("V2", "V3")] = TransitionMap(
        target=v2,
        source=v3,
        rules={
            b1: LocalizedPoly(u_b1),
            b2: LocalizedPoly(u_b2),
            be1: LocalizedPoly(v_b1),
            be2: LocalizedPoly(v_b2),
        },
    )
    u_c1, v_c1 = transport_point(amb, "11", "x", 1, V(b1), V(be1))
    u_c2, v_c2 = transport_point(amb, "10", "y", 1, V(b2), V(be2))
    transitions[("V3", "V2")] = TransitionMap(
        target=v3,
        source=v2,
        rules={
            c1: LocalizedPoly(u_c1),
            c2: LocalizedPoly(u_c2),
            g1: LocalizedPoly(v_c1),
            g2: LocalizedPoly(v_c2),
        },
    )

    transitions[("V2", "V1")] = invert_transition(transitions[("V1", "V2")])
    transitions[("V3", "V1")] = invert_transition(transitions[("V1", "V3")])
    transitions[("V2", "V4")] = invert_transition(transitions[("V4", "V2")])
    transitions[("V3", "V4")] = invert_transition(transitions[("V4", "V3")])

    transitions[("V1", "V4")] = TransitionMap(
        target=v1,
        source=v4,
        rules=compose_rules(
            transitions[("V1", "V2")], transitions[("V2", "V4")]
        ),
    )
    transitions[("V4", "V1")] = TransitionMap(
        target=v4,
        source=v1,
        rules=compose_rules(
            transitions[("V4", "V2")], transitions[("V2", "V1")]
        ),
    )

    return Atlas("hilb21", k, (v1, v2, v3, v4), transitions)


# ---------------------------------------------------------------------------
# Atlas serialization


def atlas_to_text(atlas: Atlas) -> str:
    from .parser import pretty, pretty_localized

    lines = [f"atlas {atlas.name} twist {atlas.twist}"]
    for ch in atlas.charts:
        lines.append(f"chart {ch.name}")
        for v in ch.evens:
            inv = " inv" if v.invertible else ""
            lines.append(f"  even {v.name}{inv};")
        for v in ch.odds:
            lines.append(f"  odd {v.name};")
        for unit in ch.units:
            lines.append(f"  unit {pretty(unit)};")
        lines.append("end")
    for (target, source), tmap in sorted(atlas.transitions.items()):
        lines.append(f"transition {target} {source}")
        for coord in tmap.target.coordinates:
            lines.append(f"  {coord.name} := {pretty_localized(tmap.rule(coord))};")
        lines.append("end")
    return "\n".join(lines) + "\n"


def atlas_from_text(text: str) -> Atlas:
    from .parser import RingDecl, parse_localized, parse_poly, parse_ring

    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("atlas "):
        raise ChartMismatch("missing atlas header")
    head = lines[0].split()
    name, twist = head[1], int(head[3])
    charts = []
    transitions = {}
    i = 1
    ring = RingDecl()
    pending_units = {}
    while i < len(lines):
        line = lines[i]
        if line.startswith("chart "):
            chart_name = line.split()[1]
            decls = []
            units_text = []
            i += 1
            while lines[i] != "end":
                if lines[i].startswith("unit "):
                    units_text.append(lines[i][len("unit "):].rstrip(";"))
                else:
                    decls.append(lines[i])
                i += 1
            chart_ring = parse_ring(" ".join(decls))
            ring = ring.merged(chart_ring)
            evens = tuple(v for v in chart_ring if v.parity is Parity.EVEN)
            odds_ = tuple(v for v in chart_ring if v.parity is Parity.ODD)
            charts.append(SuperChart(chart_name, evens, odds_))
            pending_units[chart_name] = units_text
            i += 1
        elif line.startswith("transition "):
            _, target, source = line.split()
            rules_text = []
            i += 1
            while lines[i] != "end":
                rules_text.append(lines[i])
                i += 1
            i += 1
            chart_map = {ch.name: ch for ch in charts}
            rules = {}
            for item in rules_text:
                coord_name, expr = item.split(":=")
                coord_name = coord_name.strip()
                coord = next(
                    c
                    for c in chart_map[target].coordinates
                    if c.name == coord_name
                )
                rules[coord] = parse_localized(expr.strip().rstrip(";"), ring)
            transitions[(target, source)] = TransitionMap(
                target=chart_map[target], source=chart_map[source], rules=rules
            )
        else:
            raise ChartMismatch(f"unexpected line: {line}")
    final_charts = []
    for ch in charts:
        units = tuple(
            parse_poly(u, ring) for u in pending_units.get(ch.name, ())
        )
        final_charts.append(
            SuperChart(ch.name, ch.evens, ch.odds, units=units)
        )
    chart_map = {ch.name: ch for ch in final_charts}
    transitions = {
        key: TransitionMap(
            target=chart_map[key[0]], source=chart_map[key[1]], rules=t.rules
        )
        for key, t in transitions.items()
    }
    return Atlas(name, twist, tuple(final_charts), transitions)
