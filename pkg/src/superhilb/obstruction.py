"""Second-order splitness analysis of the Hilbert-scheme atlases.

Every even transition rule of a two-odd-coordinate atlas splits as a
bosonic part plus a coefficient times the product of the two source odd
coordinates.  Those coefficients form a vector-field-valued 1-cochain;
the family is split at second order exactly when the cochain is a
coboundary of chart-level sections.  Chart sections are polynomial in
the chart coordinates, so the coboundary equations become linear systems
over bivariate Laurent polynomials in the global coordinates
z = z1/z0 and w = w1/w0, with each unknown block supported on the
quadrant cone belonging to its chart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .charts import Atlas, hilb11_atlas, hilb21_atlas
from .errors import HigherOrderTerms, NotCanonicalizable
from .localized import LocalizedPoly, substitute_localized
from .ring import SuperMonomial, SuperPoly, even

V = SuperPoly.var

# cone signs (sz, sw): chart exponents (e1, e2) >= 0 embed at
# (sz*e1, sw*e2) with coefficient sign (-1)^(e1+e2)
CONES = {"V1": (1, 1), "V2": (-1, 1), "V3": (1, -1), "V4": (-1, -1)}

Z_SYM = even("z", invertible=True)
W_SYM = even("w", invertible=True)


# ---------------------------------------------------------------------------
# The cochain


@dataclass(frozen=True)
class CechCochain1:
    """Per ordered overlap (target, source): entries (even coordinate
    name, coefficient) in source-chart bosonic coordinates, relative to
    the wedge of the source chart's two odd coordinates."""

    atlas: Atlas
    entries: dict  # (target, source) -> tuple of (coord name, LocalizedPoly)
    frames: dict  # (target, source) -> (odd name, odd name) of the source

    def component(self, target: str, source: str, coord_name: str):
        for name, value in self.entries[(target, source)]:
            if name == coord_name:
                return value
        raise KeyError(coord_name)

    def is_zero_on(self, target: str, source: str) -> bool:
        return all(v.is_zero() for _, v in self.entries[(target, source)])


def _rule_bosonic(rule: LocalizedPoly, odds) -> LocalizedPoly:
    kill = {o: SuperPoly.zero() for o in odds}
    out = LocalizedPoly.__new__(LocalizedPoly)
    out.num = rule.num.substitute(kill)
    out.den = rule.den.substitute(kill)
    return out


def _wedge_coeff(rule: LocalizedPoly, odds) -> LocalizedPoly:
    for mono in rule.num.terms:
        if sum(1 for v in mono.odd_variables() if v in odds) > 2:
            raise HigherOrderTerms("even rule carries odd degree above two")
    if len(odds) < 2:
        return LocalizedPoly(SuperPoly.zero())
    coeff = rule.num.coeff_of(
        SuperMonomial.make({odds[0]: 1, odds[1]: 1}), set(odds)
    )
    out = LocalizedPoly.__new__(LocalizedPoly)
    out.num = coeff
    out.den = rule.den
    return out


def extract_obstruction(atlas: Atlas) -> CechCochain1:
    """Split every even rule as bosonic part + coefficient * odd1*odd2
    and collect the coefficients; zero for one odd coordinate."""
    entries = {}
    frames = {}
    for (target, source), tmap in atlas.transitions.items():
        odds = tmap.source.odds
        row = []
        for coord in tmap.target.evens:
            row.append((coord.name, _wedge_coeff(tmap.rule(coord), odds)))
        entries[(target, source)] = tuple(row)
        frames[(target, source)] = tuple(o.name for o in odds)
    return CechCochain1(atlas, entries, frames)


def frame_transport_identity(atlas: Atlas, target: str, source: str) -> bool:
    """Check coeff * (t2 - t1 composed) == -o1-rule * o2-rule, i.e. the
    source-frame coefficient of the first even rule agrees with
    -odd1*odd2/(second - first) rewritten through the transition, with
    the diagonal denominator cleared."""
    tmap = atlas.transition(target, source)
    cochain = extract_obstruction(atlas)
    psi = cochain.component(target, source, tmap.target.evens[0].name)
    t1, t2 = tmap.target.evens
    o1, o2 = tmap.target.odds
    s1, s2 = tmap.source.odds
    frame = LocalizedPoly(V(s1) * V(s2))
    lhs = psi * (tmap.rule(t2) - tmap.rule(t1)) * frame
    rhs = -(tmap.rule(o1) * tmap.rule(o2))
    return lhs == rhs


def antisymmetry_holds(atlas: Atlas, i: str, j: str) -> bool:
    """Transporting the (i, j) entry through the reverse transition must
    negate the (j, i) entry."""
    cochain = extract_obstruction(atlas)
    t_ij = atlas.transition(i, j)
    t_ji = atlas.transition(j, i)
    odds_j = t_ij.source.odds
    odds_i = t_ji.source.odds
    # frame: tau1*tau2 = det(H) sigma1*sigma2 under the (i,j) odd rules;
    # coefficients transport through the bosonic rules because the
    # quadratic corrections die against the frame
    det_ij = _odd_frame_det(t_ij)
    bos_ij = {
        coord: _rule_bosonic(t_ij.rule(coord), odds_j)
        for coord in t_ij.target.evens
    }
    for n, s_coord in enumerate(t_ij.source.evens):
        psi_ji = cochain.component(j, i, s_coord.name)
        psi_ji_in_j = psi_ji.substitute(bos_ij)
        total = LocalizedPoly(SuperPoly.zero())
        for m, t_coord in enumerate(t_ij.target.evens):
            psi_ij = cochain.component(i, j, t_coord.name)
            jac = _rule_bosonic(t_ji.rule(s_coord), odds_i).diff(t_coord)
            jac_in_j = jac.substitute(bos_ij)
            total = total + psi_ij * jac_in_j
        if not (total + psi_ji_in_j * det_ij).is_zero():
            return False
    return True


def _odd_frame_det(tmap) -> LocalizedPoly:
    odds_s = tmap.source.odds
    odds_t = tmap.target.odds
    if len(odds_s) == 1:
        rule = tmap.rule(odds_t[0])
        out = LocalizedPoly.__new__(LocalizedPoly)
        out.num = rule.num.coeff_of(
            SuperMonomial.make({odds_s[0]: 1}), set(odds_s)
        )
        out.den = rule.den
        return out
    h = []
    for t_odd in odds_t:
        rule = tmap.rule(t_odd)
        row = []
        for s_odd in odds_s:
            entry = LocalizedPoly.__new__(LocalizedPoly)
            entry.num = rule.num.coeff_of(
                SuperMonomial.make({s_odd: 1}), set(odds_s)
            )
            entry.den = rule.den
            row.append(entry)
        h.append(row)
    return h[0][0] * h[1][1] - h[0][1] * h[1][0]


# ---------------------------------------------------------------------------
# Wedge-square degrees on the two axes


def wedge2_degrees(k: int, atlas: Atlas | None = None):
    """Laurent degrees (on the two axis curves) of the wedge-square
    transition data of the rank-(2|1) atlas; returns (k-3, -k-1)."""
    atlas = atlas or hilb21_atlas(k)
    t12 = atlas.transition("V1", "V2")
    b1, b2 = t12.source.evens
    al1, al2 = t12.target.odds
    prod = (t12.rule(al1) * t12.rule(al2)).as_poly()
    at_axis = prod.substitute({b2: SuperPoly.zero()})
    # frame change by the unit b1*b2 - 1, evaluated on the axis b2 = 0
    at_axis = at_axis * Fraction(-1)
    deg_a = _monomial_degree(at_axis, b1)

    t42 = atlas.transition("V4", "V2")
    de1, de2 = t42.target.odds
    prod = (t42.rule(de1) * t42.rule(de2)).as_poly()
    at_axis = prod.substitute({b1: SuperPoly.zero()})
    deg_b = _monomial_degree(at_axis, b2)
    return deg_a, deg_b


def _monomial_degree(poly: SuperPoly, var) -> int:
    degrees = {m.exponent(var) for m in poly.terms}
    if len(degrees) != 1:
        raise NotCanonicalizable(
            "axis restriction is not a monomial transition"
        )
    return degrees.pop()


# ---------------------------------------------------------------------------
# Laurent data on the global bosonic coordinates


@dataclass(frozen=True)
class LaurentBivar:
    """Finite map (z-exponent, w-exponent) -> rational, with an optional
    support cone recorded for unknown blocks."""

    coeffs: dict
    cone: tuple | None = None

    def __post_init__(self):
        if self.cone is not None:
            sz, sw = self.cone
            for ez, ew in self.coeffs:
                if ez * sz < 0 or ew * sw < 0:
                    raise ValueError("support leaves the declared cone")

    def is_zero(self):
        return not self.coeffs


def _lb_mul(a: dict, b: dict) -> dict:
    out = {}
    for (az, aw), ca in a.items():
        for (bz, bw), cb in b.items():
            key = (az + bz, aw + bw)
            s = out.get(key, Fraction(0)) + ca * cb
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _lb_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, c in b.items():
        s = out.get(key, Fraction(0)) + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def _lb_scale(a: dict, c) -> dict:
    return {key: val * c for key, val in a.items()} if c else {}


def _lb_diag(a: dict) -> dict:
    """Substitute w := z (restriction to the diagonal direction)."""
    out = {}
    for (ez, ew), c in a.items():
        key = ez + ew
        s = out.get(key, Fraction(0)) + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def embed_chart_poly(poly: SuperPoly, chart_name: str, evens) -> dict:
    """Bosonic chart polynomial -> global Laurent dict through the
    identification (first coord, second coord) = (-z^s, -w^s)."""
    sz, sw = CONES[chart_name]
    e1, e2 = evens
    out = {}
    for mono, coeff in poly.terms.items():
        if mono.odd_variables():
            raise ValueError("embedding expects a bosonic polynomial")
        d1 = mono.exponent(e1)
        d2 = mono.exponent(e2)
        if mono.total_degree() != d1 + d2:
            raise ValueError("embedding expects a chart-coordinate polynomial")
        key = (sz * d1, sw * d2)
        sign = -1 if (d1 + d2) % 2 else 1
        s = out.get(key, Fraction(0)) + coeff * sign
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def laurent_to_poly(data: dict) -> SuperPoly:
    """Render a Laurent dict over the symbols z, w (for report text)."""
    out = SuperPoly.zero()
    for (ez, ew), c in sorted(data.items()):
        out = out + SuperPoly.const(c) * V(Z_SYM, ez) * V(W_SYM, ew)
    return out


# ---------------------------------------------------------------------------
# Coboundary equations


@dataclass(frozen=True)
class CoboundaryEquation:
    label: str  # e.g. "V12.z"
    terms: tuple  # ((block name, factor dict), ...)
    rhs: dict


@dataclass(frozen=True)
class LaurentSystem:
    """Linear system over bivariate Laurent polynomials: each equation
    equates a combination of cone-supported unknown blocks against an
    inhomogeneous Laurent polynomial."""

    twist: int
    blocks: dict  # block name -> (chart name, cone)
    equations: tuple
    degree_bound: int


_SUBSYSTEM_BLOCKS = {"f": "V1", "g": "V2", "h": "V3"}
_FULL_BLOCKS = {
    "f": ("V1", 0), "fw": ("V1", 1),
    "g": ("V2", 0), "gw": ("V2", 1),
    "h": ("V3", 0), "hw": ("V3", 1),
    "s": ("V4", 0), "sw": ("V4", 1),
}


def _block_name(chart: str, component: int) -> str:
    base = {"V1": "f", "V2": "g", "V3": "h", "V4": "s"}[chart]
    return base if component == 0 else base + "w"


def _transition_factors(atlas: Atlas, target: str, source: str):
    """(psi list, frame det, jacobian matrix, bosonic rules) for the
    stored transition, all as LocalizedPoly in source coordinates."""
    tmap = atlas.transition(target, source)
    odds = tmap.source.odds
    psi = []
    bos_rules = {}
    for coord in tmap.target.evens:
        rule = tmap.rule(coord)
        psi.append(_wedge_coeff(rule, odds))
        bos_rules[coord] = _rule_bosonic(rule, odds)
    det = _odd_frame_det(tmap)
    jac = [
        [bos_rules[coord].diff(s) for s in tmap.source.evens]
        for coord in tmap.target.evens
    ]
    return tmap, psi, det, jac, bos_rules


def _equation_for_overlap(atlas: Atlas, target: str, source: str,
                          component: int) -> CoboundaryEquation:
    """The coboundary condition psi = sigma_target - sigma_source read in
    the component-th even direction of the target chart, cleared of
    denominators and embedded in global coordinates."""
    tmap, psi, det, jac, _ = _transition_factors(atlas, target, source)
    source_evens = tmap.source.evens
    psi_m = psi[component]
    jac_row = jac[component]
    dens = [psi_m.den, det.den] + [j.den for j in jac_row]

    def cleared(value: LocalizedPoly) -> SuperPoly:
        # multiply by every denominator except one copy of its own
        out = value.num
        skipped = False
        for d in dens:
            if not skipped and d is value.den:
                skipped = True
                continue
            out = out * d
        return out

    rhs = embed_chart_poly(cleared(psi_m), source, source_evens)
    terms = [
        (
            _block_name(target, component),
            embed_chart_poly(cleared(det), source, source_evens),
        )
    ]
    for n, s_coord in enumerate(source_evens):
        factor = cleared(jac_row[n])
        if not factor.is_zero():
            terms.append(
                (
                    _block_name(source, n),
                    _lb_scale(
                        embed_chart_poly(factor, source, source_evens), -1
                    ),
                )
            )
    label = f"{target}{source}.{'zw'[component]}"
    return CoboundaryEquation(label, tuple(terms), rhs)


def build_coboundary_system(k: int, degree_bound: int,
                            atlas: Atlas | None = None) -> LaurentSystem:
    """The z-direction coboundary equations on the three overlaps of the
    charts V1, V2, V3, with unknown blocks f, g, h supported on their
    quadrant cones.  Constructed from the computed transition maps."""
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    atlas = atlas or hilb21_atlas(k)
    equations = tuple(
        _equation_for_overlap(atlas, t, s, 0)
        for t, s in (("V1", "V2"), ("V1", "V3"), ("V2", "V3"))
    )
    blocks = {
        name: (chart, CONES[chart]) for name, chart in _SUBSYSTEM_BLOCKS.items()
    }
    return LaurentSystem(k, blocks, equations, degree_bound)


def build_full_coboundary_system(k: int, degree_bound: int,
                                 atlas: Atlas | None = None) -> LaurentSystem:
    """Both components on all six overlaps, including the fourth chart."""
    atlas = atlas or hilb21_atlas(k)
    pairs = (
        ("V1", "V2"), ("V1", "V3"), ("V1", "V4"),
        ("V2", "V3"), ("V2", "V4"), ("V3", "V4"),
    )
    equations = tuple(
        _equation_for_overlap(atlas, t, s, m) for t, s in pairs for m in (0, 1)
    )
    blocks = {
        name: (chart, CONES[chart]) for name, (chart, _) in _FULL_BLOCKS.items()
    }
    return LaurentSystem(k, blocks, equations, degree_bound)


# ---------------------------------------------------------------------------
# Bounded exact solver


def solve_laurent_system(system: LaurentSystem, degree_bound=None):
    """Exact rational solve of the truncated system.

    Unknowns are the block coefficients of total degree <= the bound
    inside each cone; returns a solution dict or None when the equations
    are infeasible at this truncation.
    """
    bound = system.degree_bound if degree_bound is None else degree_bound
    unknowns = []
    for name, (chart, (sz, sw)) in system.blocks.items():
        for e in range(bound + 1):
            for f_ in range(bound + 1 - e):
                unknowns.append((name, e, f_))
    index = {u: i for i, u in enumerate(unknowns)}

    rows = {}
    for eq_no, eq in enumerate(system.equations):
        for block, factor in eq.terms:
            if block not in system.blocks:
                continue
            _, (sz, sw) = system.blocks[block]
            for e in range(bound + 1):
                for f_ in range(bound + 1 - e):
                    u = index[(block, e, f_)]
                    sign = -1 if (e + f_) % 2 else 1
                    for (fz, fw), c in factor.items():
                        key = (eq_no, fz + sz * e, fw + sw * f_)
                        row = rows.setdefault(key, [{}, Fraction(0)])
                        s = row[0].get(u, Fraction(0)) + c * sign
                        if s:
                            row[0][u] = s
                        else:
                            row[0].pop(u, None)
        for key2, c in eq.rhs.items():
            key = (eq_no, key2[0], key2[1])
            row = rows.setdefault(key, [{}, Fraction(0)])
            row[1] += c

    # Gauss-Jordan on sparse rows: pivot rows stay fully reduced against
    # each other, so reducing an incoming row terminates in one pass.
    pivots = {}  # unknown index -> [coeffs dict, rhs]
    for key in sorted(rows):
        coeffs, rhs = rows[key]
        coeffs = dict(coeffs)
        for u in sorted(coeffs):
            if u in pivots and u in coeffs:
                factor = coeffs.pop(u)
                p_coeffs, p_rhs = pivots[u]
                for pu, pc in p_coeffs.items():
                    s = coeffs.get(pu, Fraction(0)) - factor * pc
                    if s:
                        coeffs[pu] = s
                    else:
                        coeffs.pop(pu, None)
                rhs -= factor * p_rhs
        if not coeffs:
            if rhs:
                return None
            continue
        u_star = min(coeffs)
        inv = Fraction(1) / coeffs.pop(u_star)
        coeffs = {u: c * inv for u, c in coeffs.items()}
        rhs *= inv
        for entry in pivots.values():
            if u_star in entry[0]:
                factor = entry[0].pop(u_star)
                for pu, pc in coeffs.items():
                    s = entry[0].get(pu, Fraction(0)) - factor * pc
                    if s:
                        entry[0][pu] = s
                    else:
                        entry[0].pop(pu, None)
                entry[1] -= factor * rhs
        pivots[u_star] = [coeffs, rhs]

    solution = {u: Fraction(0) for u in unknowns}
    for u_star, (coeffs, rhs) in pivots.items():
        val = rhs
        for u, c in coeffs.items():
            val -= c * solution[unknowns[u]]
        solution[unknowns[u_star]] = val
    return solution


# ---------------------------------------------------------------------------
# Exact case analysis of the three-overlap subsystem


@dataclass
class CaseAnalysis:
    feasible: bool
    case_label: str
    trace: list
    forced: dict  # e.g. {"g00": 1, "f": 0}


def _single_monomial(factor: dict):
    if len(factor) != 1:
        return None
    (key, coeff), = factor.items()
    return key, coeff


def _lb_try_divide(num: dict, den: dict, cone=None):
    """num/den in the bivariate Laurent domain, or None; with a cone the
    quotient support must stay inside it."""
    if not num:
        return {}
    den_lead = max(den)
    den_c = den[den_lead]
    rem = dict(num)
    out = {}
    for _ in range(10_000):
        if not rem:
            if cone is not None:
                sz, sw = cone
                if any(ez * sz < 0 or ew * sw < 0 for ez, ew in out):
                    return None
            return out
        lead = max(rem)
        q_key = (lead[0] - den_lead[0], lead[1] - den_lead[1])
        q_c = rem[lead] / den_c
        out[q_key] = out.get(q_key, Fraction(0)) + q_c
        for d_key, d_c in den.items():
            key = (q_key[0] + d_key[0], q_key[1] + d_key[1])
            s = rem.get(key, Fraction(0)) - q_c * d_c
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
        if lead in rem:
            return None
    return None


def analyze_subsystem(system: LaurentSystem) -> CaseAnalysis:
    """Support-cone reasoning on the three z-direction equations.

    The product-to-product equation has single-monomial columns, so its
    two blocks are forced to vanish outside an exact integer box; the
    remaining equations are settled on the diagonal w = z, where the
    binomial factor in front of the V1 block vanishes identically.
    """
    k = system.twist
    eqs = {eq.label: eq for eq in system.equations}
    trace = []
    forced = {}

    eq23 = eqs["V2V3.z"]
    factors = dict(eq23.terms)
    fac_g = _single_monomial(factors["g"])
    fac_h = _single_monomial(factors["h"])
    assert fac_g and fac_h, "expected monomial columns on the V2V3 overlap"
    assert not eq23.rhs, "expected a vanishing obstruction on V2V3"
    (gz, gw), gc = fac_g
    (hz, hw), hc = fac_h
    # g hits exponents (gz - e, gw + f); h hits (hz + e, hw - f)
    z_lo, z_hi = hz, gz
    w_lo, w_hi = gw, hw
    box = [
        (ez, ew)
        for ez in range(z_lo, z_hi + 1)
        for ew in range(w_lo, w_hi + 1)
    ]
    if not box:
        case = "I" if k > 0 else "II"
        side = "w" if k > 0 else "z"
        trace.append(
            f"overlap V2/V3: the g-image cone and the h-image cone share no "
            f"exponent (every g monomial shifts into negative {side}-powers), "
            f"so g = 0 and h = 0"
        )
        forced["g"] = 0
        forced["h"] = 0
    else:
        case = "III"
        assert len(box) == 1, "unexpected coupling box"
        ez, ew = box[0]
        # slots of g and h reaching the shared exponent
        e_g, f_g = gz - ez, ew - gw
        e_h, f_h = ez - hz, hw - ew
        assert (e_g, f_g) == (0, 0) and (e_h, f_h) == (0, 0), (
            "coupling away from the constant slots"
        )
        sign_g = -1 if (e_g + f_g) % 2 else 1
        sign_h = -1 if (e_h + f_h) % 2 else 1
        lam = -(gc * sign_g) / (hc * sign_h)
        trace.append(
            "overlap V2/V3: supports meet only at the constant slot, "
            f"forcing h = {_fmt_q(lam)} * g with both constant"
        )
        forced["h_over_g"] = lam

    # the V1V2 equation: its V1-column carries the factor vanishing on
    # the diagonal w = z, so restricting to the diagonal eliminates f
    eq12 = eqs["V1V2.z"]
    factors12 = dict(eq12.terms)
    f_fac = factors12["f"]
    assert not _lb_diag(f_fac), "the V1-column must vanish on the diagonal"

    if not box:
        g_val = Fraction(0)
    else:
        # case III: the diagonal restriction determines the constant g
        rhs_diag = _lb_diag(eq12.rhs)
        g_fac_diag = _lb_diag(factors12.get("g", {}))
        assert g_fac_diag, "expected a g-column on the V1V2 overlap"
        g_val = None
        for exp in set(rhs_diag) | set(g_fac_diag):
            num = rhs_diag.get(exp, Fraction(0))
            den = g_fac_diag.get(exp, Fraction(0))
            if den == 0:
                if num != 0:
                    trace.append(
                        "diagonal restriction of V1/V2 is contradictory"
                    )
                    return CaseAnalysis(False, case, trace, forced)
                continue
            val = num / den
            if g_val is None:
                g_val = val
            elif g_val != val:
                trace.append("diagonal restriction of V1/V2 is contradictory")
                return CaseAnalysis(False, case, trace, forced)
        g_val = g_val if g_val is not None else Fraction(0)
        forced["g00"] = g_val
        forced["h00"] = g_val * forced["h_over_g"]

    # with g fixed the equation reads f_factor * F = residue
    residue = _lb_add(eq12.rhs, _lb_scale(factors12.get("g", {}), -g_val))
    if not residue:
        f_hat = {}
        forced["f"] = 0
        trace.append(
            f"overlap V1/V2 forces f = 0 and c = {_fmt_q(g_val)} "
            "(the constant value of g and h)"
            if box
            else "overlap V1/V2 is satisfied by f = 0"
        )
    elif _lb_diag(residue):
        inst = laurent_to_poly(residue)
        from .parser import pretty

        trace.append(
            "overlap V1/V2 demands f(z, w) * (w - z) * unit = "
            f"{pretty(inst)}, which is impossible: the left side vanishes "
            "on the diagonal w = z and the right side does not "
            "(w - z is not a unit)"
        )
        return CaseAnalysis(False, case, trace, forced)
    else:
        f_hat = _lb_try_divide(residue, f_fac, cone=(1, 1))
        if f_hat is None:
            trace.append(
                "overlap V1/V2 leaves a residue with no section solution"
            )
            return CaseAnalysis(False, case, trace, forced)
        trace.append("overlap V1/V2 determines f by exact division")

    # consistency of the remaining V1/V3 equation with f and h fixed
    eq13 = eqs["V1V3.z"]
    factors13 = dict(eq13.terms)
    h_val = forced.get("h00", Fraction(0))
    residue13 = _lb_add(eq13.rhs, _lb_scale(factors13.get("h", {}), -h_val))
    residue13 = _lb_add(
        residue13, _lb_scale(_lb_mul(factors13.get("f", {}), f_hat), -1)
    )
    if residue13:
        inst = laurent_to_poly(residue13)
        from .parser import pretty

        trace.append(
            f"overlap V1/V3 with f and h fixed: residual "
            f"{pretty(inst)} = 0 fails"
        )
        return CaseAnalysis(False, case, trace, forced)
    trace.append(
        "overlap V1/V3 is satisfied as well; the three-overlap system "
        "is solvable"
    )
    return CaseAnalysis(True, case, trace, forced)


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Verdicts


@dataclass
class SplitVerdict:
    split: bool
    target: str
    twist_input: int
    twist: int | None = None
    case_label: str | None = None
    degrees: tuple | None = None
    trace: list = field(default_factory=list)
    certificate: dict | None = None
    notes: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        out = {
            "k": self.twist_input,
            "target": self.target,
            "split": self.split,
        }
        if self.twist is not None:
            out["twist"] = self.twist
        if self.case_label is not None:
            out["case"] = self.case_label
        if self.degrees is not None:
            out["degrees"] = list(self.degrees)
        if self.trace:
            out["trace"] = list(self.trace)
        if self.certificate is not None:
            out["certificate"] = {
                key: _fmt_q(val) for key, val in sorted(self.certificate.items())
            }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


ANSATZ_NOTE = (
    "candidate sections are polynomial in the chart coordinates; poles "
    "along the removed diagonal are not considered"
)


def split_check_11(k: int) -> SplitVerdict:
    """The rank-(1|1) family: the single odd transition rule is linear
    with a monomial coefficient, so the family is split of twist -k+2."""
    atlas = hilb11_atlas(k)
    t_ba = atlas.transition("B", "A")
    beta = atlas.chart("B").odds[0]
    alpha = atlas.chart("A").odds[0]
    a = atlas.chart("A").evens[0]
    coeff = t_ba.rule(beta).as_poly().coeff_of(
        SuperMonomial.make({alpha: 1}), {alpha}
    )
    degree = _monomial_degree(coeff, a)
    cochain = extract_obstruction(atlas)
    assert all(
        cochain.is_zero_on(t, s) for (t, s) in atlas.transitions
    ), "rank-1 odd direction cannot carry a wedge-square term"
    verdict = SplitVerdict(
        split=True,
        target="hilb11",
        twist_input=k,
        twist=-degree,
        trace=[
            f"odd transition rule is linear with monomial coefficient of "
            f"Laurent degree {degree}; the family is the parity-reversed "
            f"line bundle of twist {-degree}"
        ],
    )
    return verdict


def _verify_certificate(atlas: Atlas, sections) -> bool:
    """Exact check of psi = sigma_target - sigma_source on every stored
    transition and both even components; sections maps chart name ->
    (poly in chart evens for component 0, for component 1)."""
    for (target, source) in atlas.transitions:
        tmap, psi, det, jac, bos_rules = _transition_factors(
            atlas, target, source
        )
        t_evens = tmap.target.evens
        s_evens = tmap.source.evens
        bos_map = {coord: bos_rules[coord] for coord in t_evens}
        for m in range(len(t_evens)):
            lhs = psi[m]
            composed = substitute_localized(sections[target][m], bos_map)
            rhs = det * composed
            for n in range(len(s_evens)):
                rhs = rhs - jac[m][n] * LocalizedPoly(sections[source][n])
            if not (lhs - rhs).is_zero():
                return False
    return True


def _sections_from_solution(solution, charts_evens):
    """Chart polynomials from the solved block coefficients."""
    sections = {}
    for chart, evens in charts_evens.items():
        polys = []
        for component in (0, 1):
            name = _block_name(chart, component)
            poly = SuperPoly.zero()
            for (block, e, f_), val in solution.items():
                if block != name or val == 0:
                    continue
                sign = -1 if (e + f_) % 2 else 1
                poly = poly + SuperPoly.const(val * sign) * V(evens[0], e) * V(
                    evens[1], f_
                )
            polys.append(poly)
        sections[chart] = tuple(polys)
    return sections


def is_coboundary(k: int, atlas: Atlas | None = None) -> SplitVerdict:
    """Decide whether the wedge-square cochain of the rank-(2|1) atlas
    bounds chart-level polynomial sections.

    The three-overlap z-direction subsystem is analyzed exactly (support
    cones plus the diagonal restriction) and cross-checked against the
    bounded solver.  When the subsystem alone is solvable the decision
    escalates to the full four-chart system in both directions, and a
    found solution is verified as an exact certificate."""
    atlas = atlas or hilb21_atlas(k)
    deg_a, deg_b = wedge2_degrees(k, atlas)
    system = build_coboundary_system(k, abs(k) + 4, atlas)
    analysis = analyze_subsystem(system)
    solver_solution = solve_laurent_system(system)
    assert (solver_solution is not None) == analysis.feasible, (
        "support analysis and bounded solver disagree"
    )
    if not analysis.feasible:
        return SplitVerdict(
            split=False,
            target="hilb21",
            twist_input=k,
            case_label=analysis.case_label,
            degrees=(deg_a, deg_b),
            trace=list(analysis.trace),
            notes=[ANSATZ_NOTE],
        )

    # the three-overlap equations admit sections; decide on the full cover
    full = build_full_coboundary_system(k, 4, atlas)
    solution = solve_laurent_system(full)
    if solution is None:
        return SplitVerdict(
            split=False,
            target="hilb21",
            twist_input=k,
            case_label=analysis.case_label,
            degrees=(deg_a, deg_b),
            trace=list(analysis.trace)
            + ["the fourth chart admits no compatible section"],
            notes=[ANSATZ_NOTE],
        )
    charts_evens = {ch.name: ch.evens for ch in atlas.charts}
    sections = _sections_from_solution(solution, charts_evens)
    assert _verify_certificate(atlas, sections), (
        "solver produced a section set that fails the exact identities"
    )
    certificate = {
        f"{block}[{e},{f_}]": val
        for (block, e, f_), val in sorted(solution.items())
        if val
    }
    return SplitVerdict(
        split=True,
        target="hilb21",
        twist_input=k,
        degrees=(deg_a, deg_b),
        case_label=analysis.case_label,
        trace=list(analysis.trace)
        + [
            "explicit cobounding sections exist on all four charts and "
            "verify exactly; the wedge-square obstruction vanishes"
        ],
        certificate=certificate,
        notes=[ANSATZ_NOTE],
    )
