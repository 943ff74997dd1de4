from fractions import Fraction

import pytest

from superhilb.errors import NonMonicDivisor, RankOrderViolation
from superhilb.ideals import (
    CanonicalIdeal,
    RawIdeal,
    basis_expansion,
    canonical_pair,
    kernel_witnesses,
    membership,
    raw_to_canonical,
    reduce_to_basis,
    stratification_generators,
    super_divmod,
    verify_reduction,
)
from superhilb.ring import SuperPoly, even, odd

V = SuperPoly.var


class TestSuperDivmod:
    def setup_method(self):
        self.x = even("x")
        self.theta = odd("theta")

    def test_self_division(self):
        ideal = CanonicalIdeal.generic(2, 1)
        bq = V(ideal.x) + V(ideal.b[0])
        quo, rem = super_divmod(bq, bq, ideal.x, ideal.theta)
        assert quo == 1 and rem == 0

    def test_cubic_by_linear(self):
        x = self.x
        quo, rem = super_divmod(V(x, 3), V(x) + 1, x, self.theta)
        assert quo == V(x, 2) - V(x) + 1
        assert rem == SuperPoly.const(-1)
        assert (V(x) + 1) * quo + rem == V(x, 3)

    def test_raw_f_decomposition_shape(self):
        raw = RawIdeal.generic(2, 1)
        divisor = V(raw.x) + V(raw.b[0])
        quo, rem = super_divmod(raw.f, divisor, raw.x, raw.theta)
        assert divisor * quo + rem == raw.f
        assert rem.degree_in(raw.x) in (None, 0)

    def test_multiply_back_random(self, rng):
        x, theta = self.x, self.theta
        u = even("u")
        mu = odd("mu")
        for _ in range(40):
            divisor = V(x, 2) + V(u) * V(x) + V(mu) * V(theta) * 0 + 1
            dividend = SuperPoly.zero()
            for e in range(rng.randint(0, 5)):
                c = Fraction(rng.randint(-4, 4))
                dividend = dividend + c * V(x, e)
                if rng.random() < 0.4:
                    dividend = dividend + V(mu) * V(x, e) * V(theta)
            quo, rem = super_divmod(dividend, divisor, x, theta)
            assert divisor * quo + rem == dividend
            assert (rem.degree_in(x) or 0) < 2

    def test_non_monic_rejected(self):
        x, theta = self.x, self.theta
        with pytest.raises(NonMonicDivisor):
            super_divmod(V(x, 2), 2 * V(x) + 1, x, theta)
        with pytest.raises(NonMonicDivisor):
            super_divmod(V(x), V(x) + V(theta), x, theta)


class TestRawToCanonical:
    def test_rank_one_zero(self):
        ch = raw_to_canonical(1, 0)
        raw = ch.raw
        # f = x + a0, g = theta + alpha0 after the (trivial) change
        assert ch.f_canonical == V(ch.x) + V(ch.a[0])
        assert ch.g_canonical == V(ch.theta) + V(ch.alpha[0])
        assert ch.c_poly == 0 and ch.gamma_poly == 0
        assert ch.forward[raw.a[0]] == V(ch.a[0])
        assert ch.forward[raw.beta[0]] == V(ch.alpha[0])

    def test_rank_one_one(self):
        ch = raw_to_canonical(1, 1)
        raw = ch.raw
        assert ch.f_canonical == V(ch.x) + V(ch.b[0]) + V(ch.beta[0]) * V(ch.theta)
        assert ch.g_canonical == (V(ch.x) + V(ch.b[0])) * V(ch.theta)
        assert ch.forward[raw.a[0]] == V(ch.b[0]) + V(ch.c[0])
        assert ch.forward[raw.b[0]] == V(ch.b[0])
        assert ch.forward[raw.alpha[0]] == V(ch.beta[0])
        assert ch.forward[raw.beta[0]] == V(ch.gamma[0])

    def test_zero_parameters_base_point(self):
        for p, q in [(1, 0), (2, 1), (3, 2), (2, 2)]:
            ch = raw_to_canonical(p, q)
            zeros = {s: SuperPoly.zero() for s in ch.backward}
            f0 = ch.f_canonical.substitute(zeros)
            g0 = ch.g_canonical.substitute(zeros)
            assert f0 == V(ch.x, p)
            assert g0 == V(ch.x, q) * V(ch.theta)

    @pytest.mark.parametrize("p,q", [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2),
                                     (3, 1), (3, 2), (4, 2), (4, 4)])
    def test_change_verifies(self, p, q):
        # raw_to_canonical asserts both substitution identities internally
        raw_to_canonical(p, q)

    def test_rank_violation(self):
        with pytest.raises(RankOrderViolation):
            raw_to_canonical(1, 2)


class TestReduceToBasis:
    def test_reduce_one(self):
        ideal = CanonicalIdeal.generic(2, 1)
        vec = reduce_to_basis(SuperPoly.one(), ideal)
        assert vec.evens[0] == 1 and vec.evens[1] == 0 and vec.odds[0] == 0
        assert verify_reduction(SuperPoly.one(), vec, ideal)

    def test_monomial_ideal_case(self):
        ideal = CanonicalIdeal.generic(2, 1)
        zeros = {
            s: SuperPoly.zero()
            for s in (*ideal.a, *ideal.b, *ideal.alpha, *ideal.beta)
        }
        f0, g0 = ideal.with_values(zeros)
        base = CanonicalIdeal(
            2, 1, ideal.x, ideal.theta, (), (), (), (), f0, g0
        )
        assert reduce_to_basis(V(ideal.x, 3), base).is_zero()
        vec = reduce_to_basis(V(ideal.theta), base)
        assert vec.odds[0] == 1 and vec.evens == (SuperPoly.zero(),) * 2

    def test_symbolic_reduction_with_certificate(self):
        ideal = CanonicalIdeal.generic(2, 1)
        poly = V(ideal.x) * ideal.g
        vec = reduce_to_basis(poly, ideal)
        assert verify_reduction(poly, vec, ideal)
        names = {v.name for e in (*vec.evens, *vec.odds) for v in e.variables()}
        assert names <= {"a0", "b0", "alpha0", "beta0"}

    def test_base_point_truncation(self, rng):
        import sys

        sys.path.insert(0, "tests")
        from conftest import random_poly

        x = even("x")
        theta = odd("theta")
        f0, g0 = canonical_pair(3, 1, x, theta, [0, 0], [0], [0, 0], [0])
        base = CanonicalIdeal(3, 1, x, theta, (), (), (), (), f0, g0)
        ring = {"x": x, "theta": theta, "u": even("u"), "mu": odd("mu")}
        for _ in range(25):
            p = random_poly(rng, ring=ring, allow_laurent=False)
            vec = reduce_to_basis(p, base)
            assert verify_reduction(p, vec, base)
            expect = SuperPoly(
                {
                    m: c
                    for m, c in p.terms.items()
                    if (m.exponent(theta) and m.exponent(x) < 1)
                    or (not m.exponent(theta) and m.exponent(x) < 3)
                }
            )
            assert basis_expansion(vec, base) == expect

    def test_linearity(self, rng):
        ideal = CanonicalIdeal.generic(2, 1)
        lam = V(even("lam"))
        mu = V(ideal.b[0])
        for e1 in range(4):
            p = V(ideal.x, e1)
            q = V(ideal.x, e1) * V(ideal.theta)
            combo = lam * p + mu * q
            vec = reduce_to_basis(combo, ideal)
            vp = reduce_to_basis(p, ideal)
            vq = reduce_to_basis(q, ideal)
            for i in range(2):
                assert vec.evens[i] == lam * vp.evens[i] + mu * vq.evens[i]
            assert vec.odds[0] == lam * vp.odds[0] + mu * vq.odds[0]

    def test_membership(self):
        ideal = CanonicalIdeal.generic(2, 1)
        assert membership(ideal.f, ideal)
        assert membership(ideal.g, ideal)
        assert not membership(SuperPoly.one(), ideal)
        alpha_p = V(ideal.alpha[0])
        witness = ideal.g * (V(ideal.theta) + alpha_p)
        assert membership(witness, ideal)

    def test_random_combinations_reduce_to_zero(self, rng):
        import sys

        sys.path.insert(0, "tests")
        from conftest import random_poly

        ideal = CanonicalIdeal.generic(2, 1)
        ring = {
            "x": ideal.x,
            "theta": ideal.theta,
            "a0": ideal.a[0],
            "alpha0": ideal.alpha[0],
        }
        for _ in range(20):
            u = random_poly(rng, ring=ring, allow_laurent=False, max_exp=2)
            v = random_poly(rng, ring=ring, allow_laurent=False, max_exp=2)
            combo = u * ideal.f + v * ideal.g
            assert membership(combo, ideal)


class TestKernelWitnesses:
    def test_two_one_pattern(self):
        h, k = kernel_witnesses(2, 1)
        c0 = V(even("c0"))
        gamma0 = V(odd("gamma0"))
        a0 = V(even("a0"))
        alpha0 = V(odd("alpha0"))
        assert h.odds[0] == c0
        assert h.evens[0] == c0 * alpha0 - a0 * gamma0
        assert h.evens[1] == -gamma0
        assert k.odds[0] == gamma0
        assert k.evens[0] == gamma0 * alpha0
        assert k.evens[1] == 0

    def test_zero_parameters_zero_witnesses(self):
        h, k = kernel_witnesses(3, 2)
        zeros = {}
        for vec in (h, k):
            for entry in (*vec.evens, *vec.odds):
                for v in entry.variables():
                    zeros[v] = SuperPoly.zero()
        for vec in (h, k):
            for entry in (*vec.evens, *vec.odds):
                assert entry.substitute(zeros) == 0

    def test_three_two_support(self):
        h, k = kernel_witnesses(3, 2)
        allowed = {"c0", "c1", "gamma0", "gamma1"}
        for vec in (h, k):
            for entry in (*vec.evens, *vec.odds):
                for mono in entry.terms:
                    assert any(v.name in allowed for v in mono.variables())

    def test_rank_violation(self):
        with pytest.raises(RankOrderViolation):
            kernel_witnesses(2, 0)


class TestStratification:
    @pytest.mark.parametrize(
        "p,q", [(p, q) for p in range(0, 5) for q in range(0, p + 1)]
    )
    def test_counts_and_dimension(self, p, q):
        gens = stratification_generators(p, q)
        assert len(gens) == 2 * q
        names = sorted(str(list(g.terms)[0]) for g in gens)
        expected = sorted(
            [f"c{i}" for i in range(q)] + [f"gamma{i}" for i in range(q)]
        )
        assert names == expected

    def test_one_one(self):
        gens = stratification_generators(1, 1)
        assert len(gens) == 2

    def test_one_zero_empty(self):
        assert stratification_generators(1, 0) == []

    def test_rank_violation(self):
        with pytest.raises(RankOrderViolation):
            stratification_generators(1, 2)


class TestSerialization:
    def test_canonical_serialize_round_trip(self):
        from superhilb.parser import RingDecl, parse_poly

        ideal = CanonicalIdeal.generic(2, 1)
        text = ideal.serialize()
        lines = [ln for ln in text.splitlines() if ln.strip()]
        ring = RingDecl(
            [ideal.x, ideal.theta, *ideal.a, *ideal.b, *ideal.alpha, *ideal.beta]
        )
        parsed = {}
        for ln in lines:
            name, expr = ln.split("=", 1)
            parsed[name.strip()] = parse_poly(expr.strip(), ring)
        assert parsed["f"] == ideal.f
        assert parsed["g"] == ideal.g


class TestLeadingCoefficients:
    def test_canonical_leads_are_one(self):
        from superhilb.ring import SuperMonomial

        for p, q in [(1, 0), (2, 1), (3, 2), (4, 4)]:
            ideal = CanonicalIdeal.generic(p, q)
            split = {ideal.x, ideal.theta}
            assert ideal.f.coeff_of(
                SuperMonomial.make({ideal.x: p}), split
            ) == 1
            assert ideal.g.coeff_of(
                SuperMonomial.make({ideal.x: q, ideal.theta: 1}), split
            ) == 1
