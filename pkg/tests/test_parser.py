import random
import string

import pytest

from superhilb.errors import (
    DuplicateVariable,
    ExprSyntaxError,
    InvertibleOddVariable,
    NegativePowerOfNonInvertible,
    SuperAlgebraError,
    UnknownVariable,
)
from superhilb.parser import (
    RingDecl,
    parse_localized,
    parse_poly,
    parse_ring,
    pretty,
    pretty_localized,
)
from superhilb.ring import Parity, SuperPoly

from conftest import random_poly, standard_ring


class TestParseRing:
    def test_basic(self):
        ring = parse_ring("even x inv; odd theta;")
        x = ring.lookup("x")
        theta = ring.lookup("theta")
        assert x.parity is Parity.EVEN and x.invertible
        assert theta.parity is Parity.ODD and not theta.invertible

    def test_invertible_odd_rejected(self):
        with pytest.raises(InvertibleOddVariable):
            parse_ring("odd theta inv;")

    def test_duplicate(self):
        with pytest.raises(DuplicateVariable):
            parse_ring("even a; even a;")

    def test_chart_style_ring(self):
        ring = parse_ring("even a0; even a1; odd alpha0; odd alpha1;")
        assert [v.name for v in ring] == ["a0", "a1", "alpha0", "alpha1"]

    def test_declaration_order_preserved(self):
        ring = parse_ring("even z; even a; odd q;")
        assert [v.name for v in ring] == ["z", "a", "q"]


class TestParsePoly:
    def setup_method(self):
        self.ring = parse_ring(
            "even x inv; even a; even c1; even c2 inv; odd theta; odd alpha;"
            " odd gamma1;"
        )

    def test_point_ideal_generator(self):
        p = parse_poly("x + a + alpha*theta", self.ring)
        x = SuperPoly.var(self.ring.lookup("x"))
        a = SuperPoly.var(self.ring.lookup("a"))
        al = SuperPoly.var(self.ring.lookup("alpha"))
        th = SuperPoly.var(self.ring.lookup("theta"))
        assert p == x + a + al * th

    def test_odd_square_is_zero(self):
        assert parse_poly("theta^2", self.ring) == 0

    def test_product_expansion(self):
        got = parse_poly("(x+c1+gamma1*theta)*(x + c2^-1)", self.ring)
        x = SuperPoly.var(self.ring.lookup("x"))
        c1 = SuperPoly.var(self.ring.lookup("c1"))
        c2i = SuperPoly.var(self.ring.lookup("c2"), -1)
        g1 = SuperPoly.var(self.ring.lookup("gamma1"))
        th = SuperPoly.var(self.ring.lookup("theta"))
        expected = (x + c1 + g1 * th) * (x + c2i)
        assert got == expected

    def test_rationals(self):
        from fractions import Fraction

        assert parse_poly("3/4", self.ring) == SuperPoly.const(Fraction(3, 4))
        assert parse_poly("- 3/4*x + 2", self.ring) == (
            SuperPoly.const(Fraction(-3, 4)) * SuperPoly.var(self.ring.lookup("x")) + 2
        )

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariable):
            parse_poly("zz + 1", self.ring)

    def test_negative_power_needs_invertible(self):
        with pytest.raises(NegativePowerOfNonInvertible):
            parse_poly("a^-1", self.ring)

    def test_positioned_error(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse_poly("x +\n* 2", self.ring)
        assert err.value.line == 2

    def test_localized_inverse_of_sum(self):
        f = parse_localized("(c1 - c2)^-1", self.ring)
        c1 = SuperPoly.var(self.ring.lookup("c1"))
        c2 = SuperPoly.var(self.ring.lookup("c2"))
        assert f * (c1 - c2) == 1
        with pytest.raises(NegativePowerOfNonInvertible):
            parse_poly("(c1 - c2)^-1", self.ring)


class TestPretty:
    def test_zero(self):
        assert pretty(SuperPoly.zero()) == "0"

    def test_examples(self):
        ring = parse_ring("even x; even a0; odd alpha; odd theta;")
        x = SuperPoly.var(ring.lookup("x"))
        a0 = SuperPoly.var(ring.lookup("a0"))
        assert pretty(x * x + a0 * x) == "x^2 + a0*x"
        al = SuperPoly.var(ring.lookup("alpha"))
        th = SuperPoly.var(ring.lookup("theta"))
        assert pretty(-(al * th)) == "- alpha*theta"

    def test_round_trip_random(self):
        rng = random.Random(99)
        ring = RingDecl(list(standard_ring().values()))
        for _ in range(1000):
            p = random_poly(rng)
            assert parse_poly(pretty(p), ring) == p

    def test_round_trip_localized(self):
        ring = parse_ring("even a1; even a2; odd alpha1; odd alpha2;")
        f = parse_localized("(alpha1*alpha2) * (a2 - a1)^-1", ring)
        assert parse_localized(pretty_localized(f), ring) == f


class TestFuzz:
    ALPHABET = string.ascii_lowercase[:6] + "0123456789 +-*/^();\n_"

    def test_no_crashes(self):
        rng = random.Random(431)
        ring = parse_ring("even a; even b inv; odd c;")
        for _ in range(100_000):
            n = rng.randint(0, 24)
            text = "".join(rng.choice(self.ALPHABET) for _ in range(n))
            try:
                parse_poly(text, ring)
            except SuperAlgebraError:
                pass

    def test_arbitrary_bytes(self):
        rng = random.Random(77)
        ring = parse_ring("even a;")
        for _ in range(2000):
            blob = bytes(rng.randrange(256) for _ in range(rng.randint(0, 12)))
            try:
                parse_poly(blob.decode("latin1"), ring)
            except SuperAlgebraError:
                pass

    def test_deep_nesting_is_an_error_not_a_crash(self):
        ring = parse_ring("even a;")
        with pytest.raises(ExprSyntaxError):
            parse_poly("(" * 100_000 + "a" + ")" * 100_000, ring)
