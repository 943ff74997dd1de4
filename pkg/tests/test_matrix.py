import random
from fractions import Fraction

import pytest

from superhilb.errors import ParityMismatch, ShapeMismatch, SingularReduction
from superhilb.matrix import (
    SuperMatrix,
    bareiss_determinant,
    left_inverse,
    matmul,
    rational_inverse,
    reduce_mod_odd,
)
from superhilb.ring import SuperPoly, even, invert, odd

X = even("x", invertible=True)
ODDS = [odd(f"w{i}") for i in range(4)]


def random_super_matrix(rng, p, q, odd_pool=ODDS):
    """Invertible numeric reduction plus random nilpotent perturbations."""
    n = p + q
    while True:
        base = [
            [Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)
        ]
        a_block = [row[:p] for row in base[:p]]
        d_block = [row[p:] for row in base[p:]]
        if (
            bareiss_determinant(a_block) != 0
            and bareiss_determinant(d_block) != 0
        ):
            break
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            even_slot = (i < p) == (j < p)
            entry = SuperPoly.const(base[i][j]) if even_slot else SuperPoly.zero()
            for _ in range(rng.randint(0, 2)):
                k = 2 if even_slot else 1
                vars_ = rng.sample(odd_pool, k)
                mono = SuperPoly.const(Fraction(rng.randint(-3, 3)))
                for v in sorted(vars_, key=lambda s: s.name):
                    mono = mono * SuperPoly.var(v)
                entry = entry + mono
            row.append(entry)
        rows.append(row)
    return SuperMatrix.from_lists(p, q, rows)


class TestMatmul:
    def test_identity(self, rng):
        m = random_super_matrix(rng, 2, 2)
        i = SuperMatrix.identity(2, 2)
        assert matmul(i, m) == m
        assert matmul(m, i) == m

    def test_diagonal_units(self):
        m = SuperMatrix.from_lists(1, 0, [[SuperPoly.var(X)]])
        n = SuperMatrix.from_lists(1, 0, [[invert(SuperPoly.var(X))]])
        assert matmul(m, n) == SuperMatrix.identity(1, 0)

    def test_shape_mismatch(self, rng):
        with pytest.raises(ShapeMismatch):
            matmul(random_super_matrix(rng, 1, 1), random_super_matrix(rng, 2, 1))

    def test_parity_validation(self):
        with pytest.raises(ParityMismatch):
            SuperMatrix.from_lists(1, 1, [[1, 1], [0, 1]])


class TestLeftInverse:
    def test_identity_case(self):
        i = SuperMatrix.identity(2, 1)
        assert left_inverse(i) == i

    def test_odd_perturbation_of_identity(self):
        w0, w1 = ODDS[0], ODDS[1]
        gamma = SuperMatrix.from_lists(
            1,
            1,
            [[1, SuperPoly.var(w0)], [SuperPoly.var(w1), 1]],
        )
        inv = left_inverse(gamma)
        assert matmul(inv, gamma) == SuperMatrix.identity(1, 1)
        assert matmul(gamma, inv) == SuperMatrix.identity(1, 1)

    def test_one_one_block_formula(self):
        beta, gamma = ODDS[0], ODDS[1]
        m = SuperMatrix.from_lists(
            1, 1, [[2, SuperPoly.var(beta)], [SuperPoly.var(gamma), 1]]
        )
        inv = left_inverse(m)
        assert matmul(inv, m) == SuperMatrix.identity(1, 1)
        assert matmul(m, inv) == SuperMatrix.identity(1, 1)

    def test_random_two_sided(self):
        rng = random.Random(5150)
        for _ in range(30):
            p = rng.randint(0, 3)
            q = rng.randint(0, 3)
            if p + q == 0:
                continue
            m = random_super_matrix(rng, p, q)
            inv = left_inverse(m)
            assert matmul(inv, m) == SuperMatrix.identity(p, q)
            assert matmul(m, inv) == SuperMatrix.identity(p, q)

    def test_reduction_compatibility(self):
        rng = random.Random(31)
        for _ in range(10):
            m = random_super_matrix(rng, 2, 2)
            inv = left_inverse(m)
            assert reduce_mod_odd(inv) == rational_inverse(reduce_mod_odd(m))

    def test_singular_reduction(self):
        w0, w1 = ODDS[0], ODDS[1]
        nil = SuperPoly.var(w0) * SuperPoly.var(w1)
        m = SuperMatrix.from_lists(1, 1, [[nil, 0], [0, 1]])
        with pytest.raises(SingularReduction):
            left_inverse(m)

    def test_polynomial_reduction_rejected(self):
        m = SuperMatrix.from_lists(1, 0, [[SuperPoly.var(X)]])
        with pytest.raises(SingularReduction):
            left_inverse(m)


class TestRationalHelpers:
    def test_bareiss_matches_cofactor(self):
        rng = random.Random(3)
        for _ in range(50):
            n = rng.randint(1, 4)
            m = [
                [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)]
                for _ in range(n)
            ]
            det = bareiss_determinant(m)
            assert det == _cofactor_det(m)

    def test_inverse_round_trip(self):
        rng = random.Random(8)
        for _ in range(20):
            n = rng.randint(1, 4)
            while True:
                m = [
                    [Fraction(rng.randint(-5, 5)) for _ in range(n)]
                    for _ in range(n)
                ]
                if bareiss_determinant(m) != 0:
                    break
            inv = rational_inverse(m)
            prod = [
                [sum(m[i][k] * inv[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)
            ]
            assert prod == [
                [Fraction(int(i == j)) for j in range(n)] for i in range(n)
            ]


def _cofactor_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _cofactor_det(minor)
    return total
