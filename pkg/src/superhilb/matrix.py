"""Matrices over supercommutative rings with (p|q) block structure.

A SuperMatrix is square of shape (p|q) x (p|q): the diagonal blocks A
(p x p) and D (q x q) carry even entries, the off-diagonal blocks B and
C carry odd entries.  Inverses use the explicit block formula

    [ A^-1 + A^-1 B S^-1 C A^-1 , -A^-1 B S^-1 ]
    [ -S^-1 C A^-1              ,  S^-1        ]

with S = -C A^-1 B + D; the diagonal blocks are inverted through a
finite geometric series once their numeric reductions are checked
invertible by fraction-free elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParityMismatch, ShapeMismatch, SingularReduction
from .ring import ParityClass, SuperPoly


@dataclass(frozen=True)
class SuperMatrix:
    p: int
    q: int
    rows: tuple  # (p+q) x (p+q) tuple of tuples of SuperPoly

    def __post_init__(self):
        n = self.p + self.q
        if self.p < 0 or self.q < 0:
            raise ShapeMismatch("block sizes must be nonnegative")
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ShapeMismatch(f"expected {n}x{n} entries")
        for i in range(n):
            for j in range(n):
                entry = self.rows[i][j]
                if entry.is_zero():
                    continue
                even_slot = (i < self.p) == (j < self.p)
                want = ParityClass.EVEN if even_slot else ParityClass.ODD
                if entry.parity_class() is not want:
                    raise ParityMismatch(
                        f"entry ({i},{j}) must be {want.value}"
                    )

    @staticmethod
    def from_lists(p, q, rows) -> "SuperMatrix":
        return SuperMatrix(
            p, q, tuple(tuple(SuperPoly.promote(e) for e in row) for row in rows)
        )

    @staticmethod
    def identity(p, q) -> "SuperMatrix":
        n = p + q
        return SuperMatrix.from_lists(
            p, q, [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @property
    def size(self) -> int:
        return self.p + self.q

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.p, self.q) == (other.p, other.q) and all(
            self.rows[i][j] == other.rows[i][j]
            for i in range(self.size)
            for j in range(self.size)
        )

    def block(self, which: str):
        p, q = self.p, self.q
        if which == "A":
            return [[self.rows[i][j] for j in range(p)] for i in range(p)]
        if which == "B":
            return [[self.rows[i][p + j] for j in range(q)] for i in range(p)]
        if which == "C":
            return [[self.rows[p + i][j] for j in range(p)] for i in range(q)]
        if which == "D":
            return [[self.rows[p + i][p + j] for j in range(q)] for i in range(q)]
        raise ValueError(which)


def matmul(m: SuperMatrix, n: SuperMatrix) -> SuperMatrix:
    if (m.p, m.q) != (n.p, n.q):
        raise ShapeMismatch(
            f"({m.p}|{m.q}) and ({n.p}|{n.q}) matrices cannot be multiplied"
        )
    size = m.size
    rows = [
        [
            sum(
                (m.rows[i][k] * n.rows[k][j] for k in range(size)),
                SuperPoly.zero(),
            )
            for j in range(size)
        ]
        for i in range(size)
    ]
    return SuperMatrix(m.p, m.q, tuple(tuple(r) for r in rows))


def _lists_matmul(a, b):
    rows = len(a)
    inner = len(b)
    cols = len(b[0]) if inner else 0
    return [
        [
            sum((a[i][k] * b[k][j] for k in range(inner)), SuperPoly.zero())
            for j in range(cols)
        ]
        for i in range(rows)
    ]


def _lists_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _lists_neg(a):
    return [[-x for x in row] for row in a]


def numeric_reduction(block):
    """The block with all odd-variable terms killed, as rational numbers.

    Raises SingularReduction when an entry's reduction is not constant.
    """
    out = []
    for row in block:
        out_row = []
        for entry in row:
            body = entry.bosonic()
            try:
                out_row.append(body.as_constant())
            except ValueError:
                raise SingularReduction(
                    "numeric reduction is not a rational matrix"
                ) from None
        out.append(out_row)
    return out


def bareiss_determinant(matrix) -> Fraction:
    """Fraction-free elimination (Bareiss) on an integer-scaled copy."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    m = []
    for row in matrix:
        denom = 1
        for x in row:
            denom = denom * x.denominator // _gcd(denom, x.denominator)
        scale = scale / denom
        m.append([int(x * denom) for x in row])
    prev = 1
    sign = 1
    m = [row[:] for row in m]
    for k in range(n - 1):
        if m[k][k] == 0:
            for swap in range(k + 1, n):
                if m[swap][k] != 0:
                    m[k], m[swap] = m[swap], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * scale * m[n - 1][n - 1]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def rational_inverse(matrix):
    """Exact Gauss-Jordan inverse of a rational matrix."""
    n = len(matrix)
    aug = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if aug[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            raise SingularReduction("numeric reduction is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _even_block_inverse(block):
    """Inverse of an even-entried block whose numeric reduction is
    invertible: (A0 + N)^-1 = sum((-A0^-1 N)^j) A0^-1, N nilpotent."""
    n = len(block)
    if n == 0:
        return []
    reduction = numeric_reduction(block)
    if bareiss_determinant(reduction) == 0:
        raise SingularReduction("numeric reduction is singular")
    a0_inv_rat = rational_inverse(reduction)
    a0_inv = [[SuperPoly.const(x) for x in row] for row in a0_inv_rat]
    nil = [
        [block[i][j] - SuperPoly.const(reduction[i][j]) for j in range(n)]
        for i in range(n)
    ]
    odd_count = len({v for row in nil for e in row for v in e.odd_variables()})
    x = _lists_neg(_lists_matmul(a0_inv, nil))
    acc = a0_inv
    power = a0_inv
    for _ in range(odd_count + 2):
        power = _lists_matmul(x, power)
        if all(e.is_zero() for row in power for e in row):
            break
        acc = [[p + t for p, t in zip(ra, rb)] for ra, rb in zip(acc, power)]
    else:
        raise AssertionError("nilpotent matrix series failed to terminate")
    return acc


def left_inverse(m: SuperMatrix) -> SuperMatrix:
    """Two-sided inverse via the explicit block formula."""
    if m.q == 0:
        inv = _even_block_inverse(m.block("A"))
        return SuperMatrix(m.p, 0, tuple(tuple(row) for row in inv))
    if m.p == 0:
        inv = _even_block_inverse(m.block("D"))
        return SuperMatrix(0, m.q, tuple(tuple(row) for row in inv))
    a = m.block("A")
    b = m.block("B")
    c = m.block("C")
    d = m.block("D")
    a_inv = _even_block_inverse(a)
    schur = _lists_sub(d, _lists_matmul(_lists_matmul(c, a_inv), b))
    s_inv = _even_block_inverse(schur)
    a_inv_b = _lists_matmul(a_inv, b)
    c_a_inv = _lists_matmul(c, a_inv)
    tl = [
        [x + y for x, y in zip(row1, row2)]
        for row1, row2 in zip(
            a_inv, _lists_matmul(_lists_matmul(a_inv_b, s_inv), c_a_inv)
        )
    ] if m.p else []
    tr = _lists_neg(_lists_matmul(a_inv_b, s_inv))
    bl = _lists_neg(_lists_matmul(s_inv, c_a_inv))
    br = s_inv
    rows = []
    for i in range(m.p):
        rows.append(tuple(tl[i] + tr[i]))
    for i in range(m.q):
        rows.append(tuple(bl[i] + br[i]))
    return SuperMatrix(m.p, m.q, tuple(rows))


def reduce_mod_odd(m: SuperMatrix):
    """Kill every odd-containing term; returns rational (p+q)x(p+q) lists."""
    out = []
    for i in range(m.size):
        row = []
        for j in range(m.size):
            body = m.rows[i][j].bosonic()
            try:
                row.append(body.as_constant())
            except ValueError:
                raise SingularReduction(
                    "numeric reduction is not a rational matrix"
                ) from None
        out.append(row)
    return out
