"""Parse and pretty-print superpolynomial expressions and ring declarations.

Grammar (whitespace insensitive):

    ring  := (('even' | 'odd') ident ['inv'] ';')*
    expr  := term (('+' | '-') term)*
    term  := factor ('*' factor)*
    factor:= atom ['^' ['-'] int]
    atom  := rational | ident | '(' expr ')' | '-' atom

Rational literals are integers or "p/q".  Implicit multiplication is not
supported.  Parsing then printing then parsing is the identity on normal
forms.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DuplicateVariable,
    ExprSyntaxError,
    InvertibleOddVariable,
    NegativePowerOfNonInvertible,
    NotAUnit,
    UnknownVariable,
)
from .localized import LocalizedPoly
from .ring import Parity, SuperPoly, VarSymbol, invert

_MAX_DEPTH = 400
_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")


class RingDecl:
    """Ordered variable declarations; the symbol table for parsing."""

    def __init__(self, variables=()):
        self.variables = []
        self._by_name = {}
        for v in variables:
            self.add(v)

    def add(self, var: VarSymbol) -> VarSymbol:
        if var.name in self._by_name:
            raise DuplicateVariable(f"variable {var.name!r} declared twice")
        self.variables.append(var)
        self._by_name[var.name] = var
        return var

    def lookup(self, name: str) -> VarSymbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownVariable(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self):
        return iter(self.variables)

    def merged(self, other: "RingDecl") -> "RingDecl":
        out = RingDecl(self.variables)
        for v in other.variables:
            if v.name not in out._by_name:
                out.add(v)
        return out


# ---------------------------------------------------------------------------
# Tokenizer


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in "0123456789":
            j = i
            while j < n and text[j] in "0123456789":
                j += 1
            tokens.append(_Token("int", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch in _IDENT_START:
            j = i
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            tokens.append(_Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*^()/;":
            tokens.append(_Token(ch, ch, line, col))
            col += 1
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", None, line, col))
    return tokens


class _Stream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprSyntaxError(
                f"expected {kind!r}, found {tok.kind!r}", tok.line, tok.column
            )
        return self.next()


# ---------------------------------------------------------------------------
# Ring declarations


def parse_ring(text: str) -> RingDecl:
    stream = _Stream(_tokenize(text))
    ring = RingDecl()
    while stream.peek().kind != "eof":
        tok = stream.expect("ident")
        if tok.value not in ("even", "odd"):
            raise ExprSyntaxError(
                f"expected 'even' or 'odd', found {tok.value!r}",
                tok.line,
                tok.column,
            )
        parity = Parity.EVEN if tok.value == "even" else Parity.ODD
        name_tok = stream.expect("ident")
        invertible = False
        if stream.peek().kind == "ident" and stream.peek().value == "inv":
            stream.next()
            invertible = True
        stream.expect(";")
        if invertible and parity is Parity.ODD:
            raise InvertibleOddVariable(
                f"odd variable {name_tok.value!r} cannot be invertible"
            )
        ring.add(VarSymbol(name_tok.value, parity, invertible))
    return ring


# ---------------------------------------------------------------------------
# Expressions: AST build and evaluation


def _parse_expr(stream, depth):
    if depth > _MAX_DEPTH:
        tok = stream.peek()
        raise ExprSyntaxError("expression nested too deeply", tok.line, tok.column)
    node = _parse_term(stream, depth + 1)
    while stream.peek().kind in ("+", "-"):
        op = stream.next().kind
        rhs = _parse_term(stream, depth + 1)
        node = (op, node, rhs)
    return node


def _parse_term(stream, depth):
    node = _parse_factor(stream, depth + 1)
    while stream.peek().kind == "*":
        stream.next()
        rhs = _parse_factor(stream, depth + 1)
        node = ("*", node, rhs)
    return node


def _parse_factor(stream, depth):
    node = _parse_atom(stream, depth + 1)
    if stream.peek().kind == "^":
        stream.next()
        sign = 1
        if stream.peek().kind == "-":
            stream.next()
            sign = -1
        tok = stream.expect("int")
        node = ("^", node, sign * tok.value)
    return node


def _parse_atom(stream, depth):
    if depth > _MAX_DEPTH:
        tok = stream.peek()
        raise ExprSyntaxError("expression nested too deeply", tok.line, tok.column)
    tok = stream.peek()
    if tok.kind == "int":
        stream.next()
        if stream.peek().kind == "/":
            stream.next()
            den_tok = stream.expect("int")
            if den_tok.value == 0:
                raise ExprSyntaxError(
                    "zero denominator in rational literal",
                    den_tok.line,
                    den_tok.column,
                )
            return ("rat", Fraction(tok.value, den_tok.value))
        return ("rat", Fraction(tok.value))
    if tok.kind == "ident":
        stream.next()
        return ("var", tok.value, tok.line, tok.column)
    if tok.kind == "(":
        stream.next()
        node = _parse_expr(stream, depth + 1)
        stream.expect(")")
        return node
    if tok.kind == "-":
        stream.next()
        return ("neg", _parse_atom(stream, depth + 1))
    raise ExprSyntaxError(
        f"expected a rational, identifier or '(', found {tok.kind!r}",
        tok.line,
        tok.column,
    )


def _parse_to_ast(text: str):
    stream = _Stream(_tokenize(text))
    tok = stream.peek()
    if tok.kind == "eof":
        raise ExprSyntaxError("empty expression", tok.line, tok.column)
    node = _parse_expr(stream, 0)
    tok = stream.peek()
    if tok.kind != "eof":
        raise ExprSyntaxError(f"trailing input {tok.kind!r}", tok.line, tok.column)
    return node


def _eval_poly(node, ring: RingDecl) -> SuperPoly:
    kind = node[0]
    if kind == "rat":
        return SuperPoly.const(node[1])
    if kind == "var":
        return SuperPoly.var(ring.lookup(node[1]))
    if kind == "neg":
        return -_eval_poly(node[1], ring)
    if kind == "+":
        return _eval_poly(node[1], ring) + _eval_poly(node[2], ring)
    if kind == "-":
        return _eval_poly(node[1], ring) - _eval_poly(node[2], ring)
    if kind == "*":
        return _eval_poly(node[1], ring) * _eval_poly(node[2], ring)
    if kind == "^":
        base = _eval_poly(node[1], ring)
        n = node[2]
        if n >= 0:
            return base ** n
        try:
            return invert(base) ** (-n)
        except NotAUnit as exc:
            raise NegativePowerOfNonInvertible(str(exc)) from exc
    raise AssertionError(f"bad AST node {node!r}")


def _eval_localized(node, ring: RingDecl) -> LocalizedPoly:
    kind = node[0]
    if kind == "rat":
        return LocalizedPoly(SuperPoly.const(node[1]))
    if kind == "var":
        return LocalizedPoly(SuperPoly.var(ring.lookup(node[1])))
    if kind == "neg":
        return -_eval_localized(node[1], ring)
    if kind == "+":
        return _eval_localized(node[1], ring) + _eval_localized(node[2], ring)
    if kind == "-":
        return _eval_localized(node[1], ring) - _eval_localized(node[2], ring)
    if kind == "*":
        return _eval_localized(node[1], ring) * _eval_localized(node[2], ring)
    if kind == "^":
        return _eval_localized(node[1], ring) ** node[2]
    raise AssertionError(f"bad AST node {node!r}")


def parse_poly(text: str, ring: RingDecl) -> SuperPoly:
    return _eval_poly(_parse_to_ast(text), ring)


def parse_localized(text: str, ring: RingDecl) -> LocalizedPoly:
    """Like parse_poly but evaluates in the localized ring, so negative
    powers of parenthesized sums are accepted."""
    return _eval_localized(_parse_to_ast(text), ring)


# ---------------------------------------------------------------------------
# Pretty printing


def _var_sort_names(p: SuperPoly):
    return sorted({v.name for v in p.variables()}, reverse=True)


def _term_key(mono, names):
    exps = {v.name: e for v, e in mono.factors}
    return tuple(exps.get(nm, 0) for nm in names)


def _format_monomial(mono: "SuperMonomial") -> str:
    parts = []
    for v, e in mono.factors:
        parts.append(v.name if e == 1 else f"{v.name}^{e}")
    return "*".join(parts)


def pretty(p: SuperPoly) -> str:
    """Deterministic textual form; parse_poly(pretty(p)) == p."""
    if p.is_zero():
        return "0"
    names = _var_sort_names(p)
    items = sorted(
        p.terms.items(), key=lambda mc: _term_key(mc[0], names), reverse=True
    )
    chunks = []
    for i, (mono, coeff) in enumerate(items):
        negative = coeff < 0
        mag = -coeff if negative else coeff
        if mono.is_one:
            body = _format_rational(mag)
        elif mag == 1:
            body = _format_monomial(mono)
            # After a leading unary minus, '^' would bind before the sign;
            # "- 1*x^2" keeps the minus attached to the rational atom.
            if i == 0 and negative and mono.factors[0][1] != 1:
                body = f"1*{body}"
        else:
            body = f"{_format_rational(mag)}*{_format_monomial(mono)}"
        if i == 0:
            chunks.append(f"- {body}" if negative else body)
        else:
            chunks.append(f"{'-' if negative else '+'} {body}")
    return " ".join(chunks)


def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def pretty_localized(f) -> str:
    f = LocalizedPoly.promote(f)
    if f.is_polynomial():
        return pretty(f.num)
    return f"({pretty(f.num)}) * ({pretty(f.den)})^-1"
