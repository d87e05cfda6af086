"""Text syntax for ring elements.

Grammar::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | power
    power   := atom (("^" | "**") INT)?
    atom    := NUMBER | NAME | "(" expr ")"
    NUMBER  := DIGITS ("." DIGITS)?
    NAME    := letter (letter | digit | "_")*

Generator names come from the ring signature (``x<i>`` even, ``t<i>`` odd by
default).  On input the Greek letters xi and theta stand for ``t``, subscript
and superscript digits are accepted, and the Unicode minus, middle dot and
times sign are read as ``-`` and ``*``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import ParseError, SignatureError
from .superring import RingSignature, SuperPolynomial

_SUB = {ord(c): str(i) for i, c in enumerate("₀₁₂₃₄₅₆₇₈₉")}
_SUP = {c: str(i) for i, c in enumerate("⁰¹²³⁴⁵⁶⁷⁸⁹")}
_GREEK_ODD = {"ξ": "t", "θ": "t"}
_OPS = {"−": "-", "·": "*", "×": "*", "⋅": "*"}


@dataclass(frozen=True)
class Num:
    value: Fraction
    text: str = field(default="", compare=False)


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    sign: str = "-"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Gen, Neg, BinOp, Pow]


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, NAME, OP, INT_SUP, END
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit() and c.isascii():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isascii() and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isascii() and text[j].isdigit():
                    j += 1
            toks.append(Token("NUM", text[i:j], i))
            i = j
        elif c.isalpha() or c == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_") and text[j] not in _SUP:
                j += 1
            raw = text[i:j]
            name = _GREEK_ODD.get(raw[0], raw[0]) + raw[1:].translate(_SUB)
            toks.append(Token("NAME", name, i))
            i = j
        elif c in _SUP:
            j = i
            while j < n and text[j] in _SUP:
                j += 1
            toks.append(Token("INT_SUP", "".join(_SUP[ch] for ch in text[i:j]), i))
            i = j
        elif text.startswith("**", i):
            toks.append(Token("OP", "^", i))
            i += 2
        elif c in "+-*/^()" or c in _OPS:
            toks.append(Token("OP", _OPS.get(c, c), i))
            i += 1
        else:
            raise ParseError(f"unexpected character {c!r}", text, i)
    toks.append(Token("END", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.k = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.k]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.cur
        return ParseError(msg, self.text, tok.pos)

    def accept(self, op: str) -> bool:
        if self.cur.kind == "OP" and self.cur.value == op:
            self.k += 1
            return True
        return False

    def parse(self) -> Expr:
        if self.cur.kind == "END":
            raise self.error("empty expression")
        e = self.expr()
        if self.cur.kind != "END":
            raise self.error(f"unexpected {self.cur.value!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.cur.kind == "OP" and self.cur.value in "+-":
            op = self.cur.value
            self.k += 1
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.cur.kind == "OP" and self.cur.value in "*/":
            op = self.cur.value
            self.k += 1
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.cur.kind == "OP" and self.cur.value in "+-":
            sign = self.cur.value
            self.k += 1
            return Neg(self.unary(), sign)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.cur.kind == "INT_SUP":
            exp = int(self.cur.value)
            self.k += 1
            return Pow(base, exp)
        if self.accept("^"):
            tok = self.cur
            if tok.kind != "NUM" or not tok.value.isdigit():
                raise self.error("exponent must be a non-negative integer", tok)
            self.k += 1
            return Pow(base, int(tok.value))
        return base

    def atom(self) -> Expr:
        tok = self.cur
        if tok.kind == "NUM":
            self.k += 1
            return Num(Fraction(tok.value), tok.value)
        if tok.kind == "NAME":
            self.k += 1
            return Gen(tok.value)
        if self.accept("("):
            e = self.expr()
            if not self.accept(")"):
                raise self.error("expected ')'")
            return e
        if tok.kind == "END":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.value!r}")


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()


# Binding strength used by the printer: higher binds tighter.
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def format_expr(e: Expr) -> str:
    """Print with the fewest parentheses that keep the tree shape."""
    if isinstance(e, Num):
        return e.text or _num_text(e.value)
    if isinstance(e, Gen):
        return e.name
    if isinstance(e, Neg):
        inner = format_expr(e.operand)
        if _prec(e.operand) < 3:
            inner = f"({inner})"
        return f"{e.sign}{inner}"
    if isinstance(e, Pow):
        inner = format_expr(e.base)
        if _prec(e.base) < 5:
            inner = f"({inner})"
        return f"{inner}^{e.exponent}"
    p = _PREC[e.op]
    left = format_expr(e.left)
    if _prec(e.left) < p:
        left = f"({left})"
    right = format_expr(e.right)
    # left-associative: an equal-precedence right operand needs brackets
    if _prec(e.right) <= p:
        right = f"({right})"
    sep = f" {e.op} " if p == 1 else e.op
    return f"{left}{sep}{right}"


def _num_text(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"({v.numerator}/{v.denominator})"


def elaborate(e: Expr, ring: RingSignature, text: str = "") -> SuperPolynomial:
    if isinstance(e, Num):
        return ring.const(e.value)
    if isinstance(e, Gen):
        try:
            return ring.gen(e.name)
        except (KeyError, SignatureError):
            pos = text.find(e.name) if text else 0
            raise ParseError(f"unknown generator {e.name!r}", text, max(pos, 0)) from None
    if isinstance(e, Neg):
        v = elaborate(e.operand, ring, text)
        return -v if e.sign == "-" else v
    if isinstance(e, Pow):
        return elaborate(e.base, ring, text) ** e.exponent
    a = elaborate(e.left, ring, text)
    b = elaborate(e.right, ring, text)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    try:
        return a * b.invert()
    except ArithmeticError as exc:
        raise ParseError(f"division by a non-invertible element: {exc}", text, 0) from None


def parse(text: str, ring: RingSignature) -> SuperPolynomial:
    """Parse ``text`` and evaluate it in ``ring``."""
    return elaborate(parse_expr(text), ring, text)
