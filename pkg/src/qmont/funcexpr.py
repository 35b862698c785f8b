"""A tiny expression language in one variable ``t``.

Grammar::

    expr    := term (("+"|"-") term)*
    term    := factor (("*"|"/") factor)*
    factor  := "-" factor | power
    power   := atom ("^" factor)?
    atom    := NUMBER | "t" | IDENT "(" expr ")" | "(" expr ")"
    IDENT   := exp | ln | sin | cos | sqrt | abs

So ``^`` is right-associative and binds tighter than unary minus
(``-2^2 == -4``), while ``2^-1`` is still accepted.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from qmont.errors import EvalError, ExprSyntaxError
from qmont.qcore import RealFn

FUNCTIONS = {
    "exp": math.exp,
    "ln": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "sqrt": math.sqrt,
    "abs": abs,
}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call:
    name: str
    arg: Expr


Expr = Union[Num, Var, Neg, BinOp, Call]


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "t", "ident", one of the operator chars, or "end"
    text: str
    offset: int  # byte offset into the UTF-8 source


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    byte_pos = 0
    while pos < len(src):
        match = _TOKEN_RE.match(src, pos)
        if match is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", byte_pos)
        text = match.group()
        kind = match.lastgroup
        if kind == "name":
            if text == "t":
                kind = "t"
            elif text in FUNCTIONS:
                kind = "ident"
            else:
                raise ExprSyntaxError(f"unknown name {text!r}", byte_pos, frozenset({"t", *FUNCTIONS}))
        elif kind == "op":
            kind = text
        if kind != "ws":
            tokens.append(_Token(kind, text, byte_pos))
        pos = match.end()
        byte_pos += len(text.encode("utf-8"))
    tokens.append(_Token("end", "", byte_pos))
    return tokens


_ATOM_START = frozenset({"number", "t", "ident", "("})
_FACTOR_START = _ATOM_START | {"-"}


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, expected) -> ExprSyntaxError:
        tok = self.tok
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        return ExprSyntaxError(f"unexpected {what}", tok.offset, frozenset(expected))

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            raise self.fail({kind})
        tok = self.tok
        self.i += 1
        return tok

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.fail({"+", "-", "*", "/", "^", "end"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.tok.kind
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.tok.kind
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.tok.kind == "-":
            self.i += 1
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "^":
            self.i += 1
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return Num(float(tok.text))
        if tok.kind == "t":
            self.i += 1
            return Var()
        if tok.kind == "ident":
            self.i += 1
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(tok.text, arg)
        if tok.kind == "(":
            self.i += 1
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.fail(_FACTOR_START if tok.kind != "-" else _ATOM_START)


def parse(src: str) -> Expr:
    """Parse ``src`` into an :data:`Expr` tree; raises :class:`ExprSyntaxError`."""
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0, _FACTOR_START)
    return _Parser(src).parse()


def _pow(base: float, exponent: float) -> float:
    if base < 0 and not exponent.is_integer():
        raise EvalError(f"negative base {base!r} with non-integer exponent {exponent!r}")
    if base == 0 and exponent < 0:
        raise EvalError("zero raised to a negative power")
    return base**exponent


def _eval(e: Expr, x: float) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_eval(e.operand, x)
    if isinstance(e, BinOp):
        left = _eval(e.left, x)
        right = _eval(e.right, x)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            if right == 0:
                raise EvalError("division by zero")
            return left / right
        return _pow(left, right)
    if isinstance(e, Call):
        arg = _eval(e.arg, x)
        if e.name == "ln" and arg <= 0:
            raise EvalError(f"ln of non-positive argument {arg!r}")
        if e.name == "sqrt" and arg < 0:
            raise EvalError(f"sqrt of negative argument {arg!r}")
        return FUNCTIONS[e.name](arg)
    raise TypeError(f"not an expression node: {e!r}")


def eval(e: Expr, x: float) -> float:  # noqa: A001 - public name fixed by the API
    """Evaluate ``e`` with ``t = x``; any non-finite outcome is an :class:`EvalError`."""
    try:
        y = _eval(e, float(x))
    except OverflowError as exc:
        raise EvalError(f"overflow: {exc}") from exc
    except (ValueError, ZeroDivisionError) as exc:
        raise EvalError(str(exc)) from exc
    if isinstance(y, complex) or not math.isfinite(y):
        raise EvalError(f"non-finite result {y!r} at t={x!r}")
    return float(y)


def as_realfn(e: Expr, label: str) -> RealFn:
    return RealFn(lambda x: eval(e, x), label)


def compile_fn(src: str) -> RealFn:
    """Shorthand for ``as_realfn(parse(src), src)``."""
    return as_realfn(parse(src), src)


# binding strength used by the printer: +- 1, */ 2, unary minus 3, ^ 4, atoms 5
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return 5


def _wrap(e: Expr, min_prec: int) -> str:
    text = pretty(e)
    return text if _prec(e) >= min_prec else f"({text})"


def pretty(e: Expr) -> str:
    """Render ``e`` with the fewest parentheses that reparse to the same tree."""
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, 3)
    if isinstance(e, Call):
        return f"{e.name}({pretty(e.arg)})"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        if e.op == "^":
            return f"{_wrap(e.left, 5)}^{_wrap(e.right, 3)}"
        return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"
    raise TypeError(f"not an expression node: {e!r}")
