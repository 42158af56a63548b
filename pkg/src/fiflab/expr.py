"""A tiny arithmetic language for user-supplied maps and moduli.

    expr  := "if" cond "then" expr "else" expr | sum
    cond  := sum (relop sum)+            chained, e.g. 4 <= y <= 5
    sum   := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := "-" unary | atom
    atom  := number | "y" | "t" | "(" expr ")"

``y`` and ``t`` both name the single argument. Relational operators are
<, <=, >, >=, ==. Compiled expressions evaluate elementwise on numpy arrays.
"""
from __future__ import annotations

import operator
import re
from typing import Callable

import numpy as np

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)|(<=|>=|==|[-+*/()<>])|([A-Za-z_]+))")
_UNICODE = {"−": "-", "×": "*", "÷": "/", "≤": "<=", "≥": ">="}
_REL = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge, "==": operator.eq}

Fn = Callable[[np.ndarray], np.ndarray]


class ExprError(ValueError):
    pass


def _tokens(text: str) -> list[tuple[str, str]]:
    for k, v in _UNICODE.items():
        text = text.replace(k, v)
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, op, word = m.groups()
        if num is not None:
            out.append(("num", num))
        elif op is not None:
            out.append(("op", op))
        else:
            out.append(("word", word))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "")

    def take(self, value: str | None = None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            raise ExprError(f"expected {value!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def parse(self) -> Fn:
        fn = self.expr()
        if self.peek()[0] != "end":
            raise ExprError(f"trailing input at {self.peek()[1]!r}")
        return fn

    def expr(self) -> Fn:
        if self.peek() == ("word", "if"):
            self.take()
            cond = self.cond()
            self.take("then")
            yes = self.expr()
            self.take("else")
            no = self.expr()
            return lambda y: np.where(cond(y), yes(y), no(y))
        return self.sum()

    def cond(self) -> Fn:
        parts = [self.sum()]
        ops = []
        while self.peek()[1] in _REL:
            ops.append(_REL[self.take()[1]])
            parts.append(self.sum())
        if not ops:
            raise ExprError("condition needs a comparison")

        def fn(y):
            vals = [p(y) for p in parts]
            ok = np.ones(np.shape(y), dtype=bool)
            for op, a, b in zip(ops, vals, vals[1:]):
                ok &= op(a, b)
            return ok

        return fn

    def sum(self) -> Fn:
        fn = self.term()
        while self.peek()[1] in ("+", "-"):
            op = operator.add if self.take()[1] == "+" else operator.sub
            fn = (lambda a, b, op: lambda y: op(a(y), b(y)))(fn, self.term(), op)
        return fn

    def term(self) -> Fn:
        fn = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = operator.mul if self.take()[1] == "*" else operator.truediv
            fn = (lambda a, b, op: lambda y: op(a(y), b(y)))(fn, self.unary(), op)
        return fn

    def unary(self) -> Fn:
        if self.peek()[1] == "-":
            self.take()
            inner = self.unary()
            return lambda y: -inner(y)
        return self.atom()

    def atom(self) -> Fn:
        kind, val = self.take()
        if kind == "num":
            c = float(val)
            return lambda y: np.full(np.shape(y), c)
        if kind == "word" and val in ("y", "t"):
            return lambda y: np.asarray(y, dtype=float)
        if val == "(":
            fn = self.expr()
            self.take(")")
            return fn
        raise ExprError(f"unexpected token {val or 'end of input'!r}")


def compile_expr(text: str) -> Fn:
    fn = _Parser(text).parse()

    def wrapped(y):
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.asarray(fn(y), dtype=float)

    return wrapped
