"""Tiny real-valued expression language used for user-supplied fields.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := number | identifier | identifier '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-2^2``
is ``-(2^2)``.  Evaluation is vectorized: bindings may be numpy arrays.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
VARIABLES = ("x", "y", "u", "v")


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, offset: int, expected, found: str):
        self.offset = offset
        self.expected = frozenset(expected)
        self.found = found
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"syntax error at offset {offset}: expected one of {{{exp}}}, found {found!r}")


class UnboundIdentifierError(ExprError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound identifier {name!r}")


class ExprDomainError(ExprError):
    def __init__(self, subexpr: str, reason: str):
        self.subexpr = subexpr
        super().__init__(f"domain error in {subexpr}: {reason}")


# -- tree ------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Name, Neg, BinOp, Call]


def to_source(e: Expr) -> str:
    """Print ``e`` so that ``parse(to_source(e)) == e``."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Name):
        return e.ident
    if isinstance(e, Neg):
        return f"(-({to_source(e.operand)}))"
    if isinstance(e, Call):
        return f"{e.func}({to_source(e.arg)})"
    return f"({to_source(e.left)} {e.op} {to_source(e.right)})"


def function_names(e: Expr) -> set[str]:
    if isinstance(e, (Num, Name)):
        return set()
    if isinstance(e, Neg):
        return function_names(e.operand)
    if isinstance(e, Call):
        return {e.func} | function_names(e.arg)
    return function_names(e.left) | function_names(e.right)


def free_identifiers(e: Expr) -> set[str]:
    if isinstance(e, Num):
        return set()
    if isinstance(e, Name):
        return set() if e.ident in CONSTANTS else {e.ident}
    if isinstance(e, (Neg, Call)):
        return free_identifiers(e.operand if isinstance(e, Neg) else e.arg)
    return free_identifiers(e.left) | free_identifiers(e.right)


# -- lexer / parser ----------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str):
    tokens = []
    pos = 0
    while True:
        while pos < len(source) and source[pos].isspace():
            pos += 1
        if pos >= len(source):
            break
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(pos, {"number", "identifier", "operator"}, source[pos])
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, text, pos = self.peek()
        raise ExprSyntaxError(pos, expected, text or "<end>")

    def expect(self, op):
        kind, text, _ = self.peek()
        if kind != "op" or text != op:
            self.fail({op})
        self.advance()

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        return self.unary()

    def unary(self):
        # '-' applies to a whole power, so -x^2 is -(x^2)
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, text, _ = self.peek()
        if kind == "num":
            self.advance()
            return Num(float(text))
        if kind == "id":
            self.advance()
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            return Name(text)
        if kind == "op" and text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail({"number", "identifier", "(", "-"})


def parse(source: str) -> Expr:
    p = _Parser(source)
    tree = p.expr()
    if p.peek()[0] != "end":
        p.fail({"+", "-", "*", "/", "^", "end of input"})
    return tree


# -- evaluation --------------------------------------------------------------


def _int_power(base, n: int):
    if n < 0:
        return 1.0 / _int_power(base, -n)
    result = np.ones_like(base, dtype=float) if np.ndim(base) else 1.0
    acc = base
    while n:
        if n & 1:
            result = result * acc
        acc = acc * acc
        n >>= 1
    return result


def _check(ok, node, reason):
    if not np.all(ok):
        raise ExprDomainError(to_source(node), reason)


def evaluate(e: Expr, bindings: dict | None = None):
    """Evaluate ``e``; returns a float or a float array matching the bindings."""
    b = bindings or {}
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Name):
        if e.ident in b:
            return b[e.ident]
        if e.ident in CONSTANTS:
            return CONSTANTS[e.ident]
        raise UnboundIdentifierError(e.ident)
    if isinstance(e, Neg):
        return -evaluate(e.operand, b)
    if isinstance(e, Call):
        if e.func not in FUNCTIONS:
            raise UnboundIdentifierError(e.func)
        arg = np.asarray(evaluate(e.arg, b), dtype=float)
        if e.func == "log":
            _check(arg > 0, e, "log of non-positive value")
        elif e.func == "sqrt":
            _check(arg >= 0, e, "sqrt of negative value")
        with np.errstate(over="ignore"):
            out = FUNCTIONS[e.func](arg)
        return float(out) if out.ndim == 0 else out
    left = evaluate(e.left, b)
    right = evaluate(e.right, b)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    if e.op == "*":
        return left * right
    if e.op == "/":
        _check(np.asarray(right) != 0, e, "division by zero")
        return left / right
    # '^'
    r = np.asarray(right, dtype=float)
    if r.ndim == 0 and float(r).is_integer():
        if r < 0:
            _check(np.asarray(left) != 0, e, "zero to a negative power")
        return _int_power(left, int(r))
    l = np.asarray(left, dtype=float)
    if np.all(np.mod(r, 1) == 0):
        _check(np.logical_or(l != 0, r >= 0), e, "zero to a negative power")
        out = np.power(l, r)
    else:
        _check(l > 0, e, "non-integer power of non-positive base")
        out = np.exp(r * np.log(l))
    return float(out) if np.ndim(out) == 0 else out


def compile_expr(source_or_expr, allowed=None):
    """Parse (if needed) and check the free identifiers against ``allowed``."""
    e = parse(source_or_expr) if isinstance(source_or_expr, str) else source_or_expr
    for name in sorted(function_names(e)):
        if name not in FUNCTIONS:
            raise UnboundIdentifierError(name)
    if allowed is not None:
        for name in sorted(free_identifiers(e)):
            if name not in allowed:
                raise UnboundIdentifierError(name)
    return e


def to_field(e, coords, params: dict | None = None):
    """Wrap ``e`` as a real field over the plane.

    ``x``/``y`` are Cartesian coordinates; ``u``/``v`` come from the map of
    ``coords``.  The handle's domain is the coordinate system's validity.
    """
    from .numfield import RealFieldHandle

    params = dict(params or {})
    e = compile_expr(e, set(VARIABLES) | set(params))
    names = free_identifiers(e)
    need_uv = bool(names & {"u", "v"})

    def func(z):
        z = np.asarray(z, dtype=complex)
        b = dict(params)
        b["x"], b["y"] = z.real, z.imag
        if need_uv:
            w = coords.phi.raw(z)
            b["u"], b["v"] = w.real, w.imag
        return np.broadcast_to(np.asarray(evaluate(e, b), dtype=float), z.shape)

    return RealFieldHandle(func, coords.validity, to_source(e))


def to_function(e, variable: str, params: dict | None = None):
    """One-variable vectorized callable ``t -> e(variable=t)``."""
    params = dict(params or {})
    e = compile_expr(e, {variable} | set(params))

    def func(t):
        t = np.asarray(t, dtype=float)
        b = dict(params)
        b[variable] = t
        return np.broadcast_to(np.asarray(evaluate(e, b), dtype=float), t.shape)

    func.source = to_source(e)
    return func
