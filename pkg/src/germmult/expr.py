"""Expression parsing for polynomials and mapping germs.

Grammar (EBNF)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = ("-" | "+") unary | power ;
    power    = atom [ ("^" | "**") unary ] ;          (* right associative *)
    atom     = integer | name | name "(" expr { "," expr } ")" | "(" expr ")" ;
    integer  = digit { digit } ;
    name     = letter { letter | digit | "_" } ;

A rational literal is written ``p/q``.  Polynomials accept only integers,
variables, ``+ - * ^``, parentheses and division by nonzero constants, with
nonnegative integer powers.  Map components additionally accept rational
powers (real branch, see ``real_power``), negative integer powers, the
constant ``I`` and the functions ``sin``, ``cos``, ``cbrt``, ``conj``, ``re``,
``im`` and ``ifzero(c, a, b)`` (``a`` when ``c == 0``, else ``b``; only the
selected branch is evaluated).
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence, Union

from .errors import (
    EvaluationDomainError,
    ParseError,
    UnknownVariable,
    UnsupportedFunction,
)

if TYPE_CHECKING:
    from .polyring.poly import Poly

MAP_FUNCTIONS = {"sin": 1, "cos": 1, "cbrt": 1, "conj": 1, "re": 1, "im": 1, "ifzero": 3}

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),]))")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]


Node = Union[Num, Var, Neg, BinOp, Pow, Call]


def tokenize(text: str) -> list[str]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        out.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        if not self.toks:
            raise ParseError("empty expression")

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ParseError(f"expected {want or 'a token'}, got {tok!r}")
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input at token {self.peek()!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.peek() == "-":
            self.take()
            return Neg(self.unary())
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            return Pow(base, self.unary())
        return base

    def atom(self) -> Node:
        tok = self.take()
        if tok.isdigit():
            return Num(Fraction(int(tok)))
        if tok == "(":
            node = self.expr()
            self.take(")")
            return node
        if tok[0].isalpha() or tok[0] == "_":
            if self.peek() == "(":
                self.take("(")
                args = [self.expr()]
                while self.peek() == ",":
                    self.take(",")
                    args.append(self.expr())
                self.take(")")
                return Call(tok, tuple(args))
            return Var(tok)
        raise ParseError(f"unexpected token {tok!r}")


def parse(text: str) -> Node:
    return _Parser(text).parse()


def constant_value(node: Node) -> Fraction | None:
    """Exact rational value of a variable-free arithmetic subtree, else None."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Neg):
        v = constant_value(node.arg)
        return None if v is None else -v
    if isinstance(node, BinOp):
        a, b = constant_value(node.left), constant_value(node.right)
        if a is None or b is None:
            return None
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0:
            raise ParseError("division by zero in constant")
        return a / b
    if isinstance(node, Pow):
        a, e = constant_value(node.base), constant_value(node.exponent)
        if a is None or e is None or e.denominator != 1:
            return None
        if a == 0 and e < 0:
            raise ParseError("zero to a negative power")
        return a ** int(e)
    return None


# -- polynomials --------------------------------------------------------------


def poly_parse(text: str, variables: Sequence[str]) -> Poly:
    """Parse an exact polynomial in the named variables."""
    from .polyring.poly import Poly

    variables = list(variables)
    if not 2 <= len(variables) <= 4:
        raise ValueError("polynomials use between 2 and 4 variables")
    if len(set(variables)) != len(variables):
        raise ValueError("variable names must be distinct")
    index = {v: i for i, v in enumerate(variables)}
    n = len(variables)

    def conv(node: Node) -> Poly:
        if isinstance(node, Num):
            return Poly.const(n, node.value)
        if isinstance(node, Var):
            if node.name not in index:
                raise UnknownVariable(f"unknown variable {node.name!r}")
            return Poly.var(n, index[node.name])
        if isinstance(node, Neg):
            return -conv(node.arg)
        if isinstance(node, BinOp):
            if node.op == "/":
                den = constant_value(node.right)
                if den is None:
                    raise ParseError("polynomials may only be divided by constants")
                if den == 0:
                    raise ParseError("division by zero")
                return conv(node.left) * (1 / den)
            a, b = conv(node.left), conv(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            return a * b
        if isinstance(node, Pow):
            e = constant_value(node.exponent)
            if e is None or e.denominator != 1 or e < 0:
                raise ParseError("polynomial exponents must be nonnegative integers")
            return conv(node.base) ** int(e)
        if isinstance(node, Call):
            raise UnsupportedFunction(f"function {node.name!r} is not allowed in a polynomial")
        raise ParseError(f"unexpected node {node!r}")

    return conv(parse(text))


# -- mapping germs ------------------------------------------------------------


def _real(x, what: str) -> float:
    if isinstance(x, complex):
        if x.imag != 0:
            raise EvaluationDomainError(f"{what} needs a real argument, got {x}")
        return x.real
    return float(x)


def real_power(x, e: Fraction):
    """x^(p/q) on the real branch: odd q is total on R (x^(2/3) = (x^2)^(1/3))."""
    p, q = e.numerator, e.denominator
    if q == 1:
        if x == 0 and p < 0:
            raise EvaluationDomainError("zero to a negative power")
        return x**p
    x = _real(x, "fractional power")
    if x == 0:
        if p < 0:
            raise EvaluationDomainError("zero to a negative power")
        return 0.0
    if q % 2 == 0:
        if x < 0:
            raise EvaluationDomainError("even root of a negative number")
        return x ** (p / q)
    v = x**p
    return math.copysign(abs(v) ** (1.0 / q), v)


def check_map_node(node: Node, variables: Sequence[str]) -> None:
    """Validate names, function arities and constant exponents."""
    if isinstance(node, Var):
        if node.name not in variables and node.name != "I":
            raise UnknownVariable(f"unknown variable {node.name!r}")
    elif isinstance(node, Neg):
        check_map_node(node.arg, variables)
    elif isinstance(node, BinOp):
        check_map_node(node.left, variables)
        check_map_node(node.right, variables)
    elif isinstance(node, Pow):
        check_map_node(node.base, variables)
        if constant_value(node.exponent) is None:
            raise ParseError("exponents must be rational constants")
    elif isinstance(node, Call):
        if node.name not in MAP_FUNCTIONS:
            raise UnsupportedFunction(f"unsupported function {node.name!r}")
        if len(node.args) != MAP_FUNCTIONS[node.name]:
            raise ParseError(f"{node.name} takes {MAP_FUNCTIONS[node.name]} argument(s)")
        for a in node.args:
            check_map_node(a, variables)


def evaluate(node: Node, env: dict[str, complex | float]):
    if isinstance(node, Num):
        return float(node.value)
    if isinstance(node, Var):
        if node.name == "I" and "I" not in env:
            return 1j
        return env[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.arg, env)
    if isinstance(node, BinOp):
        a = evaluate(node.left, env)
        b = evaluate(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0:
            raise EvaluationDomainError("division by zero")
        return a / b
    if isinstance(node, Pow):
        return real_power(evaluate(node.base, env), constant_value(node.exponent))
    if isinstance(node, Call):
        name = node.name
        if name == "ifzero":
            c = evaluate(node.args[0], env)
            return evaluate(node.args[1] if c == 0 else node.args[2], env)
        x = evaluate(node.args[0], env)
        if name == "sin":
            return cmath.sin(x) if isinstance(x, complex) and x.imag else math.sin(_real(x, "sin"))
        if name == "cos":
            return cmath.cos(x) if isinstance(x, complex) and x.imag else math.cos(_real(x, "cos"))
        if name == "cbrt":
            return real_power(x, Fraction(1, 3))
        if name == "conj":
            return x.conjugate() if isinstance(x, complex) else x
        if name == "re":
            return x.real if isinstance(x, complex) else x
        if name == "im":
            return x.imag if isinstance(x, complex) else 0.0
    raise ParseError(f"cannot evaluate {node!r}")


def format_node(node: Node) -> str:
    """Canonical fully parenthesized text of an expression tree."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{format_node(node.arg)})"
    if isinstance(node, BinOp):
        return f"({format_node(node.left)} {node.op} {format_node(node.right)})"
    if isinstance(node, Pow):
        return f"({format_node(node.base)}^{format_node(node.exponent)})"
    if isinstance(node, Call):
        return f"{node.name}(" + ", ".join(format_node(a) for a in node.args) + ")"
    raise ParseError(f"unexpected node {node!r}")


__all__ = [
    "Node",
    "check_map_node",
    "evaluate",
    "format_node",
    "parse",
    "poly_parse",
    "real_power",
]
