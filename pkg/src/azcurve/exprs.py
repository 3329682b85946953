"""Recursive-descent parser for exact rational-function expressions.

Grammar (ASCII only, '^' for powers):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-')? atom ('^' uint)?
    atom   := int | var | '(' expr ')'

Evaluation happens over the rational-function field in the allowed
variables, so "(t^2 - 1)/(t - 1)" parses directly to the reduced function
t + 1.  Errors carry line and column.  Multivariate input (t and s for
deformation families) is handled by evaluating the tree with one variable
bound to a value in the field of the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .polys import ExactError, Poly, RatFunc


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


class EvalError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


# -- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    line: int
    col: int


@dataclass(frozen=True)
class Var:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class Neg:
    child: "Expr"
    line: int
    col: int


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*', '/'
    left: "Expr"
    right: "Expr"
    line: int
    col: int


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    line: int
    col: int


Expr = Union[Num, Var, Neg, BinOp, Pow]


def num(value: int) -> Num:
    return Num(value, 0, 0)


def var(name: str) -> Var:
    return Var(name, 0, 0)


def add(a: Expr, b: Expr) -> BinOp:
    return BinOp("+", a, b, 0, 0)


def sub(a: Expr, b: Expr) -> BinOp:
    return BinOp("-", a, b, 0, 0)


def mul(a: Expr, b: Expr) -> BinOp:
    return BinOp("*", a, b, 0, 0)


def div(a: Expr, b: Expr) -> BinOp:
    return BinOp("/", a, b, 0, 0)


def neg(a: Expr) -> Neg:
    return Neg(a, 0, 0)


# -- tokenizer ---------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'var', 'op', 'lparen', 'rparen', 'caret', 'end'
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(Token("var", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/":
            tokens.append(Token("op", ch, line, col))
        elif ch == "(":
            tokens.append(Token("lparen", ch, line, col))
        elif ch == ")":
            tokens.append(Token("rparen", ch, line, col))
        elif ch == "^":
            tokens.append(Token("caret", ch, line, col))
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
        i += 1
        col += 1
    tokens.append(Token("end", "", line, col))
    return tokens


# -- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token], allowed_vars: set[str]):
        self.tokens = tokens
        self.pos = 0
        self.allowed = allowed_vars

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}", tok.line, tok.col)
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.col)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            tok = self.advance()
            right = self.term()
            left = BinOp(tok.text, left, right, tok.line, tok.col)
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            tok = self.advance()
            right = self.factor()
            left = BinOp(tok.text, left, right, tok.line, tok.col)
        return left

    def factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            inner = self.factor_tail()
            return Neg(inner, tok.line, tok.col)
        return self.factor_tail()

    def factor_tail(self) -> Expr:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "caret":
            self.advance()
            etok = self.expect("int", "a nonnegative integer exponent")
            return Pow(base, int(etok.text), tok.line, tok.col)
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return Num(int(tok.text), tok.line, tok.col)
        if tok.kind == "var":
            self.advance()
            if tok.text not in self.allowed:
                allowed = ", ".join(sorted(self.allowed)) or "none"
                raise ParseError(
                    f"unknown variable {tok.text!r} (allowed: {allowed})", tok.line, tok.col
                )
            return Var(tok.text, tok.line, tok.col)
        if tok.kind == "lparen":
            self.advance()
            inner = self.expr()
            self.expect("rparen", "')'")
            return inner
        raise ParseError(f"expected a number, variable, or '('", tok.line, tok.col)


def parse_expr(src: str, allowed_vars: Sequence[str]) -> Expr:
    return _Parser(_tokenize(src), set(allowed_vars)).parse()


# -- evaluation ----------------------------------------------------------------


def eval_expr(expr: Expr, bindings: dict):
    """Evaluate in the field of the bound values (RatFunc or Fraction)."""
    if isinstance(expr, Num):
        if bindings and all(isinstance(v, Fraction) for v in bindings.values()):
            return Fraction(expr.value)
        return RatFunc.const(expr.value)
    if isinstance(expr, Var):
        return bindings[expr.name]
    if isinstance(expr, Neg):
        return -eval_expr(expr.child, bindings)
    if isinstance(expr, Pow):
        base = eval_expr(expr.base, bindings)
        return base**expr.exponent
    if isinstance(expr, BinOp):
        left = eval_expr(expr.left, bindings)
        right = eval_expr(expr.right, bindings)
        if expr.op == "+":
            return left + right
        if expr.op == "-":
            return left - right
        if expr.op == "*":
            return left * right
        try:
            return left / right
        except (ExactError, ZeroDivisionError):
            raise EvalError("division by zero polynomial", expr.line, expr.col)
    raise TypeError(f"not an expression node: {expr!r}")


def expr_variables(expr: Expr) -> set[str]:
    if isinstance(expr, Var):
        return {expr.name}
    if isinstance(expr, Neg):
        return expr_variables(expr.child)
    if isinstance(expr, Pow):
        return expr_variables(expr.base)
    if isinstance(expr, BinOp):
        return expr_variables(expr.left) | expr_variables(expr.right)
    return set()


def parse_ratfunc(src: str, allowed_vars: Sequence[str] = ("t",), var_name: str = "t") -> RatFunc:
    """Parse and evaluate to a reduced rational function in `var_name`.

    Other allowed variables must not actually occur; use `parse_expr` plus
    `eval_expr` for multivariate evaluation.
    """
    expr = parse_expr(src, allowed_vars)
    extra = expr_variables(expr) - {var_name}
    if extra:
        raise ParseError(f"variables {sorted(extra)} not bound", 1, 1)
    return eval_expr(expr, {var_name: RatFunc.var()})


def eval_expr_with_sample(expr: Expr, sample: Fraction, sample_var: str = "s", var_name: str = "t") -> RatFunc:
    """Evaluate a two-variable expression at a rational deformation sample."""
    return eval_expr(expr, {var_name: RatFunc.var(), sample_var: RatFunc.const(sample)})


# -- printing -------------------------------------------------------------------


def ratfunc_to_source(f: RatFunc, var_name: str = "t") -> str:
    """Canonical source text that reparses to the same function."""
    num = _poly_source(f.num, var_name)
    if f.den.degree == 0:
        return num
    return f"({num})/({_poly_source(f.den, var_name)})"


def _poly_source(p: Poly, var_name: str) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        term = _term_source(abs(c), i, var_name)
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


def _term_source(c: Fraction, power: int, var_name: str) -> str:
    cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if power == 0:
        return cs
    v = var_name if power == 1 else f"{var_name}^{power}"
    if c == 1:
        return v
    return f"{cs}*{v}"
