"""First-order formulas over colored graphs: AST, parser, renderer, metrics.

The concrete syntax is a small ASCII language:

    adj(x1,x2)      adjacency atom
    x1=x2           equality atom
    C3(x1)          color atom ("vertex x1 has color 3")
    !f              negation
    f & g & h       conjunction (n-ary)
    f | g           disjunction (n-ary)
    f -> g          implication (right associative)
    exists x1. f    quantification; the body extends as far right as possible
    forall x2. f

Precedence from tightest to loosest: ``!``, ``&``, ``|``, ``->``.
Parentheses group. ``&``/``|`` chains collapse into a single n-ary node,
so ``a & b & c`` is one conjunction with three children, while
``(a & b) & c`` keeps the nested shape. Rendering inserts exactly the
parentheses needed so that every AST round-trips through the parser.

Grammar (whitespace insignificant):

    formula := impl
    impl    := or ("->" impl)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | "exists" var "." formula | "forall" var "." formula
             | "(" formula ")" | atom
    atom    := "adj(" var "," var ")" | var "=" var | "C" nat "(" var ")"
    var     := "x" nat
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, TextIO


@dataclass(frozen=True, order=True)
class Var:
    """A variable name; rendered ``x1``, ``x2``, ..."""

    index: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"variable index must be >= 1, got {self.index}")

    def __str__(self) -> str:
        return f"x{self.index}"


class Formula:
    """Base class of all AST nodes. Nodes are immutable and hashable."""

    __slots__ = ()

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Adj(Formula):
    u: Var
    v: Var


@dataclass(frozen=True)
class Eq(Formula):
    u: Var
    v: Var


@dataclass(frozen=True)
class HasColor(Formula):
    color: int
    v: Var

    def __post_init__(self) -> None:
        if self.color < 1:
            raise ValueError(f"color index must be >= 1, got {self.color}")


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("conjunction needs at least two children")


@dataclass(frozen=True)
class Or(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("disjunction needs at least two children")


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: Var
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: Var
    body: Formula


def conjunction(parts: Iterable[Formula]) -> Formula:
    """And-node over ``parts``; a single part is returned unwrapped."""
    parts = tuple(parts)
    if not parts:
        raise ValueError("empty conjunction")
    return parts[0] if len(parts) == 1 else And(parts)


def disjunction(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        raise ValueError("empty disjunction")
    return parts[0] if len(parts) == 1 else Or(parts)


def canonical_false(v: Var = Var(1)) -> Formula:
    """The stock unsatisfiable formula ``!(v=v)``."""
    return Not(Eq(v, v))


# ---------------------------------------------------------------------------
# Metrics and structural helpers


def quantifier_rank(f: Formula) -> int:
    """Maximum depth of quantifier nesting."""
    match f:
        case Adj() | Eq() | HasColor():
            return 0
        case Not(child):
            return quantifier_rank(child)
        case And(children) | Or(children):
            return max(quantifier_rank(ch) for ch in children)
        case Implies(lhs, rhs):
            return max(quantifier_rank(lhs), quantifier_rank(rhs))
        case Exists(_, body) | Forall(_, body):
            return 1 + quantifier_rank(body)
    raise TypeError(f"not a formula: {f!r}")


def all_vars(f: Formula) -> frozenset[Var]:
    """Every variable occurring in ``f``, bound or free."""
    match f:
        case Adj(u, v) | Eq(u, v):
            return frozenset((u, v))
        case HasColor(_, v):
            return frozenset((v,))
        case Not(child):
            return all_vars(child)
        case And(children) | Or(children):
            return frozenset().union(*(all_vars(ch) for ch in children))
        case Implies(lhs, rhs):
            return all_vars(lhs) | all_vars(rhs)
        case Exists(var, body) | Forall(var, body):
            return all_vars(body) | {var}
    raise TypeError(f"not a formula: {f!r}")


def variable_count(f: Formula) -> int:
    """Number of distinct variable names (reuse counted once)."""
    return len(all_vars(f))


def free_vars(f: Formula) -> frozenset[Var]:
    match f:
        case Adj(u, v) | Eq(u, v):
            return frozenset((u, v))
        case HasColor(_, v):
            return frozenset((v,))
        case Not(child):
            return free_vars(child)
        case And(children) | Or(children):
            return frozenset().union(*(free_vars(ch) for ch in children))
        case Implies(lhs, rhs):
            return free_vars(lhs) | free_vars(rhs)
        case Exists(var, body) | Forall(var, body):
            return free_vars(body) - {var}
    raise TypeError(f"not a formula: {f!r}")


def formula_length(f: Formula) -> int:
    """AST node count (atoms count 1; variables are not nodes)."""
    match f:
        case Adj() | Eq() | HasColor():
            return 1
        case Not(child):
            return 1 + formula_length(child)
        case And(children) | Or(children):
            return 1 + sum(formula_length(ch) for ch in children)
        case Implies(lhs, rhs):
            return 1 + formula_length(lhs) + formula_length(rhs)
        case Exists(_, body) | Forall(_, body):
            return 1 + formula_length(body)
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def require_sentence(f: Formula) -> Formula:
    fv = free_vars(f)
    if fv:
        names = ", ".join(str(v) for v in sorted(fv))
        raise ValueError(f"expected a sentence but found free variables: {names}")
    return f


def rename_variables(f: Formula, mapping: Mapping[Var, Var]) -> Formula:
    """Simultaneously rename every occurrence, binding sites included.

    ``mapping`` must be injective on the variables that occur in ``f``
    (variables missing from the mapping are kept as themselves); under
    injectivity the renaming cannot capture.
    """
    occurring = all_vars(f)
    effective = {v: mapping.get(v, v) for v in occurring}
    images = list(effective.values())
    if len(set(images)) != len(images):
        raise ValueError("renaming is not injective on the occurring variables")

    def go(node: Formula) -> Formula:
        match node:
            case Adj(u, v):
                return Adj(effective[u], effective[v])
            case Eq(u, v):
                return Eq(effective[u], effective[v])
            case HasColor(color, v):
                return HasColor(color, effective[v])
            case Not(child):
                return Not(go(child))
            case And(children):
                return And(tuple(go(ch) for ch in children))
            case Or(children):
                return Or(tuple(go(ch) for ch in children))
            case Implies(lhs, rhs):
                return Implies(go(lhs), go(rhs))
            case Exists(var, body):
                return Exists(effective[var], go(body))
            case Forall(var, body):
                return Forall(effective[var], go(body))
        raise TypeError(f"not a formula: {node!r}")

    return go(f)


def substitute_edge_atoms(
    f: Formula, subst: Callable[[Var, Var], Formula]
) -> Formula:
    """Replace each adjacency atom ``adj(u,v)`` by ``subst(u, v)``."""
    match f:
        case Adj(u, v):
            return subst(u, v)
        case Eq() | HasColor():
            return f
        case Not(child):
            return Not(substitute_edge_atoms(child, subst))
        case And(children):
            return And(tuple(substitute_edge_atoms(ch, subst) for ch in children))
        case Or(children):
            return Or(tuple(substitute_edge_atoms(ch, subst) for ch in children))
        case Implies(lhs, rhs):
            return Implies(
                substitute_edge_atoms(lhs, subst), substitute_edge_atoms(rhs, subst)
            )
        case Exists(var, body):
            return Exists(var, substitute_edge_atoms(body, subst))
        case Forall(var, body):
            return Forall(var, substitute_edge_atoms(body, subst))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Rendering

_PREC_IMPL = 0
_PREC_OR = 1
_PREC_AND = 2
_PREC_UNARY = 3
_PREC_ATOM = 4


def _prec(f: Formula) -> int:
    match f:
        case Adj() | Eq() | HasColor():
            return _PREC_ATOM
        case Not() | Exists() | Forall():
            return _PREC_UNARY
        case And():
            return _PREC_AND
        case Or():
            return _PREC_OR
        case Implies():
            return _PREC_IMPL
    raise TypeError(f"not a formula: {f!r}")


def render_formula(f: Formula) -> str:
    """Concrete syntax for ``f``; parsing it back yields an identical AST."""
    return _render(f, _PREC_IMPL, tail=True)


def _render(f: Formula, min_prec: int, tail: bool) -> str:
    # A quantifier body extends maximally right, so a quantifier that is
    # followed by more tokens of an enclosing chain must be parenthesized
    # even when its precedence alone would allow omitting the parentheses.
    needs_parens = _prec(f) < min_prec or (
        not tail and isinstance(f, (Exists, Forall))
    )
    if needs_parens:
        min_prec, tail = _PREC_IMPL, True
    match f:
        case Adj(u, v):
            text = f"adj({u},{v})"
        case Eq(u, v):
            text = f"{u}={v}"
        case HasColor(color, v):
            text = f"C{color}({v})"
        case Not(child):
            text = "!" + _render(child, _PREC_UNARY, tail)
        case And(children):
            last = len(children) - 1
            text = " & ".join(
                _render(ch, _PREC_UNARY, tail and i == last)
                for i, ch in enumerate(children)
            )
        case Or(children):
            last = len(children) - 1
            text = " | ".join(
                _render(ch, _PREC_AND, tail and i == last)
                for i, ch in enumerate(children)
            )
        case Implies(lhs, rhs):
            text = (
                _render(lhs, _PREC_OR, False)
                + " -> "
                + _render(rhs, _PREC_IMPL, tail)
            )
        case Exists(var, body):
            text = f"exists {var}. " + _render(body, _PREC_IMPL, tail)
        case Forall(var, body):
            text = f"forall {var}. " + _render(body, _PREC_IMPL, tail)
        case _:
            raise TypeError(f"not a formula: {f!r}")
    return f"({text})" if needs_parens else text


# ---------------------------------------------------------------------------
# Parsing

class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<adj>adj\b)
    | (?P<exists>exists\b)
    | (?P<forall>forall\b)
    | (?P<var>x(?P<varnum>\d+))
    | (?P<color>C(?P<colnum>\d+))
    | (?P<arrow>->)
    | (?P<lparen>\()
    | (?P<rparen>\))
    | (?P<not>!)
    | (?P<and>&)
    | (?P<or>\|)
    | (?P<eq>=)
    | (?P<comma>,)
    | (?P<dot>\.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    value: int | None
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        col = m.start() - line_start + 1
        if kind == "ws":
            for i in range(m.start(), m.end()):
                if text[i] == "\n":
                    line += 1
                    line_start = i + 1
        elif kind == "var":
            idx = int(m.group("varnum"))
            if idx == 0:
                raise ParseError("variable index 0 is not allowed", line, col)
            tokens.append(_Token("var", idx, line, col))
        elif kind == "color":
            idx = int(m.group("colnum"))
            if idx == 0:
                raise ParseError("color index 0 is not allowed", line, col)
            tokens.append(_Token("color", idx, line, col))
        else:
            tokens.append(_Token(kind, None, line, col))
        pos = m.end()
    tokens.append(_Token("eof", None, line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}", tok.line, tok.column)
        return self.advance()

    def formula(self) -> Formula:
        lhs = self.or_chain()
        if self.peek().kind == "arrow":
            self.advance()
            return Implies(lhs, self.formula())
        return lhs

    def or_chain(self) -> Formula:
        parts = [self.and_chain()]
        while self.peek().kind == "or":
            self.advance()
            parts.append(self.and_chain())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_chain(self) -> Formula:
        parts = [self.unary()]
        while self.peek().kind == "and":
            self.advance()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "not":
            self.advance()
            return Not(self.unary())
        if tok.kind in ("exists", "forall"):
            self.advance()
            var = Var(self.expect("var", "a variable").value)
            self.expect("dot", "'.' after the quantified variable")
            body = self.formula()
            return Exists(var, body) if tok.kind == "exists" else Forall(var, body)
        if tok.kind == "lparen":
            self.advance()
            inner = self.formula()
            self.expect("rparen", "')'")
            return inner
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "adj":
            self.advance()
            self.expect("lparen", "'(' after adj")
            u = Var(self.expect("var", "a variable").value)
            self.expect("comma", "','")
            v = Var(self.expect("var", "a variable").value)
            self.expect("rparen", "')'")
            return Adj(u, v)
        if tok.kind == "color":
            self.advance()
            self.expect("lparen", "'(' after the color name")
            v = Var(self.expect("var", "a variable").value)
            self.expect("rparen", "')'")
            return HasColor(tok.value, v)
        if tok.kind == "var":
            self.advance()
            self.expect("eq", "'='")
            v = Var(self.expect("var", "a variable").value)
            return Eq(Var(tok.value), v)
        raise ParseError("expected a formula", tok.line, tok.column)


def parse_formula(text: str) -> Formula:
    parser = _Parser(_tokenize(text))
    f = parser.formula()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError("trailing input after the formula", tok.line, tok.column)
    return f


# ---------------------------------------------------------------------------
# Formula files: one formula per line, '#' starts a comment

def read_formulas(stream: TextIO) -> list[Formula]:
    out = []
    for lineno, raw in enumerate(stream, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            out.append(parse_formula(text))
        except ParseError as exc:
            raise ParseError(exc.message, lineno, exc.column) from exc
    return out


def write_formulas(formulas: Iterable[Formula], stream: TextIO) -> None:
    for f in formulas:
        stream.write(render_formula(f) + "\n")
