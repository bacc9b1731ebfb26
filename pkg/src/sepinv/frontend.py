"""Transition-system input files and SMT-LIB2 text exchange.

Input files are S-expressions::

    (declare-var x Int) ...
    (init FORM) (trans FORM) (good FORM)

where ``trans`` may mention primed variables ``x'``.  Every diagnostic
carries a :class:`SourceSpan` of byte offsets into the input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .model import (FALSE, TRUE, And, Atom, Formula, LinearConstraint, Not,
                    Or, Rel, TranSys, make_constraint)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start after end")


class ParseError(Exception):
    """Malformed input, with the offending byte range."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        self.message = message
        self.span = span
        where = f" at bytes {span.start}-{span.end}" if span else ""
        super().__init__(f"{message}{where}")


# ---------------------------------------------------------------------------
# S-expressions


@dataclass(frozen=True)
class Sym:
    name: str
    span: SourceSpan


@dataclass(frozen=True)
class SList:
    items: tuple
    span: SourceSpan


_TOKEN = re.compile(rb"\s+|;[^\n]*|\(|\)|\|[^|]*\||[^\s();|]+")


def read_sexprs(text: str | bytes) -> list:
    """Parse every top-level S-expression of ``text``."""
    data = text.encode("utf-8") if isinstance(text, str) else text
    stack: list[tuple[int, list]] = []
    top: list = []
    pos = 0
    while pos < len(data):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise ParseError("unexpected character", SourceSpan(pos, pos + 1))
        tok = m.group()
        start, pos = pos, m.end()
        if tok[:1].isspace() or tok.startswith(b";"):
            continue
        if tok == b"(":
            stack.append((start, []))
        elif tok == b")":
            if not stack:
                raise ParseError("unbalanced ')'", SourceSpan(start, pos))
            open_at, items = stack.pop()
            node = SList(tuple(items), SourceSpan(open_at, pos))
            (stack[-1][1] if stack else top).append(node)
        else:
            try:
                name = tok.decode("utf-8")
            except UnicodeDecodeError:
                raise ParseError("invalid UTF-8", SourceSpan(start, pos))
            node = Sym(name.strip("|") if name.startswith("|") else name,
                       SourceSpan(start, pos))
            (stack[-1][1] if stack else top).append(node)
    if stack:
        open_at = stack[-1][0]
        raise ParseError("unclosed '('", SourceSpan(open_at, len(data)))
    return top


_INT = re.compile(r"-?\d+\Z")
_NAME = re.compile(r"[A-Za-z_~!@$%^&*+.?/<>=][A-Za-z0-9_~!@$%^&*+\-.?/<>=]*'?\Z")


def _head(node) -> str | None:
    if isinstance(node, SList) and node.items and isinstance(node.items[0], Sym):
        return node.items[0].name
    return None


# ---------------------------------------------------------------------------
# Transition systems


class _Scope:
    def __init__(self, names: Sequence[str], allow_primed: bool):
        self.names = list(names)
        self.index = {v: i for i, v in enumerate(names)}
        self.allow_primed = allow_primed

    @property
    def width(self) -> int:
        n = len(self.names)
        return 2 * n if self.allow_primed else n

    def column(self, sym: Sym) -> int:
        name = sym.name
        if name.endswith("'"):
            base = name[:-1]
            if base not in self.index:
                raise ParseError(f"unbound variable '{base}'", sym.span)
            if not self.allow_primed:
                raise ParseError(
                    f"primed variable '{name}' outside (trans ...)", sym.span)
            return len(self.names) + self.index[base]
        if name not in self.index:
            raise ParseError(f"unbound variable '{name}'", sym.span)
        return self.index[name]


def _term(node, scope: _Scope) -> tuple[dict, int]:
    """Linear term as ({column: coeff}, constant)."""
    if isinstance(node, Sym):
        if _INT.match(node.name):
            return {}, int(node.name)
        return {scope.column(node): 1}, 0
    head = _head(node)
    args = node.items[1:] if isinstance(node, SList) else ()
    if head == "+" and args:
        lin, const = {}, 0
        for a in args:
            l2, c2 = _term(a, scope)
            for k, v in l2.items():
                lin[k] = lin.get(k, 0) + v
            const += c2
        return lin, const
    if head == "-" and len(args) == 1:
        lin, const = _term(args[0], scope)
        return {k: -v for k, v in lin.items()}, -const
    if head == "-" and len(args) == 2:
        l1, c1 = _term(args[0], scope)
        l2, c2 = _term(args[1], scope)
        for k, v in l2.items():
            l1[k] = l1.get(k, 0) - v
        return l1, c1 - c2
    if head == "*" and len(args) >= 2:
        lin, const = _term(args[0], scope)
        for a in args[1:]:
            l2, c2 = _term(a, scope)
            if lin and l2:
                raise ParseError("non-linear term", node.span)
            if not lin:
                lin, const = {k: v * const for k, v in l2.items()}, c2 * const
            else:
                lin, const = {k: v * c2 for k, v in lin.items()}, const * c2
        return lin, const
    raise ParseError("malformed term", node.span)


_RELS = {"<=", "<", ">=", ">", "="}


def _atom(node: SList, scope: _Scope) -> Formula:
    rel = node.items[0].name
    if len(node.items) != 3:
        raise ParseError(f"'{rel}' takes two arguments", node.span)
    l1, c1 = _term(node.items[1], scope)
    l2, c2 = _term(node.items[2], scope)
    # lhs - rhs  (rel)  0   ->   coeffs . x  (rel)  c2 - c1
    coeffs = [0] * scope.width
    for k, v in l1.items():
        coeffs[k] += v
    for k, v in l2.items():
        coeffs[k] -= v
    bound = c2 - c1
    if rel == "=":
        return make_constraint(coeffs, bound, Rel.EQ)
    if rel in (">=", ">"):
        coeffs = [-c for c in coeffs]
        bound = -bound
    if rel in ("<", ">"):
        bound -= 1
    return make_constraint(coeffs, bound, Rel.LE)


def _formula(node, scope: _Scope) -> Formula:
    if isinstance(node, Sym):
        if node.name == "true":
            return TRUE
        if node.name == "false":
            return FALSE
        raise ParseError(f"expected a formula, got '{node.name}'", node.span)
    head = _head(node)
    args = node.items[1:]
    if head == "and" and args:
        return And(tuple(_formula(a, scope) for a in args))
    if head == "or" and args:
        return Or(tuple(_formula(a, scope) for a in args))
    if head == "not" and len(args) == 1:
        return Not(_formula(args[0], scope))
    if head == "=>" and len(args) == 2:
        return Or((Not(_formula(args[0], scope)), _formula(args[1], scope)))
    if head in _RELS:
        return _atom(node, scope)
    raise ParseError("malformed formula", node.span)


def parse_formula(text: str, names: Sequence[str],
                  allow_primed: bool = False) -> Formula:
    """Parse a single FORM over ``names``."""
    nodes = read_sexprs(text)
    if len(nodes) != 1:
        raise ParseError("expected exactly one formula",
                         SourceSpan(0, len(text.encode("utf-8"))))
    return _formula(nodes[0], _Scope(names, allow_primed))


def parse_system(text: str) -> TranSys:
    """Parse a transition-system file into a :class:`TranSys`."""
    nodes = read_sexprs(text)
    names: list[str] = []
    sections: dict[str, SList] = {}
    end = len(text.encode("utf-8"))
    for node in nodes:
        head = _head(node)
        if head == "declare-var":
            items = node.items
            if (len(items) != 3 or not isinstance(items[1], Sym)
                    or not isinstance(items[2], Sym)):
                raise ParseError("expected (declare-var NAME Int)", node.span)
            if items[2].name != "Int":
                raise ParseError("only Int variables are supported",
                                 items[2].span)
            name = items[1].name
            if not _NAME.match(name) or name.endswith("'") or _INT.match(name):
                raise ParseError(f"bad variable name '{name}'", items[1].span)
            if name in names:
                raise ParseError(f"duplicate variable '{name}'", items[1].span)
            if sections:
                raise ParseError("declarations must precede sections",
                                 node.span)
            names.append(name)
        elif head in ("init", "trans", "good"):
            if head in sections:
                raise ParseError(f"duplicate ({head} ...) section", node.span)
            if len(node.items) != 2:
                raise ParseError(f"({head} ...) takes one formula", node.span)
            sections[head] = node
        else:
            raise ParseError("unknown top-level form", node.span)
    if not names:
        raise ParseError("no (declare-var ...) found", SourceSpan(0, end))
    for sec in ("init", "trans", "good"):
        if sec not in sections:
            raise ParseError(f"missing ({sec} ...) section", SourceSpan(end, end))
    init = _formula(sections["init"].items[1], _Scope(names, False))
    trans = _formula(sections["trans"].items[1], _Scope(names, True))
    good = _formula(sections["good"].items[1], _Scope(names, False))
    return TranSys(tuple(names), init, trans, good)


# ---------------------------------------------------------------------------
# SMT-LIB2 printing


def _int(k: int) -> str:
    return f"(- {-k})" if k < 0 else str(k)


def _lin(coeffs: Sequence[int], names: Sequence[str]) -> str:
    terms = []
    for c, n in zip(coeffs, names):
        if c == 1:
            terms.append(n)
        elif c == -1:
            terms.append(f"(- {n})")
        elif c:
            terms.append(f"(* {_int(c)} {n})")
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


def print_constraint(c: LinearConstraint, names: Sequence[str]) -> str:
    if len(names) != c.dim:
        raise ValueError(f"{len(names)} names for a {c.dim}-variable atom")
    return f"({'=' if c.rel is Rel.EQ else '<='} {_lin(c.coeffs, names)} {_int(c.bound)})"


def print_smt2(f: Formula, names: Sequence[str]) -> str:
    """Render ``f`` as an SMT-LIB2 / FORM term using column ``names``."""
    if isinstance(f, Atom):
        return print_constraint(f.constraint, names)
    if isinstance(f, And):
        if not f.args:
            return "true"
        if len(f.args) == 1:
            return print_smt2(f.args[0], names)
        return "(and " + " ".join(print_smt2(a, names) for a in f.args) + ")"
    if isinstance(f, Or):
        if not f.args:
            return "false"
        if len(f.args) == 1:
            return print_smt2(f.args[0], names)
        return "(or " + " ".join(print_smt2(a, names) for a in f.args) + ")"
    if isinstance(f, Not):
        return f"(not {print_smt2(f.arg, names)})"
    raise TypeError(f"not a formula: {f!r}")


def smt_symbols(vars: Sequence[str]) -> tuple[list[str], list[str]]:
    """SMT symbols for V and V'; primes become a ``!p`` suffix."""
    plain = [_quote(v) for v in vars]
    primed = [_quote(v + "!p") for v in vars]
    return plain, primed


def _quote(name: str) -> str:
    if re.fullmatch(r"[A-Za-z_~!@$%^&*+.?/<>=\-][A-Za-z0-9_~!@$%^&*+\-.?/<>=]*",
                    name) and not name[0].isdigit():
        return name
    return f"|{name}|"


# ---------------------------------------------------------------------------
# Models


def _value(node) -> int:
    if isinstance(node, Sym):
        if _INT.match(node.name):
            return int(node.name)
        raise ParseError(f"non-integer value '{node.name}'", node.span)
    if _head(node) == "-" and len(node.items) == 2:
        return -_value(node.items[1])
    raise ParseError("non-integer value", node.span)


def parse_model_values(text: str) -> dict[str, int]:
    """Map of zero-arity Int ``define-fun`` entries in a get-model reply."""
    nodes = read_sexprs(text)
    if len(nodes) != 1 or not isinstance(nodes[0], SList):
        raise ParseError("malformed model",
                         SourceSpan(0, len(text.encode("utf-8"))))
    entries = list(nodes[0].items)
    if entries and isinstance(entries[0], Sym) and entries[0].name == "model":
        entries = entries[1:]
    out: dict[str, int] = {}
    for e in entries:
        if _head(e) != "define-fun":
            raise ParseError("expected define-fun", e.span)
        if len(e.items) != 5:
            raise ParseError("malformed define-fun", e.span)
        _, name, params, sort, body = e.items
        if not isinstance(name, Sym) or not isinstance(params, SList):
            raise ParseError("malformed define-fun", e.span)
        if params.items or not isinstance(sort, Sym) or sort.name != "Int":
            continue  # not a program variable
        out[name.name] = _value(body)
    return out


def parse_model(text: str, vars: Sequence[str]) -> tuple:
    """State over ``vars`` from a get-model reply; unmentioned vars are 0."""
    values = parse_model_values(text)
    return tuple(values.get(v, 0) for v in vars)
