"""Formula AST, printer and recursive-descent parser.

Grammar (loosest first)::

    disj  := conj ('|' conj)*
    conj  := unary ('&' unary)*
    unary := ('~' | 'box' | 'dia') unary | atom
    atom  := 'T' | 'F' | IDENT | '(' disj ')'

The Unicode forms of the connectives are accepted as well.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError


class Formula:
    __slots__ = ()

    def subformulas(self) -> list["Formula"]:
        """Post-order list without duplicates."""
        out: list[Formula] = []
        seen: set[Formula] = set()

        def walk(f: Formula) -> None:
            for c in f.children():
                walk(c)
            if f not in seen:
                seen.add(f)
                out.append(f)

        walk(self)
        return out

    def children(self) -> tuple["Formula", ...]:
        return ()

    def letters(self) -> set[str]:
        return {f.name for f in self.subformulas() if isinstance(f, Var)}

    def is_modal(self) -> bool:
        return any(isinstance(f, (Box, Dia)) for f in self.subformulas())

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children())

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Box(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Dia(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class Sequent:
    lhs: Formula
    rhs: Formula

    def letters(self) -> set[str]:
        return self.lhs.letters() | self.rhs.letters()

    def is_modal(self) -> bool:
        return self.lhs.is_modal() or self.rhs.is_modal()

    def __str__(self) -> str:
        return f"{self.lhs} |- {self.rhs}"


# -- printing ----------------------------------------------------------------

_PREC = {Or: 1, And: 2}


def render(f: Formula) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "F"
    if isinstance(f, (Not, Box, Dia)):
        op = {Not: "~", Box: "box ", Dia: "dia "}[type(f)]
        inner = render(f.arg)
        if isinstance(f.arg, (And, Or)):
            inner = f"({inner})"
        return op + inner
    prec = _PREC[type(f)]
    sym = " & " if isinstance(f, And) else " | "
    left = render(f.left)
    if isinstance(f.left, (And, Or)) and _PREC[type(f.left)] < prec:
        left = f"({left})"
    right = render(f.right)
    if isinstance(f.right, (And, Or)) and _PREC[type(f.right)] <= prec:
        right = f"({right})"
    return left + sym + right


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\|-|⊢)|([~¬&∧|∨()⊤⊥□◇])|([A-Za-z0-9_]+))")
_ALIASES = {"¬": "~", "∧": "&", "∨": "|", "⊤": "T", "⊥": "F", "□": "box", "◇": "dia", "⊢": "|-"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(start, ["connective", "identifier", "parenthesis"], text)
        tok = m.group(1) or m.group(2) or m.group(3)
        tokens.append((_ALIASES.get(tok, tok), m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def fail(self, expected: list[str]):
        raise ParseError(self.tokens[self.i][1], expected, self.text)

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "box":
            self.take()
            return Box(self.unary())
        if tok == "dia":
            self.take()
            return Dia(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.disj()
            if self.peek() != ")":
                self.fail([")", "&", "|"])
            self.take()
            return f
        if tok == "T":
            self.take()
            return TOP
        if tok == "F":
            self.take()
            return BOT
        if re.fullmatch(r"[A-Za-z0-9_]+", tok) and tok not in ("box", "dia"):
            self.take()
            return Var(tok)
        self.fail(["~", "box", "dia", "(", "T", "F", "identifier"])


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.disj()
    if p.peek() != "<end>":
        p.fail(["&", "|", "<end>"])
    return f


def parse_sequent(text: str) -> Sequent:
    """Parse ``"LHS |- RHS"``."""
    p = _Parser(text)
    lhs = p.disj()
    if p.peek() != "|-":
        p.fail(["|-", "&", "|"])
    p.take()
    rhs = p.disj()
    if p.peek() != "<end>":
        p.fail(["&", "|", "<end>"])
    return Sequent(lhs, rhs)


def as_formula(f: Formula | str) -> Formula:
    return parse(f) if isinstance(f, str) else f


def as_sequent(s: Sequent | str) -> Sequent:
    return parse_sequent(s) if isinstance(s, str) else s
