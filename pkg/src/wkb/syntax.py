"""Text syntax for weighted KBs and conjunctive queries.

KB files are line based::

    tbox:
    inf: Visa and NoVisa SubClassOf Bot
    1: only hasNat.(not {c}) SubClassOf Visa
    abox:
    1: hasNat(p, b)
    2: NoVisa(p)

Concept operators bind as ``not`` / ``some`` / ``only`` (prefix) over
``and`` over ``or``; binary operators associate to the left. Queries look
like ``q(x) := hasNat(x, ?y), Visa(?y)``: head names and ``?``-prefixed
terms are variables, everything else is an individual.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (
    INF,
    IDENT,
    MAX_WEIGHT,
    And,
    BotConcept,
    Concept,
    ConceptAssertion,
    ConceptAtom,
    Exists,
    Forall,
    Inclusion,
    Name,
    Nominal,
    Not,
    Or,
    Query,
    RoleAssertion,
    RoleAtom,
    TopConcept,
    Var,
    WeightedKB,
    WKBError,
)

KEYWORDS = frozenset(
    {"Top", "Bot", "not", "some", "only", "and", "or", "SubClassOf", "inf", "tbox", "abox"}
)


class ParseError(WKBError):
    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


class UndeclaredAnswerVariable(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "int", "sym", "var", "end"
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"\s+|(?P<var>\?[A-Za-z][A-Za-z0-9_]*)|(?P<id>[A-Za-z][A-Za-z0-9_]*)|(?P<int>[0-9]+)|(?P<sym>:=|[(){}.,:])")


def tokenize(text: str, line: int = 1) -> list[Token]:
    out: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        if m.lastgroup is not None:
            out.append(Token(m.lastgroup, m.group(), line, pos + 1))
        pos = m.end()
    out.append(Token("end", "", line, len(text) + 1))
    return out


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.toks = tokens
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        t = tok or self.cur
        return ParseError(message, t.line, t.col)

    def take(self) -> Token:
        t = self.cur
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.cur.kind in ("sym", "id") and self.cur.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.cur.text != text or self.cur.kind not in ("sym", "id"):
            shown = self.cur.text or "end of line"
            raise self.error(f"expected {text!r}, found {shown!r}")
        return self.take()

    def ident(self, what: str) -> str:
        t = self.cur
        if t.kind != "id" or t.text in KEYWORDS:
            raise self.error(f"expected {what}, found {t.text or 'end of line'!r}")
        self.i += 1
        return t.text

    def end(self) -> None:
        if self.cur.kind != "end":
            raise self.error(f"unexpected {self.cur.text!r}")

    # concepts ------------------------------------------------------------

    def concept(self) -> Concept:
        c = self.conj()
        while self.accept("or"):
            c = Or(c, self.conj())
        return c

    def conj(self) -> Concept:
        c = self.unary()
        while self.accept("and"):
            c = And(c, self.unary())
        return c

    def unary(self) -> Concept:
        if self.accept("not"):
            return Not(self.unary())
        for kw, ctor in (("some", Exists), ("only", Forall)):
            if self.accept(kw):
                role = self.ident("a role name")
                self.expect(".")
                return ctor(role, self.unary())
        if self.accept("Top"):
            return TopConcept()
        if self.accept("Bot"):
            return BotConcept()
        if self.accept("("):
            c = self.concept()
            self.expect(")")
            return c
        if self.accept("{"):
            ind = self.ident("an individual name")
            self.expect("}")
            return Nominal(ind)
        return Name(self.ident("a concept"))

    def weight(self):
        t = self.cur
        if t.kind == "id" and t.text == "inf":
            self.i += 1
            return INF
        if t.kind != "int":
            raise self.error(f"expected a weight, found {t.text or 'end of line'!r}")
        self.i += 1
        w = int(t.text)
        if w < 1:
            raise self.error("weight must be positive", t)
        if w > MAX_WEIGHT:
            raise self.error("weight exceeds the 64-bit range", t)
        return w


def parse_concept(text: str) -> Concept:
    p = _Parser(tokenize(text))
    c = p.concept()
    p.end()
    return c


def parse_wkb(text: str) -> WeightedKB:
    tbox: list = []
    abox: list = []
    section: str | None = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        p = _Parser(tokenize(line, no))
        head = p.cur
        if head.kind == "id" and head.text in ("tbox", "abox") and p.toks[1].text == ":":
            p.i += 2
            p.end()
            section = head.text
            continue
        if section is None:
            raise ParseError("axiom outside a 'tbox:' or 'abox:' section", no, head.col)
        w = p.weight()
        p.expect(":")
        if section == "tbox":
            lhs = p.concept()
            p.expect("SubClassOf")
            rhs = p.concept()
            p.end()
            item = Inclusion(lhs, rhs)
            target = tbox
        else:
            pred = p.ident("a concept or role name")
            p.expect("(")
            first = p.ident("an individual name")
            if p.accept(","):
                second = p.ident("an individual name")
                item = RoleAssertion(pred, first, second)
            else:
                item = ConceptAssertion(pred, first)
            p.expect(")")
            p.end()
            target = abox
        if any(item == x for x, _ in target):
            raise ParseError("duplicate axiom", no, head.col)
        target.append((item, w))
    return WeightedKB(tuple(tbox), tuple(abox))


# ------------------------------------------------------------------ printing

_PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3


def _prec(c: Concept) -> int:
    if isinstance(c, Or):
        return _PREC_OR
    if isinstance(c, And):
        return _PREC_AND
    return _PREC_UNARY


def _name(text: str) -> str:
    if not IDENT.fullmatch(text) or text in KEYWORDS:
        raise WKBError(f"{text!r} cannot be written as a name")
    return text


def format_concept(c: Concept) -> str:
    def wrap(sub: Concept, need: int) -> str:
        s = format_concept(sub)
        return f"({s})" if _prec(sub) < need else s

    if isinstance(c, Name):
        return _name(c.name)
    if isinstance(c, TopConcept):
        return "Top"
    if isinstance(c, BotConcept):
        return "Bot"
    if isinstance(c, Nominal):
        return "{" + _name(c.individual) + "}"
    if isinstance(c, Not):
        return "not " + wrap(c.operand, _PREC_UNARY)
    if isinstance(c, Exists):
        return f"some {_name(c.role)}." + wrap(c.filler, _PREC_UNARY)
    if isinstance(c, Forall):
        return f"only {_name(c.role)}." + wrap(c.filler, _PREC_UNARY)
    if isinstance(c, And):
        return wrap(c.left, _PREC_AND) + " and " + wrap(c.right, _PREC_AND + 1)
    if isinstance(c, Or):
        return wrap(c.left, _PREC_OR) + " or " + wrap(c.right, _PREC_OR + 1)
    raise TypeError(f"not a concept: {c!r}")


def _weight(w) -> str:
    return "inf" if w is INF else str(w)


def format_assertion(a) -> str:
    if isinstance(a, ConceptAssertion):
        return f"{_name(a.concept)}({_name(a.individual)})"
    return f"{_name(a.role)}({_name(a.subject)}, {_name(a.object)})"


def serialize_wkb(kb: WeightedKB) -> str:
    lines = ["tbox:"]
    for tau, w in kb.tbox:
        lines.append(f"{_weight(w)}: {format_concept(tau.lhs)} SubClassOf {format_concept(tau.rhs)}")
    lines.append("abox:")
    for alpha, w in kb.abox:
        lines.append(f"{_weight(w)}: {format_assertion(alpha)}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------- queries


def parse_query(text: str) -> Query:
    p = _Parser(tokenize(" ".join(text.split("#", 1)[0].splitlines())))
    p.ident("a query name")
    p.expect("(")
    head: list[str] = []
    head_tok: dict[str, Token] = {}
    if not p.accept(")"):
        while True:
            t = p.cur
            if t.kind == "var":
                name = t.text[1:]
                p.i += 1
            else:
                name = p.ident("an answer variable")
            if name in head_tok:
                raise p.error(f"answer variable {name!r} repeated", t)
            head.append(name)
            head_tok[name] = t
            if p.accept(")"):
                break
            p.expect(",")
    p.expect(":=")

    def term():
        t = p.cur
        if t.kind == "var":
            p.i += 1
            return Var(t.text[1:])
        name = p.ident("a term")
        return Var(name) if name in head_tok else name

    atoms = []
    while True:
        pred = p.ident("a concept or role name")
        p.expect("(")
        first = term()
        if p.accept(","):
            atoms.append(RoleAtom(pred, first, term()))
        else:
            atoms.append(ConceptAtom(pred, first))
        p.expect(")")
        if not p.accept(","):
            break
    p.end()
    used = {t.name for a in atoms for t in a.terms if isinstance(t, Var)}
    for name in head:
        if name not in used:
            t = head_tok[name]
            raise UndeclaredAnswerVariable(f"answer variable {name!r} does not occur in the body", t.line, t.col)
    return Query(tuple(atoms), tuple(head))


def format_query(q: Query, name: str = "q") -> str:
    def term(t) -> str:
        return f"?{_name(t.name)}" if isinstance(t, Var) else _name(t)

    body = []
    for a in q.atoms:
        if isinstance(a, ConceptAtom):
            body.append(f"{_name(a.concept)}({term(a.term)})")
        else:
            body.append(f"{_name(a.role)}({term(a.first)}, {term(a.second)})")
    return f"{name}({', '.join(q.answer_vars)}) := " + ", ".join(body)
