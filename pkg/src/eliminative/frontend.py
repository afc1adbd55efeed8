"""Parsers for the knowledge-base line format and the query language.

Knowledge-base files hold one statement per line::

    # Grimm's law, observation 4
    obs 4 : c:p, v:ē, c:s => c:f, v:ō, c:t
    known : book => 'book'

An item is ``[category:]atom[(argument)]``. Atoms are maximal runs of
characters other than whitespace, ``: , ( ) #`` and the arrow ``=>``.
``#`` starts a comment.

Queries combine ``causation(cause, effect)`` atoms with ``&`` (or ``∧``)
and ``|``; ``&`` binds tighter. Names starting with an uppercase ASCII
letter are variables. ``causality`` is accepted as a synonym, and a
leading ``?-`` and trailing ``.`` are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ArityError, DuplicateId, EmptySide, KBError, ParseError
from .kb import KnowledgeBase, KnownCausation, Observation, Term
from .query import And, Atom, FunctorPat, Or, Query, TermPattern, Var

PREDICATES = ("causation", "causality")

_KB_PUNCT = ("=>", ":", ",", "(", ")")
_QUERY_PUNCT = ("=>", ":", ",", "(", ")", "&", "∧", "|")


@dataclass(frozen=True)
class Token:
    kind: str  # "word", a punctuation string, or "end"
    value: str
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == "end":
            return "end of input"
        return repr(self.value)


def _tokenize(text: str, punct: tuple[str, ...], first_line: int = 1) -> list[Token]:
    tokens: list[Token] = []
    line, col0, i = first_line, 0, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col0, i = line + 1, i + 1, i + 1
            continue
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        col = i - col0 + 1
        for p in punct:
            if text.startswith(p, i):
                tokens.append(Token(p, p, line, col))
                i += len(p)
                break
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] != "#" and not text.startswith(punct, i):
                i += 1
            tokens.append(Token("word", text[start:i], line, col))
    tokens.append(Token("end", "", line, n - col0 + 1))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        if self.peek.kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek
        if tok.kind != kind:
            raise ParseError(tok.line, tok.column, f"expected {what or repr(kind)}, found {tok.describe()}")
        return self.next()


def _make_term(tok: Token, functor: str, argument: str | None, category: str | None) -> Term:
    try:
        return Term(functor, argument, category)
    except ValueError as exc:
        raise ParseError(tok.line, tok.column, str(exc)) from None


def _item(cur: _Cursor) -> Term:
    first = cur.expect("word", "a term")
    category = None
    name = first
    if cur.accept(":"):
        category = first.value
        name = cur.expect("word", "a term after the category")
    argument = None
    if cur.accept("("):
        argument = cur.expect("word", "an argument").value
        cur.expect(")")
    return _make_term(first, name.value, argument, category)


def _items(cur: _Cursor, stop: str) -> list[Term]:
    if cur.peek.kind == stop:
        return []
    terms = [_item(cur)]
    while cur.accept(","):
        terms.append(_item(cur))
    return terms


_INT = re.compile(r"-?\d+")


def parse_kb(text: str) -> KnowledgeBase:
    observations: list[Observation] = []
    knowns: list[KnownCausation] = []
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        cur = _Cursor(_tokenize(raw, _KB_PUNCT, lineno))
        head = cur.peek
        if head.kind == "end":
            continue
        if head.kind != "word" or head.value not in ("obs", "known"):
            raise ParseError(head.line, head.column, f"expected 'obs' or 'known', found {head.describe()}")
        cur.next()
        if head.value == "obs":
            id_tok = cur.expect("word", "an observation number")
            if not _INT.fullmatch(id_tok.value):
                raise ParseError(id_tok.line, id_tok.column, f"expected an observation number, found {id_tok.describe()}")
            obs_id = int(id_tok.value)
            cur.expect(":")
            causes = _items(cur, "=>")
            cur.expect("=>")
            effects = _items(cur, "end")
            cur.expect("end")
            try:
                obs = Observation(obs_id, frozenset(causes), frozenset(effects))
            except KBError as exc:
                raise type(exc)(exc.message, lineno) from None
            if obs_id in seen:
                raise DuplicateId(f"observation {obs_id} already defined on line {seen[obs_id]}", lineno)
            seen[obs_id] = lineno
            observations.append(obs)
        else:
            cur.expect(":")
            causes = _items(cur, "=>")
            cur.expect("=>")
            effects = _items(cur, "end")
            if not causes or not effects:
                raise EmptySide("a known causation needs one cause and one effect", lineno)
            if len(causes) != 1 or len(effects) != 1:
                raise ParseError(lineno, head.column, "a known causation relates exactly one cause to one effect")
            cur.expect("end")
            knowns.append(KnownCausation(causes[0], effects[0]))
    return KnowledgeBase(tuple(observations), tuple(knowns))


def parse_term(text: str) -> Term:
    cur = _Cursor(_tokenize(text, _KB_PUNCT))
    term = _item(cur)
    cur.expect("end")
    return term


def render_kb(kb: KnowledgeBase) -> str:
    """Canonical text: file order kept, terms sorted within each side."""
    lines = []
    for obs in kb.observations:
        causes = ", ".join(sorted(map(str, obs.cause_set)))
        effects = ", ".join(sorted(map(str, obs.effect_set)))
        lines.append(f"obs {obs.id} : {causes} => {effects}")
    for k in kb.knowns:
        lines.append(f"known : {k.cause} => {k.effect}")
    return "".join(line + "\n" for line in lines)


def _is_var(name: str) -> bool:
    return "A" <= name[0] <= "Z"


def _pattern(cur: _Cursor) -> TermPattern:
    first = cur.expect("word", "a term or variable")
    category = None
    name = first
    if cur.accept(":"):
        category = first.value
        name = cur.expect("word", "a term or variable after the category")
    if _is_var(name.value):
        if cur.peek.kind == "(":
            tok = cur.peek
            raise ParseError(tok.line, tok.column, f"variable {name.value} cannot take an argument")
        _make_term(first, "x", None, category)  # validates the category
        return Var(name.value, category)
    if not cur.accept("("):
        return _make_term(first, name.value, None, category)
    arg = cur.expect("word", "an argument")
    cur.expect(")")
    if _is_var(arg.value):
        _make_term(first, name.value, None, category)
        return FunctorPat(name.value, Var(arg.value), category)
    return _make_term(first, name.value, arg.value, category)


def _atom(cur: _Cursor) -> Atom:
    pred = cur.expect("word", "causation(...)")
    if pred.value not in PREDICATES:
        raise ParseError(pred.line, pred.column, f"unknown predicate {pred.value!r}; expected causation")
    cur.expect("(")
    args: list[TermPattern] = []
    if cur.peek.kind != ")":
        args.append(_pattern(cur))
        while cur.accept(","):
            args.append(_pattern(cur))
    cur.expect(")", "')' or ','")
    if len(args) != 2:
        raise ArityError(pred.line, pred.column, f"{pred.value} takes 2 arguments, got {len(args)}")
    return Atom(args[0], args[1])


def _primary(cur: _Cursor) -> Query:
    if cur.accept("("):
        inner = _disjunction(cur)
        cur.expect(")")
        return inner
    return _atom(cur)


def _conjunction(cur: _Cursor) -> Query:
    items = [_primary(cur)]
    while cur.peek.kind in ("&", "∧"):
        cur.next()
        items.append(_primary(cur))
    return items[0] if len(items) == 1 else And(tuple(items))


def _disjunction(cur: _Cursor) -> Query:
    items = [_conjunction(cur)]
    while cur.accept("|"):
        items.append(_conjunction(cur))
    return items[0] if len(items) == 1 else Or(tuple(items))


def parse_query(text: str) -> Query:
    text = text.replace("\r\n", "\n")
    body = text.rstrip()
    if body.endswith("."):
        body = body[:-1]
    stripped = body.lstrip()
    if stripped.startswith("?-"):
        offset = len(body) - len(stripped)
        body = body[:offset] + "  " + stripped[2:]
    cur = _Cursor(_tokenize(body, _QUERY_PUNCT))
    query = _disjunction(cur)
    cur.expect("end")
    return query

