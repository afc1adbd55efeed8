"""Query syntax tree and its canonical rendering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .kb import Term


@dataclass(frozen=True)
class Var:
    name: str
    category: str | None = None

    def __str__(self) -> str:
        return self.name if self.category is None else f"{self.category}:{self.name}"


@dataclass(frozen=True)
class FunctorPat:
    """``accent(X)``: a functor term whose argument is a variable."""

    functor: str
    arg: Var
    category: str | None = None

    def __str__(self) -> str:
        text = f"{self.functor}({self.arg.name})"
        return text if self.category is None else f"{self.category}:{text}"


TermPattern = Union[Term, Var, FunctorPat]


@dataclass(frozen=True)
class Atom:
    cause: TermPattern
    effect: TermPattern

    def __str__(self) -> str:
        return f"causation({self.cause}, {self.effect})"


@dataclass(frozen=True)
class And:
    items: tuple


@dataclass(frozen=True)
class Or:
    items: tuple


Query = Union[Atom, And, Or]


def pattern_vars(p: TermPattern) -> list[str]:
    if isinstance(p, Var):
        return [p.name]
    if isinstance(p, FunctorPat):
        return [p.arg.name]
    return []


def atoms(q: Query) -> Iterator[Atom]:
    if isinstance(q, Atom):
        yield q
    else:
        for item in q.items:
            yield from atoms(item)


def variables(q: Query) -> list[str]:
    seen: list[str] = []
    for atom in atoms(q):
        for name in pattern_vars(atom.cause) + pattern_vars(atom.effect):
            if name not in seen:
                seen.append(name)
    return seen


def render_query(q: Query) -> str:
    if isinstance(q, Atom):
        return str(q)
    if isinstance(q, And):
        return " & ".join(f"({render_query(i)})" if isinstance(i, Or) else render_query(i) for i in q.items)
    return " | ".join(render_query(i) for i in q.items)
