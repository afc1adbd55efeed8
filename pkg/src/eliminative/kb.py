"""Terms, observations and knowledge bases.

Everything here is immutable. A :class:`KnowledgeBase` keeps its
observations in file order, which is also the scan order used by the
discovery engine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Literal

from .errors import DuplicateId, EmptySide, InvalidId

Side = Literal["cause", "effect"]

# "#" and "=>" are reserved by the file format; rejecting them here keeps every
# valid Term renderable.
_ILLEGAL = re.compile(r"[\s:,()#]|=>")


def _check_symbol(value: str, what: str) -> None:
    if not isinstance(value, str) or not value:
        raise ValueError(f"{what} must be a non-empty string")
    if _ILLEGAL.search(value):
        raise ValueError(f"{what} {value!r} contains a reserved character")


def check_category(name: str) -> str:
    _check_symbol(name, "category")
    return name


@dataclass(frozen=True)
class Term:
    """A symbol such as ``t``, ``c:t`` or ``accent(u)``.

    A term with an argument stands for one value of a varying phenomenon.
    """

    functor: str
    argument: str | None = None
    category: str | None = None

    def __post_init__(self) -> None:
        _check_symbol(self.functor, "functor")
        if self.argument is not None:
            _check_symbol(self.argument, "argument")
        if self.category is not None:
            check_category(self.category)

    def __str__(self) -> str:
        text = self.functor if self.argument is None else f"{self.functor}({self.argument})"
        return text if self.category is None else f"{self.category}:{text}"


def term_key(t: object) -> str:
    return str(t)


@dataclass(frozen=True)
class Observation:
    id: int
    cause_set: frozenset[Term]
    effect_set: frozenset[Term]

    def __post_init__(self) -> None:
        if isinstance(self.id, bool) or not isinstance(self.id, int) or self.id <= 0:
            raise InvalidId(f"observation id must be a positive integer, got {self.id!r}")
        if not self.cause_set:
            raise EmptySide(f"observation {self.id} has an empty cause set")
        if not self.effect_set:
            raise EmptySide(f"observation {self.id} has an empty effect set")

    def side(self, side: Side) -> frozenset[Term]:
        return self.cause_set if side == "cause" else self.effect_set


@dataclass(frozen=True)
class KnownCausation:
    """A correspondence supplied up front rather than discovered."""

    cause: Term
    effect: Term


@dataclass(frozen=True)
class KnowledgeBase:
    observations: tuple[Observation, ...] = ()
    knowns: tuple[KnownCausation, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "observations", tuple(self.observations))
        object.__setattr__(self, "knowns", tuple(self.knowns))
        seen: set[int] = set()
        for obs in self.observations:
            if obs.id in seen:
                raise DuplicateId(f"duplicate observation id {obs.id}")
            seen.add(obs.id)

    def __len__(self) -> int:
        return len(self.observations)

    @cached_property
    def positions(self) -> dict[int, int]:
        return {obs.id: i for i, obs in enumerate(self.observations)}

    def get(self, obs_id: int) -> Observation:
        return self.observations[self.positions[obs_id]]


def make_observation(id: int, causes: Iterable[Term], effects: Iterable[Term]) -> Observation:
    return Observation(id, frozenset(causes), frozenset(effects))


def add_observation(kb: KnowledgeBase, obs: Observation) -> KnowledgeBase:
    if obs.id in kb.positions:
        raise DuplicateId(f"duplicate observation id {obs.id}")
    return KnowledgeBase(kb.observations + (obs,), kb.knowns)


def add_known(kb: KnowledgeBase, known: KnownCausation) -> KnowledgeBase:
    return KnowledgeBase(kb.observations, kb.knowns + (known,))


def occurrences(kb: KnowledgeBase, t: Term, side: Side) -> list[int]:
    return [obs.id for obs in kb.observations if t in obs.side(side)]


def restrict(terms: frozenset[Term] | set[Term], constraint: str | None) -> frozenset[Term]:
    if constraint is None:
        return frozenset(terms)
    return frozenset(t for t in terms if t.category == constraint)
