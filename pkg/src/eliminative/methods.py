"""Mill's canons, the Elimination Method and the functional-causation check.

Every function here is pure. A canon either returns a :class:`Conjecture` or
``None`` when it does not apply to its inputs.

``constraint`` arguments scope a canon to one category. Pass a single
category (or ``None``) to scope both sides alike, or a ``(cause_category,
effect_category)`` tuple to scope them separately. Scoping happens before
any intersection or difference is taken, so shared vowels cannot block a
consonant correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Tuple, Union

from .kb import KnowledgeBase, KnownCausation, Observation, Term, restrict


class MethodId(str, Enum):
    MA = "MA"
    MD = "MD"
    MCV = "MCV"
    MR = "MR"

    def __str__(self) -> str:
        return self.value


# MD > MA and the joint MA+MD (5) beats either alone.
WEIGHTS = {MethodId.MD: 3, MethodId.MA: 2, MethodId.MCV: 2, MethodId.MR: 1}


@dataclass(frozen=True)
class FunctorPattern:
    """The functor level of a varying term, e.g. ``accent(_)``."""

    functor: str
    category: str | None = None

    def __str__(self) -> str:
        text = f"{self.functor}(_)"
        return text if self.category is None else f"{self.category}:{text}"

    def covers(self, t: Term) -> bool:
        return t.argument is not None and t.functor == self.functor and t.category == self.category


@dataclass(frozen=True)
class EMStatus:
    state: str  # "passed", "exempt" or "failed"
    counterexample: int | None = None

    @property
    def failed(self) -> bool:
        return self.state == "failed"

    def __str__(self) -> str:
        if self.failed:
            return f"failed({self.counterexample})"
        return self.state


PASSED = EMStatus("passed")
EXEMPT = EMStatus("exempt")


def failed(obs_id: int) -> EMStatus:
    return EMStatus("failed", obs_id)


Symbol = Union[Term, FunctorPattern]
Corroboration = Tuple[MethodId, Tuple[int, ...]]


@dataclass(frozen=True)
class Conjecture:
    """A proposed cause => effect correspondence and how it was reached.

    ``sub_proofs`` holds the conjectures or known causations an MR residue
    subtracted. MCV conjectures have :class:`FunctorPattern` ends and carry
    the observed argument pairs in ``parametric_pairs``.
    """

    cause: Symbol
    effect: Symbol
    method: MethodId
    support: tuple[int, ...]
    sub_proofs: tuple = ()
    parametric_pairs: tuple[tuple[str, str], ...] | None = None
    corroborations: tuple[Corroboration, ...] = ()
    em_status: EMStatus | None = None

    @property
    def parametric(self) -> bool:
        return self.parametric_pairs is not None

    @property
    def pair(self) -> tuple[Symbol, Symbol]:
        return (self.cause, self.effect)

    @property
    def methods(self) -> frozenset[MethodId]:
        return frozenset([self.method, *(m for m, _ in self.corroborations)])

    @property
    def score(self) -> int:
        return score(self)

    def __str__(self) -> str:
        return f"{self.cause} => {self.effect}"


def score(c: Conjecture) -> int:
    """Plausibility: the summed weight of every distinct method behind ``c``."""
    return sum(WEIGHTS[m] for m in c.methods)


Constraint = Union[str, None, Tuple[Union[str, None], Union[str, None]]]


def split_constraint(constraint: Constraint) -> tuple[str | None, str | None]:
    if isinstance(constraint, tuple):
        return constraint
    return constraint, constraint


def _scoped(o: Observation, constraint: Constraint) -> tuple[frozenset[Term], frozenset[Term]]:
    cause_cat, effect_cat = split_constraint(constraint)
    return restrict(o.cause_set, cause_cat), restrict(o.effect_set, effect_cat)


def _only(s: frozenset[Term]) -> Term:
    (x,) = s
    return x


def _distinct(o1: Observation, o2: Observation) -> None:
    if o1.id == o2.id:
        raise ValueError(f"a canon needs two different observations, got {o1.id} twice")


def apply_ma(o1: Observation, o2: Observation, constraint: Constraint = None) -> Conjecture | None:
    """Agreement: the single shared cause goes with the single shared effect."""
    _distinct(o1, o2)
    c1, e1 = _scoped(o1, constraint)
    c2, e2 = _scoped(o2, constraint)
    common_c, common_e = c1 & c2, e1 & e2
    if len(common_c) != 1 or len(common_e) != 1:
        return None
    return Conjecture(_only(common_c), _only(common_e), MethodId.MA, tuple(sorted((o1.id, o2.id))))


def apply_md(o1: Observation, o2: Observation, constraint: Constraint = None) -> Conjecture | None:
    """Difference: one extra cause and one extra effect, both in the same observation.

    The smaller observation must keep at least one term on each side after
    scoping.
    """
    _distinct(o1, o2)
    c1, e1 = _scoped(o1, constraint)
    c2, e2 = _scoped(o2, constraint)
    for big, small, cb, cs, eb, es in ((o1, o2, c1, c2, e1, e2), (o2, o1, c2, c1, e2, e1)):
        if not cs or not es:
            continue
        if cs < cb and es < eb and len(cb - cs) == 1 and len(eb - es) == 1:
            return Conjecture(_only(cb - cs), _only(eb - es), MethodId.MD, (big.id, small.id))
    return None


def apply_mr(
    obs: Observation,
    knowns: Iterable[KnownCausation | Conjecture],
    constraint: Constraint = None,
) -> Conjecture | None:
    """Residues: subtract what is already explained and pair what is left.

    A known ``c => e`` is used when ``c`` is among the causes and ``e`` among
    the effects; both are then removed. Exactly one cause and one effect must
    remain. Parametric knowns are ignored.
    """
    causes, effects = _scoped(obs, constraint)
    used: list = []
    for k in knowns:
        if getattr(k, "parametric", False) or k in used:
            continue
        if k.cause in causes and k.effect in effects:
            used.append(k)
    rest_c = causes - {k.cause for k in used}
    rest_e = effects - {k.effect for k in used}
    if len(rest_c) != 1 or len(rest_e) != 1:
        return None
    return Conjecture(_only(rest_c), _only(rest_e), MethodId.MR, (obs.id,), sub_proofs=tuple(used))


def _variation(s1: frozenset[Term], s2: frozenset[Term]) -> tuple[Term, Term] | None:
    d1, d2 = s1 - s2, s2 - s1
    if len(d1) != 1 or len(d2) != 1:
        return None
    x, y = _only(d1), _only(d2)
    if x.argument is None or y.argument is None:
        return None
    if (x.functor, x.category) != (y.functor, y.category):
        return None
    return x, y


def apply_mcv(o1: Observation, o2: Observation, constraint: Constraint = None) -> Conjecture | None:
    """Concomitant variation of one functor term on each side.

    The result relates the two functors; the argument pairs actually seen
    are kept in ``parametric_pairs`` (ordered by observation id).
    """
    _distinct(o1, o2)
    if o2.id < o1.id:
        o1, o2 = o2, o1
    c1, e1 = _scoped(o1, constraint)
    c2, e2 = _scoped(o2, constraint)
    cv = _variation(c1, c2)
    ev = _variation(e1, e2)
    if cv is None or ev is None:
        return None
    (ca, cb), (ea, eb) = cv, ev
    return Conjecture(
        FunctorPattern(ca.functor, ca.category),
        FunctorPattern(ea.functor, ea.category),
        MethodId.MCV,
        (o1.id, o2.id),
        parametric_pairs=((ca.argument, ea.argument), (cb.argument, eb.argument)),
    )


CANONS = {MethodId.MA: apply_ma, MethodId.MD: apply_md, MethodId.MCV: apply_mcv}


def em_strict(kb: KnowledgeBase, c: Conjecture) -> EMStatus:
    """Elimination: the cause must never be observed without the effect."""
    if c.parametric:
        raise ValueError("em_strict needs a non-parametric conjecture; use em_parametric")
    for obs in kb.observations:
        if c.cause in obs.cause_set and c.effect not in obs.effect_set:
            return failed(obs.id)
    return PASSED


def em_parametric(kb: KnowledgeBase, c: Conjecture) -> EMStatus:
    """Elimination at the functor level.

    Wherever the cause functor appears, the effect functor must appear too,
    and with the paired argument when that argument pairing has been seen.
    """
    if not c.parametric:
        raise ValueError("em_parametric needs an MCV conjecture")
    mapping: dict[str, set[str]] = {}
    for x, y in c.parametric_pairs:
        mapping.setdefault(x, set()).add(y)
    for obs in kb.observations:
        effect_args = {t.argument for t in obs.effect_set if c.effect.covers(t)}
        for t in obs.cause_set:
            if not c.cause.covers(t):
                continue
            expected = mapping.get(t.argument)
            if not effect_args or (expected is not None and not expected & effect_args):
                return failed(obs.id)
    return PASSED


def conflict_check(recorded: Sequence[Conjecture], c: Conjecture) -> Conjecture | None:
    """Return the first recorded conjecture ``c`` contradicts, or ``None``.

    One effect per cause and one cause per effect. MCV conjectures are only
    compared with other MCV conjectures.
    """
    for r in recorded:
        if r.parametric != c.parametric:
            continue
        if r.cause == c.cause and r.effect != c.effect:
            return r
        if r.effect == c.effect and r.cause != c.cause:
            return r
    return None
