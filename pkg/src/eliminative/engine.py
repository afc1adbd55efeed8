"""Discovery: goal-directed search, saturation, vetting and corroboration.

Every candidate a canon produces is vetted in two steps before it enters
the conjecture store. First the Elimination Method runs as the configured
policy says. Then the functional-causation check runs against everything
already accepted. The store is never revised, so the first accepted
conjecture wins any conflict. Rejections are kept in the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Sequence, Union

from .errors import DepthExceeded, UnboundResult
from .kb import KnowledgeBase, Observation, Side, Term, restrict
from .methods import (
    CANONS,
    EXEMPT,
    Conjecture,
    EMStatus,
    MethodId,
    Symbol,
    apply_mr,
    conflict_check,
    em_parametric,
    em_strict,
    score,
)
from .query import And, Atom, FunctorPat, Query, TermPattern, Var, pattern_vars

__all__ = [
    "EMPolicy",
    "Mode",
    "EngineConfig",
    "TraceEvent",
    "SolutionSet",
    "find_causation",
    "saturate",
    "corroborate",
    "score",
    "solve",
    "match",
]


class EMPolicy(str, Enum):
    STRICT_ALL = "strict-all"
    STRICT_NONRESIDUE = "strict-nonresidue"
    CONFLICT_ONLY = "conflict-only"

    def __str__(self) -> str:
        return self.value


class Mode(str, Enum):
    GOAL = "goal"
    SATURATE = "saturate"

    def __str__(self) -> str:
        return self.value


DEFAULT_ORDER = (MethodId.MA, MethodId.MD, MethodId.MCV, MethodId.MR)


@dataclass(frozen=True)
class EngineConfig:
    em_policy: EMPolicy = EMPolicy.STRICT_NONRESIDUE
    method_order: tuple[MethodId, ...] = DEFAULT_ORDER
    max_depth: int = 8
    mode: Mode = Mode.GOAL

    def __post_init__(self) -> None:
        object.__setattr__(self, "em_policy", EMPolicy(self.em_policy))
        object.__setattr__(self, "mode", Mode(self.mode))
        order = tuple(MethodId(m) for m in self.method_order)
        if sorted(order) != sorted(DEFAULT_ORDER):
            raise ValueError(f"method_order must list MA, MD, MCV and MR exactly once, got {[str(m) for m in order]}")
        object.__setattr__(self, "method_order", order)
        if isinstance(self.max_depth, bool) or not isinstance(self.max_depth, int) or self.max_depth < 1:
            raise ValueError(f"max_depth must be a positive integer, got {self.max_depth!r}")


@dataclass(frozen=True)
class TraceEvent:
    """One step of the search worth explaining.

    ``kind`` is one of ``accepted``, ``rejected-em``, ``rejected-conflict``,
    ``mr-unexplained``, ``cycle`` or ``depth-exceeded``.
    """

    kind: str
    depth: int
    conjecture: Conjecture | None = None
    conflict_with: Conjecture | None = None
    goal: str | None = None
    observation: int | None = None
    detail: str | None = None


Binding = dict
Pattern = Union[Atom, tuple]


@dataclass
class SolutionSet:
    bindings: list[dict[str, Symbol]]
    conjectures: list[Conjecture]
    trace: list[TraceEvent]
    config: EngineConfig
    kb: KnowledgeBase
    store: list[Conjecture] = field(default_factory=list)

    @property
    def pairs(self) -> list[tuple[Symbol, Symbol]]:
        return [c.pair for c in self.conjectures]


def _as_atom(pattern: Pattern | None) -> Atom:
    if pattern is None:
        return Atom(Var("X"), Var("Y"))
    if isinstance(pattern, Atom):
        return pattern
    cause, effect = pattern
    return Atom(cause, effect)


def _other(side: Side) -> Side:
    return "cause" if side == "effect" else "effect"


def _hits(c: Conjecture, side: Side, goal: Term) -> bool:
    value = getattr(c, side)
    if not c.parametric:
        return value == goal
    if not value.covers(goal):
        return False
    index = 0 if side == "cause" else 1
    return any(pair[index] == goal.argument for pair in c.parametric_pairs)


def _match_side(p: TermPattern, value: Symbol, binding: Binding) -> Binding | None:
    if isinstance(p, Term):
        return binding if value == p else None
    if isinstance(p, Var):
        if p.category is not None and value.category != p.category:
            return None
        if p.name in binding:
            return binding if binding[p.name] == value else None
        return {**binding, p.name: value}
    if not isinstance(value, Term) or value.argument is None:
        return None
    if value.functor != p.functor or value.category != p.category:
        return None
    return _match_side(p.arg, Term(value.argument), binding)


def match(atom: Atom, c: Conjecture, binding: Binding | None = None) -> list[Binding]:
    """Every extension of ``binding`` under which ``c`` answers ``atom``.

    An MCV conjecture binds plain variables to its functor patterns; any
    other pattern is matched against each observed argument pair.
    """
    binding = {} if binding is None else binding
    if c.parametric and not (isinstance(atom.cause, Var) and isinstance(atom.effect, Var)):
        pairs = [
            (Term(c.cause.functor, x, c.cause.category), Term(c.effect.functor, y, c.effect.category))
            for x, y in c.parametric_pairs
        ]
    else:
        pairs = [c.pair]
    out: list[Binding] = []
    for cause, effect in pairs:
        b = _match_side(atom.cause, cause, binding)
        if b is not None:
            b = _match_side(atom.effect, effect, b)
        if b is not None and b not in out:
            out.append(b)
    return out


def _substitute(p: TermPattern, binding: Binding) -> TermPattern:
    if isinstance(p, Var) and isinstance(binding.get(p.name), Term):
        return binding[p.name]
    if isinstance(p, FunctorPat):
        arg = binding.get(p.arg.name)
        if isinstance(arg, Term) and arg.argument is None and arg.category is None:
            return Term(p.functor, arg.functor, p.category)
    return p


def _in_scope(c: Conjecture, scope: tuple[str | None, str | None]) -> bool:
    cause_cat, effect_cat = scope
    return (cause_cat is None or c.cause.category == cause_cat) and (
        effect_cat is None or c.effect.category == effect_cat
    )


def _same_pair(cand: Conjecture, c: Conjecture) -> bool:
    if cand.parametric == c.parametric:
        return cand.pair == c.pair
    if c.parametric:
        return False
    return (
        cand.cause.covers(c.cause)
        and cand.effect.covers(c.effect)
        and (c.cause.argument, c.effect.argument) in cand.parametric_pairs
    )


def _rederive(kb: KnowledgeBase, c: Conjecture, method: MethodId) -> tuple[int, ...] | None:
    obs = kb.observations
    if method is MethodId.MR:
        if c.parametric:
            return None
        knowns = [k for k in kb.knowns if (k.cause, k.effect) != c.pair]
        for o in obs:
            cand = apply_mr(o, knowns)
            if cand is not None and cand.pair == c.pair:
                return cand.support
        return None
    canon = CANONS[method]
    for i, o1 in enumerate(obs):
        for o2 in obs[i + 1 :]:
            cand = canon(o1, o2)
            if cand is not None and _same_pair(cand, c):
                return cand.support
    return None


def corroborate(kb: KnowledgeBase, c: Conjecture, cfg: EngineConfig | None = None) -> Conjecture:
    """Try every other method on the whole, unscoped knowledge base.

    MR may subtract the declared known causations, except one stating ``c``
    itself.
    """
    cfg = cfg or EngineConfig()
    found = []
    for method in cfg.method_order:
        if method is c.method:
            continue
        support = _rederive(kb, c, method)
        if support is not None:
            found.append((method, support))
    return replace(c, corroborations=tuple(found))


class _Search:
    def __init__(self, kb: KnowledgeBase, cfg: EngineConfig, store=None, trace=None):
        self.kb = kb
        self.cfg = cfg
        self.store: list[Conjecture] = [] if store is None else store
        self.trace: list[TraceEvent] = [] if trace is None else trace

    def _em(self, c: Conjecture) -> EMStatus:
        policy = self.cfg.em_policy
        if policy is EMPolicy.CONFLICT_ONLY:
            return EXEMPT
        if policy is EMPolicy.STRICT_NONRESIDUE and c.method is MethodId.MR:
            return EXEMPT
        return em_parametric(self.kb, c) if c.parametric else em_strict(self.kb, c)

    def vet(self, cand: Conjecture, depth: int) -> Conjecture | None:
        for r in self.store:
            if r.parametric == cand.parametric and r.pair == cand.pair:
                return r
        status = self._em(cand)
        cand = replace(cand, em_status=status)
        if status.failed:
            self.trace.append(TraceEvent("rejected-em", depth, cand, observation=status.counterexample))
            return None
        clash = conflict_check(self.store, cand)
        if clash is not None:
            self.trace.append(TraceEvent("rejected-conflict", depth, cand, conflict_with=clash))
            return None
        cand = corroborate(self.kb, cand, self.cfg)
        self.store.append(cand)
        self.trace.append(TraceEvent("accepted", depth, cand))
        return cand

    def saturate(self, scope: tuple[str | None, str | None]) -> list[Conjecture]:
        obs = self.kb.observations
        for method in self.cfg.method_order:
            if method is MethodId.MR:
                for o in obs:
                    cand = apply_mr(o, self.kb.knowns, scope)
                    if cand is not None:
                        self.vet(cand, 0)
                continue
            canon = CANONS[method]
            for i, o1 in enumerate(obs):
                for o2 in obs[i + 1 :]:
                    cand = canon(o1, o2, scope)
                    if cand is not None:
                        self.vet(cand, 0)
        pos = self.kb.positions
        found = [c for c in self.store if _in_scope(c, scope)]
        return sorted(found, key=lambda c: (min(pos[i] for i in c.support), str(c.cause)))

    def find(self, atom: Atom, depth: int, path: tuple, scope=None) -> list[Conjecture]:
        if depth > self.cfg.max_depth:
            raise DepthExceeded(f"depth {depth} exceeds max_depth {self.cfg.max_depth}")
        if scope is None:
            scope = (atom.cause.category, atom.effect.category)
        if isinstance(atom.effect, Term):
            side: Side = "effect"
        elif isinstance(atom.cause, Term):
            side = "cause"
        else:
            side = None
        if self.cfg.mode is Mode.SATURATE or side is None:
            return [c for c in self.saturate(scope) if match(atom, c)]

        goal: Term = getattr(atom, side)
        settled = [c for c in self.store if _hits(c, side, goal)]
        if settled:
            return [c for c in settled if match(atom, c)]
        if (side, goal) in path:
            self.trace.append(TraceEvent("cycle", depth, goal=str(goal), detail=f"{side} already being pursued"))
            return []
        path = path + ((side, goal),)
        for method in self.cfg.method_order:
            if method is MethodId.MR:
                candidates = self._residues(side, goal, scope, depth, path)
            else:
                candidates = self._pairings(method, side, goal, scope)
            for cand in candidates:
                if not _hits(cand, side, goal) or not match(atom, cand):
                    continue
                accepted = self.vet(cand, depth)
                if accepted is not None and match(atom, accepted):
                    return [accepted]
        return []

    def _side_scope(self, side: Side, scope) -> str | None:
        return scope[0] if side == "cause" else scope[1]

    def _pairings(self, method: MethodId, side: Side, goal: Term, scope) -> Iterator[Conjecture]:
        canon = CANONS[method]
        obs = self.kb.observations
        cat = self._side_scope(side, scope)
        for i, o in enumerate(obs):
            if goal not in restrict(o.side(side), cat):
                continue
            # later observations first, then earlier ones, each ascending
            for partner in obs[i + 1 :] + obs[:i]:
                cand = canon(o, partner, scope)
                if cand is not None:
                    yield cand

    def _residues(self, side: Side, goal: Term, scope, depth: int, path: tuple) -> Iterator[Conjecture]:
        cat = self._side_scope(side, scope)
        for o in self.kb.observations:
            own = restrict(o.side(side), cat)
            if goal not in own:
                continue
            knowns = self._explain_siblings(o, own - {goal}, side, goal, scope, depth, path)
            if knowns is None:
                continue
            cand = apply_mr(o, knowns, scope)
            if cand is not None:
                yield cand

    def _explain_siblings(self, o: Observation, siblings, side: Side, goal: Term, scope, depth, path):
        knowns = []
        for s in sorted(siblings, key=str):
            k = self._explain(s, side, scope, depth, path)
            if k is None:
                self.trace.append(
                    TraceEvent("mr-unexplained", depth, goal=str(goal), observation=o.id, detail=f"no known cause for {s}")
                )
                return None
            knowns.append(k)
        return knowns

    def _explain(self, s: Term, side: Side, scope, depth: int, path: tuple):
        for c in self.store:
            if not c.parametric and getattr(c, side) == s:
                return c
        for k in self.kb.knowns:
            if getattr(k, side) == s:
                return k
        if depth + 1 > self.cfg.max_depth:
            self.trace.append(TraceEvent("depth-exceeded", depth, goal=str(s), detail=f"max_depth {self.cfg.max_depth}"))
            return None
        sub = Atom(Var("_"), s) if side == "effect" else Atom(s, Var("_"))
        found = self.find(sub, depth + 1, path, scope)
        return found[0] if found else None

    def evaluate(self, q: Query, binding: Binding) -> list[tuple[Binding, tuple[Conjecture, ...]]]:
        if isinstance(q, Atom):
            atom = Atom(_substitute(q.cause, binding), _substitute(q.effect, binding))
            wanted = pattern_vars(q.cause) + pattern_vars(q.effect)
            out = []
            for c in self.find(atom, 0, ()):
                for b in match(q, c, binding):
                    if any(v not in b for v in wanted):
                        raise UnboundResult(f"{q} succeeded without binding {wanted}")
                    out.append((b, (c,)))
            return out
        if isinstance(q, And):
            results = [(binding, ())]
            for item in q.items:
                nxt = []
                for b, why in results:
                    for b2, why2 in self.evaluate(item, b):
                        nxt.append((b2, why + tuple(c for c in why2 if c not in why)))
                results = nxt
            return results
        out = []
        for item in q.items:
            for b, why in self.evaluate(item, binding):
                if all(b != seen for seen, _ in out):
                    out.append((b, why))
        return out


def find_causation(
    kb: KnowledgeBase,
    pattern: Pattern,
    store: list[Conjecture],
    depth: int = 0,
    cfg: EngineConfig | None = None,
    trace: list[TraceEvent] | None = None,
) -> list[Conjecture]:
    """Search for conjectures answering one ``causation`` pattern.

    ``store`` is extended in place with every conjecture accepted on the way,
    including MR sub-proofs.
    """
    cfg = cfg or EngineConfig()
    if depth > cfg.max_depth:
        raise DepthExceeded(f"depth {depth} exceeds max_depth {cfg.max_depth}")
    return _Search(kb, cfg, store, trace).find(_as_atom(pattern), depth, ())


def saturate(kb: KnowledgeBase, pattern: Pattern | None = None, cfg: EngineConfig | None = None) -> SolutionSet:
    cfg = cfg or EngineConfig()
    atom = _as_atom(pattern)
    search = _Search(kb, cfg)
    found = [c for c in search.saturate((atom.cause.category, atom.effect.category)) if match(atom, c)]
    bindings = []
    for c in found:
        for b in match(atom, c):
            if b not in bindings:
                bindings.append(b)
    return SolutionSet(bindings, found, search.trace, cfg, kb, search.store)


def solve(kb: KnowledgeBase, query: Query, cfg: EngineConfig | None = None) -> SolutionSet:
    """Evaluate a query, threading one conjecture store through all its atoms."""
    cfg = cfg or EngineConfig()
    search = _Search(kb, cfg)
    bindings: list[Binding] = []
    conjectures: list[Conjecture] = []
    for b, why in search.evaluate(query, {}):
        if b not in bindings:
            bindings.append(b)
        conjectures.extend(c for c in why if c not in conjectures)
    return SolutionSet(bindings, conjectures, search.trace, cfg, kb, search.store)


def ranked(conjectures: Sequence[Conjecture]) -> list[Conjecture]:
    """Most plausible first; ties keep their order."""
    return sorted(conjectures, key=lambda c: -c.score)
