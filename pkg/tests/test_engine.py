from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import T
from eliminative import parse_query
from eliminative.engine import EngineConfig, corroborate, find_causation, saturate, solve
from eliminative.errors import DepthExceeded
from eliminative.kb import KnowledgeBase, make_observation, restrict
from eliminative.methods import Conjecture, KnownCausation, MethodId, conflict_check
from eliminative.query import Atom, Var
from oracle import engine_triples, oracle_saturate, random_kb

STRICT_ALL = EngineConfig(em_policy="strict-all")
CONSONANTS = Atom(Var("X", "c"), Var("Y", "c"))


def kb_of(*rows, knowns=()):
    return KnowledgeBase(
        tuple(make_observation(i + 1, [T(x) for x in c.split()], [T(x) for x in e.split()]) for i, (c, e) in enumerate(rows)),
        tuple(KnownCausation(T(a), T(b)) for a, b in knowns),
    )


COMBINED_MORPHEMES = kb_of(
    ("book let", "'book' diminutive"),
    ("leaf let", "'leaf' diminutive"),
    ("book let s", "'book' diminutive"),
    ("book", "'book'"),
)


def pairs(conjectures):
    return {(str(c.cause), str(c.effect)) for c in conjectures}


def test_find_causation_sth(decipher):
    store: list = []
    (c,) = find_causation(decipher, (Var("C"), T("šth")), store)
    assert c.pair == (T("pinte"), T("šth"))
    assert c.method is MethodId.MR
    assert c.support == (3,)
    (sub,) = c.sub_proofs
    assert sub.pair == (T("mizë"), T("zbwb"))
    assert sub.method is MethodId.MA
    assert sub.support == (1, 3)
    assert store == [sub, c]


def test_find_causation_hzbwb(decipher):
    # hand-computed: obs 1 and 6 share exactly pi on the cause side and yšth on the effect side
    o1, o6 = decipher.get(1), decipher.get(6)
    assert o1.cause_set & o6.cause_set == {T("pi")}
    assert o1.effect_set & o6.effect_set == {T("yšth")}
    (c,) = find_causation(decipher, (Var("C"), T("hzbwb")), [])
    assert c.pair == (T("miza"), T("hzbwb"))
    assert c.method is MethodId.MR
    (sub,) = c.sub_proofs
    assert sub.pair == (T("pi"), T("yšth"))
    assert sub.support == (1, 6)
    assert c.em_status.state == "exempt"


def test_find_causation_empty_kb():
    assert find_causation(KnowledgeBase(), (Var("C"), T("x")), []) == []


def test_find_causation_depth_precondition(decipher):
    with pytest.raises(DepthExceeded):
        find_causation(decipher, (Var("C"), T("šth")), [], depth=9)


def test_depth_limit_is_traced(decipher):
    trace: list = []
    cfg = EngineConfig(max_depth=1)
    # depth 0 -> 1 is allowed; starting at 1 leaves no room for the zbwb subgoal
    assert find_causation(decipher, (Var("C"), T("šth")), [], depth=1, cfg=cfg, trace=trace) == []
    assert any(e.kind == "depth-exceeded" for e in trace)
    assert find_causation(decipher, (Var("C"), T("šth")), [], depth=0, cfg=cfg) != []


def test_cycle_guard():
    # each effect can only be explained through the other
    kb = kb_of(("a b", "x y"))
    trace: list = []
    assert find_causation(kb, (Var("C"), T("x")), [], trace=trace) == []
    assert any(e.kind == "cycle" for e in trace)


def test_cause_directed_search(decipher):
    (c,) = find_causation(decipher, (T("pinte"), Var("E")), [])
    assert c.pair == (T("pinte"), T("šth"))
    assert c.method is MethodId.MR
    assert c.sub_proofs[0].pair == (T("mizë"), T("zbwb"))


def test_saturate_grimm(grimm):
    s = saturate(grimm, CONSONANTS)
    assert pairs(s.conjectures) == {("c:t", "c:ð"), ("c:p", "c:f"), ("c:d", "c:t")}
    assert [str(c) for c in s.conjectures] == ["c:t => c:ð", "c:p => c:f", "c:d => c:t"]
    assert all(c.method is MethodId.MA and c.em_status.state == "passed" for c in s.conjectures)


def test_saturate_exception_strict(grimm_exception):
    s = saturate(grimm_exception, CONSONANTS, STRICT_ALL)
    assert pairs(s.conjectures) == {("c:p", "c:f"), ("c:d", "c:t")}
    rejected = [e for e in s.trace if e.kind == "rejected-em" and e.conjecture.pair == (T("c:t"), T("c:ð"))]
    assert rejected and all(e.observation == 9 for e in rejected)


def test_saturate_exception_default_keeps_residue(grimm_exception):
    # MR residues skip EM by default, so the degenerate row 1 still yields t => ð
    s = saturate(grimm_exception, CONSONANTS)
    (t,) = [c for c in s.conjectures if c.cause == T("c:t")]
    assert t.method is MethodId.MR and t.em_status.state == "exempt"


def test_saturate_single_observation():
    s = saturate(kb_of(("A", "a")), (Var("X"), Var("Y")))
    (c,) = s.conjectures
    assert c.pair == (T("A"), T("a"))
    assert c.method is MethodId.MR
    assert c.corroborations == ()


def test_corroborate_grimm(grimm):
    for c in saturate(grimm, CONSONANTS).conjectures:
        assert c.corroborations == ()
        assert corroborate(grimm, c) == c


def test_corroborate_joint_method():
    ma = Conjecture(T("let"), T("diminutive"), MethodId.MA, (1, 2))
    c = corroborate(COMBINED_MORPHEMES, ma)
    assert c.corroborations == ((MethodId.MD, (1, 4)),)
    assert c.score == 5


def test_corroborate_skips_own_known(morphemes):
    c = Conjecture(T("book"), T("'book'"), MethodId.MA, (1, 4))
    # the declared known book => 'book' may not be used to re-derive itself
    assert corroborate(morphemes, c).corroborations == ((MethodId.MR, (4,)),)


def test_solve_decipher(decipher):
    s = solve(decipher, parse_query("causation(C1, šth) & causation(C2, hzbwb)"))
    assert s.bindings == [{"C1": T("pinte"), "C2": T("miza")}]
    assert [str(c) for c in s.conjectures] == ["pinte => šth", "miza => hzbwb"]


def test_solve_grimm(grimm):
    s = solve(grimm, parse_query("causation(c:X, c:Y)"))
    assert s.bindings == [
        {"X": T("c:t"), "Y": T("c:ð")},
        {"X": T("c:p"), "Y": T("c:f")},
        {"X": T("c:d"), "Y": T("c:t")},
    ]


def test_solve_failed_disjunction(grimm):
    s = solve(grimm, parse_query("causation(a, b) | causation(a, b)"))
    assert s.bindings == []
    assert s.conjectures == []


def test_solve_ground_atoms(grimm):
    assert solve(grimm, parse_query("causation(c:p, c:f)")).bindings == [{}]
    assert solve(grimm, parse_query("causation(c:t, c:f)")).bindings == []


def test_solve_disjunction_unions(grimm):
    s = solve(grimm, parse_query("causation(X, c:f) | causation(X, c:ð)"))
    assert s.bindings == [{"X": T("c:p")}, {"X": T("c:t")}]


def test_solve_shared_variable(decipher):
    s = solve(decipher, parse_query("causation(C, šth) & causation(C, E)"))
    assert s.bindings == [{"C": T("pinte"), "E": T("šth")}]


def test_solve_conjunction_threads_store():
    # both atoms want a cause for x; the second must agree with the first
    kb = kb_of(("a p", "x q"), ("a r", "x s"), ("b t", "x u"), ("b v", "x w"))
    s = solve(kb, parse_query("causation(C1, x) & causation(C2, x)"))
    assert s.bindings == [{"C1": T("a"), "C2": T("a")}]


def test_solve_mcv(mcv):
    s = solve(mcv, parse_query("causation(accent(X), gr-meaning(Y))"))
    assert s.bindings == [{"X": T("u"), "Y": T("verb")}, {"X": T("o"), "Y": T("name")}]
    s = solve(mcv, parse_query("causation(C, gr-meaning(name))"))
    assert s.bindings == [{"C": T("accent(o)")}]


def test_saturate_mode(decipher):
    cfg = EngineConfig(mode="saturate")
    s = solve(decipher, parse_query("causation(C, šth)"), cfg)
    # exhaustive scan first: MR on row 3 has no knowns to subtract, so nothing explains šth
    assert s.bindings == []


def test_method_order_changes_provenance():
    kb = kb_of(("a b", "x y"), ("a c", "x z"), ("b", "y"))
    default = saturate(kb)
    first_md = saturate(kb, cfg=EngineConfig(method_order=("MD", "MA", "MCV", "MR")))
    ax = {c.pair: c.method for c in default.conjectures}
    assert ax[(T("a"), T("x"))] is MethodId.MA
    assert {c.pair: c.method for c in first_md.conjectures}[(T("a"), T("x"))] is MethodId.MD


def test_first_accepted_wins_and_is_traced():
    kb = kb_of(("a p", "x q"), ("a r", "x s"), ("b t", "x u"), ("b v", "x w"))
    s = saturate(kb)
    assert (T("a"), T("x")) in [c.pair for c in s.conjectures]
    assert (T("b"), T("x")) not in [c.pair for c in s.conjectures]
    assert any(e.kind == "rejected-conflict" and e.conjecture.pair == (T("b"), T("x")) for e in s.trace)


def test_config_validation():
    with pytest.raises(ValueError):
        EngineConfig(method_order=("MA", "MA", "MCV", "MR"))
    with pytest.raises(ValueError):
        EngineConfig(max_depth=0)
    with pytest.raises(ValueError):
        EngineConfig(em_policy="lenient")


def _store_consistent(store):
    return all(conflict_check(store[:i], c) is None for i, c in enumerate(store))


def _mr_complete(kb, c, effect_cat, depth, max_depth):
    """Every sibling effect of an MR residue is explained by a sub-proof."""
    assert depth <= max_depth
    if c.method is MethodId.MR and not c.parametric:
        effects = restrict(kb.get(c.support[0]).effect_set, effect_cat)
        assert {s.effect for s in c.sub_proofs} | {c.effect} == set(effects)
    for s in c.sub_proofs:
        if isinstance(s, Conjecture):
            _mr_complete(kb, s, effect_cat, depth + 1, max_depth)


@pytest.mark.parametrize("seed", range(40))
def test_random_invariants(seed):
    rng = random.Random(seed)
    kb, scope = random_kb(rng)
    s = saturate(kb, Atom(Var("X", scope), Var("Y", scope)))
    assert _store_consistent(s.store)
    again = saturate(kb, Atom(Var("X", scope), Var("Y", scope)))
    assert s.conjectures == again.conjectures and s.trace == again.trace
    for c in s.conjectures:
        _mr_complete(kb, c, scope, 0, 8)
    for event in s.trace:
        assert event.depth <= 8


@pytest.mark.parametrize("seed", range(40))
def test_goal_queries_keep_store_consistent(seed):
    rng = random.Random(1000 + seed)
    kb, _ = random_kb(rng)
    effects = sorted({t for o in kb.observations for t in o.effect_set}, key=str)
    goal = rng.choice(effects)
    store: list = []
    trace: list = []
    found = find_causation(kb, (Var("C"), goal), store, trace=trace)
    assert _store_consistent(store)
    assert all(c in store for c in found)
    assert all(e.depth <= 8 for e in trace)
    for c in found:
        # a ground goal scopes its side to the goal's category
        _mr_complete(kb, c, goal.category, 0, 8)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_oracle_equivalence_property(seed):
    kb, scope = random_kb(random.Random(seed))
    s = saturate(kb, Atom(Var("X", scope), Var("Y", scope)), STRICT_ALL)
    assert engine_triples(s.conjectures) == oracle_saturate(kb, scope, scope)
