import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import rand_net
from trustres.errors import DomainTooLarge, NotDefinite
from trustres.generators import cycle_cluster, gen_cycle_clusters
from trustres.oracle import (
    Atom, GroundProgram, GroundRule, brute_force_stable_models, count_stable_models, enumerate_stable_models,
    is_stable_model, minimal_model, oracle_resolve, parse_atom, parse_program, reduct, translate_to_program, val,
)

a, b, c = Atom("a"), Atom("b"), Atom("c")


def models(text):
    return [set(map(str, m)) for m in enumerate_stable_models(parse_program(text))]


def test_parse_round_trip():
    prog = parse_program("val(u3,a) :- val(u1,a), not val(u3,b).\nx.")
    assert prog.dump() == "val(u3,a) :- val(u1,a), not val(u3,b).\nx.\n"
    assert parse_atom("val(u1, a)") == val("u1", "a")


def test_reduct():
    p = parse_program("a :- not b.")
    assert reduct(p, {a}).rules == (GroundRule(a),)
    assert reduct(p, {b}).rules == ()
    assert reduct(parse_program("a :- b, not c."), set()).rules == (GroundRule(a, frozenset({b})),)


def test_minimal_model():
    assert minimal_model(parse_program("a. b :- a.")) == {a, b}
    assert minimal_model(GroundProgram()) == set()
    assert minimal_model(parse_program("a :- b.")) == set()
    with pytest.raises(NotDefinite):
        minimal_model(parse_program("a :- not b."))


def test_is_stable_model():
    even = parse_program("a :- not b. b :- not a.")
    assert is_stable_model(even, {a})
    assert not is_stable_model(even, {a, b})
    assert not is_stable_model(parse_program("a :- not a."), {a})
    assert not is_stable_model(parse_program("a."), set())


def test_textbook_programs():
    assert models("a.") == [{"a"}]
    assert models("a :- not b. b :- not a.") == [{"a"}, {"b"}]
    assert models("a :- not a.") == []
    assert models("a. b :- a. c :- d.") == [{"a", "b"}]
    # p :- not q, q :- not p, with r :- p, r :- q gives r in both models
    assert models("p :- not q. q :- not p. r :- p. r :- q.") == [{"p", "r"}, {"q", "r"}]
    # the odd loop kills the branch where b is false
    assert models("a :- not b. b :- not a. c :- a, not c.") == [{"b"}]


def test_atom_limit():
    rules = [GroundRule(Atom(f"x{i}")) for i in range(25)]
    prog = GroundProgram.of(rules)
    with pytest.raises(DomainTooLarge):
        enumerate_stable_models(prog)
    assert len(enumerate_stable_models(prog, limit=None)) == 1


def random_program(rng, n_atoms=5, n_rules=7):
    atoms = [Atom(f"p{i}") for i in range(n_atoms)]
    rules = []
    for _ in range(n_rules):
        pos = frozenset(rng.sample(atoms, rng.randint(0, 2)))
        neg = frozenset(rng.sample(atoms, rng.randint(0, 2)))
        rules.append(GroundRule(rng.choice(atoms), pos, neg))
    return GroundProgram.of(rules)


@pytest.mark.parametrize("seed", range(300))
def test_search_matches_brute_force(seed):
    prog = random_program(random.Random(seed))
    found = enumerate_stable_models(prog)
    assert found == brute_force_stable_models(prog)
    for m1, m2 in itertools.combinations(found, 2):
        assert not m1 <= m2 and not m2 <= m1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 2**32))
def test_disjoint_programs_multiply(s1, s2):
    p = random_program(random.Random(s1), 4, 5)
    q = random_program(random.Random(s2), 4, 5)
    q = GroundProgram.of(
        GroundRule(Atom("q" + r.head.pred), frozenset(Atom("q" + x.pred) for x in r.positive_body),
                   frozenset(Atom("q" + x.pred) for x in r.negative_body))
        for r in q.rules
    )
    joint = GroundProgram.of(p.rules + q.rules)
    mp, mq = enumerate_stable_models(p), enumerate_stable_models(q)
    assert len(enumerate_stable_models(joint)) == len(mp) * len(mq)
    assert set(enumerate_stable_models(joint)) == {x | y for x in mp for y in mq}


def test_translation_golden(n2, n3, n4):
    assert translate_to_program(n2, "k").dump() == (
        "val(u1,a).\n"
        "val(u2,a) :- val(u1,a).\n"
    )
    assert translate_to_program(n4, "k").dump() == (
        "val(u1,a).\n"
        "val(u2,b).\n"
        "val(u3,a) :- val(u1,a), not val(u3,b).\n"
        "val(u3,b) :- val(u2,b), not val(u3,a).\n"
    )
    assert translate_to_program(n3, "k").dump() == (
        "val(u1,a).\n"
        "val(u2,b).\n"
        "val(u3,a) :- val(u1,a), not val(u3,b).\n"
        "val(u3,b) :- val(u2,b), not val(u1,a), not val(u3,a).\n"
    )


def test_translation_limit():
    net = gen_cycle_clusters(5, seed=1)
    with pytest.raises(DomainTooLarge):
        translate_to_program(net, "k")
    assert len(translate_to_program(net, "k", limit=None).atom_universe) == 30


def test_n1_n2(n1, n2):
    assert [set(m) for m in enumerate_stable_models(translate_to_program(n1, "k"))] == [{val("u1", "a")}]
    assert brute_force_stable_models(translate_to_program(n2, "k")) == [frozenset({val("u1", "a"), val("u2", "a")})]
    r = oracle_resolve(n1, "k")
    assert r.possible == {"u1": {"a"}} and r.certain == {"u1": "a"}


def test_n3_n4(n3, n4):
    found = brute_force_stable_models(translate_to_program(n4, "k"))
    assert len(found) == 2
    assert {val("u3", "a")} <= found[0] and {val("u3", "b")} <= found[1]
    r3 = oracle_resolve(n3, "k")
    assert r3.possible_of("u3") == {"a"} and r3.certain["u3"] == "a"
    r4 = oracle_resolve(n4, "k")
    assert r4.possible_of("u3") == {"a", "b"} and "u3" not in r4.certain


def test_cluster_model_counts():
    assert count_stable_models(cycle_cluster("c", "a", "b"), "k") == 2
    assert count_stable_models(gen_cycle_clusters(3, seed=5), "k") == 8


@pytest.mark.parametrize("seed", range(200))
def test_translated_models_one_value_per_user(seed):
    net = rand_net(random.Random(seed), max_users=4, values="ab")
    prog = translate_to_program(net, "k")
    found = enumerate_stable_models(prog)
    if len(prog.atom_universe) <= 10:
        assert found == brute_force_stable_models(prog)
    for m in found:
        users = [x.args[0] for x in m]
        assert len(users) == len(set(users))
    r = oracle_resolve(net, "k")
    for u, v in r.certain.items():
        assert r.possible[u] == {v}
