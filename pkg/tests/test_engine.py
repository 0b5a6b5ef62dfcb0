import itertools
import random

import pytest

from conftest import rand_net
from trustres.engine import condense, resolve, resolve_all_keys, strongly_connected
from trustres.generators import cycle_cluster, gen_cycle_clusters
from trustres.network import build_network, disjoint_union
from trustres.oracle import oracle_resolve


def test_examples(n1, n3, n4):
    r = resolve(n1, "k")
    assert r.possible == {"u1": {"a"}} and r.certain == {"u1": "a"}
    assert resolve(n3, "k") == oracle_resolve(n3, "k")
    assert resolve(n3, "k").certain == {"u1": "a", "u2": "b", "u3": "a"}
    r4 = resolve(n4, "k")
    assert r4.possible_of("u3") == {"a", "b"} and "u3" not in r4.certain


def test_unreachable_user_has_no_opinion():
    net = build_network(["u1", "u2", "u3"], [("u2", "u1", 1), ("u1", "u3", 1)], [("u1", "k", "a")])
    r = resolve(net, "k")
    assert r.possible_of("u3") == set() and "u3" not in r.certain


def test_three_clusters():
    clusters = [cycle_cluster(p, x, y) for p, x, y in [("a", "v1", "v2"), ("b", "v1", "v3"), ("c", "v4", "v5")]]
    net = clusters[0]
    for cl in clusters[1:]:
        net = disjoint_union(net, cl)
    whole = resolve(net, "k")
    assert whole == oracle_resolve(net, "k")
    for cl in clusters:
        assert whole.restrict(cl.users) == resolve(cl, "k") == oracle_resolve(cl, "k")
        # the oscillating pair can take either believer's value
        assert len(whole.possible_of(sorted(cl.users)[2])) == 2


def test_explicit_beliefs_are_fixed():
    net = build_network(["u1", "u2"], [("u1", "u2", 9)], [("u1", "k", "a"), ("u2", "k", "b")])
    r = resolve(net, "k")
    assert r.possible == {"u1": {"a"}, "u2": {"b"}}


@pytest.mark.parametrize("seed", range(500))
def test_matches_oracle(seed):
    net = rand_net(random.Random(seed), max_users=6)
    assert resolve(net, "k") == oracle_resolve(net, "k", limit=None)


def test_cluster_family_matches_oracle():
    net = gen_cycle_clusters(4, seed=3)
    assert resolve(net, "k") == oracle_resolve(net, "k")


def test_resolve_all_keys():
    net = build_network(["u1", "u2", "u3"], [("u3", "u1", 1), ("u3", "u2", 1)],
                        [("u1", "k2", "a"), ("u2", "k1", "b"), ("u1", "k1", "c")])
    results = resolve_all_keys(net)
    assert [r.key for r in results] == ["k1", "k2"]
    assert results == [resolve(net, "k1"), resolve(net, "k2")]
    assert resolve_all_keys(build_network(["u1"])) == []


def test_disjoint_union_compositional():
    rng = random.Random(11)
    for _ in range(50):
        x = rand_net(rng)
        y = rand_net(rng)
        y = build_network([f"y{u}" for u in y.users], [(f"y{m.target}", f"y{m.source}", m.priority) for m in y.mappings],
                          [(f"y{b.user}", b.key, b.value) for b in y.beliefs])
        assert resolve(disjoint_union(x, y), "k").restrict(x.users) == resolve(x, "k")


def test_condense_chain_and_cycle():
    chain = build_network(["u1", "u2", "u3"], [("u2", "u1", 1), ("u3", "u2", 1)])
    assert condense(chain).components == (("u1",), ("u2",), ("u3",))
    pair = build_network(["u3", "u4"], [("u3", "u4", 1), ("u4", "u3", 1)])
    assert condense(pair).components == (("u3", "u4"),)


def reaches(net, x, y):
    seen, stack = {x}, [x]
    while stack:
        z = stack.pop()
        for m in net.mappings:
            if m.source == z and m.target not in seen:
                seen.add(m.target)
                stack.append(m.target)
    return y in seen


@pytest.mark.parametrize("seed", range(40))
def test_condense_against_reachability(seed):
    net = rand_net(random.Random(seed), max_users=7) if seed else cycle_cluster("c", "a", "b")
    cond = condense(net)
    for x, y in itertools.combinations(sorted(net.users), 2):
        same = cond.component_of[x] == cond.component_of[y]
        assert same == (reaches(net, x, y) and reaches(net, y, x))
    for i, j in cond.dag_edges(net):
        assert i < j


def test_strongly_connected_ignores_outside_nodes():
    succ = {1: [2], 2: [1, 3], 3: [1]}
    comps = strongly_connected([1, 2], succ.__getitem__)
    assert [sorted(c) for c in comps] == [[1, 2]]
