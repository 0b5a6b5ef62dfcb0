from collections import Counter

import pytest

from trustres.generators import (
    PRIORITY_RANGE, bulk_topology, cycle_cluster, gen_bulk_workload, gen_cycle_clusters, gen_nested_cycles,
    gen_scale_free, sample_edges,
)
from trustres.network import build_network, dumps_network
from trustres.oracle import count_stable_models


def test_cluster_counts():
    net = gen_cycle_clusters(1, seed=0)
    assert len(net.users) == 4 and len(net.beliefs) == 2
    assert count_stable_models(net, "k") == 2
    net3 = gen_cycle_clusters(3, seed=0)
    assert len(net3.users) == 12 and len(net3.beliefs) == 6
    assert count_stable_models(net3, "k") == 2 ** 3


def test_cluster_beliefs_distinct():
    net = gen_cycle_clusters(50, seed=9)
    by_cluster = {}
    for b in net.beliefs:
        by_cluster.setdefault(b.user[:-1], []).append(b.value)
    assert all(len(set(vs)) == 2 for vs in by_cluster.values())


def test_determinism():
    assert dumps_network(gen_cycle_clusters(1, 7)) == dumps_network(gen_cycle_clusters(1, 7))
    assert gen_scale_free(300, 2, 7) == gen_scale_free(300, 2, 7)
    assert gen_scale_free(300, 2, 7) != gen_scale_free(300, 2, 8)
    assert gen_nested_cycles(40, 3) == gen_nested_cycles(40, 3)
    assert gen_bulk_workload(30, 0.5, 1) == gen_bulk_workload(30, 0.5, 1)


def test_generated_networks_validate():
    for net in (gen_cycle_clusters(5, 1), gen_scale_free(200, 3, 1), gen_nested_cycles(51, 1), bulk_topology()):
        assert build_network(net.users, net.mappings, net.beliefs) == net


def test_scale_free_heavy_tail():
    for seed in range(20):
        net = gen_scale_free(1000, 2, seed)
        assert 1900 <= len(net.mappings) <= 2000
        lo, hi = PRIORITY_RANGE
        assert all(lo <= m.priority <= hi for m in net.mappings)
        # a link points at the trusted user, as a hyperlink points at the page it endorses
        indeg = Counter(m.source for m in net.mappings)
        top = sum(sorted(indeg.values(), reverse=True)[:10])
        assert top / len(net.mappings) >= 0.15


def test_sample_edges():
    net = gen_scale_free(300, 2, 1)
    assert sample_edges(net, 1.0, 5) == net
    big = gen_scale_free(25_000, 2, 3)
    assert abs(len(big.mappings) - 50_000) < 100
    half = sample_edges(big, 0.5, 3)
    assert abs(len(half.mappings) - len(big.mappings) / 2) <= 0.03 * len(big.mappings) / 2
    assert half.mappings <= big.mappings
    for m in half.mappings:
        assert m.target in half.users and m.source in half.users
    with pytest.raises(ValueError):
        sample_edges(net, 0, 1)


def test_nested_shape():
    net = gen_nested_cycles(1000, 0)
    assert len(net.users) == 1000
    assert len(gen_nested_cycles(1001, 0).users) == 1001
    with pytest.raises(ValueError):
        gen_nested_cycles(7)


def test_bulk_workload_counts():
    t = gen_bulk_workload(100, 0.5, seed=3)
    assert len(t.rows) == 200
    conflicts = sum(1 for k in t.keys() if len({r.value for r in t.slice(k)}) == 2)
    assert conflicts == 50
    assert all(len({r.value for r in gen_bulk_workload(40, 0.0, 1).slice(k)}) == 1 for k in gen_bulk_workload(40, 0.0, 1).keys())
    full = gen_bulk_workload(40, 1.0, 1)
    assert all(len({r.value for r in full.slice(k)}) == 2 for k in full.keys())


def test_single_cluster_wiring():
    net = cycle_cluster("c", "x", "y")
    assert net.beliefs_for("k") == {"ca": "x", "cb": "y"}


def test_bad_seed():
    with pytest.raises(ValueError):
        gen_cycle_clusters(1, seed=-1)
    with pytest.raises(ValueError):
        gen_cycle_clusters(1, seed=2**64)
