"""Seed-deterministic workload generators.

All randomness comes from :class:`random.Random` (Mersenne Twister MT19937)
seeded with the caller's 64-bit seed.  Its output sequence is fixed by the
Python language reference for a given integer seed, so a (parameters, seed)
pair always yields the same network on every platform.
"""
from __future__ import annotations

import math
import random

from .bulk import PossRow, PossTable
from .network import TrustNetwork, build_network

KEY = "k"
VALUE_RANGE = 10
PRIORITY_RANGE = (1, 10)


def _rng(seed: int) -> random.Random:
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return random.Random(seed)


def _values(n: int = VALUE_RANGE) -> list[str]:
    return [f"v{i}" for i in range(n)]


def _cluster_parts(prefix: str, first: str, second: str, key: str):
    a, b, c, d = (f"{prefix}{s}" for s in "abcd")
    users = [a, b, c, d]
    mappings = [(c, d, 2), (d, c, 2), (c, a, 1), (d, b, 1)]
    beliefs = [(a, key, first), (b, key, second)]
    return users, mappings, beliefs


def cycle_cluster(prefix: str, first: str, second: str, key: str = KEY) -> TrustNetwork:
    """One 4-user oscillator: two believers feeding a mutual-trust pair.

    ``{prefix}a`` and ``{prefix}b`` believe ``first`` and ``second``.  The pair
    ``{prefix}c`` / ``{prefix}d`` trust each other at priority 2 and each
    trusts one believer at the shared lower priority 1, so the pair settles on
    either value and the cluster has exactly two stable solutions.
    """
    return build_network(*_cluster_parts(prefix, first, second, key))


def gen_cycle_clusters(n_clusters: int, seed: int = 0, key: str = KEY) -> TrustNetwork:
    """``n_clusters`` disconnected copies of :func:`cycle_cluster`, each with its own value pair."""
    if n_clusters < 1:
        raise ValueError("n_clusters must be at least 1")
    rng = _rng(seed)
    values = _values()
    width = len(str(n_clusters - 1))
    users, mappings, beliefs = [], [], []
    for i in range(n_clusters):
        first, second = rng.sample(values, 2)
        u, m, b = _cluster_parts(f"c{i:0{width}d}", first, second, key)
        users += u
        mappings += m
        beliefs += b
    return build_network(users, mappings, beliefs)


def gen_scale_free(
    n_nodes: int,
    edges_per_node: int,
    seed: int = 0,
    belief_fraction: float = 0.5,
    n_values: int = VALUE_RANGE,
    reverse_fraction: float = 0.2,
    key: str = KEY,
) -> TrustNetwork:
    """Directed preferential attachment with random priorities.

    Each arriving user adds ``edges_per_node`` links to existing users picked
    with probability proportional to ``1 + times already trusted``.  A link
    normally means "newcomer trusts the popular user"; a ``reverse_fraction``
    share is flipped so that the graph contains cycles.
    """
    if n_nodes < 2 or edges_per_node < 1:
        raise ValueError("need n_nodes >= 2 and edges_per_node >= 1")
    rng = _rng(seed)
    width = len(str(n_nodes - 1))
    users = [f"w{i:0{width}d}" for i in range(n_nodes)]
    # Each user appears once plus once per time it is trusted.
    urn = [0]
    pairs: dict[tuple[str, str], int] = {}
    lo, hi = PRIORITY_RANGE
    for new in range(1, n_nodes):
        targets = set()
        wanted = min(edges_per_node, new)
        while len(targets) < wanted:
            targets.add(urn[rng.randrange(len(urn))])
        for old in sorted(targets):
            if rng.random() < reverse_fraction:
                pair = (users[old], users[new])
            else:
                pair = (users[new], users[old])
                urn.append(old)
            pairs[pair] = rng.randint(lo, hi)
        urn.append(new)
    values = _values(n_values)
    beliefs = [(u, key, rng.choice(values)) for u in users if rng.random() < belief_fraction]
    return build_network(users, [(t, s, p) for (t, s), p in pairs.items()], beliefs)


def sample_edges(net: TrustNetwork, fraction: float, seed: int = 0) -> TrustNetwork:
    """Keep a uniform ``fraction`` of mappings plus exactly their endpoints.

    Beliefs of users that survive are kept.
    """
    if not 0 < fraction <= 1:
        raise ValueError("fraction must be in (0, 1]")
    if fraction == 1:
        return net
    rng = _rng(seed)
    ordered = sorted(net.mappings)
    kept = rng.sample(ordered, round(fraction * len(ordered)))
    users = {m.target for m in kept} | {m.source for m in kept}
    beliefs = [b for b in net.beliefs if b.user in users]
    return build_network(sorted(users), kept, beliefs)


def gen_nested_cycles(n_users: int, seed: int = 0, key: str = KEY) -> TrustNetwork:
    """Worst-case family: a ladder of mutual-trust pairs hung off a two-user spine.

    Spine users ``s`` and ``t`` believe two different values.  Layer ``i`` is a
    pair ``x_i``/``y_i`` trusting each other at the highest priority.  Every
    ``x_i`` also trusts ``s`` at the lowest priority and the previous layer's
    ``x_{i-1}`` (``t`` for the first layer) at a middle priority, and
    ``x_{i-1}`` trusts ``y_i`` at priority 0, which closes every layer into
    one strongly connected block.  Ruling ``s``'s value out of layer ``i``
    requires first ruling it out of layer ``i-1``, which costs one linear pass
    over the block per layer.
    """
    if n_users < 8:
        raise ValueError("n_users must be at least 8")
    rng = _rng(seed)
    held_s, held_t = rng.sample(_values(), 2)
    layers = (n_users - 2) // 2
    width = len(str(layers))
    xs = [f"x{i:0{width}d}" for i in range(layers)]
    ys = [f"y{i:0{width}d}" for i in range(layers)]
    users = ["s", "t"] + xs + ys
    mappings = []
    for i in range(layers):
        mappings += [(xs[i], ys[i], 3), (ys[i], xs[i], 3), (xs[i], "s", 1)]
        mappings.append((xs[i], xs[i - 1] if i else "t", 2))
        if i:
            mappings.append((xs[i - 1], ys[i], 0))
    if len(users) < n_users:
        users.append("z")
        mappings.append(("z", "s", 1))
    return build_network(users, mappings, [("s", key, held_s), ("t", key, held_t)])


# -- bulk workloads --------------------------------------------------------

BULK_BELIEVERS = ("u1", "u2")


def bulk_topology() -> TrustNetwork:
    """The fixed 7-user / 12-mapping topology used for bulk experiments.

    ``u1`` and ``u2`` are the designated believers; ``u3``/``u4`` form an
    oscillator between them, and ``u6``/``u7`` a second cycle with a tie.
    """
    users = [f"u{i}" for i in range(1, 8)]
    mappings = [
        ("u3", "u1", 1), ("u3", "u4", 2), ("u4", "u3", 2), ("u4", "u2", 1),
        ("u5", "u3", 2), ("u5", "u2", 1),
        ("u6", "u5", 1), ("u6", "u7", 1),
        ("u7", "u6", 2), ("u7", "u1", 1),
        ("u1", "u3", 1), ("u2", "u4", 1),
    ]
    return build_network(users, mappings)


def gen_bulk_workload(n_objects: int, conflict_fraction: float, seed: int = 0) -> PossTable:
    if not 0 <= conflict_fraction <= 1:
        raise ValueError("conflict_fraction must be in [0, 1]")
    rng = _rng(seed)
    width = len(str(max(n_objects - 1, 0)))
    keys = [f"o{i:0{width}d}" for i in range(n_objects)]
    conflicting = set(rng.sample(range(n_objects), math.floor(conflict_fraction * n_objects)))
    values = _values()
    first_user, second_user = BULK_BELIEVERS
    rows = []
    for i, k in enumerate(keys):
        if i in conflicting:
            a, b = rng.sample(values, 2)
        else:
            a = b = rng.choice(values)
        rows.append(PossRow(first_user, k, a))
        rows.append(PossRow(second_user, k, b))
    return PossTable(tuple(rows))
