"""Equivalence sweep: the resolution engine against the stable-model oracle."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator

from .engine import resolve
from .network import TrustNetwork, build_network
from .oracle import oracle_resolve

KEY = "k"


@dataclass
class VerifyReport:
    checked: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _users(n: int) -> list[str]:
    return [f"u{i}" for i in range(1, n + 1)]


def _small_exhaustive(n: int) -> Iterator[TrustNetwork]:
    """Every digraph on ``n`` users, priorities in {1, 2}, each user believing nothing, a or b."""
    users = _users(n)
    pairs = [(t, s) for t in users for s in users if t != s]
    for labels in itertools.product((None, 1, 2), repeat=len(pairs)):
        mappings = [(t, s, p) for (t, s), p in zip(pairs, labels) if p is not None]
        for held in itertools.product((None, "a", "b"), repeat=n):
            beliefs = [(u, KEY, v) for u, v in zip(users, held) if v is not None]
            yield build_network(users, mappings, beliefs)


def _four_users() -> Iterator[TrustNetwork]:
    """Every digraph on 4 users under two priority schemes and three belief patterns.

    Users are interchangeable, so fixing the believers to u1/u2 loses nothing.
    """
    users = _users(4)
    pairs = [(t, s) for t in users for s in users if t != s]
    patterns = [[("u1", "a")], [("u1", "a"), ("u2", "a")], [("u1", "a"), ("u2", "b")]]
    for mask in range(1 << len(pairs)):
        chosen = [pr for i, pr in enumerate(pairs) if mask >> i & 1]
        schemes = (
            [(t, s, 1) for t, s in chosen],
            [(t, s, 1 + (s < t)) for t, s in chosen],
        )
        for mappings in schemes:
            for pattern in patterns:
                yield build_network(users, mappings, [(u, KEY, v) for u, v in pattern])


def _five_users() -> Iterator[TrustNetwork]:
    """u1 believes a, u2 believes b; u3..u5 each trust one or two others, all priority orders."""
    users = _users(5)
    options = {}
    for x in users[2:]:
        others = [u for u in users if u != x]
        opts = [[(x, s, 1)] for s in others]
        for s1, s2 in itertools.combinations(others, 2):
            opts += [[(x, s1, 1), (x, s2, 1)], [(x, s1, 2), (x, s2, 1)], [(x, s1, 1), (x, s2, 2)]]
        options[x] = opts
    beliefs = [("u1", KEY, "a"), ("u2", KEY, "b")]
    for combo in itertools.product(*options.values()):
        yield build_network(users, [m for part in combo for m in part], beliefs)


def systematic_grid() -> Iterator[TrustNetwork]:
    for n in (1, 2, 3):
        yield from _small_exhaustive(n)
    yield from _four_users()
    yield from _five_users()


def random_instances(count: int, seed: int, max_users: int = 6, max_values: int = 3) -> Iterator[TrustNetwork]:
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_users)
        users = _users(n)
        values = "abc"[: rng.randint(1, max_values)]
        density = rng.random()
        mappings = [
            (t, s, rng.randint(0, 3))
            for t in users for s in users
            if t != s and rng.random() < density
        ]
        share = rng.random()
        beliefs = [(u, KEY, rng.choice(values)) for u in users if rng.random() < share]
        yield build_network(users, mappings, beliefs)


def check(net: TrustNetwork, report: VerifyReport) -> None:
    report.checked += 1
    got = resolve(net, KEY)
    want = oracle_resolve(net, KEY, limit=None)
    if got != want:
        report.mismatches.append((net, got, want))


def run_verify(seed: int = 0, random_count: int = 1000, grid: bool = True) -> VerifyReport:
    report = VerifyReport()
    if grid:
        for net in systematic_grid():
            check(net, report)
    for net in random_instances(random_count, seed):
        check(net, report)
    return report
