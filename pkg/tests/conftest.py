import random

import pytest

from trustres.network import build_network


def rand_net(rng: random.Random, max_users=6, values="abc", key="k", prio=(0, 3)):
    n = rng.randint(1, max_users)
    users = [f"u{i}" for i in range(1, n + 1)]
    density = rng.random()
    mappings = [(t, s, rng.randint(*prio)) for t in users for s in users if t != s and rng.random() < density]
    beliefs = [(u, key, rng.choice(values)) for u in users if rng.random() < 0.5]
    return build_network(users, mappings, beliefs)


@pytest.fixture
def n1():
    return build_network(["u1"], [], [("u1", "k", "a")])


@pytest.fixture
def n2():
    return build_network(["u1", "u2"], [("u2", "u1", 1)], [("u1", "k", "a")])


@pytest.fixture
def n3():
    return build_network(["u1", "u2", "u3"], [("u3", "u1", 2), ("u3", "u2", 1)],
                         [("u1", "k", "a"), ("u2", "k", "b")])


@pytest.fixture
def n4():
    return build_network(["u1", "u2", "u3"], [("u3", "u1", 1), ("u3", "u2", 1)],
                         [("u1", "k", "a"), ("u2", "k", "b")])


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
