"""Brute-force stable-model semantics for one (network, key) instance.

The network is translated into a ground normal logic program whose only atoms
are ``val(user, value)``.  For a user ``x`` without an explicit belief, every
trusted source ``z`` of ``x`` at priority ``p`` and every value ``v`` give the
rule::

    val(x,v) :- val(z,v), not val(y,w) ..., not val(x,w') ...

where the first group of negative literals ranges over every source ``y`` of
``x`` with priority strictly above ``p`` and every value ``w != v`` (a more
trusted source holding a conflicting value blocks the flow), and the second
group over every ``w' != v`` (the user holds at most one value; this is the
choice point when equally trusted sources disagree).  Explicit beliefs are
facts.  With one source per priority level this is the preferred /
non-preferred edge program of the binary trust network, written without the
auxiliary ``blocked`` predicate.

Stable models are enumerated exhaustively by branching on the atoms that occur
negatively, bounded on both sides by least models of partial reducts.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DomainTooLarge, NotDefinite, ParseError
from .network import TrustNetwork, active_domain
from .result import ResolutionResult

DEFAULT_ATOM_LIMIT = 24


@dataclass(frozen=True, order=True)
class Atom:
    pred: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(map(str, self.args))})"


def val(user, value) -> Atom:
    return Atom("val", (user, value))


@dataclass(frozen=True)
class GroundRule:
    head: Atom
    positive_body: frozenset = frozenset()
    negative_body: frozenset = frozenset()

    def __str__(self):
        lits = [str(a) for a in sorted(self.positive_body)]
        lits += [f"not {a}" for a in sorted(self.negative_body)]
        if not lits:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(lits)}."


@dataclass(frozen=True)
class GroundProgram:
    rules: tuple = ()
    atom_universe: frozenset = frozenset()

    @classmethod
    def of(cls, rules: Iterable[GroundRule], extra_atoms=()) -> "GroundProgram":
        rules = tuple(rules)
        universe = set(extra_atoms)
        for r in rules:
            universe.add(r.head)
            universe.update(r.positive_body)
            universe.update(r.negative_body)
        return cls(rules, frozenset(universe))

    def dump(self) -> str:
        return "".join(f"{r}\n" for r in self.rules)


Interpretation = frozenset


# -- textual programs (debug dumps, golden files, tests) ---------------------

_ATOM_RE = re.compile(r"\s*([A-Za-z_][\w]*)\s*(?:\(([^()]*)\))?\s*$")


def parse_atom(text: str) -> Atom:
    m = _ATOM_RE.match(text)
    if not m:
        raise ParseError(f"bad atom {text!r}")
    args = tuple(a.strip() for a in m.group(2).split(",")) if m.group(2) is not None else ()
    return Atom(m.group(1), args)


def _split_body(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_program(text: str) -> GroundProgram:
    """Parse rules written as ``head :- a, not b.`` (facts as ``head.``), one or more per line."""
    rules = []
    for stmt in re.split(r"\.\s*(?=\S|$)", text.strip()):
        stmt = stmt.strip().rstrip(".")
        if not stmt or stmt.startswith("%"):
            continue
        head, _, body = stmt.partition(":-")
        pos, neg = set(), set()
        for lit in _split_body(body):
            if lit.startswith("not "):
                neg.add(parse_atom(lit[4:]))
            else:
                pos.add(parse_atom(lit))
        rules.append(GroundRule(parse_atom(head), frozenset(pos), frozenset(neg)))
    return GroundProgram.of(rules)


# -- translation -------------------------------------------------------------

def translate_to_program(net: TrustNetwork, key, limit: int | None = DEFAULT_ATOM_LIMIT) -> GroundProgram:
    domain = sorted(active_domain(net, key))
    believed = net.beliefs_for(key)
    parents = net.parents

    # Atoms outside the least model of the positive parts are false in every
    # stable model, so positive literals on them kill the rule and negative
    # ones are dropped.  That model is "v flows from a believer to x".
    children: dict = {}
    for m in net.mappings:
        children.setdefault(m.source, []).append(m.target)
    derivable = {val(u, v) for u, v in believed.items()}
    stack = list(believed.items())
    while stack:
        z, v = stack.pop()
        for x in children.get(z, ()):
            if x not in believed and val(x, v) not in derivable:
                derivable.add(val(x, v))
                stack.append((x, v))

    rules = [GroundRule(val(u, v)) for u, v in sorted(believed.items())]
    for x in sorted(net.users):
        if x in believed:
            continue
        for z, p in parents[x]:
            higher = [y for y, q in parents[x] if q > p]
            for v in domain:
                if val(z, v) not in derivable:
                    continue
                neg = {val(y, w) for y in higher for w in domain if w != v}
                neg.update(val(x, w) for w in domain if w != v)
                neg &= derivable
                rules.append(GroundRule(val(x, v), frozenset({val(z, v)}), frozenset(neg)))
    program = GroundProgram.of(rules)
    if limit is not None and len(program.atom_universe) > limit:
        raise DomainTooLarge(len(program.atom_universe), limit)
    return program


# -- Gelfond-Lifschitz machinery ---------------------------------------------

def reduct(program: GroundProgram, m) -> GroundProgram:
    m = frozenset(m)
    kept = tuple(
        GroundRule(r.head, r.positive_body)
        for r in program.rules
        if not (r.negative_body & m)
    )
    return GroundProgram(kept, program.atom_universe)


def _least_model(rules) -> set:
    """Least fixpoint of the immediate-consequence operator over ``(head, positive_body)`` pairs."""
    waiting: dict = {}
    missing = []
    derived = set()
    queue = []
    for i, (head, pos) in enumerate(rules):
        missing.append(len(pos))
        if not pos:
            queue.append(head)
        for a in pos:
            waiting.setdefault(a, []).append(i)
    while queue:
        a = queue.pop()
        if a in derived:
            continue
        derived.add(a)
        for i in waiting.get(a, ()):
            missing[i] -= 1
            if missing[i] == 0:
                queue.append(rules[i][0])
    return derived


def minimal_model(definite_program: GroundProgram) -> Interpretation:
    for r in definite_program.rules:
        if r.negative_body:
            raise NotDefinite(f"rule {r} has a negative body")
    return frozenset(_least_model([(r.head, r.positive_body) for r in definite_program.rules]))


def is_stable_model(program: GroundProgram, m) -> bool:
    m = frozenset(m)
    return minimal_model(reduct(program, m)) == m


def _search(program: GroundProgram) -> Iterator[frozenset]:
    rules = program.rules
    neg_atoms = sorted({a for r in rules for a in r.negative_body})

    def bounds(assign):
        low = _least_model([
            (r.head, r.positive_body) for r in rules
            if all(assign.get(a) is False for a in r.negative_body)
        ])
        up = _least_model([
            (r.head, r.positive_body) for r in rules
            if not any(assign.get(a) for a in r.negative_body)
        ])
        return low, up

    def visit(assign):
        while True:
            low, up = bounds(assign)
            changed = False
            for a in neg_atoms:
                state = assign.get(a)
                if state is True and a not in up:
                    return
                if state is False and a in low:
                    return
                if state is None:
                    if a in low:
                        assign[a] = True
                        changed = True
                    elif a not in up:
                        assign[a] = False
                        changed = True
            if not changed:
                break
        open_atoms = [a for a in neg_atoms if a not in assign]
        if not open_atoms:
            yield frozenset(low)
            return
        pick = open_atoms[0]
        for choice in (True, False):
            yield from visit({**assign, pick: choice})

    yield from visit({})


def enumerate_stable_models(program: GroundProgram, limit: int | None = DEFAULT_ATOM_LIMIT) -> list[Interpretation]:
    """All stable models, sorted by their sorted atom lists."""
    if limit is not None and len(program.atom_universe) > limit:
        raise DomainTooLarge(len(program.atom_universe), limit)
    return sorted(set(_search(program)), key=lambda m: sorted(m))


def brute_force_stable_models(program: GroundProgram) -> list[Interpretation]:
    """Check every subset of the atom universe; only for tiny programs."""
    atoms = sorted(program.atom_universe)
    found = []
    for mask in range(1 << len(atoms)):
        m = frozenset(a for i, a in enumerate(atoms) if mask >> i & 1)
        if is_stable_model(program, m):
            found.append(m)
    return sorted(found, key=lambda m: sorted(m))


def oracle_resolve(net: TrustNetwork, key, limit: int | None = DEFAULT_ATOM_LIMIT) -> ResolutionResult:
    program = translate_to_program(net, key, limit)
    models = enumerate_stable_models(program, limit)
    if not models:
        return ResolutionResult(key, {}, {}, no_stable_solution=True)
    per_model = []
    for m in models:
        held: dict = {}
        for a in m:
            user, value = a.args
            if user in held:
                raise AssertionError(f"stable model gives {user!r} two values")
            held[user] = value
        per_model.append(held)
    possible: dict = {}
    for held in per_model:
        for user, value in held.items():
            possible.setdefault(user, set()).add(value)
    certain = {}
    for user in possible:
        first = per_model[0].get(user)
        if first is not None and all(h.get(user) == first for h in per_model):
            certain[user] = first
    return ResolutionResult(key, possible, certain)


def count_stable_models(net: TrustNetwork, key, limit: int | None = DEFAULT_ATOM_LIMIT) -> int:
    return len(enumerate_stable_models(translate_to_program(net, key, limit), limit))
