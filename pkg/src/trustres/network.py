"""Trust-network data model, validation, edits and the JSON interchange format.

A network is an immutable value.  Every edit returns a new network, so two edit
sequences that end in the same (users, mappings, beliefs) state compare equal.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    DuplicateBelief,
    DuplicateMapping,
    ParseError,
    SelfTrust,
    UnknownUser,
    UserOverlap,
    ValidationError,
)

UserId = str
Key = str
Value = str


def check_user_id(token) -> str:
    if not isinstance(token, str) or not token:
        raise ValidationError(f"user id must be a non-empty string, got {token!r}")
    if "," in token or any(c.isspace() for c in token):
        raise ValidationError(f"user id {token!r} contains a comma or whitespace")
    return token


def check_token(token, what: str) -> str:
    if not isinstance(token, str) or not token:
        raise ValidationError(f"{what} must be a non-empty string, got {token!r}")
    return token


@dataclass(frozen=True, order=True)
class TrustMapping:
    """``target`` trusts ``source`` with ``priority`` (larger is more trusted)."""

    target: UserId
    source: UserId
    priority: int

    def __post_init__(self):
        check_user_id(self.target)
        check_user_id(self.source)
        if isinstance(self.priority, bool) or not isinstance(self.priority, int) or self.priority < 0:
            raise ValidationError(f"priority must be an unsigned integer, got {self.priority!r}")


@dataclass(frozen=True, order=True)
class ExplicitBelief:
    user: UserId
    key: Key
    value: Value

    def __post_init__(self):
        check_user_id(self.user)
        check_token(self.key, "key")
        check_token(self.value, "value")


def _as_mapping(m) -> TrustMapping:
    if isinstance(m, TrustMapping):
        return m
    if isinstance(m, Mapping):
        return TrustMapping(m["target"], m["source"], m["priority"])
    return TrustMapping(*m)


def _as_belief(b) -> ExplicitBelief:
    if isinstance(b, ExplicitBelief):
        return b
    if isinstance(b, Mapping):
        return ExplicitBelief(b["user"], b["key"], b["value"])
    return ExplicitBelief(*b)


@dataclass(frozen=True)
class TrustNetwork:
    users: frozenset = frozenset()
    mappings: frozenset = frozenset()
    beliefs: frozenset = frozenset()

    @property
    def size(self) -> int:
        return len(self.users) + len(self.mappings)

    @cached_property
    def parents(self) -> dict[UserId, list[tuple[UserId, int]]]:
        """Trusted sources per user as ``(source, priority)``, sorted for determinism."""
        out: dict[UserId, list[tuple[UserId, int]]] = {u: [] for u in self.users}
        for m in sorted(self.mappings):
            out[m.target].append((m.source, m.priority))
        return out

    @cached_property
    def belief_index(self) -> dict[tuple[UserId, Key], Value]:
        return {(b.user, b.key): b.value for b in self.beliefs}

    def beliefs_for(self, key: Key) -> dict[UserId, Value]:
        return {b.user: b.value for b in self.beliefs if b.key == key}

    def keys(self) -> list[Key]:
        return sorted({b.key for b in self.beliefs})


def build_network(users: Iterable, mappings: Iterable = (), beliefs: Iterable = ()) -> TrustNetwork:
    """Validate raw inputs and return a network.

    Mappings may be given as :class:`TrustMapping`, dicts with the JSON field
    names, or ``(target, source, priority)`` tuples; beliefs likewise.
    """
    user_list = [check_user_id(u) for u in users]
    user_set = frozenset(user_list)
    if len(user_set) != len(user_list):
        raise ValidationError("duplicate user id")

    seen_pairs = set()
    mapping_set = set()
    for raw in mappings:
        m = _as_mapping(raw)
        for endpoint in (m.target, m.source):
            if endpoint not in user_set:
                raise UnknownUser(f"mapping references unknown user {endpoint!r}")
        if m.target == m.source:
            raise SelfTrust(f"user {m.target!r} cannot trust itself")
        if (m.target, m.source) in seen_pairs:
            raise DuplicateMapping(f"duplicate mapping {m.target!r} <- {m.source!r}")
        seen_pairs.add((m.target, m.source))
        mapping_set.add(m)

    seen_slots = set()
    belief_set = set()
    for raw in beliefs:
        b = _as_belief(raw)
        if b.user not in user_set:
            raise UnknownUser(f"belief references unknown user {b.user!r}")
        if (b.user, b.key) in seen_slots:
            raise DuplicateBelief(f"two beliefs for user {b.user!r} on key {b.key!r}")
        seen_slots.add((b.user, b.key))
        belief_set.add(b)

    return TrustNetwork(user_set, frozenset(mapping_set), frozenset(belief_set))


def insert_belief(net: TrustNetwork, belief) -> TrustNetwork:
    b = _as_belief(belief)
    if b.user not in net.users:
        raise UnknownUser(f"unknown user {b.user!r}")
    kept = {x for x in net.beliefs if (x.user, x.key) != (b.user, b.key)}
    kept.add(b)
    return TrustNetwork(net.users, net.mappings, frozenset(kept))


def revoke_belief(net: TrustNetwork, user: UserId, key: Key) -> TrustNetwork:
    kept = frozenset(x for x in net.beliefs if (x.user, x.key) != (user, key))
    if len(kept) == len(net.beliefs):
        return net
    return TrustNetwork(net.users, net.mappings, kept)


def add_mapping(net: TrustNetwork, mapping) -> TrustNetwork:
    m = _as_mapping(mapping)
    for endpoint in (m.target, m.source):
        if endpoint not in net.users:
            raise UnknownUser(f"unknown user {endpoint!r}")
    if m.target == m.source:
        raise SelfTrust(f"user {m.target!r} cannot trust itself")
    kept = {x for x in net.mappings if (x.target, x.source) != (m.target, m.source)}
    kept.add(m)
    return TrustNetwork(net.users, frozenset(kept), net.beliefs)


def revoke_mapping(net: TrustNetwork, target: UserId, source: UserId) -> TrustNetwork:
    kept = frozenset(x for x in net.mappings if (x.target, x.source) != (target, source))
    if len(kept) == len(net.mappings):
        return net
    return TrustNetwork(net.users, kept, net.beliefs)


def active_domain(net: TrustNetwork, key: Key) -> set[Value]:
    return {b.value for b in net.beliefs if b.key == key}


def disjoint_union(n1: TrustNetwork, n2: TrustNetwork) -> TrustNetwork:
    overlap = n1.users & n2.users
    if overlap:
        raise UserOverlap(f"networks share users: {sorted(overlap)[:5]}")
    return TrustNetwork(n1.users | n2.users, n1.mappings | n2.mappings, n1.beliefs | n2.beliefs)


# -- JSON interchange -------------------------------------------------------

_TOP_FIELDS = {"users", "mappings", "beliefs"}
_MAPPING_FIELDS = {"target", "source", "priority"}
_BELIEF_FIELDS = {"user", "key", "value"}


def network_to_dict(net: TrustNetwork) -> dict:
    return {
        "users": sorted(net.users),
        "mappings": [
            {"target": m.target, "source": m.source, "priority": m.priority}
            for m in sorted(net.mappings)
        ],
        "beliefs": [
            {"user": b.user, "key": b.key, "value": b.value} for b in sorted(net.beliefs)
        ],
    }


def network_from_dict(doc) -> TrustNetwork:
    if not isinstance(doc, dict):
        raise ParseError("network document must be a JSON object")
    extra = set(doc) - _TOP_FIELDS
    if extra:
        raise ParseError(f"unknown fields: {sorted(extra)}")
    if "users" not in doc:
        raise ParseError("missing field 'users'")
    for name, allowed in (("mappings", _MAPPING_FIELDS), ("beliefs", _BELIEF_FIELDS)):
        items = doc.get(name, [])
        if not isinstance(items, list):
            raise ParseError(f"'{name}' must be a list")
        for item in items:
            if not isinstance(item, dict) or set(item) != allowed:
                raise ParseError(f"each entry of '{name}' needs exactly the fields {sorted(allowed)}")
    if not isinstance(doc["users"], list):
        raise ParseError("'users' must be a list")
    return build_network(doc["users"], doc.get("mappings", []), doc.get("beliefs", []))


def dumps_network(net: TrustNetwork) -> str:
    return json.dumps(network_to_dict(net), indent=1, ensure_ascii=False) + "\n"


def loads_network(text: str) -> TrustNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return network_from_dict(doc)


def save_network(net: TrustNetwork, path) -> None:
    Path(path).write_text(dumps_network(net), encoding="utf-8")


def load_network(path) -> TrustNetwork:
    return loads_network(Path(path).read_text(encoding="utf-8"))
