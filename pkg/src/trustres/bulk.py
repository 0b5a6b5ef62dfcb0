"""Multi-object resolution over a single trust topology.

Beliefs and results are both POSS(X, K, V) relations: X is the user, K the
object key and V a value.

The outcome for one key depends only on *which* users hold beliefs and on
which of them agree, never on the concrete values: renaming values commutes
with resolution.  So every key is reduced to a pattern (believers plus the
partition of their values into equal groups), each distinct pattern is
resolved once on placeholder values, and the per-key work is a dictionary
lookup followed by renaming.  Cost per key is therefore constant and the same
whether or not the believers conflict.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import NamedTuple

from .errors import DuplicateBelief, NonEmptyTopologyBeliefs, ParseError, UnknownUser
from .engine import _Graph, _resolve_indexed
from .network import TrustNetwork

POSS_HEADER = ["X", "K", "V"]


class PossRow(NamedTuple):
    user: str
    key: str
    value: str


class PossTable(NamedTuple):
    """A POSS relation.

    ``rows`` holds ``(user, key, value)`` triples.  Parsed tables use
    :class:`PossRow`; bulk output uses plain tuples, which compare equal.
    """

    rows: tuple
    role: str = "input"

    def canonical(self) -> "PossTable":
        return PossTable(tuple(sorted(self.rows, key=lambda r: (r[1], r[0], r[2]))), self.role)

    def keys(self) -> list[str]:
        return sorted({r[1] for r in self.rows})

    def slice(self, key) -> list[tuple]:
        return [r for r in self.rows if r[1] == key]


def check_input_table(table: PossTable) -> None:
    seen = set()
    for user, key, _ in table.rows:
        if (user, key) in seen:
            raise DuplicateBelief(f"two beliefs for user {user!r} on key {key!r}")
        seen.add((user, key))


def poss_to_csv(table: PossTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(POSS_HEADER)
    writer.writerows(table.rows)
    return buf.getvalue()


def poss_from_csv(text: str, role: str = "input") -> PossTable:
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader, None)
    if header != POSS_HEADER:
        raise ParseError(f"expected header X,K,V, got {header}")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != 3:
            raise ParseError(f"line {lineno}: expected 3 fields, got {len(row)}")
        if not all(row):
            raise ParseError(f"line {lineno}: empty field")
        rows.append(PossRow(*row))
    table = PossTable(tuple(rows), role)
    if role == "input":
        check_input_table(table)
    return table


def load_poss(path, role: str = "input") -> PossTable:
    with open(path, encoding="utf-8", newline="") as fh:
        return poss_from_csv(fh.read(), role)


def write_poss(table: PossTable, path) -> None:
    Path(path).write_text(poss_to_csv(table), encoding="utf-8", newline="")


class BulkResolver:
    """Resolves many keys over one topology, caching per belief pattern."""

    def __init__(self, topology: TrustNetwork):
        if topology.beliefs:
            raise NonEmptyTopologyBeliefs("topology network must not carry beliefs")
        self.topology = topology
        self.graph = _Graph(topology)
        self.patterns: dict = {}
        self.emissions: dict = {}

    def _template(self, believers: tuple, labels: tuple) -> list:
        belief = {b: str(label) for b, label in zip(believers, labels)}
        possible = _resolve_indexed(self.graph, belief)
        names = self.graph.names
        return [
            (names[i], tuple(sorted(int(label) for label in vs)))
            for i, vs in enumerate(possible)
            if vs
        ]

    def _emission(self, pattern: tuple, ranks: tuple) -> list:
        """``(user, label)`` pairs in output order for one value ordering."""
        template = self.patterns.get(pattern)
        if template is None:
            template = self.patterns[pattern] = self._template(*pattern)
        return [
            (user, label)
            for user, group in template
            for label in sorted(group, key=ranks.__getitem__)
        ]

    def resolve_key(self, key, held: dict) -> list[tuple]:
        """Rows for one key given ``{user: value}`` beliefs."""
        index = self.graph.index
        try:
            pairs = sorted([(index[u], v) for u, v in held.items()])
        except KeyError as exc:
            raise UnknownUser(f"belief references unknown user {exc.args[0]!r}") from None
        distinct: dict = {}
        labels = tuple([distinct.setdefault(v, len(distinct)) for _, v in pairs])
        values = list(distinct)
        if len(values) == 1:
            ranks = (0,)
        elif len(values) == 2:
            ranks = (0, 1) if values[0] < values[1] else (1, 0)
        else:
            order = sorted(range(len(values)), key=values.__getitem__)
            ranks = tuple(sorted(range(len(order)), key=order.__getitem__))
        slot = (tuple([i for i, _ in pairs]), labels, ranks)
        emission = self.emissions.get(slot)
        if emission is None:
            emission = self.emissions[slot] = self._emission(slot[:2], ranks)
        return [(user, key, values[label]) for user, label in emission]


def bulk_resolve(topology_net: TrustNetwork, beliefs: PossTable) -> PossTable:
    resolver = BulkResolver(topology_net)
    check_input_table(beliefs)
    grouped: dict = {}
    for user, key, value in beliefs.rows:
        grouped.setdefault(key, {})[user] = value
    out: list = []
    for key in sorted(grouped):
        out.extend(resolver.resolve_key(key, grouped[key]))
    return PossTable(tuple(out), "output")
