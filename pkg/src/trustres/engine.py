"""Polynomial-time resolution of possible and certain values.

Notation used below: a user is *active* for a key when some explicit belief
reaches it along trust mappings; in every stable solution exactly the active
users hold a value.  The *top sources* of an active user without a belief are
its active sources of maximal priority; the value it holds always comes from
one of them, so its possible set is the union of theirs.

The algorithm settles users in two phases.

1. Propagation.  A user whose top sources are all settled takes the union of
   their possible sets.  This settles everything outside cycles of top-source
   edges in linear time.
2. Cycles.  The remaining users are split into strongly connected components,
   handled in topological order so that every source outside the component is
   already settled.  Inside a component, the users that can hold a candidate
   value ``v`` form the greatest set ``G`` in which each member is reachable
   from a settled ``v``-holder through mappings that nobody outside ``G``
   blocks.  A mapping ``z -> x`` of priority ``p`` is blocked when an active
   source of ``x`` with priority above ``p`` cannot hold ``v``.  ``G`` starts
   as everything reachable and shrinks until the reachable part is stable;
   nested cycles can force one linear round per nesting level, which is where
   the quadratic worst case comes from.
"""
from __future__ import annotations

from dataclasses import dataclass

from .network import TrustNetwork
from .result import ResolutionResult, certain_from_possible

NO_BLOCK = -1


def strongly_connected(nodes, successors) -> list[list]:
    """Tarjan's algorithm without recursion.

    ``successors(node)`` yields the out-neighbours of ``node``; neighbours
    outside ``nodes`` are ignored.  Components are returned in topological
    order: edges only go from a component to later ones.
    """
    nodes = list(nodes)
    allowed = set(nodes)
    index: dict = {}
    low: dict = {}
    on_stack = set()
    stack: list = []
    found: list = []
    for root in nodes:
        if root in index:
            continue
        index[root] = low[root] = len(index)
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            node, it = work[-1]
            for nxt in it:
                if nxt not in allowed:
                    continue
                if nxt not in index:
                    index[nxt] = low[nxt] = len(index)
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(successors(nxt))))
                    break
                if nxt in on_stack and index[nxt] < low[node]:
                    low[node] = index[nxt]
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    if low[node] < low[parent]:
                        low[parent] = low[node]
                if low[node] == index[node]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == node:
                            break
                    found.append(comp)
    found.reverse()
    return found


@dataclass(frozen=True)
class Condensation:
    """Strongly connected components of the trust graph in topological order.

    Edges run from the trusted user to the truster, so a component only has
    incoming edges from components listed before it.
    """

    components: tuple
    component_of: dict

    __hash__ = None

    def dag_edges(self, net: TrustNetwork) -> set[tuple[int, int]]:
        out = set()
        for m in net.mappings:
            a, b = self.component_of[m.source], self.component_of[m.target]
            if a != b:
                out.add((a, b))
        return out


def condense(net: TrustNetwork) -> Condensation:
    children: dict = {u: [] for u in net.users}
    for m in sorted(net.mappings):
        children[m.source].append(m.target)
    comps = strongly_connected(sorted(net.users), children.__getitem__)
    components = tuple(tuple(sorted(c)) for c in comps)
    component_of = {u: i for i, comp in enumerate(components) for u in comp}
    return Condensation(components, component_of)


class _Graph:
    """Integer-indexed adjacency of a network, shared by all keys."""

    def __init__(self, net: TrustNetwork):
        self.names = sorted(net.users)
        idx = {u: i for i, u in enumerate(self.names)}
        n = len(self.names)
        self.parents: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self.children: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for m in net.mappings:
            t, s = idx[m.target], idx[m.source]
            self.parents[t].append((s, m.priority))
            self.children[s].append((t, m.priority))
        self.index = idx


def resolve(net: TrustNetwork, key, graph: _Graph | None = None) -> ResolutionResult:
    g = graph or _Graph(net)
    belief = {g.index[u]: v for u, v in net.beliefs_for(key).items()}
    possible = _resolve_indexed(g, belief)
    named = {g.names[i]: vs for i, vs in enumerate(possible) if vs}
    return ResolutionResult(key, named, certain_from_possible(named))


def resolve_all_keys(net: TrustNetwork) -> list[ResolutionResult]:
    g = _Graph(net)
    return [resolve(net, k, g) for k in net.keys()]


def _resolve_indexed(g: _Graph, belief: dict) -> list[set]:
    """Possible sets per user index (None for inactive users); ``belief`` maps user index to value."""
    n = len(g.names)
    parents, children = g.parents, g.children

    active = [False] * n
    stack = list(belief)
    for b in stack:
        active[b] = True
    while stack:
        z = stack.pop()
        for x, _ in children[z]:
            if not active[x] and x not in belief:
                active[x] = True
                stack.append(x)

    # Per-user containers exist only for active users; the rest stay None.
    possible: list = [None] * n
    settled = [not a for a in active]
    for b, v in belief.items():
        possible[b] = {v}
        settled[b] = True

    top_sources: list = [None] * n
    top_children: list = [None] * n
    pending = [0] * n
    ready = []
    for x in range(n):
        if settled[x]:
            continue
        possible[x] = set()
        best = max(p for z, p in parents[x] if active[z])
        tops = [z for z, p in parents[x] if active[z] and p == best]
        top_sources[x] = tops
        for z in tops:
            if top_children[z] is None:
                top_children[z] = [x]
            else:
                top_children[z].append(x)
        pending[x] = sum(1 for z in tops if not settled[z])
        if not pending[x]:
            ready.append(x)

    def settle_from_tops(x):
        settled[x] = True
        for z in top_sources[x]:
            possible[x] |= possible[z]

    for x in ready:
        settle_from_tops(x)
    _propagate(ready, top_children, pending, settled, settle_from_tops)

    open_users = [x for x in range(n) if not settled[x]]
    if not open_users:
        return possible

    def successors(z):
        return [x for x, _ in children[z]]

    for comp in strongly_connected(open_users, successors):
        if len(comp) == 1:
            # Not on a cycle, so every source is settled by now.
            settle_from_tops(comp[0])
        else:
            _resolve_component(g, comp, settled, active, possible)
    return possible


def _propagate(queue, top_children, pending, settled, settle):
    head = 0
    while head < len(queue):
        z = queue[head]
        head += 1
        for x in top_children[z] or ():
            if settled[x]:
                continue
            pending[x] -= 1
            if pending[x] == 0:
                settle(x)
                queue.append(x)


def _resolve_component(g: _Graph, comp: list, settled, active, possible) -> None:
    parents = g.parents
    sources_by_value: dict = {}
    seen = set()
    for x in comp:
        for z, _ in parents[x]:
            if settled[z] and active[z] and z not in seen:
                seen.add(z)
                for v in possible[z]:
                    sources_by_value.setdefault(v, []).append(z)
    inside = set(comp)
    for v in sorted(sources_by_value):
        for x in _holders(g, v, sources_by_value[v], inside, settled, active, possible):
            possible[x].add(v)
    for x in comp:
        settled[x] = True


def _holders(g: _Graph, v, sources, inside, settled, active, possible) -> set:
    """Greatest self-founded set of component users that can hold ``v``."""
    parents, children = g.parents, g.children
    members = set()
    stack = list(sources)
    while stack:
        z = stack.pop()
        for x, _ in children[z]:
            if x in inside and x not in members:
                members.add(x)
                stack.append(x)

    # Highest priority among active sources that cannot hold v.
    blocked = {}
    for x in members:
        hb = NO_BLOCK
        for z, p in parents[x]:
            if p <= hb or not active[z]:
                continue
            if not (v in possible[z] if settled[z] else z in members):
                hb = p
        blocked[x] = hb

    while True:
        reached = set()
        stack = list(sources)
        while stack:
            z = stack.pop()
            for x, p in children[z]:
                if x in members and x not in reached and p >= blocked[x]:
                    reached.add(x)
                    stack.append(x)
        if len(reached) == len(members):
            return members
        for d in members - reached:
            for x, p in children[d]:
                if x in reached and p > blocked[x]:
                    blocked[x] = p
        members = reached
