"""Connected components and the component statistics block.

For the multigraph, connectivity disregards the dimension: the graph is first
flattened to a simple directed graph with one edge per ordered pair that
carries any-dimension traffic. Strong components use an iterative Tarjan
(explicit work stack, no recursion), safe on million-node graphs; weak
components use BFS over the direction-blind adjacency.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Iterable

from .graph import DIMENSIONS, Dimension, Multigraph


class SimpleDigraph:
    """A plain directed graph: interned node ids plus successor sets."""

    __slots__ = ("ids", "index", "out")

    def __init__(self, ids: tuple[str, ...], out: list[set[int]]) -> None:
        self.ids = ids
        self.index = {node: i for i, node in enumerate(ids)}
        self.out = out

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[str, str]], nodes: Iterable[str] = ()
    ) -> "SimpleDigraph":
        """Build from ordered (u, v) pairs; extra isolated nodes may be given."""
        pair_list = list(pairs)
        node_set = set(nodes)
        for u, v in pair_list:
            node_set.add(u)
            node_set.add(v)
        ids = tuple(sorted(node_set))
        index = {node: i for i, node in enumerate(ids)}
        out: list[set[int]] = [set() for _ in ids]
        for u, v in pair_list:
            out[index[u]].add(index[v])
        return cls(ids, out)

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def num_directed_edges(self) -> int:
        return sum(len(s) for s in self.out)


def flatten(g: Multigraph) -> SimpleDigraph:
    """One directed edge per ordered pair with an edge in any dimension."""
    if not g.directed:
        raise ValueError("flatten expects a directed multigraph")
    out: list[set[int]] = [set() for _ in g.ids]
    for d in DIMENSIONS:
        for u, targets in g._succ[d].items():
            out[u].update(targets)
    return SimpleDigraph(g.ids, out)


def _scc_indices(out: list[set[int]]) -> list[list[int]]:
    """Iterative Tarjan over successor sets; components sorted by min member."""
    n = len(out)
    order = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if order[root] != -1:
            continue
        work: list[tuple[int, list[int], int]] = [(root, list(out[root]), 0)]
        order[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = 1
        while work:
            v, adj, i = work[-1]
            advanced = False
            while i < len(adj):
                w = adj[i]
                i += 1
                if order[w] == -1:
                    work[-1] = (v, adj, i)
                    order[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = 1
                    work.append((w, list(out[w]), 0))
                    advanced = True
                    break
                if on_stack[w] and order[w] < low[v]:
                    low[v] = order[w]
            if advanced:
                continue
            work.pop()
            if low[v] == order[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            elif work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
    components.sort(key=min)
    return components


def _wcc_indices(out: list[set[int]]) -> list[list[int]]:
    """BFS components over the direction-blind adjacency."""
    n = len(out)
    undirected: list[list[int]] = [[] for _ in range(n)]
    for u, targets in enumerate(out):
        for v in targets:
            undirected[u].append(v)
            undirected[v].append(u)
    seen = bytearray(n)
    components: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = 1
        comp = [start]
        frontier = [start]
        while frontier:
            next_frontier = []
            for u in frontier:
                for v in undirected[u]:
                    if not seen[v]:
                        seen[v] = 1
                        comp.append(v)
                        next_frontier.append(v)
            frontier = next_frontier
        components.append(comp)
    return components


def strongly_connected_components(g: SimpleDigraph) -> list[set[str]]:
    """Partition under mutual directed reachability."""
    return [{g.ids[i] for i in comp} for comp in _scc_indices(g.out)]


def weakly_connected_components(g: SimpleDigraph) -> list[set[str]]:
    """Partition under direction-blind reachability."""
    return [{g.ids[i] for i in comp} for comp in _wcc_indices(g.out)]


@dataclass(frozen=True, slots=True)
class ComponentStats:
    """Node/edge counts for a graph and its giant components.

    e_directed counts distinct ordered connected pairs (for the multigraph the
    dimension is disregarded); e_pairs counts distinct unordered pairs. The
    gscc fields restrict both counts to edges with both endpoints inside the
    giant strongly connected component. e_gwcc is the unordered-pair count
    inside the giant weakly connected component, e_gwcc_directed its ordered
    counterpart.
    """

    n: int
    e_directed: int
    e_pairs: int
    n_gscc: int
    e_gscc_directed: int
    e_gscc_pairs: int
    n_gwcc: int
    e_gwcc: int
    e_gwcc_directed: int

    def to_dict(self) -> dict[str, int]:
        return asdict(self)


@dataclass(frozen=True, slots=True)
class TableStats:
    """Component statistics for the multigraph and each of its layers."""

    multigraph: ComponentStats
    call: ComponentStats
    sms: ComponentStats


def _giant(components: list[list[int]]) -> list[int]:
    # Ties for largest go to the component holding the smallest node index.
    return max(components, key=lambda comp: (len(comp), -min(comp)))


def _edge_counts(out: list[set[int]], member: bytearray | None = None) -> tuple[int, int]:
    """(directed, unordered) pair counts, optionally restricted to a node set."""
    directed = 0
    pairs = 0
    for u, targets in enumerate(out):
        if member is not None and not member[u]:
            continue
        for v in targets:
            if member is not None and not member[v]:
                continue
            directed += 1
            # Count each unordered pair once: at its canonical orientation, or
            # here when the reverse edge is missing.
            if u < v or u not in out[v]:
                pairs += 1
    return directed, pairs


def _stats_from_out(out: list[set[int]]) -> ComponentStats:
    n = len(out)
    if n == 0:
        return ComponentStats(0, 0, 0, 0, 0, 0, 0, 0, 0)
    e_directed, e_pairs = _edge_counts(out)
    gscc = _giant(_scc_indices(out))
    member = bytearray(n)
    for i in gscc:
        member[i] = 1
    e_gscc_directed, e_gscc_pairs = _edge_counts(out, member)
    gwcc = _giant(_wcc_indices(out))
    member = bytearray(n)
    for i in gwcc:
        member[i] = 1
    e_gwcc_directed, e_gwcc_pairs = _edge_counts(out, member)
    return ComponentStats(
        n=n,
        e_directed=e_directed,
        e_pairs=e_pairs,
        n_gscc=len(gscc),
        e_gscc_directed=e_gscc_directed,
        e_gscc_pairs=e_gscc_pairs,
        n_gwcc=len(gwcc),
        e_gwcc=e_gwcc_pairs,
        e_gwcc_directed=e_gwcc_directed,
    )


def component_stats(g: Multigraph) -> TableStats:
    """The full statistics block: multigraph row plus one row per layer."""
    flat = flatten(g)
    per_layer = {}
    for d in DIMENSIONS:
        layer_nodes = sorted(g._nodes_in_dimension(d))
        remap = {old: new for new, old in enumerate(layer_nodes)}
        out: list[set[int]] = [set() for _ in layer_nodes]
        for u, targets in g._succ[d].items():
            ru = remap[u]
            out[ru].update(remap[v] for v in targets)
        per_layer[d] = _stats_from_out(out)
    return TableStats(
        multigraph=_stats_from_out(flat.out),
        call=per_layer[Dimension.CALL],
        sms=per_layer[Dimension.SMS],
    )
