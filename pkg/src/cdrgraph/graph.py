"""Edge-labeled directed multigraph over the call and SMS communication channels.

The graph keeps at most one labeled edge per (sender, receiver, dimension)
triple; repeat interactions live in the label's frequency (and, for calls,
aggregated duration). Node ids are opaque strings interned to dense integer
indices; interning order is the lexicographic order of the ids so that every
derived report is deterministic.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Iterator

if TYPE_CHECKING:
    from .ingest import PairStats


class Dimension(str, Enum):
    """A communication channel, treated as one layer of the multigraph."""

    CALL = "call"
    SMS = "sms"


DIMENSIONS: tuple[Dimension, Dimension] = (Dimension.CALL, Dimension.SMS)


@dataclass(frozen=True, slots=True)
class CallLabel:
    """Label of a call edge: interaction count and total conversation seconds."""

    frequency: int
    duration: int


@dataclass(frozen=True, slots=True)
class SmsLabel:
    """Label of an SMS edge: interaction count only."""

    frequency: int


EdgeLabel = CallLabel | SmsLabel


def _merge_labels(a: EdgeLabel, b: EdgeLabel) -> EdgeLabel:
    if isinstance(a, CallLabel) and isinstance(b, CallLabel):
        return CallLabel(a.frequency + b.frequency, a.duration + b.duration)
    if isinstance(a, SmsLabel) and isinstance(b, SmsLabel):
        return SmsLabel(a.frequency + b.frequency)
    raise ValueError("cannot merge labels of different dimensions")


@dataclass(frozen=True, slots=True)
class LayerGraph:
    """A single-dimension graph extracted from a multigraph.

    The node set is induced by the layer's edges: a node present only in the
    other dimension does not appear here. Edge keys are ordered (u, v) pairs
    for directed layers and (min, max) pairs for undirected ones.
    """

    dimension: Dimension
    directed: bool
    edges: dict[tuple[str, str], EdgeLabel]
    nodes: frozenset[str]

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)


class Multigraph:
    """Directed (or relaxed undirected) multigraph with call/SMS edge labels.

    Immutable after construction; build one with :func:`build_multigraph` or
    :func:`read_edge_csv`. The vertex set is induced by the edges, so every
    node participates in at least one edge and the empty edge set gives the
    empty graph.
    """

    __slots__ = ("directed", "ids", "index", "_succ", "_pred", "_num_edges")

    def __init__(self, directed: bool = True) -> None:
        self.directed = directed
        self.ids: tuple[str, ...] = ()
        self.index: dict[str, int] = {}
        # _succ[d][u] maps successor index -> label; for undirected graphs the
        # stored key is the canonical (min, max) orientation and _pred holds
        # the mirror, so neighbor lookups stay one dict access either way.
        self._succ: dict[Dimension, dict[int, dict[int, EdgeLabel]]] = {
            d: {} for d in DIMENSIONS
        }
        self._pred: dict[Dimension, dict[int, set[int]]] = {d: {} for d in DIMENSIONS}
        self._num_edges = 0

    # -- construction helpers (module-internal) --

    def _intern_nodes(self, node_ids: Iterable[str]) -> None:
        self.ids = tuple(sorted(set(node_ids)))
        self.index = {node: i for i, node in enumerate(self.ids)}

    def _add_edge(self, u: int, v: int, d: Dimension, label: EdgeLabel) -> None:
        if u == v:
            raise ValueError(f"self-loop on node {self.ids[u]!r}")
        if label.frequency < 1:
            raise ValueError(f"edge ({self.ids[u]}, {self.ids[v]}, {d.value}) has frequency < 1")
        if not self.directed and u > v:
            u, v = v, u
        targets = self._succ[d].setdefault(u, {})
        if v in targets:
            raise ValueError(
                f"duplicate edge ({self.ids[u]}, {self.ids[v]}, {d.value})"
            )
        targets[v] = label
        self._pred[d].setdefault(v, set()).add(u)
        self._num_edges += 1

    # -- basic accessors --

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def num_nodes(self) -> int:
        return len(self.ids)

    @property
    def num_edges(self) -> int:
        """Number of labeled edges (distinct (u, v, dimension) triples)."""
        return self._num_edges

    def nodes(self) -> tuple[str, ...]:
        return self.ids

    def __contains__(self, node: str) -> bool:
        return node in self.index

    def edges(self) -> Iterator[tuple[str, str, Dimension, EdgeLabel]]:
        """All labeled edges, in deterministic (dimension, u, v) order."""
        for d in DIMENSIONS:
            succ = self._succ[d]
            for u in sorted(succ):
                targets = succ[u]
                for v in sorted(targets):
                    yield self.ids[u], self.ids[v], d, targets[v]

    def edge_label(self, u: str, v: str, d: Dimension) -> EdgeLabel | None:
        """The stored label for (u, v, d), or None when the triple is absent.

        On an undirected graph the lookup key is the unordered pair.
        """
        ui = self.index.get(u)
        vi = self.index.get(v)
        if ui is None or vi is None:
            return None
        if not self.directed and ui > vi:
            ui, vi = vi, ui
        return self._succ[d].get(ui, {}).get(vi)

    def neighborhood(self, u: str, d: Dimension, direction: str = "out") -> set[str]:
        """Neighbor ids of u on dimension d.

        direction is one of "out" (successors), "in" (predecessors) or "all"
        (their union). A node absent from the graph has an empty neighborhood.
        On an undirected graph all three directions coincide.
        """
        ui = self.index.get(u)
        if ui is None:
            return set()
        return {self.ids[i] for i in self._neighbor_indices(ui, d, direction)}

    def _neighbor_indices(self, ui: int, d: Dimension, direction: str) -> set[int]:
        out = self._succ[d].get(ui)
        inc = self._pred[d].get(ui)
        if not self.directed or direction == "all":
            result: set[int] = set(out) if out else set()
            if inc:
                result |= inc
            return result
        if direction == "out":
            return set(out) if out else set()
        if direction == "in":
            return set(inc) if inc else set()
        raise ValueError(f"unknown direction {direction!r}")

    def _nodes_in_dimension(self, d: Dimension) -> set[int]:
        present = set(self._succ[d])
        present.update(self._pred[d])
        return present

    # -- derived graphs --

    def extract_layer(self, d: Dimension) -> LayerGraph:
        """The d-network layer: edges of dimension d with a re-induced node set."""
        edges: dict[tuple[str, str], EdgeLabel] = {}
        nodes: set[str] = set()
        for u in sorted(self._succ[d]):
            targets = self._succ[d][u]
            uid = self.ids[u]
            for v in sorted(targets):
                vid = self.ids[v]
                edges[(uid, vid)] = targets[v]
                nodes.add(uid)
                nodes.add(vid)
        return LayerGraph(
            dimension=d, directed=self.directed, edges=edges, nodes=frozenset(nodes)
        )

    def to_undirected(self) -> "Multigraph":
        """Relax edge direction per dimension, merging opposite labels.

        The merge adds frequencies and, for calls, durations, so total
        interaction volume is conserved. Already-undirected graphs are
        returned unchanged.
        """
        if not self.directed:
            return self
        g = Multigraph(directed=False)
        g.ids = self.ids
        g.index = self.index
        for d in DIMENSIONS:
            for u, targets in self._succ[d].items():
                for v, label in targets.items():
                    a, b = (u, v) if u < v else (v, u)
                    held = g._succ[d].get(a, {}).get(b)
                    if held is None:
                        g._succ[d].setdefault(a, {})[b] = label
                        g._pred[d].setdefault(b, set()).add(a)
                        g._num_edges += 1
                    else:
                        g._succ[d][a][b] = _merge_labels(held, label)
        return g


def build_multigraph(stats: Iterable["PairStats"]) -> Multigraph:
    """Assemble the directed multigraph from post-significance pair statistics.

    One labeled edge per (pair, dimension); duplicate entries are a
    construction error. Pass ``aggregate_pairs(...)`` output (or its
    ``.values()``) directly.
    """
    entries = list(stats.values()) if isinstance(stats, dict) else list(stats)
    g = Multigraph(directed=True)
    node_ids: set[str] = set()
    for ps in entries:
        node_ids.add(ps.pair[0])
        node_ids.add(ps.pair[1])
    g._intern_nodes(node_ids)
    for ps in entries:
        u, v = ps.pair
        if ps.total_duration < 0:
            raise ValueError(f"edge ({u}, {v}, {ps.dimension.value}) has negative duration")
        if ps.dimension is Dimension.CALL:
            label: EdgeLabel = CallLabel(ps.count, ps.total_duration)
        else:
            label = SmsLabel(ps.count)
        g._add_edge(g.index[u], g.index[v], ps.dimension, label)
    return g


SNAPSHOT_HEADER = ("u", "v", "dimension", "frequency", "duration")


def write_edge_csv(g: Multigraph, path: str | Path) -> None:
    """Export the graph as a CSV edge list, rows sorted by (u, v, dimension)."""
    rows = []
    for u, v, d, label in g.edges():
        duration = label.duration if isinstance(label, CallLabel) else 0
        rows.append((u, v, d.value, label.frequency, duration))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SNAPSHOT_HEADER)
        writer.writerows(rows)


def read_edge_csv(path: str | Path) -> Multigraph:
    """Rebuild a directed multigraph from a :func:`write_edge_csv` snapshot."""
    from .ingest import PairStats

    entries = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is not None and tuple(header) != SNAPSHOT_HEADER:
            raise ValueError(f"unexpected snapshot header {header!r} in {path}")
        for row in reader:
            if not row:
                continue
            if len(row) != 5:
                raise ValueError(f"snapshot row has {len(row)} fields, expected 5: {row!r}")
            u, v, dim_token, frequency, duration = row
            try:
                d = Dimension(dim_token)
            except ValueError:
                raise ValueError(f"unknown dimension {dim_token!r} in {path}") from None
            entries.append(
                PairStats(
                    pair=(u, v),
                    dimension=d,
                    count=int(frequency),
                    total_duration=int(duration),
                )
            )
    return build_multigraph(entries)
