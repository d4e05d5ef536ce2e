"""Node-set overlap, layer Jaccard distances and the link-label census.

The layer Jaccard distance of a node measures which fraction of its combined
neighborhood is exclusive to one dimension:

    phi_cs(u) = |N_call(u) - N_sms(u)| / |N_call(u) union N_sms(u)|

so an exclusive caller scores 1 on phi_cs and a node using both channels for
all contacts scores 0. Together with the plain Jaccard coefficient
|intersection| / |union| the three values partition the union: for every node
with a nonempty union, phi_cs + phi_sc + coefficient == 1. The historical
intersection-denominator variant is available behind denominator="intersection"
but is unbounded and undefined for exclusive users.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Dimension, Multigraph

HIST_BINS = 50

DIRECTIONS = ("out", "in", "all")

CENSUS_BASES = ("directed_pairs", "unordered_pairs")


@dataclass(frozen=True, slots=True)
class NodeOverlapReport:
    """How the call and SMS node sets overlap inside one multigraph."""

    both: int
    call_only: int
    sms_only: int

    @property
    def total(self) -> int:
        return self.both + self.call_only + self.sms_only

    @property
    def fraction_both(self) -> float:
        return self.both / self.total if self.total else 0.0

    @property
    def fraction_call_only(self) -> float:
        return self.call_only / self.total if self.total else 0.0

    @property
    def fraction_sms_only(self) -> float:
        return self.sms_only / self.total if self.total else 0.0


def node_set_overlap(g: Multigraph) -> NodeOverlapReport:
    """Count nodes active on both channels, calls only, and SMS only."""
    call_nodes = g._nodes_in_dimension(Dimension.CALL)
    sms_nodes = g._nodes_in_dimension(Dimension.SMS)
    return NodeOverlapReport(
        both=len(call_nodes & sms_nodes),
        call_only=len(call_nodes - sms_nodes),
        sms_only=len(sms_nodes - call_nodes),
    )


def _neighbor_sets(g: Multigraph, ui: int, direction: str) -> tuple[set[int], set[int]]:
    return (
        g._neighbor_indices(ui, Dimension.CALL, direction),
        g._neighbor_indices(ui, Dimension.SMS, direction),
    )


def layer_jaccard(
    g: Multigraph,
    u: str,
    direction: str = "out",
    *,
    dim: Dimension = Dimension.CALL,
    denominator: str = "union",
) -> float | None:
    """Fraction of u's combined neighborhood exclusive to `dim`.

    Returns None (undefined) when the denominator is empty: for the default
    union denominator that means both neighborhoods are empty.
    """
    ui = g.index.get(u)
    if ui is None:
        return None
    call_set, sms_set = _neighbor_sets(g, ui, direction)
    first, second = (call_set, sms_set) if dim is Dimension.CALL else (sms_set, call_set)
    if denominator == "union":
        denom = len(first | second)
    elif denominator == "intersection":
        denom = len(first & second)
    else:
        raise ValueError(f"unknown denominator {denominator!r}")
    if denom == 0:
        return None
    return len(first - second) / denom


def jaccard_coefficient(g: Multigraph, u: str, direction: str = "out") -> float | None:
    """|N_call ∩ N_sms| / |N_call ∪ N_sms| for node u; None on empty union."""
    ui = g.index.get(u)
    if ui is None:
        return None
    call_set, sms_set = _neighbor_sets(g, ui, direction)
    union = len(call_set | sms_set)
    if union == 0:
        return None
    return len(call_set & sms_set) / union


@dataclass(frozen=True, slots=True)
class JaccardDistribution:
    """Per-node overlap values for one direction, plus fixed-bin histograms.

    Rows are aligned lists ordered by node id; nodes whose neighborhood union
    is empty on this direction are excluded and counted in undefined_count.
    histograms maps measure name (phi_cs, phi_sc, coefficient) to HIST_BINS
    uniform bins over [0, 1], last bin right-closed.
    """

    direction: str
    node_ids: list[str]
    phi_cs: list[float]
    phi_sc: list[float]
    coefficient: list[float]
    undefined_count: int
    histograms: dict[str, list[int]]

    @property
    def defined_count(self) -> int:
        return len(self.node_ids)


def _bin_index(value: float) -> int:
    idx = int(value * HIST_BINS)
    return HIST_BINS - 1 if idx >= HIST_BINS else idx


def jaccard_distribution(g: Multigraph, direction: str = "out") -> JaccardDistribution:
    """Compute phi_cs, phi_sc and the coefficient for every node."""
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    node_ids: list[str] = []
    phi_cs: list[float] = []
    phi_sc: list[float] = []
    coefficient: list[float] = []
    hists = {name: [0] * HIST_BINS for name in ("phi_cs", "phi_sc", "coefficient")}
    undefined = 0
    for ui in range(g.n):
        call_set, sms_set = _neighbor_sets(g, ui, direction)
        union = len(call_set | sms_set)
        if union == 0:
            undefined += 1
            continue
        inter = len(call_set & sms_set)
        cs = (len(call_set) - inter) / union
        sc = (len(sms_set) - inter) / union
        coef = inter / union
        node_ids.append(g.ids[ui])
        phi_cs.append(cs)
        phi_sc.append(sc)
        coefficient.append(coef)
        hists["phi_cs"][_bin_index(cs)] += 1
        hists["phi_sc"][_bin_index(sc)] += 1
        hists["coefficient"][_bin_index(coef)] += 1
    return JaccardDistribution(
        direction=direction,
        node_ids=node_ids,
        phi_cs=phi_cs,
        phi_sc=phi_sc,
        coefficient=coefficient,
        undefined_count=undefined,
        histograms=hists,
    )


@dataclass(frozen=True, slots=True)
class LinkLabelCensus:
    """Connected pairs classified by the set of dimensions present on them."""

    basis: str
    both: int
    call_only: int
    sms_only: int

    @property
    def total(self) -> int:
        return self.both + self.call_only + self.sms_only

    @property
    def fraction_both(self) -> float:
        return self.both / self.total if self.total else 0.0

    @property
    def fraction_call_only(self) -> float:
        return self.call_only / self.total if self.total else 0.0

    @property
    def fraction_sms_only(self) -> float:
        return self.sms_only / self.total if self.total else 0.0


def link_label_census(g: Multigraph, basis: str = "directed_pairs") -> LinkLabelCensus:
    """Classify every connected pair by its dimension set.

    basis="directed_pairs" classifies each ordered pair carrying any edge;
    basis="unordered_pairs" merges both directions of a pair first.
    """
    if basis not in CENSUS_BASES:
        raise ValueError(f"unknown census basis {basis!r}")
    CALL_BIT, SMS_BIT = 1, 2
    bits: dict[tuple[int, int], int] = {}
    for d, bit in ((Dimension.CALL, CALL_BIT), (Dimension.SMS, SMS_BIT)):
        for u, targets in g._succ[d].items():
            for v in targets:
                if basis == "unordered_pairs" and u > v:
                    key = (v, u)
                else:
                    key = (u, v)
                bits[key] = bits.get(key, 0) | bit
    both = call_only = sms_only = 0
    for mask in bits.values():
        if mask == CALL_BIT | SMS_BIT:
            both += 1
        elif mask == CALL_BIT:
            call_only += 1
        else:
            sms_only += 1
    return LinkLabelCensus(basis=basis, both=both, call_only=call_only, sms_only=sms_only)
