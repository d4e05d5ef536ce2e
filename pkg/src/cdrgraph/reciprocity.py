"""Per-layer reciprocity, label-matched multireciprocity, and the dyad census.

Multireciprocity counts a directed edge as reciprocated only when the reverse
edge exists on the same dimension: an SMS one way answered by a call the other
way is not mutual. The denominator is the total number of labeled directed
edges, which makes the multigraph value an exact edge-count-weighted mean of
the per-layer reciprocities.

Dyads (unordered connected pairs) are classified per dimension as none, out,
in or mutual, where out means the edge runs from the lexicographically smaller
node id to the larger; the cross-layer class combines both states, giving 15
non-empty classes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import DIMENSIONS, Dimension, LayerGraph, Multigraph

DYAD_STATES = ("none", "out", "in", "mutual")

DYAD_CLASSES = tuple(
    f"call={cs},sms={ss}"
    for cs in DYAD_STATES
    for ss in DYAD_STATES
    if not (cs == "none" and ss == "none")
)

_FWD, _REV = 1, 2
_BITS_TO_STATE = {0: "none", _FWD: "out", _REV: "in", _FWD | _REV: "mutual"}


def layer_reciprocity(layer: LayerGraph) -> float:
    """Fraction of directed layer edges whose reverse edge also exists.

    Empty layers score 0 by convention.
    """
    mutual, total = layer_reciprocity_counts(layer)
    return mutual / total if total else 0.0


def layer_reciprocity_counts(layer: LayerGraph) -> tuple[int, int]:
    """(reciprocated edge count, total edge count) for one directed layer."""
    if not layer.directed:
        raise ValueError("reciprocity is defined on directed layers")
    edges = layer.edges
    mutual = sum(1 for (u, v) in edges if (v, u) in edges)
    return mutual, len(edges)


def multireciprocity(g: Multigraph) -> float:
    """Label-matched reciprocity over all edges of the multigraph."""
    mutual, total = multireciprocity_counts(g)
    return mutual / total if total else 0.0


def multireciprocity_counts(g: Multigraph) -> tuple[int, int]:
    """(same-dimension reciprocated edges, total labeled edges)."""
    if not g.directed:
        raise ValueError("reciprocity is defined on directed multigraphs")
    mutual = 0
    for d in DIMENSIONS:
        succ = g._succ[d]
        for u, targets in succ.items():
            for v in targets:
                reverse = succ.get(v)
                if reverse is not None and u in reverse:
                    mutual += 1
    return mutual, g.num_edges


def dyad_census(g: Multigraph) -> dict[str, int]:
    """Count connected unordered pairs per cross-layer dyad class.

    Returns all 15 classes (see DYAD_CLASSES), zero-filled, so the empty graph
    yields an all-zero census.
    """
    if not g.directed:
        raise ValueError("the dyad census is defined on directed multigraphs")
    # bits[pair] = (call_bits, sms_bits) packed as call_bits | sms_bits << 2
    bits: dict[tuple[int, int], int] = {}
    for shift, d in ((0, Dimension.CALL), (2, Dimension.SMS)):
        for u, targets in g._succ[d].items():
            for v in targets:
                if u < v:
                    key, bit = (u, v), _FWD << shift
                else:
                    key, bit = (v, u), _REV << shift
                bits[key] = bits.get(key, 0) | bit
    census = {label: 0 for label in DYAD_CLASSES}
    for mask in bits.values():
        call_state = _BITS_TO_STATE[mask & 3]
        sms_state = _BITS_TO_STATE[(mask >> 2) & 3]
        census[f"call={call_state},sms={sms_state}"] += 1
    return census


@dataclass(frozen=True, slots=True)
class ReciprocityReport:
    """Reciprocity values with their integer numerators and denominators.

    The *_empty flags record where the by-convention 0 for an empty edge set
    applies. multi_mutual_edges == call_mutual_edges + sms_mutual_edges and
    total_edges == call_edges + sms_edges hold by construction.
    """

    r_call: float
    r_sms: float
    r_multi: float
    call_mutual_edges: int
    call_edges: int
    sms_mutual_edges: int
    sms_edges: int
    multi_mutual_edges: int
    total_edges: int
    call_empty: bool
    sms_empty: bool
    multigraph_empty: bool
    dyad_census: dict[str, int]


def reciprocity_report(g: Multigraph) -> ReciprocityReport:
    """Per-layer and multigraph reciprocity plus the dyad census."""
    call_mutual, call_total = layer_reciprocity_counts(g.extract_layer(Dimension.CALL))
    sms_mutual, sms_total = layer_reciprocity_counts(g.extract_layer(Dimension.SMS))
    multi_mutual = call_mutual + sms_mutual
    total = call_total + sms_total
    return ReciprocityReport(
        r_call=call_mutual / call_total if call_total else 0.0,
        r_sms=sms_mutual / sms_total if sms_total else 0.0,
        r_multi=multi_mutual / total if total else 0.0,
        call_mutual_edges=call_mutual,
        call_edges=call_total,
        sms_mutual_edges=sms_mutual,
        sms_edges=sms_total,
        multi_mutual_edges=multi_mutual,
        total_edges=total,
        call_empty=call_total == 0,
        sms_empty=sms_total == 0,
        multigraph_empty=total == 0,
        dyad_census=dyad_census(g),
    )
