"""Seeded synthetic CDR generator with planted overlap and reciprocity.

Pair topology is Erdos-Renyi over unordered user pairs at edge probability
mean_degree / (n_users - 1), sampled with geometric skips so runtime is
proportional to the number of pairs drawn. Each connected pair is planted
with a channel class (both / call only / SMS only), per-channel mutuality,
and per-direction interaction counts. The realized plant is recorded in a
GroundTruth, so census and reciprocity expectations downstream are exact
counts rather than statistical estimates.

In guarantee mode (default) every planted directed entry is forced past the
default significance thresholds: interaction counts are floored at 4 and call
duration totals topped up past 60 seconds, so the pipeline keeps every
planted pair and its metric reports must equal the GroundTruth exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .graph import Dimension
from .ingest import CdrRecord, FilterConfig

_PROB_TOL = 1e-12


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of the planted two-channel network."""

    n_users: int
    mean_degree: float
    p_both: float = 0.3
    p_call_only: float = 0.5
    p_sms_only: float = 0.2
    p_reciprocal: float = 0.5
    activity: float = 5.0
    duration_mean: float = 90.0
    seed: int = 0
    guarantee_significance: bool = True
    window_start: int = 1_333_000_000
    window_seconds: int = 28 * 24 * 3600

    def __post_init__(self) -> None:
        if self.n_users < 2:
            raise ValueError("n_users must be at least 2")
        if self.mean_degree < 0:
            raise ValueError("mean_degree must be non-negative")
        for name in ("p_both", "p_call_only", "p_sms_only", "p_reciprocal"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        total = self.p_both + self.p_call_only + self.p_sms_only
        if abs(total - 1.0) > _PROB_TOL:
            raise ValueError(f"channel probabilities must sum to 1, got {total}")
        if self.activity <= 0:
            raise ValueError("activity must be positive")
        if self.duration_mean <= 0:
            raise ValueError("duration_mean must be positive")
        if self.window_seconds < 1:
            raise ValueError("window_seconds must be positive")


@dataclass
class GroundTruth:
    """Realized counts of the planted network, exact by construction."""

    n_users: int
    pair_count: int = 0
    both_pairs: int = 0
    call_only_pairs: int = 0
    sms_only_pairs: int = 0
    call_mutual_pairs: int = 0
    sms_mutual_pairs: int = 0
    call_edges: int = 0
    sms_edges: int = 0
    directed_both: int = 0
    directed_call_only: int = 0
    directed_sms_only: int = 0
    node_both: int = 0
    node_call_only: int = 0
    node_sms_only: int = 0
    records_total: int = 0
    dyad_census: dict[str, int] = field(default_factory=dict)

    @property
    def call_pairs(self) -> int:
        return self.both_pairs + self.call_only_pairs

    @property
    def sms_pairs(self) -> int:
        return self.both_pairs + self.sms_only_pairs

    @property
    def call_mutual_edges(self) -> int:
        return 2 * self.call_mutual_pairs

    @property
    def sms_mutual_edges(self) -> int:
        return 2 * self.sms_mutual_pairs

    @property
    def total_edges(self) -> int:
        return self.call_edges + self.sms_edges

    @property
    def r_call(self) -> float:
        return self.call_mutual_edges / self.call_edges if self.call_edges else 0.0

    @property
    def r_sms(self) -> float:
        return self.sms_mutual_edges / self.sms_edges if self.sms_edges else 0.0

    @property
    def r_multi(self) -> float:
        total = self.total_edges
        return (self.call_mutual_edges + self.sms_mutual_edges) / total if total else 0.0

    def to_dict(self) -> dict:
        return {
            "n_users": self.n_users,
            "pair_count": self.pair_count,
            "both_pairs": self.both_pairs,
            "call_only_pairs": self.call_only_pairs,
            "sms_only_pairs": self.sms_only_pairs,
            "call_mutual_pairs": self.call_mutual_pairs,
            "sms_mutual_pairs": self.sms_mutual_pairs,
            "call_edges": self.call_edges,
            "sms_edges": self.sms_edges,
            "call_mutual_edges": self.call_mutual_edges,
            "sms_mutual_edges": self.sms_mutual_edges,
            "total_edges": self.total_edges,
            "directed_both": self.directed_both,
            "directed_call_only": self.directed_call_only,
            "directed_sms_only": self.directed_sms_only,
            "node_both": self.node_both,
            "node_call_only": self.node_call_only,
            "node_sms_only": self.node_sms_only,
            "records_total": self.records_total,
            "r_call": self.r_call,
            "r_sms": self.r_sms,
            "r_multi": self.r_multi,
            "dyad_census": self.dyad_census,
        }


def _user_id(i: int, width: int) -> str:
    return f"u{i:0{width}d}"


def _sample_pairs(rng: random.Random, n: int, p: float) -> Iterator[tuple[int, int]]:
    """Unordered pairs (w, v) with w < v, Bernoulli(p) each, via geometric skips."""
    if p <= 0.0:
        return
    if p >= 1.0:
        for v in range(1, n):
            for w in range(v):
                yield (w, v)
        return
    log_q = math.log(1.0 - p)
    v, w = 1, -1
    while v < n:
        skip = int(math.log(1.0 - rng.random()) / log_q)
        w += 1 + skip
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            yield (w, v)


def _poisson(rng: random.Random, lam: float) -> int:
    if lam <= 0.0:
        return 0
    threshold = math.exp(-lam)
    k = 0
    p = 1.0
    while True:
        p *= rng.random()
        if p <= threshold:
            return k
        k += 1


# Plan entry: (sender index, receiver index, dimension, interaction count)
_PlanEntry = tuple[int, int, Dimension, int]

_STATE_NONE, _STATE_OUT, _STATE_IN, _STATE_MUTUAL = "none", "out", "in", "mutual"


def generate_cdrs(cfg: SynthConfig) -> tuple[Iterator[CdrRecord], GroundTruth]:
    """Plant the network and return (lazy record stream, realized GroundTruth).

    The stream is deterministic for a fixed config: consuming it in order
    always yields the same records. The GroundTruth is complete before the
    first record is read.
    """
    rng = random.Random(cfg.seed)
    width = len(str(cfg.n_users - 1))
    defaults = FilterConfig()
    floor = defaults.min_interactions + 1 if cfg.guarantee_significance else 1
    excess = max(cfg.activity - floor, 0.0)

    from .reciprocity import DYAD_CLASSES

    truth = GroundTruth(n_users=cfg.n_users)
    truth.dyad_census = {label: 0 for label in DYAD_CLASSES}
    user_bits = bytearray(cfg.n_users)  # bit 1 = call activity, bit 2 = sms
    plan: list[_PlanEntry] = []

    p_edge = min(cfg.mean_degree / (cfg.n_users - 1), 1.0)
    for w, v in _sample_pairs(rng, cfg.n_users, p_edge):
        truth.pair_count += 1
        roll = rng.random()
        if roll < cfg.p_both:
            channels = (Dimension.CALL, Dimension.SMS)
            truth.both_pairs += 1
        elif roll < cfg.p_both + cfg.p_call_only:
            channels = (Dimension.CALL,)
            truth.call_only_pairs += 1
        else:
            channels = (Dimension.SMS,)
            truth.sms_only_pairs += 1

        states = {Dimension.CALL: _STATE_NONE, Dimension.SMS: _STATE_NONE}
        for channel in channels:
            mutual = rng.random() < cfg.p_reciprocal
            if mutual:
                directions = ((w, v), (v, w))
                states[channel] = _STATE_MUTUAL
                if channel is Dimension.CALL:
                    truth.call_mutual_pairs += 1
                else:
                    truth.sms_mutual_pairs += 1
            elif rng.random() < 0.5:
                directions = ((w, v),)
                states[channel] = _STATE_OUT
            else:
                directions = ((v, w),)
                states[channel] = _STATE_IN
            bit = 1 if channel is Dimension.CALL else 2
            user_bits[w] |= bit
            user_bits[v] |= bit
            for s, r in directions:
                count = floor + _poisson(rng, excess)
                plan.append((s, r, channel, count))
                truth.records_total += count
                if channel is Dimension.CALL:
                    truth.call_edges += 1
                else:
                    truth.sms_edges += 1

        truth.dyad_census[
            f"call={states[Dimension.CALL]},sms={states[Dimension.SMS]}"
        ] += 1

        # Ordered-pair census: which dimensions does each direction carry.
        for rev in (False, True):
            mask = 0
            for channel in channels:
                state = states[channel]
                covers = state == _STATE_MUTUAL or state == (_STATE_IN if rev else _STATE_OUT)
                if covers:
                    mask |= 1 if channel is Dimension.CALL else 2
            if mask == 3:
                truth.directed_both += 1
            elif mask == 1:
                truth.directed_call_only += 1
            elif mask == 2:
                truth.directed_sms_only += 1

    for bits in user_bits:
        if bits == 3:
            truth.node_both += 1
        elif bits == 1:
            truth.node_call_only += 1
        elif bits == 2:
            truth.node_sms_only += 1

    return _emit(plan, cfg, rng, width, defaults), truth


def _emit(
    plan: list[_PlanEntry],
    cfg: SynthConfig,
    rng: random.Random,
    width: int,
    defaults: FilterConfig,
) -> Iterator[CdrRecord]:
    window_end = cfg.window_start + cfg.window_seconds
    duration_rate = 1.0 / cfg.duration_mean
    for s, r, channel, count in plan:
        sender = _user_id(s, width)
        receiver = _user_id(r, width)
        if channel is Dimension.CALL:
            durations = [int(rng.expovariate(duration_rate)) + 1 for _ in range(count)]
            if cfg.guarantee_significance:
                deficit = defaults.min_call_total_duration + 1 - sum(durations)
                if deficit > 0:
                    durations[-1] += deficit
        else:
            durations = [0] * count
        for duration in durations:
            start = rng.randrange(cfg.window_start, window_end)
            yield CdrRecord(sender, receiver, start, duration, channel)


def write_cdr_csv(records: Iterable[CdrRecord], path: str | Path) -> int:
    """Write records as header-less CDR CSV rows; returns the row count."""
    written = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(
                f"{rec.sender},{rec.receiver},{rec.start_time},"
                f"{rec.duration},{rec.channel.value}\n"
            )
            written += 1
    return written
