"""CDR parsing, cleaning and per-pair aggregation.

Input rows are CSV with columns sender,receiver,start_time,duration,channel
(channel token "call" or "sms", case-insensitive). The pipeline is a pure
streaming fold: parse -> clean -> aggregate -> significance filter. Counters
accumulate on an :class:`IngestStats` so the CLI can emit its summary JSON.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Iterable, Iterator

from .graph import Dimension


class ParseError(ValueError):
    """A malformed CDR line, addressed by 1-based line number."""

    def __init__(self, line_number: int | None, reason: str) -> None:
        at = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{at}{reason}")
        self.line_number = line_number
        self.reason = reason


@dataclass(frozen=True, slots=True)
class CdrRecord:
    """One call or SMS event. SMS records always carry duration 0."""

    sender: str
    receiver: str
    start_time: int
    duration: int
    channel: Dimension


@dataclass(frozen=True, slots=True)
class PairStats:
    """Aggregated interactions for one ordered pair on one dimension."""

    pair: tuple[str, str]
    dimension: Dimension
    count: int
    total_duration: int


@dataclass(frozen=True)
class FilterConfig:
    """Cleaning and significance thresholds.

    Thresholds are strict: a call pair survives only if its total duration
    exceeds min_call_total_duration seconds AND its interaction count exceeds
    min_interactions; an SMS pair needs only the count condition. By default
    significance is judged on the unordered pair (both directions summed) and
    both directed entries of a passing pair are kept; set directed_significance
    for per-directed-edge evaluation. allowed_nodes, when given, restricts
    records to those whose endpoints are both in the set.
    """

    min_call_total_duration: int = 60
    min_interactions: int = 3
    drop_zero_duration_calls: bool = True
    directed_significance: bool = False
    allowed_nodes: frozenset[str] | None = None

    def __post_init__(self) -> None:
        if self.min_call_total_duration < 0 or self.min_interactions < 0:
            raise ValueError("significance thresholds must be non-negative")


@dataclass
class IngestStats:
    """Counters for the ingest summary report."""

    records_read: int = 0
    parse_errors: int = 0
    zero_duration_dropped: int = 0
    self_loops_dropped: int = 0
    out_of_scope_dropped: int = 0
    pairs_before_filter: int = 0
    pairs_after_filter: int = 0

    def to_dict(self) -> dict[str, int]:
        return asdict(self)


_CHANNELS = {"call": Dimension.CALL, "sms": Dimension.SMS}


def _record_from_fields(fields: list[str], line_number: int | None) -> CdrRecord:
    if len(fields) != 5:
        raise ParseError(line_number, f"expected 5 fields, got {len(fields)}")
    sender, receiver, start_raw, duration_raw, channel_raw = (f.strip() for f in fields)
    channel = _CHANNELS.get(channel_raw.lower())
    if channel is None:
        raise ParseError(line_number, f"unknown channel token {channel_raw!r}")
    try:
        start_time = int(start_raw)
    except ValueError:
        raise ParseError(line_number, f"non-integer start_time {start_raw!r}") from None
    try:
        duration = int(duration_raw)
    except ValueError:
        raise ParseError(line_number, f"non-integer duration {duration_raw!r}") from None
    if duration < 0:
        raise ParseError(line_number, f"negative duration {duration}")
    if channel is Dimension.SMS:
        duration = 0
    return CdrRecord(sender, receiver, start_time, duration, channel)


def parse_record(line: str, line_number: int | None = None) -> CdrRecord:
    """Parse one CSV row into a CdrRecord, raising ParseError when malformed."""
    try:
        fields = next(csv.reader([line]))
    except StopIteration:
        raise ParseError(line_number, "empty line") from None
    return _record_from_fields(fields, line_number)


def read_cdr_file(
    path: str | Path,
    *,
    header: bool = False,
    errors: str = "raise",
    stats: IngestStats | None = None,
) -> Iterator[CdrRecord]:
    """Stream records from a CDR CSV file.

    errors="raise" aborts on the first malformed line; errors="skip" drops it
    and counts it in stats.parse_errors. Blank lines are ignored. With
    header=True the first line is skipped.
    """
    if errors not in ("raise", "skip"):
        raise ValueError(f"errors must be 'raise' or 'skip', got {errors!r}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        if header:
            next(reader, None)
        for fields in reader:
            if not fields:
                continue
            if stats is not None:
                stats.records_read += 1
            try:
                yield _record_from_fields(fields, reader.line_num)
            except ParseError:
                if errors == "raise":
                    raise
                if stats is not None:
                    stats.parse_errors += 1


def clean_stream(
    records: Iterable[CdrRecord],
    cfg: FilterConfig,
    stats: IngestStats | None = None,
) -> Iterator[CdrRecord]:
    """Drop non-social noise, preserving record order.

    Self-loops are always removed; zero-duration calls are removed when
    cfg.drop_zero_duration_calls (SMS records pass regardless of the flag,
    their duration being definitionally zero); records touching nodes outside
    cfg.allowed_nodes are removed when an allow-list is configured.
    """
    allowed = cfg.allowed_nodes
    for rec in records:
        if rec.sender == rec.receiver:
            if stats is not None:
                stats.self_loops_dropped += 1
            continue
        if allowed is not None and (rec.sender not in allowed or rec.receiver not in allowed):
            if stats is not None:
                stats.out_of_scope_dropped += 1
            continue
        if (
            cfg.drop_zero_duration_calls
            and rec.channel is Dimension.CALL
            and rec.duration == 0
        ):
            if stats is not None:
                stats.zero_duration_dropped += 1
            continue
        yield rec


PairKey = tuple[str, str, Dimension]


def aggregate_pairs(records: Iterable[CdrRecord]) -> dict[PairKey, PairStats]:
    """Fold a cleaned stream into per-(ordered pair, dimension) statistics.

    The fold is associative and commutative, so the result is independent of
    input order and shards can be aggregated separately and merged.
    """
    acc: dict[PairKey, list[int]] = {}
    for rec in records:
        key = (rec.sender, rec.receiver, rec.channel)
        cell = acc.get(key)
        if cell is None:
            acc[key] = [1, rec.duration]
        else:
            cell[0] += 1
            cell[1] += rec.duration
    return {
        key: PairStats(pair=(key[0], key[1]), dimension=key[2], count=c, total_duration=d)
        for key, (c, d) in acc.items()
    }


def _passes(d: Dimension, count: int, duration: int, cfg: FilterConfig) -> bool:
    if count <= cfg.min_interactions:
        return False
    if d is Dimension.CALL and duration <= cfg.min_call_total_duration:
        return False
    return True


def apply_significance(
    stats: dict[PairKey, PairStats], cfg: FilterConfig
) -> dict[PairKey, PairStats]:
    """Keep only socially significant pairs.

    In the default unordered mode the thresholds are evaluated on the summed
    totals of both directions of a pair, and both directed entries of a
    passing pair survive. Idempotent, and raising either threshold never adds
    an entry.
    """
    if cfg.directed_significance:
        return {
            key: ps
            for key, ps in stats.items()
            if _passes(ps.dimension, ps.count, ps.total_duration, cfg)
        }
    totals: dict[tuple[str, str, Dimension], list[int]] = {}
    for ps in stats.values():
        u, v = ps.pair
        ukey = (u, v, ps.dimension) if u <= v else (v, u, ps.dimension)
        cell = totals.get(ukey)
        if cell is None:
            totals[ukey] = [ps.count, ps.total_duration]
        else:
            cell[0] += ps.count
            cell[1] += ps.total_duration
    passing = {
        ukey for ukey, (c, d) in totals.items() if _passes(ukey[2], c, d, cfg)
    }
    result = {}
    for key, ps in stats.items():
        u, v = ps.pair
        ukey = (u, v, ps.dimension) if u <= v else (v, u, ps.dimension)
        if ukey in passing:
            result[key] = ps
    return result


def ingest(
    path: str | Path,
    cfg: FilterConfig | None = None,
    *,
    header: bool = False,
    errors: str = "raise",
    stats: IngestStats | None = None,
) -> dict[PairKey, PairStats]:
    """One-call ingest: read, clean, aggregate and filter a CDR file."""
    cfg = cfg or FilterConfig()
    records = read_cdr_file(path, header=header, errors=errors, stats=stats)
    aggregated = aggregate_pairs(clean_stream(records, cfg, stats))
    filtered = apply_significance(aggregated, cfg)
    if stats is not None:
        stats.pairs_before_filter = len(aggregated)
        stats.pairs_after_filter = len(filtered)
    return filtered
