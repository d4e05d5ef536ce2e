"""Report serialization: stable JSON/CSV writers and the artifact inventory.

Every JSON report carries schema_version, tool_version and an echo of the
semantic configuration (never filesystem paths), so reports are byte-stable
for identical inputs regardless of where the pipeline runs.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .connectivity import TableStats
from .ingest import IngestStats
from .overlap import HIST_BINS, JaccardDistribution, LinkLabelCensus, NodeOverlapReport
from .reciprocity import ReciprocityReport

SCHEMA_VERSION = 1


def _envelope(config_echo: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "config": config_echo,
    }


def ingest_payload(stats: IngestStats, config_echo: dict) -> dict:
    payload = _envelope(config_echo)
    payload.update(stats.to_dict())
    return payload


def stats_payload(table: TableStats, config_echo: dict) -> dict:
    payload = _envelope(config_echo)
    payload["multigraph"] = table.multigraph.to_dict()
    payload["call"] = table.call.to_dict()
    payload["sms"] = table.sms.to_dict()
    return payload


def overlap_payload(report: NodeOverlapReport, config_echo: dict) -> dict:
    payload = _envelope(config_echo)
    payload.update(
        {
            "nodes_total": report.total,
            "both": report.both,
            "call_only": report.call_only,
            "sms_only": report.sms_only,
            "fraction_both": report.fraction_both,
            "fraction_call_only": report.fraction_call_only,
            "fraction_sms_only": report.fraction_sms_only,
        }
    )
    return payload


def census_payload(census: LinkLabelCensus, config_echo: dict) -> dict:
    payload = _envelope(config_echo)
    payload.update(
        {
            "basis": census.basis,
            "total": census.total,
            "both": census.both,
            "call_only": census.call_only,
            "sms_only": census.sms_only,
            "fraction_both": census.fraction_both,
            "fraction_call_only": census.fraction_call_only,
            "fraction_sms_only": census.fraction_sms_only,
        }
    )
    return payload


def reciprocity_payload(report: ReciprocityReport, config_echo: dict) -> dict:
    payload = _envelope(config_echo)
    payload.update(
        {
            "r_call": report.r_call,
            "r_sms": report.r_sms,
            "r_multi": report.r_multi,
            "call_mutual_edges": report.call_mutual_edges,
            "call_edges": report.call_edges,
            "sms_mutual_edges": report.sms_mutual_edges,
            "sms_edges": report.sms_edges,
            "multi_mutual_edges": report.multi_mutual_edges,
            "total_edges": report.total_edges,
            "call_empty": report.call_empty,
            "sms_empty": report.sms_empty,
            "multigraph_empty": report.multigraph_empty,
            "dyad_census": report.dyad_census,
        }
    )
    return payload


def jaccard_summary_payload(
    distributions: dict[str, JaccardDistribution], config_echo: dict
) -> dict:
    payload = _envelope(config_echo)
    payload["directions"] = {
        direction: {
            "defined_count": dist.defined_count,
            "undefined_count": dist.undefined_count,
        }
        for direction, dist in distributions.items()
    }
    return payload


def write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def write_jaccard_csv(path: Path, dist: JaccardDistribution) -> None:
    """Per-node values: node_id,phi_cs,phi_sc,coefficient."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("node_id", "phi_cs", "phi_sc", "coefficient"))
        for i, node in enumerate(dist.node_ids):
            writer.writerow(
                (node, repr(dist.phi_cs[i]), repr(dist.phi_sc[i]), repr(dist.coefficient[i]))
            )


def write_histogram_csv(path: Path, dist: JaccardDistribution, measure: str) -> None:
    """Histogram rows: bin_low,bin_high,count,fraction over HIST_BINS bins."""
    counts = dist.histograms[measure]
    total = dist.defined_count
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("bin_low", "bin_high", "count", "fraction"))
        for i, count in enumerate(counts):
            low = i / HIST_BINS
            high = (i + 1) / HIST_BINS
            fraction = count / total if total else 0.0
            writer.writerow((repr(low), repr(high), count, repr(fraction)))


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def inventory_payload(out_dir: Path, names: list[str]) -> dict:
    """Digest every produced artifact (relative names, sorted)."""
    artifacts = []
    for name in sorted(names):
        path = out_dir / name
        artifacts.append(
            {"name": name, "sha256": file_sha256(path), "bytes": path.stat().st_size}
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "artifacts": artifacts,
    }


@dataclass
class ReportSet:
    """Everything one pipeline run computed, plus where it was written."""

    out_dir: Path
    ingest_stats: IngestStats | None = None
    table_stats: TableStats | None = None
    overlap: NodeOverlapReport | None = None
    census: LinkLabelCensus | None = None
    jaccard: dict[str, JaccardDistribution] = field(default_factory=dict)
    reciprocity: ReciprocityReport | None = None
    artifacts: list[str] = field(default_factory=list)
