"""Acceptance suite: one test per criterion, printing one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines
as they complete. The random-graph suites compare the implementation against
the brute-force oracles in tests/oracles.py on freshly generated inputs.
"""

import json
import math
import random
import resource
import time
from contextlib import contextmanager
from pathlib import Path

from cdrgraph import (
    Dimension,
    FilterConfig,
    SynthConfig,
    aggregate_pairs,
    apply_significance,
    build_multigraph,
    dyad_census,
    flatten,
    generate_cdrs,
    ingest,
    jaccard_coefficient,
    jaccard_distribution,
    layer_jaccard,
    layer_reciprocity,
    link_label_census,
    multireciprocity,
    node_set_overlap,
    reciprocity_report,
    strongly_connected_components,
    weakly_connected_components,
    write_cdr_csv,
)
from cdrgraph.cli import RunConfig, main, run_pipeline
from cdrgraph.reciprocity import DYAD_CLASSES, multireciprocity_counts

import oracles

CALL, SMS = Dimension.CALL, Dimension.SMS
REPO = Path(__file__).resolve().parent.parent

CONNECTIVITY_SUITE = ("connectivity", 1000, 50)
METRICS_SUITE = ("metrics", 1000, 30)


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def suite_graphs(suite):
    """Deterministic stream of (triples, multigraph) pairs for one suite."""
    tag, count, max_nodes = suite
    for i in range(count):
        rng = random.Random(f"{tag}-{i}")
        triples = oracles.random_triples(rng, max_nodes)
        yield triples, build_multigraph(oracles.stats_from_triples(triples))


def test_oracle_equivalence_connectivity():
    """SCC and WCC partitions match brute-force reachability on 1000 graphs."""
    with criterion("connectivity-oracle-equivalence"):
        start = time.monotonic()
        checked = 0
        for triples, g in suite_graphs(CONNECTIVITY_SUITE):
            if not triples:
                continue
            flat = flatten(g)
            nodes = oracles.induced_nodes(triples)
            pairs = oracles.flattened_pairs(triples)
            got_scc = {frozenset(c) for c in strongly_connected_components(flat)}
            got_wcc = {frozenset(c) for c in weakly_connected_components(flat)}
            assert got_scc == oracles.scc_partition(nodes, pairs)
            assert got_wcc == oracles.wcc_partition(nodes, pairs)
            checked += 1
        elapsed = time.monotonic() - start
        assert checked > 950
        assert elapsed < 60.0, f"connectivity suite took {elapsed:.1f}s"


def test_oracle_equivalence_metrics():
    """Overlap, census, and reciprocity metrics match set-enumeration oracles."""
    with criterion("metrics-oracle-equivalence"):
        for triples, g in suite_graphs(METRICS_SUITE):
            for direction in ("out", "in", "all"):
                dist = jaccard_distribution(g, direction)
                recorded = dict(
                    zip(dist.node_ids, zip(dist.phi_cs, dist.phi_sc, dist.coefficient))
                )
                for u in g.nodes():
                    expect_cs = oracles.phi(triples, u, direction, CALL)
                    if expect_cs is None:
                        assert u not in recorded
                        assert layer_jaccard(g, u, direction) is None
                        assert jaccard_coefficient(g, u, direction) is None
                        continue
                    cs, sc, coef = recorded[u]
                    assert cs == expect_cs
                    assert sc == oracles.phi(triples, u, direction, SMS)
                    assert coef == oracles.coefficient(triples, u, direction)
            for basis in ("directed_pairs", "unordered_pairs"):
                census = link_label_census(g, basis)
                assert (census.both, census.call_only, census.sms_only) == oracles.census(
                    triples, basis
                )
            for d in (CALL, SMS):
                mutual, total = oracles.layer_reciprocity(triples, d)
                assert layer_reciprocity(g.extract_layer(d)) == (
                    mutual / total if total else 0.0
                )
            mutual, total = oracles.multireciprocity(triples)
            assert multireciprocity(g) == (mutual / total if total else 0.0)
            expected_dyads = oracles.dyad_census(triples)
            got_dyads = dyad_census(g)
            for label in DYAD_CLASSES:
                assert got_dyads[label] == expected_dyads.get(label, 0)


def test_partition_identity():
    """phi_cs + phi_sc + coefficient == 1 (to 1e-12) on every suite graph."""
    with criterion("partition-identity"):
        for suite in (CONNECTIVITY_SUITE, METRICS_SUITE):
            for _triples, g in suite_graphs(suite):
                for direction in ("out", "in", "all"):
                    dist = jaccard_distribution(g, direction)
                    for cs, sc, coef in zip(dist.phi_cs, dist.phi_sc, dist.coefficient):
                        assert abs(cs + sc + coef - 1.0) <= 1e-12


def test_weighted_average_identity():
    """r_multi * |E| == r_call * |E_c| + r_sms * |E_s|, exact in integers."""
    with criterion("weighted-average-identity"):
        for suite in (CONNECTIVITY_SUITE, METRICS_SUITE):
            for _triples, g in suite_graphs(suite):
                report = reciprocity_report(g)
                multi_mutual, total = multireciprocity_counts(g)
                assert multi_mutual == report.call_mutual_edges + report.sms_mutual_edges
                assert total == report.call_edges + report.sms_edges
                assert report.multi_mutual_edges == multi_mutual
                assert report.total_edges == total


def test_planted_parameter_recovery(tmp_path):
    """Pipeline output equals the generator's realized plant exactly, and the
    plant sits within 3-sigma binomial bounds of the configured parameters."""
    with criterion("planted-parameter-recovery"):
        p_both, p_call, p_sms = 0.31 / 0.98, 0.46 / 0.98, 0.21 / 0.98
        p_rec = 0.43
        cfg = SynthConfig(
            n_users=10_000,
            mean_degree=4.0,
            p_both=p_both,
            p_call_only=p_call,
            p_sms_only=p_sms,
            p_reciprocal=p_rec,
            activity=5.0,
            seed=424242,
        )
        records, truth = generate_cdrs(cfg)
        path = tmp_path / "planted.csv"
        write_cdr_csv(records, path)

        filtered = ingest(path)
        g = build_multigraph(filtered)

        unordered = link_label_census(g, "unordered_pairs")
        assert (unordered.both, unordered.call_only, unordered.sms_only) == (
            truth.both_pairs,
            truth.call_only_pairs,
            truth.sms_only_pairs,
        )
        directed = link_label_census(g, "directed_pairs")
        assert (directed.both, directed.call_only, directed.sms_only) == (
            truth.directed_both,
            truth.directed_call_only,
            truth.directed_sms_only,
        )
        report = reciprocity_report(g)
        assert report.r_multi == truth.r_multi
        assert (report.multi_mutual_edges, report.total_edges) == (
            truth.call_mutual_edges + truth.sms_mutual_edges,
            truth.total_edges,
        )
        assert dyad_census(g) == truth.dyad_census
        overlap = node_set_overlap(g)
        assert (overlap.both, overlap.call_only, overlap.sms_only) == (
            truth.node_both,
            truth.node_call_only,
            truth.node_sms_only,
        )

        # Realized plant vs configured probabilities, 3-sigma binomial bounds.
        n = truth.pair_count
        for count, p in (
            (truth.both_pairs, p_both),
            (truth.call_only_pairs, p_call),
            (truth.sms_only_pairs, p_sms),
        ):
            sigma = math.sqrt(n * p * (1 - p))
            assert abs(count - n * p) <= 3 * sigma
        mutual_pairs = truth.call_mutual_pairs + truth.sms_mutual_pairs
        channel_pairs = truth.call_pairs + truth.sms_pairs
        sigma = math.sqrt(channel_pairs * p_rec * (1 - p_rec))
        assert abs(mutual_pairs - channel_pairs * p_rec) <= 3 * sigma
        # r_multi = 2m / (channel_pairs + m) is monotone in the mutual count m,
        # so the binomial bounds on m translate to bounds on r_multi.
        m_lo = channel_pairs * p_rec - 3 * sigma
        m_hi = channel_pairs * p_rec + 3 * sigma
        assert 2 * m_lo / (channel_pairs + m_lo) <= report.r_multi <= 2 * m_hi / (
            channel_pairs + m_hi
        )


def test_filter_semantics_boundary_table():
    """The strict-threshold boundary table from the cleaning rules."""
    with criterion("filter-boundary-table"):
        cfg = FilterConfig()

        def call_pair(count, total_duration):
            per = total_duration // count
            rest = total_duration - per * (count - 1)
            durations = [per] * (count - 1) + [rest]
            from cdrgraph import CdrRecord

            return aggregate_pairs(
                CdrRecord("u", "v", i, durations[i], CALL) for i in range(count)
            )

        def sms_pair(count):
            from cdrgraph import CdrRecord

            return aggregate_pairs(
                CdrRecord("u", "v", i, 0, SMS) for i in range(count)
            )

        assert apply_significance(call_pair(4, 70), cfg)          # kept
        assert apply_significance(call_pair(5, 60), cfg) == {}    # duration not strict
        assert apply_significance(call_pair(3, 70), cfg) == {}    # count not strict
        assert apply_significance(call_pair(3, 100000), cfg) == {}
        assert apply_significance(sms_pair(4), cfg)               # kept
        assert apply_significance(sms_pair(3), cfg) == {}         # dropped


def test_golden_worked_example(tmp_path):
    """The documented 6-node example: hand-computed reports, byte-stable."""
    with criterion("golden-worked-example"):
        cdrs = REPO / "docs" / "worked_example" / "cdrs.csv"
        golden_dir = REPO / "docs" / "worked_example" / "expected"
        run_a, run_b = tmp_path / "a", tmp_path / "b"
        assert main(["all", "--cdrs", str(cdrs), "--out-dir", str(run_a)]) == 0
        assert main(["all", "--cdrs", str(cdrs), "--out-dir", str(run_b)]) == 0

        # Byte-stable across runs and equal to the frozen golden artifacts.
        names = sorted(p.name for p in golden_dir.iterdir())
        assert sorted(p.name for p in run_a.iterdir()) == names
        for name in names:
            data = (run_a / name).read_bytes()
            assert data == (run_b / name).read_bytes(), name
            assert data == (golden_dir / name).read_bytes(), name

        # Spot-check the hand-computed values behind the goldens.
        stats = json.loads((run_a / "stats.json").read_text())
        assert stats["multigraph"] == {
            "n": 6, "e_directed": 8, "e_pairs": 6,
            "n_gscc": 4, "e_gscc_directed": 6, "e_gscc_pairs": 4,
            "n_gwcc": 6, "e_gwcc": 6, "e_gwcc_directed": 8,
        }
        overlap = json.loads((run_a / "overlap.json").read_text())
        assert (overlap["both"], overlap["call_only"], overlap["sms_only"]) == (4, 1, 1)
        census = json.loads((run_a / "census.json").read_text())
        assert (census["both"], census["call_only"], census["sms_only"]) == (1, 4, 3)
        rec = json.loads((run_a / "reciprocity.json").read_text())
        assert (rec["r_call"], rec["r_sms"], rec["r_multi"]) == (0.4, 0.5, 4 / 9)
        assert rec["dyad_census"]["call=mutual,sms=out"] == 1


def test_scale(tmp_path):
    """1M+ synthetic CDRs through the full pipeline: time, memory, digest."""
    with criterion("scale-1m-records"):
        cfg = SynthConfig(n_users=100_000, mean_degree=2.2, activity=5.0, seed=2024)
        records, _truth = generate_cdrs(cfg)
        cdr_path = tmp_path / "scale.csv"
        n_records = write_cdr_csv(records, cdr_path)
        assert n_records >= 1_000_000

        timings = []
        digests = []
        for run in ("r1", "r2"):
            out_dir = tmp_path / run
            start = time.monotonic()
            run_pipeline(RunConfig(cdr_path=cdr_path, out_dir=out_dir))
            timings.append(time.monotonic() - start)
            digests.append((out_dir / "inventory.json").read_bytes())

        for elapsed in timings:
            assert elapsed < 120.0, f"pipeline took {elapsed:.1f}s"
        # inventory.json embeds the sha256 of every artifact, so equal
        # inventories mean byte-identical reports.
        assert digests[0] == digests[1]

        peak_rss_kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        assert peak_rss_kb < 2 * 1024 * 1024, f"peak RSS {peak_rss_kb} kB"
        print(
            f"  scale: {n_records} records, runs {timings[0]:.1f}s / {timings[1]:.1f}s, "
            f"peak RSS {peak_rss_kb / 1024 / 1024:.2f} GB"
        )
