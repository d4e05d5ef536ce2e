import random

import pytest

from cdrgraph import (
    Dimension,
    build_multigraph,
    component_stats,
    jaccard_coefficient,
    jaccard_distribution,
    layer_jaccard,
    link_label_census,
    node_set_overlap,
)
from cdrgraph.overlap import HIST_BINS

import oracles

CALL, SMS = Dimension.CALL, Dimension.SMS


def graph_of(triples):
    return build_multigraph(oracles.stats_from_triples(set(triples)))


class TestNodeSetOverlap:
    def test_partial_overlap(self):
        # V_call = {1,2,3}, V_sms = {3,4}
        g = graph_of([("1", "2", CALL), ("2", "3", CALL), ("3", "4", SMS)])
        report = node_set_overlap(g)
        assert (report.both, report.call_only, report.sms_only) == (1, 2, 1)
        assert report.total == g.num_nodes

    def test_identical_layers(self):
        g = graph_of([("a", "b", CALL), ("a", "b", SMS)])
        report = node_set_overlap(g)
        assert report.call_only == 0 and report.sms_only == 0 and report.both == 2

    def test_fractions_sum_to_one(self):
        rng = random.Random(30)
        for _ in range(50):
            triples = oracles.random_triples(rng, 12)
            if not triples:
                continue
            report = node_set_overlap(graph_of(triples))
            total = report.fraction_both + report.fraction_call_only + report.fraction_sms_only
            assert abs(total - 1.0) < 1e-9

    def test_relabeling_invariance(self):
        rng = random.Random(31)
        triples = oracles.random_triples(rng, 10)
        report = node_set_overlap(graph_of(triples))
        relabeled = {(u + "x", v + "x", d) for u, v, d in triples}
        other = node_set_overlap(graph_of(relabeled))
        assert (report.both, report.call_only, report.sms_only) == (
            other.both,
            other.call_only,
            other.sms_only,
        )


class TestLayerJaccard:
    def test_exclusive_caller_scores_one(self):
        g = graph_of([("u", "a", CALL), ("u", "b", CALL)])
        assert layer_jaccard(g, "u", "out") == 1.0

    def test_identical_neighborhoods_score_zero(self):
        g = graph_of([("u", "a", CALL), ("u", "a", SMS)])
        assert layer_jaccard(g, "u", "out") == 0.0

    def test_partial_overlap(self):
        # call {a,b,c}, sms {c,d}: |{a,b}| / |{a,b,c,d}| = 0.5
        g = graph_of(
            [("u", "a", CALL), ("u", "b", CALL), ("u", "c", CALL), ("u", "c", SMS), ("u", "d", SMS)]
        )
        assert layer_jaccard(g, "u", "out") == 0.5
        assert layer_jaccard(g, "u", "out", dim=SMS) == 0.25

    def test_undefined_when_union_empty(self):
        g = graph_of([("u", "a", CALL)])
        assert layer_jaccard(g, "a", "out") is None  # a has no out-neighbors

    def test_intersection_variant(self):
        g = graph_of([("u", "a", CALL), ("u", "b", CALL)])
        # literal variant: empty intersection -> undefined
        assert layer_jaccard(g, "u", "out", denominator="intersection") is None
        g2 = graph_of(
            [("u", "a", CALL), ("u", "b", CALL), ("u", "a", SMS)]
        )
        # |{b}| / |{a}| = 1.0 on the literal reading
        assert layer_jaccard(g2, "u", "out", denominator="intersection") == 1.0
        with pytest.raises(ValueError):
            layer_jaccard(g2, "u", "out", denominator="bogus")


class TestJaccardCoefficient:
    def test_disjoint_zero(self):
        g = graph_of([("u", "a", CALL), ("u", "b", SMS)])
        assert jaccard_coefficient(g, "u", "out") == 0.0

    def test_equal_one(self):
        g = graph_of([("u", "a", CALL), ("u", "a", SMS)])
        assert jaccard_coefficient(g, "u", "out") == 1.0

    def test_quarter(self):
        g = graph_of(
            [("u", "a", CALL), ("u", "b", CALL), ("u", "c", CALL), ("u", "c", SMS), ("u", "d", SMS)]
        )
        assert jaccard_coefficient(g, "u", "out") == 0.25


class TestDistribution:
    def test_all_exclusive_callers_mass_at_one(self):
        g = graph_of([("u", "a", CALL), ("v", "b", CALL)])
        dist = jaccard_distribution(g, "out")
        assert all(v == 1.0 for v in dist.phi_cs)
        assert dist.histograms["phi_cs"][HIST_BINS - 1] == dist.defined_count

    def test_histogram_bookkeeping(self):
        rng = random.Random(32)
        for _ in range(50):
            triples = oracles.random_triples(rng, 12)
            g = graph_of(triples)
            for direction in ("out", "in", "all"):
                dist = jaccard_distribution(g, direction)
                assert dist.defined_count + dist.undefined_count == g.num_nodes
                for measure in ("phi_cs", "phi_sc", "coefficient"):
                    assert sum(dist.histograms[measure]) == dist.defined_count
                assert all(0.0 <= v <= 1.0 for v in dist.phi_cs + dist.phi_sc + dist.coefficient)

    def test_values_match_oracle(self):
        rng = random.Random(33)
        for _ in range(50):
            triples = oracles.random_triples(rng, 10)
            g = graph_of(triples)
            for direction in ("out", "in", "all"):
                dist = jaccard_distribution(g, direction)
                recorded = dict(zip(dist.node_ids, zip(dist.phi_cs, dist.phi_sc, dist.coefficient)))
                for u in g.nodes():
                    expected = (
                        oracles.phi(triples, u, direction, CALL),
                        oracles.phi(triples, u, direction, SMS),
                        oracles.coefficient(triples, u, direction),
                    )
                    if expected[0] is None:
                        assert u not in recorded
                    else:
                        assert recorded[u] == expected

    def test_partition_identity(self):
        rng = random.Random(34)
        for _ in range(100):
            triples = oracles.random_triples(rng, 12)
            dist = jaccard_distribution(graph_of(triples), "out")
            for cs, sc, coef in zip(dist.phi_cs, dist.phi_sc, dist.coefficient):
                assert abs(cs + sc + coef - 1.0) <= 1e-12

    def test_phi_one_iff_exclusive(self):
        rng = random.Random(35)
        for _ in range(50):
            triples = oracles.random_triples(rng, 10)
            g = graph_of(triples)
            for u in g.nodes():
                value = layer_jaccard(g, u, "out")
                call_set = g.neighborhood(u, CALL, "out")
                sms_set = g.neighborhood(u, SMS, "out")
                if value == 1.0:
                    assert call_set and not sms_set
                if call_set and not sms_set:
                    assert value == 1.0


class TestCensus:
    def test_directed_example(self):
        g = graph_of([("u", "v", CALL), ("u", "v", SMS), ("a", "b", CALL)])
        c = link_label_census(g, "directed_pairs")
        assert (c.both, c.call_only, c.sms_only) == (1, 1, 0)

    def test_unordered_merges_directions(self):
        g = graph_of([("u", "v", CALL), ("v", "u", SMS)])
        directed = link_label_census(g, "directed_pairs")
        assert (directed.both, directed.call_only, directed.sms_only) == (0, 1, 1)
        unordered = link_label_census(g, "unordered_pairs")
        assert (unordered.both, unordered.call_only, unordered.sms_only) == (1, 0, 0)

    def test_matches_oracle(self):
        rng = random.Random(36)
        for _ in range(100):
            triples = oracles.random_triples(rng, 12)
            g = graph_of(triples)
            for basis in ("directed_pairs", "unordered_pairs"):
                c = link_label_census(g, basis)
                assert (c.both, c.call_only, c.sms_only) == oracles.census(triples, basis)

    def test_total_matches_connectivity_counters(self):
        rng = random.Random(37)
        for _ in range(50):
            triples = oracles.random_triples(rng, 12)
            g = graph_of(triples)
            stats = component_stats(g).multigraph
            assert link_label_census(g, "directed_pairs").total == stats.e_directed
            assert link_label_census(g, "unordered_pairs").total == stats.e_pairs

    def test_bad_basis(self):
        with pytest.raises(ValueError):
            link_label_census(graph_of([]), "sideways")
