import numpy as np
import pytest

from percsim.edges import EdgeList, expected_edge_count, sample_edges_grid
from percsim.graphdist import Graph
from percsim.model import ModelParams, PointCloud, assemble_vertex_set
from percsim.observables import (
    count_cut_intervals,
    count_isolated_intervals,
    count_local_cut_intervals,
    degree_stats,
    dyadic_bands,
    edge_length_histogram,
    renorm_event_frequency,
    subcube_connection_indicator,
)
from percsim.rng import substream


def instance(d=1, N=16, s=2.0, beta=1.0, rho=1.0, seed=0):
    p = ModelParams(d=d, N=N, s=s, beta=beta, rho=rho, seed=seed)
    cloud = assemble_vertex_set(p, substream(seed, "points"))
    el = sample_edges_grid(cloud, p, seed=seed)
    return Graph.build(cloud, el), p


def manual_graph(coords, backbone_count, extra_pairs):
    cloud = PointCloud(coords=np.asarray(coords, dtype=float),
                       backbone_count=backbone_count)
    bb = [[k, k + 1] for k in range(backbone_count - 1)]
    pairs = np.asarray(bb + list(extra_pairs), dtype=np.int64)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return Graph.build(cloud, EdgeList(pairs[order], backbone_count - 1))


class TestHistogram:
    def test_beta_zero_all_empty(self):
        g, _ = instance(beta=0.0, rho=1e-9)
        h = edge_length_histogram(g, dyadic_bands(16.0))
        assert h.counts.sum() == 0

    def test_single_edge_lands_in_its_band(self):
        coords = [[float(k)] for k in range(5)] + [[0.25], [2.75]]
        g = manual_graph(coords, 5, [[5, 6]])
        h = edge_length_histogram(g, [(0.0, 2.0), (2.0, 3.0), (3.0, 5.0)])
        assert h.counts.tolist() == [0, 1, 0]
        assert h.poisson_only_counts.tolist() == [0, 1, 0]

    def test_conservation(self):
        g, _ = instance(N=64, s=1.5, seed=3)
        h = edge_length_histogram(g, dyadic_bands(64.0))
        assert h.counts.sum() == len(g.pairs) - g.backbone_edge_count

    def test_band_mean_matches_integral(self):
        p = ModelParams(d=1, N=64, s=2.0, beta=1.0, rho=1.0, seed=0)
        band = (16.0, 32.0)
        reps = 150
        counts = []
        for k in range(reps):
            cloud = assemble_vertex_set(p, substream(k, "points"))
            el = sample_edges_grid(cloud, p, seed=k)
            g = Graph.build(cloud, el)
            h = edge_length_histogram(g, [band])
            counts.append(h.poisson_only_counts[0])
        est, se_mc = expected_edge_count(p, band=band, n_samples=300_000)
        mean = np.mean(counts)
        se = np.std(counts, ddof=1) / np.sqrt(reps) + se_mc
        assert abs(mean - est) <= 3 * se


class TestCutIntervals:
    def test_beta_zero_every_interval_cut(self):
        g, _ = instance(N=12, beta=0.0, rho=1e-9)
        assert count_cut_intervals(g, 1.0) == 12

    def test_long_edge_spares_only_endpoint_intervals(self):
        coords = [[float(k)] for k in range(9)] + [[0.5], [7.5]]
        g = manual_graph(coords, 9, [[9, 10]])
        # strict crossing kills intervals 1..6; 0 and 7 hold the endpoints
        assert count_cut_intervals(g, 1.0) == 2

    def test_short_edges_do_not_count(self):
        # edge of length <= 1 is ignored by the cut definition
        coords = [[float(k)] for k in range(5)] + [[1.8], [2.7]]
        g = manual_graph(coords, 5, [[5, 6]])
        assert count_cut_intervals(g, 1.0) == 4

    def test_middle_edge_kills_inner_intervals(self):
        coords = [[float(k)] for k in range(9)] + [[1.5], [6.5]]
        g = manual_graph(coords, 9, [[9, 10]])
        # crossed intervals are [2,3], [3,4], [4,5], [5,6]
        assert count_cut_intervals(g, 1.0) == 4

    def test_rejects_higher_dimension(self):
        g, _ = instance(d=2, N=4, rho=0.5)
        with pytest.raises(ValueError):
            count_cut_intervals(g, 1.0)

    def test_linear_growth(self):
        means = {}
        for N in (64, 128):
            p = ModelParams(d=1, N=N, s=3.0, beta=1.0, rho=1.0, seed=0)
            vals = []
            for k in range(60):
                cloud = assemble_vertex_set(p, substream(k, "pts"))
                g = Graph.build(cloud, sample_edges_grid(cloud, p, seed=k))
                vals.append(count_cut_intervals(g, 1.0))
            means[N] = np.mean(vals)
        assert 1.6 <= means[128] / means[64] <= 2.4


class TestIsolatedIntervals:
    def test_beta_zero_all_isolated(self):
        g, _ = instance(N=12, beta=0.0, rho=1e-9)
        assert count_isolated_intervals(g, 2.0) == 6

    def test_two_interval_hop_destroys_isolation(self):
        coords = [[float(k)] for k in range(9)] + [[0.5], [4.5]]
        g = manual_graph(coords, 9, [[9, 10]])
        # intervals 0 and 4 talk across a gap of >= 2 intervals
        assert count_isolated_intervals(g, 1.0) == 6

    def test_adjacent_edges_keep_isolation(self):
        coords = [[float(k)] for k in range(5)] + [[0.5], [1.5]]
        g = manual_graph(coords, 5, [[5, 6]])
        assert count_isolated_intervals(g, 1.0) == 4

    def test_rejects_non_divisor(self):
        g, _ = instance(N=10)
        with pytest.raises(ValueError):
            count_isolated_intervals(g, 3.0)


class TestLocalCutIntervals:
    def test_beta_zero_all_sub_intervals(self):
        g, _ = instance(N=12, beta=0.0, rho=1e-9)
        assert count_local_cut_intervals(g, (4.0, 8.0), 1.0) == 4

    def test_edge_spanning_parent_kills_all(self):
        coords = [[float(k)] for k in range(9)] + [[2.1], [5.9]]
        g = manual_graph(coords, 9, [[9, 10]])
        assert count_local_cut_intervals(g, (2.0, 6.0), 1.0) == 2

    def test_consistency_with_global_cut_count(self):
        g, _ = instance(N=32, s=2.0, seed=17)
        local = count_local_cut_intervals(g, (0.0, 32.0), 1.0)
        # edges outside [0, N] do not exist, so definitions coincide
        assert local == count_cut_intervals(g, 1.0)


class TestSubcubeConnection:
    def test_beta_zero_non_adjacent(self):
        g, _ = instance(N=9, beta=0.0, rho=1e-9)
        assert not subcube_connection_indicator(g, ((0.0,), (3.0,)), ((6.0,), (9.0,)))

    def test_detects_edge(self):
        coords = [[float(k)] for k in range(9)] + [[1.0], [7.0]]
        g = manual_graph(coords, 9, [[9, 10]])
        assert subcube_connection_indicator(g, ((0.0,), (3.0,)), ((6.0,), (9.0,)))

    def test_symmetric(self):
        g, _ = instance(N=27, s=2.0, seed=2)
        a = ((0.0,), (9.0,))
        b = ((18.0,), (27.0,))
        assert (subcube_connection_indicator(g, a, b)
                == subcube_connection_indicator(g, b, a))


class TestRenormEvents:
    def test_beta_zero_level_one_certain(self):
        # alpha chosen so level 1 has >= 3 cubes: non-adjacent pairs exist
        p = ModelParams(d=1, N=256, s=0.5, beta=0.0, rho=0.5, seed=0)
        out = renorm_event_frequency(p, alpha=0.7, m=1, trials=5)
        assert out["splits"][0] >= 3
        assert out["per_level"][0] == 1.0

    def test_huge_beta_never_fires(self):
        p = ModelParams(d=1, N=64, s=0.5, beta=1e3, rho=1.0, seed=0)
        out = renorm_event_frequency(p, alpha=0.7, m=2, trials=5)
        assert out["per_level"] == [0.0, 0.0]

    def test_rejects_bad_alpha(self):
        p = ModelParams(d=1, N=64, s=1.5, beta=1.0, rho=1.0)
        with pytest.raises(ValueError):
            renorm_event_frequency(p, alpha=0.7, m=1, trials=1)  # 2da <= s
        with pytest.raises(ValueError):
            renorm_event_frequency(p, alpha=1.1, m=1, trials=1)


class TestDegreeStats:
    def test_beta_zero_poisson_degree_zero(self):
        g, _ = instance(N=8, beta=0.0, rho=2.0)
        assert degree_stats(g).poisson_mean_degree == 0.0

    def test_complete_graph(self):
        coords = np.zeros((5, 1))
        cloud = PointCloud(coords=coords, backbone_count=1)
        pairs = np.array([[i, j] for i in range(5) for j in range(i + 1, 5)])
        g = Graph.build(cloud, EdgeList(pairs, backbone_edge_count=0))
        assert degree_stats(g).mean_degree == 4.0

    def test_mean_degree_counts_both_endpoints(self):
        g, _ = instance(N=16, s=1.5, seed=4)
        ds = degree_stats(g)
        assert ds.mean_degree == pytest.approx(2 * len(g.pairs) / g.n)
        assert ds.max_degree >= ds.mean_degree
