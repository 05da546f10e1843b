import numpy as np
from scipy import stats

from percsim.rng import mix64, pair_uniforms, substream


class TestMix:
    def test_deterministic(self):
        assert mix64(1, 2, "x") == mix64(1, 2, "x")

    def test_order_sensitive(self):
        assert mix64(1, 2) != mix64(2, 1)

    def test_string_tags_distinct(self):
        assert mix64(0, "points") != mix64(0, "edges")

    def test_low_collision_rate(self):
        keys = {mix64(seed, n, t) for seed in range(4)
                for n in (8, 16) for t in range(500)}
        assert len(keys) == 4 * 2 * 500


class TestSubstream:
    def test_reproducible(self):
        a = substream(7, "x").random(5)
        b = substream(7, "x").random(5)
        assert np.array_equal(a, b)

    def test_tag_changes_stream(self):
        a = substream(7, "x").random(5)
        b = substream(7, "y").random(5)
        assert not np.array_equal(a, b)

    def test_streams_look_independent(self):
        # correlation between sibling streams should be tiny
        a = substream(0, "a").random(20_000)
        b = substream(0, "b").random(20_000)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.02


class TestPairUniforms:
    def test_symmetric_in_pair_order(self):
        i = np.arange(100)
        j = np.arange(100, 200)
        assert np.array_equal(pair_uniforms(3, i, j), pair_uniforms(3, j, i))

    def test_seed_changes_values(self):
        i, j = np.arange(50), np.arange(50, 100)
        assert not np.array_equal(pair_uniforms(1, i, j), pair_uniforms(2, i, j))

    def test_marginal_is_uniform(self):
        n = 400
        iv, jv = np.triu_indices(n, k=1)
        u = pair_uniforms(11, iv, jv)
        assert ((u >= 0) & (u < 1)).all()
        _, p = stats.kstest(u, "uniform")
        assert p > 1e-4

    def test_distinct_pairs_distinct_values(self):
        iv, jv = np.triu_indices(200, k=1)
        u = pair_uniforms(5, iv, jv)
        assert len(np.unique(u)) == len(u)
