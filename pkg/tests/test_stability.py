import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varclust import DataError, RareCategoryError, bootstrap_stability, rand_indices

from .conftest import make_mixed_dataset, make_vs, quali, quant
from .oracles import rand_oracle


class TestRandIndices:
    def test_identical_partitions(self):
        for labels in ([1, 1, 2, 2, 3], [1, 2, 3, 4], [1, 1, 1, 1]):
            assert rand_indices(labels, labels) == (1.0, 1.0)

    def test_crossed_pairs(self):
        rand, adjusted = rand_indices([1, 1, 2, 2], [1, 2, 1, 2])
        assert rand == pytest.approx(1 / 3, abs=1e-12)
        assert adjusted == pytest.approx(-0.5, abs=1e-12)
        assert (rand, adjusted) == pytest.approx(
            rand_oracle([1, 1, 2, 2], [1, 2, 1, 2]), abs=1e-12
        )

    def test_single_cluster_baseline(self):
        # against the trivial one-cluster partition the adjusted index
        # equals its permutation-model expectation
        _, adjusted = rand_indices([1, 1, 2, 2, 3], [7, 7, 7, 7, 7])
        assert adjusted == pytest.approx(0.0, abs=1e-12)

    def test_symmetry(self):
        p = [1, 2, 2, 3, 1, 3]
        q = [1, 1, 2, 2, 3, 3]
        assert rand_indices(p, q) == rand_indices(q, p)

    def test_relabeling_invariance(self):
        p = [1, 2, 2, 3, 1]
        q = [2, 2, 1, 1, 3]
        relabeled = [{1: "x", 2: "y", 3: "z"}[v] for v in q]
        assert rand_indices(p, q) == rand_indices(p, relabeled)

    def test_too_few_objects(self):
        with pytest.raises(DataError):
            rand_indices([1], [1])

    def test_mismatched_lengths(self):
        with pytest.raises(DataError):
            rand_indices([1, 2], [1, 2, 3])

    @given(st.lists(st.integers(0, 3), min_size=2, max_size=12))
    @settings(max_examples=60, deadline=None)
    def test_matches_pair_enumeration_oracle(self, p_labels):
        rng = np.random.default_rng(len(p_labels))
        q_labels = rng.integers(0, 3, size=len(p_labels)).tolist()
        got = rand_indices(p_labels, q_labels)
        expect = rand_oracle(p_labels, q_labels)
        assert got[0] == pytest.approx(expect[0], abs=1e-12)
        assert got[1] == pytest.approx(expect[1], abs=1e-12)
        assert 0.0 <= got[0] <= 1.0
        assert got[1] <= 1.0 + 1e-12

    def test_adjusted_is_one_iff_identical(self):
        rng = np.random.default_rng(9)
        for _ in range(40):
            n = int(rng.integers(3, 10))
            p = rng.integers(0, 3, size=n).tolist()
            q = rng.integers(0, 3, size=n).tolist()
            _, adjusted = rand_indices(p, q)
            same = len({(a, b) for a, b in zip(p, q)}) == len(set(p)) == len(set(q))
            if same:
                assert adjusted == pytest.approx(1.0, abs=1e-12)
            else:
                assert adjusted < 1.0 - 1e-12


def identity_sampler(rng, n):
    return np.arange(n)


class TestBootstrapStability:
    def test_identity_resampling_gives_ones(self, decathlon):
        res = bootstrap_stability(decathlon, b=5, seed=3, index_sampler=identity_sampler)
        assert np.allclose(res.mat_cr, 1.0)
        assert res.mean_adjusted_rand == (1.0,) * 8

    def test_matrix_shape(self, decathlon):
        res = bootstrap_stability(decathlon, b=4, seed=0)
        assert res.mat_cr.shape == (4, decathlon.p - 2)
        assert res.k_values == tuple(range(2, decathlon.p))

    def test_reproducible_with_seed(self, decathlon):
        a = bootstrap_stability(decathlon, b=6, seed=11)
        b = bootstrap_stability(decathlon, b=6, seed=11)
        assert np.array_equal(a.mat_cr, b.mat_cr)

    def test_requires_three_variables(self, decathlon):
        with pytest.raises(DataError):
            bootstrap_stability(decathlon.subset(["100m", "400m"]), b=2)

    def test_strict_rare_raises(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=8)
        vs = make_vs(
            quali("z", ["r"] + ["a", "b"] * 3 + ["a"]),  # level "r" appears once
            quant("x", x),
            quant("y", rng.normal(size=8)),
        )

        def drop_first_row(rng_, n):
            return np.ones(n, dtype=np.int64)  # row 0 (the rare level) never drawn

        with pytest.raises(RareCategoryError, match="'z'"):
            bootstrap_stability(
                vs, b=2, seed=1, strict_rare=True, index_sampler=drop_first_row
            )

    def test_failed_replicates_recorded_and_excluded(self):
        rng = np.random.default_rng(0)
        vs = make_vs(
            quali("z", ["r"] + ["a", "b"] * 5),
            quant("x", rng.normal(size=11)),
            quant("y", rng.normal(size=11)),
        )

        calls = {"n": 0}

        def sometimes_bad(rng_, n):
            calls["n"] += 1
            if calls["n"] <= 11:  # first replicate exhausts all its redraws
                return np.ones(n, dtype=np.int64) * 2
            return np.arange(n)

        res = bootstrap_stability(vs, b=2, seed=5, index_sampler=sometimes_bad)
        assert len(res.failed_replicates) == 1
        assert res.failed_replicates[0][0] == 0
        assert np.isnan(res.mat_cr[0]).all()
        # means computed over the surviving replicate only
        assert res.mean_adjusted_rand == (1.0,)

    def test_all_replicates_failing_raises(self):
        rng = np.random.default_rng(0)
        vs = make_vs(
            quali("z", ["r"] + ["a", "b"] * 3),
            quant("x", rng.normal(size=7)),
            quant("y", rng.normal(size=7)),
        )

        def always_bad(rng_, n):
            return np.zeros(n, dtype=np.int64)  # constant rows: zero variance

        with pytest.raises(RareCategoryError):
            bootstrap_stability(vs, b=2, seed=0, index_sampler=always_bad)

    def test_curve_field_toggle(self, decathlon):
        with_curve = bootstrap_stability(
            decathlon, b=2, seed=0, index_sampler=identity_sampler
        )
        without = bootstrap_stability(
            decathlon, b=2, seed=0, graphics_data=False, index_sampler=identity_sampler
        )
        assert with_curve.curve == tuple(zip(with_curve.k_values, with_curve.mean_adjusted_rand))
        assert without.curve is None
        assert without.mat_cr.shape == with_curve.mat_cr.shape

    def test_mixed_data_bootstrap_runs(self):
        rng = np.random.default_rng(31)
        vs = make_mixed_dataset(rng, 25, 6, quali_share=0.3)
        res = bootstrap_stability(vs, b=5, seed=2)
        ok = res.mat_cr[~np.isnan(res.mat_cr).any(axis=1)]
        assert (ok <= 1 + 1e-12).all()
