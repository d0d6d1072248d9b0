import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracopt.errors import InsufficientDataError, PipelineError
from fracopt.features import (attribute, default_trainer, eliminate, rfe,
                              sobol_first_order, spearman_corr,
                              tree_attribution, tree_expected_value)
from fracopt.model import (BoostParams, MatrixSchema, RegressionTree,
                           StackedModel, build_tree, fit_boosted, fit_ridge)
from fracopt.welldata import Dataset, WellRecord


class TestSpearman:
    def test_monotone_map_is_one(self):
        x = [0.1, 0.5, 1.2, 3.0, 4.5]
        y = [math.exp(v) for v in x]
        assert spearman_corr(x, y) == pytest.approx(1.0)

    def test_reversal_is_minus_one(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert spearman_corr(x, [-v for v in x]) == pytest.approx(-1.0)

    def test_ties_match_rank_then_pearson_oracle(self):
        x = [1.0, 2.0, 2.0, 4.0]
        y = [3.0, 1.0, 4.0, 2.0]
        # independent two-step oracle: midranks by hand, then Pearson
        rx = np.array([1.0, 2.5, 2.5, 4.0])
        ry = np.array([3.0, 1.0, 4.0, 2.0])
        expected = float(np.corrcoef(rx, ry)[0, 1])
        assert spearman_corr(x, y) == pytest.approx(expected, abs=1e-12)

    def test_scipy_oracle_on_random_samples(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        rng = np.random.default_rng(0)
        for _ in range(25):
            n = int(rng.integers(5, 40))
            x = rng.integers(0, 10, n).astype(float)  # ties likely
            y = rng.normal(size=n)
            ours = spearman_corr(list(x), list(y))
            ref = scipy_stats.spearmanr(x, y).statistic
            if ours is None:
                assert np.isnan(ref)
            else:
                assert ours == pytest.approx(ref, abs=1e-12)

    def test_pairwise_complete_and_errors(self):
        assert spearman_corr([1, 2, 3, None, 4], [1, 4, 2, 9, None]) is not None
        with pytest.raises(InsufficientDataError):
            spearman_corr([1, 2, None], [1, None, 3])
        assert spearman_corr([1.0, 1.0, 1.0], [1.0, 2.0, 3.0]) is None

    @given(st.lists(st.floats(-100, 100), min_size=4, max_size=30, unique=True))
    @settings(max_examples=100, deadline=None)
    def test_strictly_increasing_transform(self, xs):
        g = [math.atan(v) + 3 * v for v in xs]   # strictly increasing
        assert spearman_corr(xs, g) == pytest.approx(1.0)


def _dataset(columns: dict[str, list]) -> Dataset:
    names = list(columns)
    n = len(next(iter(columns.values())))
    rows = [WellRecord(well_id=f"w{i}",
                       environment={k: columns[k][i] for k in names})
            for i in range(n)]
    return Dataset(feature_names=names, rows=rows)


class TestEliminate:
    def test_missingness_threshold(self):
        col = [None] * 85 + [1.0 * i for i in range(15)]
        keep = [float(i) for i in range(100)]
        ds = _dataset({"mostly_missing": col, "ok": keep})
        assert eliminate(ds, missing_thresh=0.8) == ["ok"]

    def test_duplicate_column_keeps_one(self):
        vals = [float(i) for i in range(20)]
        ds = _dataset({"a": vals, "b": list(vals), "c": list(np.sin(vals))})
        retained = eliminate(ds)
        assert retained == ["a", "c"]

    def test_constant_dropped(self):
        ds = _dataset({"const": [5.0] * 10, "x": [float(i) for i in range(10)]})
        assert eliminate(ds) == ["x"]

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        cols = {f"f{i}": list(rng.normal(size=30)) for i in range(5)}
        cols["dup"] = list(cols["f0"])
        cols["f1"] = [v if i % 3 else None for i, v in enumerate(cols["f1"])]
        ds = _dataset(cols)
        first = eliminate(ds)
        ds2 = ds.subset(ds.rows)
        ds2.feature_names = first
        assert eliminate(ds2) == first

    def test_all_eliminated_raises(self):
        ds = _dataset({"c1": [1.0] * 10, "c2": [2.0] * 10})
        with pytest.raises(PipelineError):
            eliminate(ds)

    def test_correlated_pair_keeps_fewer_missing(self):
        base = [float(i) for i in range(40)]
        gappy = [v if i % 4 else None for i, v in enumerate(base)]
        ds = _dataset({"full": base, "gappy": gappy})
        assert eliminate(ds, corr_thresh=0.99) == ["full"]


class TestSobol:
    def test_identity_near_one(self):
        x = list(np.linspace(0, 1, 400))
        assert sobol_first_order(x, x) >= 0.95
        # fine-bin oracle: more bins push the estimate toward 1
        assert sobol_first_order(x, x, n_bins=40) >= sobol_first_order(x, x, n_bins=4)

    def test_independent_near_zero(self):
        rng = np.random.default_rng(2)
        x = list(rng.normal(size=10_000))
        y = list(rng.normal(size=10_000))
        assert sobol_first_order(x, y) <= 0.05

    def test_constant_target_undefined(self):
        x = list(np.linspace(0, 1, 200))
        assert sobol_first_order(x, [3.0] * 200) is None

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(1, 2, 600)
        y = list(np.sin(x) + 0.1 * rng.normal(size=600))
        a = sobol_first_order(list(x), y)
        b = sobol_first_order(list(np.exp(3 * x)), y)
        assert a == pytest.approx(b, abs=1e-12)

    def test_requires_enough_samples(self):
        with pytest.raises(InsufficientDataError):
            sobol_first_order([1.0] * 50, [1.0] * 50, n_bins=16)


class TestRfe:
    def test_signal_feature_retained(self):
        hits = 0
        for seed in range(20):
            rng = np.random.default_rng(seed)
            n = 120
            X = rng.normal(size=(n, 6))
            y = 3.0 * X[:, 0] + 0.1 * rng.normal(size=n)
            names = [f"f{i}" for i in range(6)]
            ranked = rfe(default_trainer, X, y, names, n_keep=1, seed=seed)
            retained = [r.name for r in ranked if r.retained]
            hits += retained == ["f0"]
        assert hits >= 19

    def test_identity_when_keeping_all(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(50, 4))
        y = X @ np.array([1.0, 2.0, 0.5, -1.0])
        ranked = rfe(default_trainer, X, y, [f"f{i}" for i in range(4)], n_keep=4)
        assert all(r.retained for r in ranked)
        assert sorted(r.rank for r in ranked) == [1, 2, 3, 4]

    def test_single_feature(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(40, 1))
        y = 2 * X[:, 0]
        ranked = rfe(default_trainer, X, y, ["only"], n_keep=1)
        assert ranked[0].name == "only" and ranked[0].rank == 1

    def test_trainer_failure_reports_iteration(self):
        def bad_trainer(X, y):
            raise RuntimeError("boom")
        X = np.random.default_rng(0).normal(size=(30, 3))
        with pytest.raises(PipelineError, match="iteration 1"):
            rfe(bad_trainer, X, X[:, 0], ["a", "b", "c"], n_keep=1)


# ---------------------------------------------------------------------------
# attribution oracles
# ---------------------------------------------------------------------------

def expvalue(tree: RegressionTree, x: np.ndarray, subset: frozenset) -> float:
    """Path-conditional expectation with only ``subset`` features known."""
    def walk(node: int) -> float:
        f = int(tree.feature[node])
        if f < 0:
            return float(tree.value[node])
        if f in subset:
            child = tree.left[node] if x[f] <= tree.threshold[node] else tree.right[node]
            return walk(int(child))
        lc, rc = int(tree.left[node]), int(tree.right[node])
        return (tree.cover[lc] * walk(lc) + tree.cover[rc] * walk(rc)) / tree.cover[node]
    return walk(0)


def brute_force_shapley(tree: RegressionTree, x: np.ndarray,
                        n_features: int) -> np.ndarray:
    feats = sorted({int(f) for f in tree.feature if f >= 0})
    phi = np.zeros(n_features)
    m = len(feats)
    for i in feats:
        others = [f for f in feats if f != i]
        for k in range(m):
            for combo in combinations(others, k):
                s = frozenset(combo)
                weight = (math.factorial(k) * math.factorial(m - k - 1)
                          / math.factorial(m))
                phi[i] += weight * (expvalue(tree, x, s | {i})
                                    - expvalue(tree, x, s))
    return phi


def _stacked_from(ridge, trees, n_cols) -> StackedModel:
    schema = MatrixSchema(env_features=[f"f{i}" for i in range(n_cols)],
                          categorical_levels={})
    schema.column_names = schema.column_names[:n_cols]
    return StackedModel(ridge=ridge, trees=trees, schema=schema)


class TestAttribution:
    def test_depth2_tree_matches_coalition_oracle(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(60, 3))
        y = np.where(X[:, 0] > 0, np.where(X[:, 1] > 0.3, 3.0, 1.0),
                     np.where(X[:, 2] > -0.5, -2.0, 0.5))
        tree = build_tree(X, y, max_depth=2, min_samples_leaf=5)
        x = rng.normal(size=3)
        phi = np.zeros(3)
        tree_attribution(tree, x, phi)
        oracle = brute_force_shapley(tree, x, 3)
        np.testing.assert_allclose(phi, oracle, atol=1e-10)

    def test_random_trees_match_coalition_oracle(self):
        rng = np.random.default_rng(8)
        for trial in range(15):
            n, d = 80, int(rng.integers(2, 5))
            X = rng.normal(size=(n, d))
            y = rng.normal(size=n)
            depth = int(rng.integers(1, 4))
            tree = build_tree(X, y, max_depth=depth, min_samples_leaf=3)
            x = rng.normal(size=d)
            phi = np.zeros(d)
            tree_attribution(tree, x, phi)
            oracle = brute_force_shapley(tree, x, d)
            np.testing.assert_allclose(phi, oracle, atol=1e-9,
                                       err_msg=f"trial {trial}")

    def test_null_model_all_zero(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(30, 4))
        y = np.full(30, 5.0)
        ridge = fit_ridge(X, y, 1e6)   # weights ~ 0
        ridge.weights = np.zeros(4)
        ridge.intercept = 5.0
        trees = fit_boosted(X, np.zeros(30), BoostParams(n_trees=0), seed=0)
        model = _stacked_from(ridge, trees, 4)
        att = attribute(model, X[0])
        np.testing.assert_allclose(att.contributions, 0.0, atol=1e-12)
        assert att.base == pytest.approx(5.0)

    def test_pure_ridge_at_training_mean(self):
        rng = np.random.default_rng(10)
        X = rng.normal(size=(50, 3))
        y = X @ np.array([2.0, -1.0, 0.5]) + 4.0
        ridge = fit_ridge(X, y, 0.0)
        trees = fit_boosted(X, np.zeros(50), BoostParams(n_trees=0), seed=0)
        model = _stacked_from(ridge, trees, 3)
        att = attribute(model, X.mean(axis=0))
        np.testing.assert_allclose(att.contributions, 0.0, atol=1e-9)
        assert att.base == pytest.approx(model.predict(X.mean(axis=0)), rel=1e-9)

    def test_local_accuracy_stacked_ensemble(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(150, 5))
        y = X[:, 0] ** 2 + np.sin(X[:, 1]) + X[:, 2] + rng.normal(size=150) * 0.1
        ridge = fit_ridge(X, y, 0.5)
        trees = fit_boosted(X, y - ridge.predict(X),
                            BoostParams(n_trees=60, max_depth=3), seed=3)
        model = _stacked_from(ridge, trees, 5)
        for x in rng.normal(size=(200, 5)):
            att = attribute(model, x)
            pred = model.predict(x)
            assert att.total == pytest.approx(pred, rel=1e-9, abs=1e-9)

    def test_expected_value_matches_training_mean_prediction(self):
        rng = np.random.default_rng(12)
        X = rng.normal(size=(100, 3))
        y = X[:, 0] * 3 + rng.normal(size=100)
        tree = build_tree(X, y, max_depth=4, min_samples_leaf=5)
        assert tree_expected_value(tree) == pytest.approx(
            float(tree.predict(X).mean()), rel=1e-9)
