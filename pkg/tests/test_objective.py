import numpy as np
import pytest

from conftest import make_features, make_graph, make_partition, random_geometric_graph
from oracles import brute_balance, brute_compactness
from cantonize.objective import (
    CostState,
    CostWeights,
    ObjectiveError,
    balance,
    combine,
    compactness,
    homogeneity,
    total_cost,
)
from cantonize.partition import Partition


def ids(n):
    return [f"m{i:02d}" for i in range(n)]


class TestHomogeneity:
    def test_identical_features_zero(self):
        feats = make_features(np.zeros((6, 3)), standardized=True)
        part = make_partition([0, 0, 0, 1, 1, 1])
        assert homogeneity(part, feats) == 0.0

    def test_single_canton_standardized_column_is_one(self):
        from cantonize.features import standardize

        feats = standardize(make_features([[1.0], [2.0], [5.0], [9.0]]))
        part = make_partition([0, 0, 0, 0])
        assert homogeneity(part, feats) == pytest.approx(1.0, abs=1e-12)

    def test_two_internally_constant_cantons(self):
        values = np.array([[1.0, 2.0]] * 3 + [[-4.0, 0.5]] * 3)
        feats = make_features(values, standardized=True)
        part = make_partition([0, 0, 0, 1, 1, 1])
        assert homogeneity(part, feats) == 0.0

    def test_requires_standardized(self):
        feats = make_features(np.ones((3, 2)))
        with pytest.raises(ObjectiveError, match="standardized"):
            homogeneity(make_partition([0, 0, 1]), feats)

    def test_empty_canton_rejected(self):
        feats = make_features(np.ones((2, 2)), ids=["m00", "m01"], standardized=True)
        part = Partition({"m00": 0, "m01": 0, "zz": 1}, 2)
        with pytest.raises(ObjectiveError, match="empty"):
            homogeneity(part, feats)

    def test_singletons_contribute_zero(self):
        rng = np.random.default_rng(0)
        feats = make_features(rng.normal(size=(5, 3)), standardized=True)
        part = make_partition([0, 1, 2, 3, 4])
        assert homogeneity(part, feats) == 0.0


class TestBalance:
    def test_equal_totals_zero(self):
        w = dict(zip(ids(4), [10.0, 10.0, 10.0, 10.0]))
        assert balance(make_partition([0, 0, 1, 1]), w) == 0.0

    def test_one_three_gives_half(self):
        w = dict(zip(ids(2), [1.0, 3.0]))
        assert balance(make_partition([0, 1]), w) == pytest.approx(0.5)

    def test_single_canton_zero(self):
        w = dict(zip(ids(3), [5.0, 7.0, 1.0]))
        assert balance(make_partition([0, 0, 0]), w) == 0.0

    def test_nonpositive_weight_rejected(self):
        w = dict(zip(ids(2), [1.0, 0.0]))
        with pytest.raises(ObjectiveError):
            balance(make_partition([0, 1]), w)

    def test_matches_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            n = int(rng.integers(3, 12))
            labels = rng.integers(0, 3, size=n)
            labels[:3] = [0, 1, 2]
            weights = rng.uniform(1.0, 50.0, size=n)
            part = make_partition(list(labels), ids(n))
            w = dict(zip(ids(n), weights))
            assert balance(part, w) == pytest.approx(brute_balance(labels, weights), abs=1e-12)


class TestCompactness:
    def triangle(self):
        return make_graph(ids(3), [("m00", "m01"), ("m01", "m02"), ("m00", "m02")])

    def test_single_canton_zero(self):
        assert compactness(make_partition([0, 0, 0]), self.triangle()) == 0.0

    def test_triangle_split_two_thirds(self):
        assert compactness(make_partition([0, 0, 1]), self.triangle()) == pytest.approx(2 / 3)

    def test_all_singletons_one(self):
        assert compactness(make_partition([0, 1, 2]), self.triangle()) == 1.0

    def test_no_edges_zero(self):
        g = make_graph(ids(3), [])
        assert compactness(make_partition([0, 1, 2]), g) == 0.0

    def test_partial_assignment_uses_assigned_edges_only(self):
        g = make_graph(ids(3), [("m00", "m01"), ("m01", "m02")])
        part = Partition({"m00": 0, "m01": 1}, 2)
        assert compactness(part, g) == 1.0


class TestTotalCost:
    def test_zero_components_zero_total(self):
        feats = make_features(np.zeros((4, 2)), standardized=True)
        g = make_graph(ids(4), [("m00", "m01"), ("m02", "m03")])
        w = dict(zip(ids(4), [1.0] * 4))
        cost = total_cost(make_partition([0, 0, 1, 1]), feats, w, g)
        assert cost.total == 0.0

    def test_default_weights_sum(self):
        cost_weights = CostWeights()
        assert (cost_weights.alpha, cost_weights.beta, cost_weights.gamma) == (0.4, 0.4, 0.2)

    def test_unit_components_give_unit_total(self):
        cost = combine(CostWeights(), 1.0, 1.0, 1.0)
        assert cost.total == pytest.approx(1.0, abs=1e-15)

    def test_merging_identical_singletons_never_raises_homogeneity(self):
        rng = np.random.default_rng(6)
        values = rng.normal(size=(5, 2))
        values[4] = values[3]  # two municipalities with identical features
        feats = make_features(values, standardized=True)
        split = make_partition([0, 0, 1, 2, 3])
        merged = make_partition([0, 0, 1, 2, 2])
        assert homogeneity(merged, feats) <= homogeneity(split, feats) + 1e-15

    def test_unit_components_weighted_sum(self):
        # Engineered so homogeneity = balance = compactness = 1.
        from cantonize.features import standardize

        feats = standardize(make_features([[1.0], [2.0], [5.0], [9.0]]))
        g = make_graph(ids(4), [])
        part = make_partition([0, 0, 0, 0])
        h = homogeneity(part, feats)
        assert h == pytest.approx(1.0)
        w = CostWeights(0.4, 0.4, 0.2)
        cost = total_cost(part, feats, dict(zip(ids(4), [1.0] * 4)), g, w)
        assert cost.total == pytest.approx(0.4 * 1.0 + 0.4 * 0.0 + 0.2 * 0.0)

    def test_relabel_invariance(self):
        rng = np.random.default_rng(2)
        feats = make_features(rng.normal(size=(6, 2)), standardized=True)
        g = make_graph(ids(6), [("m00", "m01"), ("m01", "m02"), ("m03", "m04"), ("m04", "m05"), ("m02", "m03")])
        w = dict(zip(ids(6), rng.uniform(1, 10, size=6)))
        a = total_cost(make_partition([0, 0, 1, 1, 2, 2]), feats, w, g)
        b = total_cost(make_partition([2, 2, 0, 0, 1, 1]), feats, w, g)
        assert a.total == pytest.approx(b.total, abs=1e-12)

    def test_linear_in_weights(self):
        rng = np.random.default_rng(3)
        feats = make_features(rng.normal(size=(5, 2)), standardized=True)
        g = make_graph(ids(5), [("m00", "m01"), ("m01", "m02"), ("m02", "m03"), ("m03", "m04")])
        w = dict(zip(ids(5), rng.uniform(1, 10, size=5)))
        part = make_partition([0, 0, 1, 1, 1])
        c1 = total_cost(part, feats, w, g, CostWeights(0.4, 0.4, 0.2))
        c2 = total_cost(part, feats, w, g, CostWeights(0.8, 0.8, 0.4))
        assert c2.total == pytest.approx(2.0 * c1.total, abs=1e-12)
        assert (c1.homogeneity, c1.balance, c1.compactness) == (c2.homogeneity, c2.balance, c2.compactness)

    def test_negative_weights_rejected(self):
        with pytest.raises(ObjectiveError):
            CostWeights(-0.1, 0.4, 0.2)

    def test_compactness_oracle_on_random_graphs(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(3, 12))
            g = random_geometric_graph(rng, n, p=0.4)
            labels = rng.integers(0, 3, size=n)
            labels[:3] = [0, 1, 2]
            part = make_partition(list(labels), g.nodes)
            index = {m: i for i, m in enumerate(g.nodes)}
            edges = [(index[u], index[v]) for u, v in g.edges]
            assert compactness(part, g) == pytest.approx(brute_compactness(labels, edges), abs=1e-12)


class TestCostState:
    def random_problem(self, rng, n):
        while True:
            g = random_geometric_graph(rng, n, p=0.5)
            if g.is_connected():
                break
        feats = make_features(rng.normal(size=(n, 3)), ids=g.nodes, standardized=True)
        weights = dict(zip(g.nodes, rng.uniform(1.0, 20.0, size=n)))
        K = int(rng.integers(2, min(n, 5)))
        labels = rng.integers(0, K, size=n)
        labels[:K] = np.arange(K)
        return g, feats, weights, K, labels

    def test_incremental_matches_full_recompute(self):
        rng = np.random.default_rng(5)
        for _ in range(15):
            n = int(rng.integers(5, 14))
            g, feats, weights, K, labels = self.random_problem(rng, n)
            state = CostState(feats, weights, g, labels, K)
            for _ in range(40):
                i = int(rng.integers(n))
                target = int(rng.integers(K))
                counts = np.bincount(state.labels, minlength=K)
                if counts[state.labels[i]] == 1 and target != state.labels[i]:
                    continue  # keep every canton non-empty
                preview = state.move_cost(i, target)
                state.apply_move(i, target)
                part = Partition(dict(zip(g.nodes, (int(x) for x in state.labels))), K)
                full = total_cost(part, feats, weights, g)
                assert state.cost().total == pytest.approx(full.total, abs=1e-9)
                assert preview.total == pytest.approx(full.total, abs=1e-9)
                assert state.cost().homogeneity == pytest.approx(full.homogeneity, abs=1e-9)
                assert state.cost().balance == pytest.approx(full.balance, abs=1e-9)
                assert state.cost().compactness == pytest.approx(full.compactness, abs=1e-9)
