import numpy as np
import pytest

from conftest import make_features
from cantonize.distances import DistanceError, Metric, distance, pairwise_matrix


class TestMetricParsing:
    def test_aliases(self):
        assert Metric.parse("euclidean") is Metric.EUCLIDEAN
        assert Metric.parse("Cosine") is Metric.COSINE
        assert Metric.parse("jensen-shannon") is Metric.JENSEN_SHANNON
        assert Metric.parse("JSD") is Metric.JENSEN_SHANNON

    def test_unknown_rejected(self):
        with pytest.raises(DistanceError):
            Metric.parse("manhattan")


class TestEuclidean:
    def test_three_four_five(self):
        assert distance(Metric.EUCLIDEAN, (0, 0), (3, 4)) == pytest.approx(5.0)

    def test_identity_and_symmetry(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            p, q = rng.normal(size=(2, 6))
            assert distance(Metric.EUCLIDEAN, p, p) == 0.0
            assert distance(Metric.EUCLIDEAN, p, q) == distance(Metric.EUCLIDEAN, q, p)

    def test_constant_column_invariance_after_standardization(self):
        from cantonize.features import standardize

        rng = np.random.default_rng(1)
        X = rng.normal(size=(10, 3))
        with_const = np.column_stack([X, np.full(10, 9.0)])
        d1 = pairwise_matrix(Metric.EUCLIDEAN, standardize(make_features(X))).values
        d2 = pairwise_matrix(Metric.EUCLIDEAN, standardize(make_features(with_const))).values
        assert np.allclose(d1, d2)


class TestCosine:
    def test_orthogonal_is_one(self):
        assert distance(Metric.COSINE, (1, 0), (0, 1)) == pytest.approx(1.0)

    def test_identity_is_zero(self):
        v = np.array([0.3, 0.7, 0.1])
        assert distance(Metric.COSINE, v, v) == pytest.approx(0.0, abs=1e-12)

    def test_positive_scale_invariance(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            p, q = rng.uniform(0.1, 1.0, size=(2, 5))
            lam, mu = rng.uniform(0.1, 10.0, size=2)
            assert distance(Metric.COSINE, p, q) == pytest.approx(
                distance(Metric.COSINE, lam * p, mu * q), abs=1e-12
            )

    def test_zero_vector_rejected(self):
        with pytest.raises(DistanceError, match="zero"):
            distance(Metric.COSINE, (0, 0), (1, 1))

    def test_unit_interval_on_nonnegative_vectors(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            p, q = rng.uniform(0.0, 1.0, size=(2, 4)) + 1e-6
            assert 0.0 <= distance(Metric.COSINE, p, q) <= 1.0

    def test_at_most_two_on_signed_vectors(self):
        assert distance(Metric.COSINE, (1.0,), (-1.0,)) == pytest.approx(2.0)


class TestJensenShannon:
    def test_disjoint_support_is_one(self):
        assert distance(Metric.JENSEN_SHANNON, (1, 0), (0, 1)) == pytest.approx(1.0)

    def test_identity_is_zero(self):
        p = np.array([0.2, 0.5, 0.3])
        assert distance(Metric.JENSEN_SHANNON, p, p) == 0.0

    def test_renormalizes_inputs(self):
        p = np.array([2.0, 6.0, 2.0])
        q = np.array([1.0, 1.0, 8.0])
        assert distance(Metric.JENSEN_SHANNON, p, q) == pytest.approx(
            distance(Metric.JENSEN_SHANNON, 5 * p, q / 3)
        )

    def test_negative_entry_rejected(self):
        with pytest.raises(DistanceError, match="non-negative"):
            distance(Metric.JENSEN_SHANNON, (0.5, -0.1), (0.5, 0.5))

    def test_zero_sum_rejected(self):
        with pytest.raises(DistanceError, match="positive sum"):
            distance(Metric.JENSEN_SHANNON, (0.0, 0.0), (0.5, 0.5))

    def test_hand_evaluated_binary_case(self):
        # P=(3/4,1/4), Q=(1/4,3/4), M=(1/2,1/2); divergence = 1 - H2(1/4)
        # with H2 the binary entropy in bits.
        p, q = (0.75, 0.25), (0.25, 0.75)
        h2 = -(0.25 * np.log2(0.25) + 0.75 * np.log2(0.75))
        expected = np.sqrt(1.0 - h2)
        assert distance(Metric.JENSEN_SHANNON, p, q) == pytest.approx(expected, abs=1e-12)

    def test_triangle_inequality_on_simplex(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            p, q, r = rng.dirichlet(np.ones(5), size=3)
            dpq = distance(Metric.JENSEN_SHANNON, p, q)
            dqr = distance(Metric.JENSEN_SHANNON, q, r)
            dpr = distance(Metric.JENSEN_SHANNON, p, r)
            assert dpr <= dpq + dqr + 1e-12

    def test_bounded_unit_interval(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            p, q = rng.dirichlet(np.ones(4), size=2)
            assert 0.0 <= distance(Metric.JENSEN_SHANNON, p, q) <= 1.0


class TestPairwiseMatrix:
    def test_identical_rows_all_zero(self):
        feats = make_features(np.tile([0.3, 0.7], (4, 1)))
        for metric in Metric:
            D = pairwise_matrix(metric, feats).values
            assert np.allclose(D, 0.0)

    def test_two_rows_match_scalar_distance(self):
        feats = make_features([[0.1, 0.9], [0.6, 0.4]])
        for metric in Metric:
            D = pairwise_matrix(metric, feats).values
            expected = distance(metric, feats.values[0], feats.values[1])
            assert D[0, 1] == pytest.approx(expected, abs=1e-12)

    def test_pca_with_jsd_rejected(self):
        feats = make_features([[0.5, -0.2], [0.1, 0.4]], representation="PCA_5")
        with pytest.raises(DistanceError, match="negative"):
            pairwise_matrix(Metric.JENSEN_SHANNON, feats)

    def test_exact_symmetry_and_zero_diagonal(self):
        rng = np.random.default_rng(6)
        feats = make_features(rng.uniform(0.1, 1.0, size=(20, 5)))
        for metric in Metric:
            D = pairwise_matrix(metric, feats).values
            assert np.array_equal(D, D.T)
            assert np.array_equal(np.diag(D), np.zeros(20))

    def test_cosine_zero_row_names_municipality(self):
        feats = make_features([[0.0, 0.0], [1.0, 0.5]], ids=["bad", "ok"])
        with pytest.raises(DistanceError, match="bad"):
            pairwise_matrix(Metric.COSINE, feats)
