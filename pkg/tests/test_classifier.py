import numpy as np
import pytest

from longfair.classifier import (StochasticLinearClassifier, accuracy,
                                 expected_loss, fit_behavior_model,
                                 fit_softmax, nll_gradient, nll_loss,
                                 predict_proba, predict_proba_batch,
                                 sample_prediction)
from longfair.data import Dataset


def _bias_classifier(*scores):
    """Classifier whose scores are constant (pure bias) per label."""
    L = len(scores)
    theta = np.zeros((L, 2))
    theta[:, 1] = scores
    return StochasticLinearClassifier(theta.astype(float))


class TestPredictProba:
    def test_zero_theta_uniform(self):
        clf = StochasticLinearClassifier(np.zeros((2, 3)))
        np.testing.assert_allclose(predict_proba(clf, np.array([1.0, -2.0])),
                                   [0.5, 0.5])

    def test_log3_scores(self):
        clf = _bias_classifier(0.0, np.log(3.0))
        np.testing.assert_allclose(predict_proba(clf, np.array([0.0])),
                                   [0.25, 0.75], atol=1e-15)

    def test_extreme_scores_keep_full_support(self):
        clf = _bias_classifier(0.0, 1000.0)
        p = predict_proba(clf, np.array([0.0]))
        assert p[0] > 0.0
        assert p[1] < 1.0

    def test_sums_to_one_and_positive_on_random_grid(self):
        rng = np.random.default_rng(2)
        clf = StochasticLinearClassifier(rng.standard_normal((3, 5)) * 20)
        X = rng.standard_normal((500, 4)) * 5
        p = predict_proba_batch(clf, X)
        np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)
        assert p.min() > 0.0
        assert p.max() < 1.0

    def test_rejects_nonfinite_input(self):
        clf = StochasticLinearClassifier(np.zeros((2, 3)))
        with pytest.raises(ValueError):
            predict_proba(clf, np.array([np.nan, 0.0]))


class TestSamplePrediction:
    def test_uniform_frequency(self):
        clf = StochasticLinearClassifier(np.zeros((2, 2)))
        rng = np.random.default_rng(0)
        draws = [sample_prediction(clf, np.array([0.0]), rng)
                 for _ in range(100_000)]
        assert abs(np.mean(draws) - 0.5) < 0.01

    def test_skewed_frequency(self):
        clf = _bias_classifier(0.0, np.log(3.0))  # probabilities (0.25, 0.75)
        rng = np.random.default_rng(1)
        draws = [sample_prediction(clf, np.array([0.0]), rng)
                 for _ in range(100_000)]
        assert abs(np.mean(draws) - 0.75) < 0.01

    def test_same_seed_same_sequence(self):
        clf = _bias_classifier(0.0, 0.4)
        rng = np.random.default_rng(7)
        seq1 = [sample_prediction(clf, np.array([0.0]), rng) for _ in range(20)]
        rng = np.random.default_rng(7)
        seq2 = [sample_prediction(clf, np.array([0.0]), rng) for _ in range(20)]
        assert seq1 == seq2


def _const_x_dataset(ys):
    n = len(ys)
    return Dataset(np.zeros((n, 1)), np.array(ys), np.zeros(n, dtype=int),
                   np.array(ys), np.zeros(n), L=2, G=1)


class TestLossAndAccuracy:
    def test_uniform_predictor_half(self):
        d = _const_x_dataset([0, 1, 1, 0])
        clf = StochasticLinearClassifier(np.zeros((2, 2)))
        assert expected_loss(clf, d) == 0.5

    def test_confident_predictor(self):
        # P(label 1) = 0.9 everywhere, all true labels are 1
        d = _const_x_dataset([1, 1, 1])
        clf = _bias_classifier(0.0, np.log(9.0))
        assert abs(expected_loss(clf, d) - 0.1) < 1e-12

    def test_two_example_mean(self):
        # true-label probabilities 0.75 and 0.25
        d = _const_x_dataset([1, 0])
        clf = _bias_classifier(0.0, np.log(3.0))
        assert abs(expected_loss(clf, d) - 0.5) < 1e-12

    def test_accuracy_is_exact_complement(self):
        rng = np.random.default_rng(3)
        d = Dataset(rng.standard_normal((30, 2)), rng.integers(0, 2, 30),
                    np.zeros(30, dtype=int), np.zeros(30, dtype=int),
                    np.zeros(30), L=2, G=1)
        clf = StochasticLinearClassifier(rng.standard_normal((2, 3)))
        assert accuracy(clf, d) == 1.0 - expected_loss(clf, d)
        assert 0.0 <= expected_loss(clf, d) <= 1.0

    def test_empty_dataset_rejected(self):
        d = _const_x_dataset([0])
        clf = StochasticLinearClassifier(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            expected_loss(clf, d.subset(np.array([], dtype=int)))


class TestGradient:
    def test_matches_central_differences(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((40, 4))
        y = rng.integers(0, 3, size=40)
        theta = rng.standard_normal((3, 5)) * 0.7
        g = nll_gradient(theta, X, y)

        def nll_at(th):
            clf = StochasticLinearClassifier(th)
            d = Dataset(X, y, np.zeros(40, dtype=int), np.zeros(40, dtype=int),
                        np.zeros(40), L=3, G=1)
            return nll_loss(clf, d)

        h = 1e-6
        num = np.zeros_like(theta)
        for i in range(theta.shape[0]):
            for j in range(theta.shape[1]):
                up, down = theta.copy(), theta.copy()
                up[i, j] += h
                down[i, j] -= h
                num[i, j] = (nll_at(up) - nll_at(down)) / (2 * h)
        rel = np.abs(g - num) / np.maximum(np.abs(num), 1e-8)
        assert rel.max() < 1e-5


class TestBehaviorFit:
    def test_separable_clusters(self):
        rng = np.random.default_rng(4)
        n = 300
        X = np.vstack([rng.standard_normal((n // 2, 2)) + 2.5,
                       rng.standard_normal((n // 2, 2)) - 2.5])
        y = np.array([1] * (n // 2) + [0] * (n // 2))
        d = Dataset(X, y, np.zeros(n, dtype=int), y, np.zeros(n), L=2, G=1)
        clf = fit_behavior_model(d, steps=2000, learning_rate=0.1)
        assert accuracy(clf, d) > 0.95

    def test_zero_steps_returns_uniform_init(self):
        d = _const_x_dataset([0, 1, 0, 1])
        clf = fit_behavior_model(d, steps=0)
        assert np.array_equal(clf.theta, np.zeros((2, 2)))
        assert accuracy(clf, d) == 0.5

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        X = rng.standard_normal((50, 3))
        y = rng.integers(0, 2, 50)
        a = fit_softmax(X, y, 2, steps=200, learning_rate=0.2, seed=1)
        b = fit_softmax(X, y, 2, steps=200, learning_rate=0.2, seed=1)
        assert np.array_equal(a.theta, b.theta)


class TestSerialization:
    def test_json_round_trip(self):
        rng = np.random.default_rng(6)
        clf = StochasticLinearClassifier(rng.standard_normal((2, 4)))
        back = StochasticLinearClassifier.from_json(clf.to_json())
        assert np.array_equal(back.theta, clf.theta)
        assert back.L == 2 and back.d == 3
