import math

import numpy as np
import pytest

from riskchoice import InputError, NumericalError, fit_logistic, log_likelihood, sigmoid
from riskchoice.features import FeatureVector
from riskchoice.glm import gradient_and_hessian, predict_prob


def _random_instance(rng, n=20, k=4):
    X = np.column_stack([np.ones(n), rng.normal(size=(n, k - 1))])
    beta = rng.normal(size=k)
    y = (rng.random(n) < sigmoid(X @ beta)).astype(float)
    return X, y


class TestSigmoid:
    def test_zero(self):
        assert sigmoid(0.0) == 0.5

    def test_complement(self):
        for z in (-3.7, -0.5, 0.1, 2.0, 40.0):
            assert sigmoid(z) + sigmoid(-z) == pytest.approx(1.0, abs=1e-15)

    def test_saturation_without_overflow(self):
        with np.errstate(over="raise"):
            assert sigmoid(500.0) == 1.0
            assert sigmoid(-500.0) == pytest.approx(0.0, abs=1e-200)
            assert sigmoid(700.0) == 1.0

    def test_array_input(self):
        z = np.array([-1.0, 0.0, 1.0])
        out = sigmoid(z)
        assert out.shape == (3,)
        assert out[1] == 0.5
        assert isinstance(sigmoid(1.5), float)


class TestLogLikelihood:
    def test_zero_coeffs(self):
        rng = np.random.Generator(np.random.PCG64(1))
        X, y = _random_instance(rng, n=37)
        assert log_likelihood(np.zeros(4), X, y) == pytest.approx(37 * math.log(0.5))

    def test_intercept_only_pinned(self):
        # sigmoid(ln 3) = 0.75, so the single-row likelihood is ln 0.75
        X = np.array([[1.0]])
        y = np.array([1.0])
        assert log_likelihood(np.array([math.log(3.0)]), X, y) == pytest.approx(
            -0.2876820724517809, abs=1e-15
        )

    def test_matches_direct_formula(self):
        rng = np.random.Generator(np.random.PCG64(2))
        for _ in range(50):
            X, y = _random_instance(rng)
            beta = rng.normal(scale=0.8, size=4)
            mu = sigmoid(X @ beta)
            direct = float(np.sum(y * np.log(mu) + (1 - y) * np.log(1 - mu)))
            assert log_likelihood(beta, X, y) == pytest.approx(direct, rel=1e-12)

    def test_never_minus_inf(self):
        X = np.array([[1.0, 600.0], [1.0, -600.0]])
        y = np.array([0.0, 1.0])
        ll = log_likelihood(np.array([0.0, 1.0]), X, y)
        assert np.isfinite(ll)

    def test_shape_errors(self):
        with pytest.raises(InputError):
            log_likelihood(np.zeros(3), np.ones((5, 2)), np.zeros(5))
        with pytest.raises(InputError):
            log_likelihood(np.zeros(2), np.ones((5, 2)), np.zeros(4))
        with pytest.raises(InputError):
            log_likelihood(np.zeros(2), np.ones((5, 2)), np.full(5, 2.0))


class TestGradientAndHessian:
    def test_finite_difference_agreement(self):
        rng = np.random.Generator(np.random.PCG64(3))
        h = 1e-5
        for _ in range(30):
            X, y = _random_instance(rng)
            beta = rng.normal(scale=0.5, size=4)
            l2 = float(rng.choice([0.0, 0.3]))
            grad, _ = gradient_and_hessian(beta, X, y, l2)
            fd = np.zeros(4)
            for j in range(4):
                e = np.zeros(4)
                e[j] = h
                mask = np.ones(4)
                mask[0] = 0.0

                def pll(b):
                    return log_likelihood(b, X, y) - 0.5 * l2 * np.sum(mask * b**2)

                fd[j] = (pll(beta + e) - pll(beta - e)) / (2 * h)
            assert np.linalg.norm(grad - fd) / max(1.0, np.linalg.norm(grad)) < 1e-6

    def test_hessian_symmetric_negative_semidefinite(self):
        rng = np.random.Generator(np.random.PCG64(4))
        X, y = _random_instance(rng, n=40)
        for l2 in (0.0, 1.0):
            _, hess = gradient_and_hessian(rng.normal(size=4), X, y, l2)
            np.testing.assert_allclose(hess, hess.T, atol=1e-12)
            assert np.max(np.linalg.eigvalsh(hess)) <= 1e-10

    def test_gradient_vanishes_at_optimum(self):
        rng = np.random.Generator(np.random.PCG64(5))
        X, y = _random_instance(rng, n=200)
        fit = fit_logistic(X, y)
        grad, _ = gradient_and_hessian(fit.coeffs, X, y, 0.0)
        assert np.max(np.abs(grad)) < 1e-8


class TestFitLogistic:
    def test_parameter_recovery(self):
        rng = np.random.Generator(np.random.PCG64(6))
        n = 50_000
        X = np.column_stack([np.ones(n), rng.normal(size=(n, 2)), rng.integers(0, 2, n)])
        beta = np.array([-0.4, 0.7, -1.1, 0.5])
        y = (rng.random(n) < sigmoid(X @ beta)).astype(float)
        fit = fit_logistic(X, y)
        assert fit.converged
        se = fit.std_errors
        assert np.all(np.abs(fit.coeffs - beta) < 3 * se)

    def test_balanced_intercept_only(self):
        X = np.ones((10, 1))
        y = np.array([0, 1] * 5, dtype=float)
        fit = fit_logistic(X, y)
        assert fit.coeffs[0] == pytest.approx(0.0, abs=1e-10)
        assert fit.log_likelihood == pytest.approx(10 * math.log(0.5))

    def test_no_signal_with_ridge(self):
        rng = np.random.Generator(np.random.PCG64(7))
        X = np.column_stack([np.ones(60), rng.normal(size=(60, 2))])
        y = np.ones(60)
        fit = fit_logistic(X, y, l2_strength=1.0)
        assert np.isfinite(fit.coeffs[0])
        assert np.all(np.abs(fit.coeffs[1:]) < 0.5)
        assert fit.converged

    def test_separation_reported_not_raised(self):
        x = np.linspace(-2, 2, 30)
        X = np.column_stack([np.ones(30), x])
        y = (x > 0).astype(float)
        fit = fit_logistic(X, y)
        assert not fit.converged
        assert any("separation" in d for d in fit.diagnostics)

    def test_singular_design_raises(self):
        rng = np.random.Generator(np.random.PCG64(8))
        col = rng.normal(size=50)
        X = np.column_stack([np.ones(50), col, col])
        y = (rng.random(50) < 0.5).astype(float)
        with pytest.raises(NumericalError, match="condition number"):
            fit_logistic(X, y)

    def test_rescaling_invariance(self):
        rng = np.random.Generator(np.random.PCG64(9))
        X, y = _random_instance(rng, n=400)
        base = fit_logistic(X, y)
        scaled = X.copy()
        scaled[:, 2] *= 10.0
        other = fit_logistic(scaled, y)
        assert other.coeffs[2] == pytest.approx(base.coeffs[2] / 10.0, rel=1e-6)
        np.testing.assert_allclose(other.predict(scaled), base.predict(X), atol=1e-8)

    def test_covariance_is_inverse_information(self):
        rng = np.random.Generator(np.random.PCG64(10))
        X, y = _random_instance(rng, n=300)
        fit = fit_logistic(X, y)
        _, hess = gradient_and_hessian(fit.coeffs, X, y, 0.0)
        np.testing.assert_allclose(fit.covariance, np.linalg.inv(-hess), rtol=1e-8)
        np.testing.assert_allclose(fit.covariance, fit.covariance.T, atol=1e-12)
        assert np.min(np.linalg.eigvalsh(fit.covariance)) > 0

    def test_standardize_changes_nothing_observable(self):
        rng = np.random.Generator(np.random.PCG64(11))
        n = 500
        X = np.column_stack([np.ones(n), rng.uniform(0, 100, n), rng.uniform(0, 150, n)])
        beta = np.array([-0.5, 0.03, -0.02])
        y = (rng.random(n) < sigmoid(X @ beta)).astype(float)
        raw = fit_logistic(X, y)
        std = fit_logistic(X, y, standardize=True)
        np.testing.assert_allclose(std.coeffs, raw.coeffs, rtol=1e-5, atol=1e-8)
        np.testing.assert_allclose(std.predict(X), raw.predict(X), atol=1e-7)
        np.testing.assert_allclose(std.std_errors, raw.std_errors, rtol=1e-4)

    def test_log_likelihood_nonpositive_and_preconditions(self):
        rng = np.random.Generator(np.random.PCG64(12))
        X, y = _random_instance(rng)
        assert fit_logistic(X, y).log_likelihood <= 0.0
        with pytest.raises(InputError):
            fit_logistic(X[:3], y[:3])
        with pytest.raises(InputError):
            fit_logistic(X, y, l2_strength=-1.0)
        with pytest.raises(InputError):
            fit_logistic(X, y, feature_names=("a", "b"))

    def test_deterministic(self):
        rng = np.random.Generator(np.random.PCG64(13))
        X, y = _random_instance(rng, n=150)
        a = fit_logistic(X, y)
        b = fit_logistic(X, y)
        np.testing.assert_array_equal(a.coeffs, b.coeffs)
        assert a.iterations == b.iterations

    def test_json_round_trip_fields(self):
        rng = np.random.Generator(np.random.PCG64(14))
        X, y = _random_instance(rng, n=80)
        fit = fit_logistic(X, y, 0.25, feature_names=("intercept", "a", "b", "c"))
        doc = fit.to_json_dict()
        assert set(doc) == {
            "features",
            "coeffs",
            "std_errors",
            "covariance",
            "log_likelihood",
            "converged",
            "iterations",
            "l2",
        }
        assert doc["features"] == ["intercept", "a", "b", "c"]
        assert doc["l2"] == 0.25
        assert len(doc["covariance"]) == 4


class TestPredictProb:
    def test_zero_coeffs_give_half(self):
        rng = np.random.Generator(np.random.PCG64(15))
        X, y = _random_instance(rng, n=60)
        fit = fit_logistic(X, y, feature_names=("intercept", "a", "b", "c"))
        fit.coeffs = np.zeros(4)
        fv = FeatureVector(("intercept", "a", "b", "c"), np.array([1.0, 2.0, -1.0, 0.5]))
        assert predict_prob(fit, fv) == 0.5

    def test_matches_sigmoid_composition(self):
        rng = np.random.Generator(np.random.PCG64(16))
        X, y = _random_instance(rng, n=60)
        fit = fit_logistic(X, y, feature_names=("intercept", "a", "b", "c"))
        fv = FeatureVector(("intercept", "a", "b", "c"), np.array([1.0, 0.3, 1.2, -2.0]))
        expected = sigmoid(float(np.dot(fit.coeffs, fv.values)))
        assert predict_prob(fit, fv) == pytest.approx(expected, abs=1e-15)

    def test_frame_monotonicity(self):
        fit_names = ("intercept", "frame")
        X = np.column_stack([np.ones(40), np.repeat([-1.0, 1.0], 20)])
        y = np.concatenate([np.ones(15), np.zeros(5), np.zeros(15), np.ones(5)])
        fit = fit_logistic(X, y, feature_names=fit_names)
        p_loss = predict_prob(fit, FeatureVector(fit_names, np.array([1.0, -1.0])))
        p_gain = predict_prob(fit, FeatureVector(fit_names, np.array([1.0, 1.0])))
        assert p_loss > p_gain

    def test_name_mismatch_raises(self):
        rng = np.random.Generator(np.random.PCG64(17))
        X, y = _random_instance(rng, n=60)
        fit = fit_logistic(X, y, feature_names=("intercept", "a", "b", "c"))
        fv = FeatureVector(("intercept", "b", "a", "c"), np.array([1.0, 0.0, 0.0, 0.0]))
        with pytest.raises(InputError):
            predict_prob(fit, fv)
