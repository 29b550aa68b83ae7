import math

import numpy as np
import pytest

from cotrend import (
    AnnualSeries,
    DegenerateStatisticError,
    Design,
    DomainError,
    PreconditionError,
    SingularDesignError,
    SingularPrefixError,
    durbin_watson,
    f_test_joint,
    ols_fit,
    ols_fit_xy,
    recursive_residuals,
    recursive_residuals_xy,
    sic,
)
from cotrend.montecarlo import base_seed, rng_stream


def series(values, name="s", start=2000):
    return AnnualSeries(name, start, np.array(values, dtype=float), "ratio")


def random_design(rng, n, k):
    X = np.column_stack([np.ones(n), rng.normal(size=(n, k - 1))])
    beta = rng.normal(size=k)
    y = X @ beta + rng.normal(size=n)
    return y, X


def brute_force_recursive(y, X):
    n, k = X.shape
    out = []
    for t in range(k + 1, n + 1):
        Xp, yp = X[: t - 1], y[: t - 1]
        b = np.linalg.lstsq(Xp, yp, rcond=None)[0]
        P = np.linalg.inv(Xp.T @ Xp)
        x = X[t - 1]
        out.append((y[t - 1] - x @ b) / math.sqrt(1.0 + x @ P @ x))
    return np.array(out)


class TestOlsFit:
    def test_exact_line(self):
        x = series([1.0, 2.0, 3.0], "x")
        y = series([2.0, 4.0, 6.0], "y")
        fit = ols_fit(Design(y, (x,), intercept=True))
        assert fit.coefficient("x") == pytest.approx(2.0, abs=1e-12)
        assert fit.coefficient("const") == pytest.approx(0.0, abs=1e-12)
        assert fit.r2 == pytest.approx(1.0)
        assert np.allclose(fit.residuals, 0.0, atol=1e-12)

    def test_hand_normal_equations(self):
        # Sxy = 3, Sxx = 5 -> slope 0.6, intercept 0.5
        fit = ols_fit_xy(
            np.array([1.0, 2.0, 2.0, 3.0]),
            np.column_stack([np.ones(4), np.array([1.0, 2.0, 3.0, 4.0])]),
            ["const", "x"],
        )
        assert fit.coefficients == pytest.approx([0.5, 0.6])
        assert fit.tss == pytest.approx(2.0)
        assert fit.rss == pytest.approx(2.0 - 0.6 * 3.0)

    def test_matches_independent_normal_equations_on_random_designs(self):
        seed = base_seed(113355)
        for rep in range(50):
            rng = rng_stream(seed, rep)
            n = int(rng.integers(8, 31))
            k = int(rng.integers(2, min(7, n - 1)))
            y, X = random_design(rng, n, k)
            fit = ols_fit_xy(y, X)
            beta_ref = np.linalg.solve(X.T @ X, X.T @ y)
            scale = max(np.abs(beta_ref).max(), 1.0)
            assert np.allclose(fit.coefficients, beta_ref, atol=1e-8 * scale)
            ortho = np.abs(X.T @ fit.residuals).max()
            assert ortho <= 1e-8 * np.linalg.norm(y) * np.linalg.norm(X)

    def test_residuals_plus_fitted_reconstruct_response(self):
        rng = rng_stream(base_seed(8), 0)
        y, X = random_design(rng, 20, 4)
        fit = ols_fit_xy(y, X)
        assert np.allclose(fit.residuals + fit.fitted, y, atol=1e-9)
        assert abs(fit.residuals.sum()) <= 1e-8 * np.linalg.norm(y)

    def test_scale_equivariance(self):
        rng = rng_stream(base_seed(9), 0)
        y, X = random_design(rng, 25, 4)
        f1 = ols_fit_xy(y, X)
        f2 = ols_fit_xy(7.5 * y, X)
        assert np.allclose(f2.coefficients, 7.5 * f1.coefficients, rtol=1e-9)
        assert np.allclose(f2.t_stats, f1.t_stats, rtol=1e-9)
        assert f2.r2 == pytest.approx(f1.r2, abs=1e-9)
        assert f2.f_stat == pytest.approx(f1.f_stat, rel=1e-9)
        assert f2.dw == pytest.approx(f1.dw, rel=1e-9)

    def test_regressor_shift_moves_only_intercept(self):
        rng = rng_stream(base_seed(10), 0)
        y, X = random_design(rng, 25, 3)
        f1 = ols_fit_xy(y, X, ["const", "a", "b"])
        Xs = X.copy()
        Xs[:, 1] += 100.0
        f2 = ols_fit_xy(y, Xs, ["const", "a", "b"])
        assert f2.coefficients[1:] == pytest.approx(f1.coefficients[1:], abs=1e-9)
        assert f2.std_errors[1:] == pytest.approx(f1.std_errors[1:], rel=1e-6)
        assert f2.r2 == pytest.approx(f1.r2, abs=1e-9)

    def test_duplicate_column_named_in_error(self):
        x = np.linspace(0.0, 1.0, 12)
        X = np.column_stack([np.ones(12), x, 2.0 * x])
        with pytest.raises(SingularDesignError) as err:
            ols_fit_xy(np.sin(x), X, ["const", "x", "x2"])
        assert err.value.column in ("x", "x2")

    def test_r2_bounds_and_adjusted(self):
        rng = rng_stream(base_seed(11), 0)
        for rep in range(10):
            y, X = random_design(rng, 18, 3)
            fit = ols_fit_xy(y, X)
            assert 0.0 <= fit.r2 <= 1.0
            assert fit.adj_r2 <= fit.r2
            assert 0.0 <= fit.dw <= 4.0

    def test_design_requires_alignment(self):
        y = series([1.0, 2.0, 3.0], "y", start=2000)
        x = series([1.0, 2.0, 3.0], "x", start=2001)
        with pytest.raises(DomainError):
            Design(y, (x,))


class TestJointF:
    def test_no_explanatory_power(self):
        # response orthogonal to the centered regressor: RSS == TSS
        x = np.array([1.0, 2.0, 3.0, 4.0])
        y = np.array([1.0, -1.0, -1.0, 1.0])
        fit = ols_fit_xy(y, np.column_stack([np.ones(4), x]))
        res = f_test_joint(fit)
        assert res.stat("F").value == pytest.approx(0.0, abs=1e-12)
        assert res.stat("F").p_value == pytest.approx(1.0)

    def test_perfect_fit_infinite_sentinel(self):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        fit = ols_fit_xy(3.0 * x + 1.0, np.column_stack([np.ones(4), x]))
        res = f_test_joint(fit)
        assert math.isinf(res.stat("F").value)
        assert res.stat("F").p_value == 0.0

    def test_requires_intercept(self):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        fit = ols_fit_xy(x + 0.1, x[:, None], ["x"], has_intercept=False)
        with pytest.raises(PreconditionError):
            f_test_joint(fit)

    def test_size_under_null(self):
        seed = base_seed(22001)
        n, k, reject = 30, 3, 0
        reps = 2000
        for rep in range(reps):
            rng = rng_stream(seed, rep)
            X = np.column_stack([np.ones(n), rng.normal(size=(n, k - 1))])
            y = rng.normal(size=n)
            fit = ols_fit_xy(y, X)
            reject += fit.f_prob <= 0.05
        assert 0.03 * reps <= reject <= 0.07 * reps


class TestSic:
    def test_hand_value(self):
        fit = ols_fit_xy(np.arange(10.0), np.ones((10, 1)), ["const"])
        # force the documented formula on a synthetic rss
        assert sic(fit) == pytest.approx(math.log(fit.rss / 10) + math.log(10) / 10)
        from cotrend.linreg import _sic_from_rss

        assert _sic_from_rss(10.0, 10, 1) == pytest.approx(0.2303, abs=1e-4)

    def test_zero_rss_sentinel(self):
        x = np.array([1.0, 2.0, 3.0])
        fit = ols_fit_xy(2.0 * x, x[:, None], ["x"], has_intercept=False)
        assert sic(fit) == -math.inf

    def test_useless_regressor_raises_sic(self):
        seed = base_seed(22002)
        raised = 0
        reps = 500
        for rep in range(reps):
            rng = rng_stream(seed, rep)
            n = 40
            X1 = np.column_stack([np.ones(n), rng.normal(size=n)])
            X2 = np.column_stack([X1, rng.normal(size=n)])
            y = rng.normal(size=n)
            raised += sic(ols_fit_xy(y, X2)) > sic(ols_fit_xy(y, X1))
        assert raised >= 0.90 * reps


class TestDurbinWatson:
    def test_constant_residuals_zero(self):
        assert durbin_watson(np.array([2.0, 2.0, 2.0])) == 0.0

    def test_alternating_hand_value(self):
        assert durbin_watson(np.array([1.0, -1.0, 1.0, -1.0])) == pytest.approx(3.0)

    def test_all_zero_rejected(self):
        with pytest.raises(DegenerateStatisticError):
            durbin_watson(np.zeros(5))

    def test_too_short(self):
        with pytest.raises(DomainError):
            durbin_watson(np.array([1.0]))


class TestRecursiveResiduals:
    def test_exact_model_gives_zeros(self):
        x = np.linspace(1.0, 9.0, 12)
        X = np.column_stack([np.ones(12), x])
        y = 4.0 - 0.5 * x
        w = recursive_residuals_xy(y, X)
        assert np.allclose(w, 0.0, atol=1e-10)

    def test_output_length(self):
        rng = rng_stream(base_seed(23), 0)
        for n, k in [(10, 2), (15, 3), (30, 6)]:
            y, X = random_design(rng, n, k)
            assert recursive_residuals_xy(y, X).size == n - k

    def test_matches_brute_force_prefix_refits(self):
        seed = base_seed(23001)
        for rep in range(20):
            rng = rng_stream(seed, rep)
            y, X = random_design(rng, 15, 3)
            w = recursive_residuals_xy(y, X)
            ref = brute_force_recursive(y, X)
            assert np.allclose(w, ref, atol=1e-8)

    def test_singular_prefix_reports_t(self):
        X = np.zeros((10, 2))
        X[:, 0] = 1.0
        X[5:, 1] = np.arange(5.0)  # first 2 rows collinear with the constant
        y = np.arange(10.0)
        with pytest.raises(SingularPrefixError) as err:
            recursive_residuals_xy(y, X)
        assert err.value.t == 2

    def test_null_mean_close_to_zero(self):
        seed = base_seed(23002)
        n, k, reps = 20, 3, 1000
        acc = np.zeros(n - k)
        for rep in range(reps):
            rng = rng_stream(seed, rep)
            X = np.column_stack([np.ones(n), rng.normal(size=(n, k - 1))])
            y = X @ np.array([1.0, 0.5, -0.25]) + rng.normal(size=n)
            acc += recursive_residuals_xy(y, X)
        mean = acc / reps
        assert np.all(np.abs(mean) <= 4.0 / math.sqrt(reps))

    def test_design_wrapper(self):
        y = series([1.0, 2.1, 2.9, 4.2, 5.1, 5.8], "y")
        x = series([1.0, 2.0, 3.0, 4.0, 5.0, 6.0], "x")
        d = Design(y, (x,))
        assert recursive_residuals(d).size == 6 - 2
