import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cotrend import (
    AnnualSeries,
    DegenerateSeriesError,
    Design,
    PreconditionError,
    breusch_godfrey,
    breusch_pagan,
    build_frame,
    jarque_bera,
    ols_fit,
    pearson_matrix,
    ramsey_reset,
)
from cotrend.montecarlo import base_seed, rng_stream


def series(values, name="s", start=2000):
    return AnnualSeries(name, start, np.array(values, dtype=float), "ratio")


def frame_of(**cols):
    return build_frame({k: series(v, k) for k, v in cols.items()})


class TestPearson:
    def test_exact_linear(self):
        f = frame_of(x=[1.0, 2.0, 3.0], y=[2.0, 4.0, 6.0])
        assert pearson_matrix(f).r("x", "y") == pytest.approx(1.0)

    def test_exact_antilinear(self):
        f = frame_of(x=[1.0, 2.0, 3.0], y=[3.0, 2.0, 1.0])
        assert pearson_matrix(f).r("x", "y") == pytest.approx(-1.0)

    def test_structure(self):
        rng = rng_stream(base_seed(31), 0)
        data = rng.normal(size=(12, 4))
        f = frame_of(**{f"v{j}": data[:, j] for j in range(4)})
        m = pearson_matrix(f)
        v = m.values
        assert np.allclose(np.diag(v), 1.0)
        assert np.allclose(v, v.T)
        assert np.all(np.abs(v) <= 1.0)
        assert np.linalg.eigvalsh(v).min() >= -1e-8

    @given(a=st.floats(min_value=0.01, max_value=50), b=st.floats(min_value=-20, max_value=20))
    def test_positive_affine_invariance(self, a, b):
        x = np.array([1.0, 2.0, 4.0, 4.5, 7.0])
        y = np.array([2.0, 1.0, 3.5, 5.0, 4.0])
        base = pearson_matrix(frame_of(x=x, y=y)).r("x", "y")
        mapped = pearson_matrix(frame_of(x=a * x + b, y=y)).r("x", "y")
        assert mapped == pytest.approx(base, abs=1e-12)

    def test_negation_flips_sign(self):
        x = np.array([1.0, 2.0, 4.0, 4.5, 7.0])
        y = np.array([2.0, 1.0, 3.5, 5.0, 4.0])
        assert pearson_matrix(frame_of(x=-x, y=y)).r("x", "y") == pytest.approx(
            -pearson_matrix(frame_of(x=x, y=y)).r("x", "y"), abs=1e-12
        )

    def test_zero_variance_named(self):
        f = frame_of(ok=[1.0, 2.0, 3.0], flat=[5.0, 5.0, 5.0])
        with pytest.raises(DegenerateSeriesError) as err:
            pearson_matrix(f)
        assert "flat" in str(err.value)

    def test_lower_triangle_order(self):
        f = frame_of(a=[1.0, 2.0, 3.1], b=[2.0, 1.0, 2.5], c=[0.0, 3.0, 1.0])
        rows = pearson_matrix(f, ["a", "b", "c"]).lower_triangle()
        assert [r[0] for r in rows] == ["a", "b", "c"]
        assert [len(r[1]) for r in rows] == [1, 2, 3]


def null_design_fit(n=40, k=3, rep=0, seed_tag=41):
    rng = rng_stream(base_seed(seed_tag), rep)
    years = 2000
    xs = [series(rng.normal(size=n), f"x{j}", years) for j in range(k - 1)]
    y = series(rng.normal(size=n), "y", years)
    d = Design(y, tuple(xs))
    return ols_fit(d), d


class TestBreuschPagan:
    def test_constant_squared_residuals_give_zero_lm(self):
        # orthogonal construction: residuals alternate +-c, squared residuals
        # are constant, so the auxiliary regression has R^2 = 0 exactly
        n = 8
        e = np.array([1.0, -1.0] * (n // 2))
        x = np.array([1.0, 1.0, -1.0, -1.0, 2.0, 2.0, -2.0, -2.0])  # x'e = 0
        y = 2.0 + 0.5 * x + e
        d = Design(series(y, "y"), (series(x, "x"),))
        fit = ols_fit(d)
        assert np.allclose(fit.residuals, e, atol=1e-12)
        res = breusch_pagan(fit, d)
        assert res.stat("LM").value == pytest.approx(0.0, abs=1e-10)
        assert res.stat("LM").p_value == pytest.approx(1.0, abs=1e-10)

    def test_reports_both_forms_with_correct_df(self):
        fit, d = null_design_fit(25, 3)
        res = breusch_pagan(fit, d)
        assert res.stat("LM").df == (2,)
        assert res.stat("F").df == (2, 25 - 2 - 1)

    def test_power_on_variance_proportional_to_x_squared(self):
        seed = base_seed(42001)
        reps, rejects = 500, 0
        for rep in range(reps):
            rng = rng_stream(seed, rep)
            n = 200
            x = rng.uniform(0.5, 3.0, size=n)  # positive scale regressor
            y = 1.0 + x + rng.normal(size=n) * x
            d = Design(series(y, "y"), (series(x, "x"),))
            fit = ols_fit(d)
            rejects += breusch_pagan(fit, d).rejects(0.05)
        assert rejects >= 0.90 * reps


class TestBreuschGodfrey:
    def test_orthogonalized_residuals_give_zero_lm(self):
        # residual pattern with zero lag-1 autocovariance and zero covariance
        # with the regressors: aux R^2 = 0 at order 1
        e = np.array([1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0])
        t = np.arange(8.0)
        # make x orthogonal to e: symmetric placement
        x = np.array([0.0, 1.0, 0.0, 2.0, 0.0, 3.0, 0.0, 4.0])
        y = 1.0 + 0.5 * x + e
        d = Design(series(y, "y"), (series(x, "x"),))
        fit = ols_fit(d)
        assert np.allclose(fit.residuals, e, atol=1e-12)
        res = breusch_godfrey(fit, d, order=1)
        assert res.stat("LM").value == pytest.approx(0.0, abs=1e-8)

    def test_df_follow_published_convention(self):
        fit, d = null_design_fit(25, 6, seed_tag=43)
        res = breusch_godfrey(fit, d, 2)
        assert res.stat("LM").df == (2,)
        assert res.stat("F").df == (2, 25 - 6 - 2)

    def test_order_zero_rejected(self):
        fit, d = null_design_fit(20, 3)
        with pytest.raises(PreconditionError):
            breusch_godfrey(fit, d, 0)

    def test_order_too_large_rejected(self):
        fit, d = null_design_fit(12, 3)
        with pytest.raises(PreconditionError):
            breusch_godfrey(fit, d, 9)

    def test_power_on_ar1_residuals(self):
        seed = base_seed(43001)
        reps, rejects = 500, 0
        for rep in range(reps):
            rng = rng_stream(seed, rep)
            n = 200
            x = rng.normal(size=n)
            e = np.empty(n)
            e[0] = rng.normal()
            innov = rng.normal(size=n) * math.sqrt(1 - 0.81)
            for t in range(1, n):
                e[t] = 0.9 * e[t - 1] + innov[t]
            y = 1.0 + x + e
            d = Design(series(y, "y"), (series(x, "x"),))
            rejects += breusch_godfrey(ols_fit(d), d, 2).rejects(0.05)
        assert rejects >= 0.95 * reps


class TestJarqueBera:
    def test_gaussian_moment_match_gives_zero(self):
        # symmetric four-point sample engineered so kurtosis is exactly 3
        a = 1.0
        b = a * (math.sqrt(2.0) - 1.0)
        x = np.array([a, -a, b, -b])
        res = jarque_bera(x)
        assert res.statistic.value == pytest.approx(0.0, abs=1e-12)
        assert res.statistic.p_value == pytest.approx(1.0, abs=1e-12)

    def test_hand_value(self):
        res = jarque_bera(np.array([-1.0, 0.0, 1.0]))
        assert res.statistic.value == pytest.approx(0.28125, abs=1e-12)

    def test_nonnegative_and_affine_invariant(self):
        rng = rng_stream(base_seed(44), 0)
        x = rng.normal(size=30)
        base = jarque_bera(x).statistic.value
        assert base >= 0.0
        mapped = jarque_bera(-3.0 * x + 11.0).statistic.value
        assert mapped == pytest.approx(base, abs=1e-9)

    def test_zero_variance_rejected(self):
        with pytest.raises(DegenerateSeriesError):
            jarque_bera(np.full(10, 2.5))


class TestRamseyReset:
    def test_noiseless_linear_model_gives_zero(self):
        rng = rng_stream(base_seed(45), 0)
        x = rng.normal(size=15)
        y = 2.0 + 3.0 * x
        d = Design(series(y, "y"), (series(x, "x"),))
        res = ramsey_reset(ols_fit(d), d, 2)
        assert res.stat("F").value == pytest.approx(0.0, abs=1e-6)

    def test_t_squared_equals_f_single_power(self):
        fit, d = null_design_fit(30, 4, seed_tag=46)
        res = ramsey_reset(fit, d, 2)
        assert res.stat("t").value ** 2 == pytest.approx(res.stat("F").value, abs=1e-9)

    def test_standardized_powers_match_raw_powers(self):
        # fitted values lie in the regressor span, so standardizing before
        # powering must not change the test statistic
        fit, d = null_design_fit(30, 3, seed_tag=47)
        res = ramsey_reset(fit, d, 2)
        yhat = fit.fitted
        Z = np.column_stack([d.matrix(), yhat**2])
        from cotrend import ols_fit_xy

        aux = ols_fit_xy(d.y, Z)
        f_raw = (fit.rss - aux.rss) / (aux.rss / (30 - 3 - 1))
        assert res.stat("F").value == pytest.approx(f_raw, rel=1e-6)

    def test_lr_form_consistent(self):
        fit, d = null_design_fit(30, 4, seed_tag=48)
        res = ramsey_reset(fit, d, 2)
        f_val = res.stat("F").value
        implied_lr = 30 * math.log(1.0 + f_val / (30 - 4 - 1))
        assert res.stat("LR").value == pytest.approx(implied_lr, rel=1e-9)

    def test_power_on_quadratic_dgp(self):
        seed = base_seed(48001)
        reps, rejects = 500, 0
        for rep in range(reps):
            rng = rng_stream(seed, rep)
            n = 200
            x = rng.normal(size=n)
            y = x**2 + rng.normal(size=n)
            d = Design(series(y, "y"), (series(x, "x"),))
            rejects += ramsey_reset(ols_fit(d), d, 2).rejects(0.05)
        assert rejects >= 0.95 * reps
