import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from freqgc import dfsim
from freqgc.regression import least_squares
from freqgc.stationarity import (
    TrendSpec,
    UnsupportedAlphaError,
    adf_test,
    df_critical_value,
    long_run_variance,
    newey_west_bandwidth,
    pp_test,
    sic_profile,
)

from conftest import ar1


class TestCriticalValues:
    def test_constant_only_600(self):
        assert df_critical_value(600, TrendSpec.CONSTANT, 0.05) == pytest.approx(-2.87, abs=0.03)

    def test_constant_trend_600(self):
        assert df_critical_value(600, TrendSpec.CONSTANT_TREND, 0.05) == pytest.approx(-3.42, abs=0.03)

    def test_unsupported_alpha(self):
        with pytest.raises(UnsupportedAlphaError):
            df_critical_value(600, "c", 0.07)

    def test_ordering(self):
        for trend in TrendSpec:
            cv = [df_critical_value(300, trend, a) for a in (0.01, 0.05, 0.10)]
            assert cv[0] < cv[1] < cv[2]
        assert df_critical_value(300, "ct", 0.05) < df_critical_value(300, "c", 0.05)

    def test_fresh_simulation_agrees_with_table(self):
        # independent stream, smaller run: the table must sit inside MC error
        rng = np.random.Generator(np.random.Philox(12345))
        stats = dfsim.df_tstats(250, "c", 20_000, rng)
        assert np.quantile(stats, 0.05) == pytest.approx(df_critical_value(250, "c", 0.05), abs=0.04)

    @pytest.mark.parametrize("trend", ["c", "ct"])
    def test_vectorised_tstat_matches_ols(self, trend):
        rng = np.random.Generator(np.random.Philox(7))
        stats = dfsim.df_tstats(80, trend, 5, np.random.Generator(np.random.Philox(7)), batch=5)
        y = np.cumsum(rng.standard_normal((5, 80)), axis=1)
        for i in range(5):
            dy, ylag = np.diff(y[i]), y[i, :-1]
            cols = [np.ones(79)] + ([np.arange(1, 80.0)] if trend == "ct" else []) + [ylag]
            fit = least_squares(np.column_stack(cols), dy)
            assert stats[i] == pytest.approx(fit.coefficients[-1] / fit.standard_errors[-1], rel=1e-9)


class TestAdf:
    def test_white_noise_rejects(self, rng):
        res = adf_test(rng.standard_normal(600))
        assert res.reject_unit_root_5pct
        assert res.selected_lag <= res.max_lag

    def test_constant_series_is_degenerate(self):
        with pytest.raises(ValueError):
            adf_test(np.full(100, 3.0))

    def test_too_short(self, rng):
        with pytest.raises(ValueError):
            adf_test(rng.standard_normal(20))

    def test_non_finite(self, rng):
        y = rng.standard_normal(100)
        y[50] = np.nan
        with pytest.raises(ValueError):
            adf_test(y)

    def test_max_lag_bound(self, rng):
        with pytest.raises(ValueError):
            adf_test(rng.standard_normal(100), max_lag=25)

    def test_reject_flag_is_function_of_statistic(self, rng):
        res = adf_test(np.cumsum(rng.standard_normal(300)))
        assert res.reject_unit_root_5pct == (res.statistic < res.critical_values[0.05])

    def test_lag_selection_picks_augmentation(self, rng):
        # AR(2) in differences: the SIC should want at least one lagged difference
        e = rng.standard_normal(800)
        d = np.zeros(800)
        for t in range(2, 800):
            d[t] = 0.6 * d[t - 1] - 0.3 * d[t - 2] + e[t]
        assert adf_test(np.cumsum(d), max_lag=8).selected_lag >= 1

    def test_statsmodels_agreement_fixed_lag(self, rng):
        sm = pytest.importorskip("statsmodels.tsa.stattools")
        y = np.cumsum(rng.standard_normal(400)) * 0.1 + rng.standard_normal(400)
        ours = adf_test(y, "c", max_lag=0)
        theirs = sm.adfuller(y, maxlag=0, autolag=None, regression="c")
        assert ours.statistic == pytest.approx(theirs[0], rel=1e-10)


class TestPp:
    def test_bandwidth_rule(self):
        assert newey_west_bandwidth(100) == 4
        assert newey_west_bandwidth(599) == 5

    def test_long_run_variance_bandwidth_zero_is_variance(self, rng):
        u = rng.standard_normal(200)
        assert long_run_variance(u, 0) == pytest.approx(u @ u / 200)

    def test_reduces_to_df_when_errors_white(self, rng):
        # with no serial correlation Z_t is close to the plain DF t-ratio
        y = rng.standard_normal(600)
        assert pp_test(y).statistic == pytest.approx(adf_test(y, max_lag=0).statistic, rel=0.05)

    def test_ar1_half_rejects(self):
        rejects = 0
        for seed in range(300):
            y = ar1(np.random.default_rng(seed), 0.5, 600)
            rejects += pp_test(y).reject_unit_root_5pct
        assert rejects / 300 > 0.99


class TestInvariances:
    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**31), shift=st.floats(-1e3, 1e3), scale=st.floats(1e-2, 1e3))
    def test_shift_and_scale(self, seed, shift, scale):
        y = np.cumsum(np.random.default_rng(seed).standard_normal(150)) * 0.3
        y += np.random.default_rng(seed + 1).standard_normal(150)
        base = adf_test(y, "c", max_lag=4)
        assert adf_test(y + shift, "c", max_lag=4).statistic == pytest.approx(base.statistic, rel=1e-6)
        assert adf_test(scale * y, "c", max_lag=4).statistic == pytest.approx(base.statistic, rel=1e-6)
        for trend in TrendSpec:
            assert pp_test(scale * y, trend).statistic == pytest.approx(
                pp_test(y, trend).statistic, rel=1e-6)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**31), m=st.integers(0, 6))
    def test_more_candidate_lags_never_raise_selected_sic(self, seed, m):
        y = np.cumsum(np.random.default_rng(seed).standard_normal(200))
        # common sample fixed at start=7 so profiles are comparable
        small = sic_profile(y, "c", m, start=7)
        large = sic_profile(y, "c", m + 1, start=7)
        assert large.min() <= small.min()
        np.testing.assert_allclose(large[:m + 1], small)
