"""ADF and Phillips-Perron unit-root tests with embedded Dickey-Fuller critical values."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .regression import least_squares

SUPPORTED_ALPHAS = (0.01, 0.05, 0.10)
MIN_LENGTH = 25


class TrendSpec(str, enum.Enum):
    """Deterministic terms in the test regression."""

    CONSTANT = "c"
    CONSTANT_TREND = "ct"

    @property
    def label(self) -> str:
        return "No trend" if self is TrendSpec.CONSTANT else "Trend"


class UnsupportedAlphaError(ValueError):
    pass


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    selected_lag: int
    max_lag: int
    nobs: int
    critical_values: dict
    alpha: float = 0.05
    criterion: str = "SIC"
    sic_by_lag: tuple = field(default=(), repr=False)

    @property
    def reject_unit_root_5pct(self) -> bool:
        return self.statistic < self.critical_values[0.05]

    @property
    def reject(self) -> bool:
        return self.statistic < self.critical_values[self.alpha]


@dataclass(frozen=True)
class PpResult:
    statistic: float
    bandwidth: int
    nobs: int
    critical_values: dict
    alpha: float = 0.05

    @property
    def reject_unit_root_5pct(self) -> bool:
        return self.statistic < self.critical_values[0.05]

    @property
    def reject(self) -> bool:
        return self.statistic < self.critical_values[self.alpha]


def _as_trend(trend) -> TrendSpec:
    return trend if isinstance(trend, TrendSpec) else TrendSpec(trend)


def _check_alpha(alpha: float) -> float:
    for a in SUPPORTED_ALPHAS:
        if math.isclose(alpha, a, rel_tol=0, abs_tol=1e-12):
            return a
    raise UnsupportedAlphaError(
        f"alpha={alpha} not tabulated; use one of {SUPPORTED_ALPHAS}")


def _validated(series) -> np.ndarray:
    y = np.asarray(getattr(series, "values", series), dtype=float)
    if y.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if y.size < MIN_LENGTH:
        raise ValueError(f"series too short: {y.size} < {MIN_LENGTH}")
    if not np.all(np.isfinite(y)):
        raise ValueError("series contains non-finite values")
    if np.ptp(y) == 0:
        raise ValueError("series is constant; unit-root regression is degenerate")
    return y


@lru_cache(maxsize=None)
def _table() -> dict:
    rows: dict = {}
    text = resources.files("freqgc").joinpath("data/df_critical_values.csv").read_text("utf-8")
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    for rec in csv.DictReader(lines):
        key = (rec["spec"], float(rec["alpha"]))
        rows.setdefault(key, []).append((int(rec["T"]), float(rec["value"])))
    return rows


@lru_cache(maxsize=None)
def _surface(trend: str, alpha: float) -> np.ndarray:
    # cv(T) = b0 + b1/T + b2/T^2, fitted to the simulated quantiles
    pts = _table()[(trend, alpha)]
    T = np.array([p[0] for p in pts], dtype=float)
    v = np.array([p[1] for p in pts])
    X = np.column_stack([np.ones_like(T), 1 / T, 1 / T**2])
    return least_squares(X, v).coefficients


def df_critical_value(T: int, trend="c", alpha: float = 0.05) -> float:
    """Dickey-Fuller critical value for a series of length ``T``."""
    alpha = _check_alpha(alpha)
    trend = _as_trend(trend)
    if T < 2:
        raise ValueError("T must be at least 2")
    b = _surface(trend.value, alpha)
    return float(b[0] + b[1] / T + b[2] / T**2)


def _critical_values(T: int, trend: TrendSpec) -> dict:
    return {a: df_critical_value(T, trend, a) for a in SUPPORTED_ALPHAS}


def default_max_lag(T: int) -> int:
    lag = int(math.floor(12 * (T / 100) ** 0.25))
    return max(0, min(lag, (T - 1) // 4 - 1))


def _adf_design(y: np.ndarray, trend: TrendSpec, lag: int, start: int):
    """Rows for dy_t, t = start..T-2 (index into the differenced series)."""
    dy = np.diff(y)
    n = dy.size - start
    cols = [np.ones(n)]
    if trend is TrendSpec.CONSTANT_TREND:
        cols.append(np.arange(start + 1, start + 1 + n, dtype=float))
    cols.append(y[start:start + n])
    for j in range(1, lag + 1):
        cols.append(dy[start - j:start - j + n])
    return np.column_stack(cols), dy[start:]


def sic_profile(series, trend="c", max_lag: int = 4, start: int | None = None) -> np.ndarray:
    """Schwarz criterion of the ADF regression for lags 0..max_lag.

    All regressions share the sample beginning at ``start`` (default ``max_lag``),
    so the values are comparable across lags.
    """
    y = _validated(series)
    trend = _as_trend(trend)
    start = max_lag if start is None else start
    if start < max_lag:
        raise ValueError("start must be at least max_lag")
    out = np.empty(max_lag + 1)
    for p in range(max_lag + 1):
        X, dy = _adf_design(y, trend, p, start)
        fit = least_squares(X, dy)
        n = fit.nobs
        out[p] = math.log(fit.ssr / n) + X.shape[1] * math.log(n) / n
    return out


def adf_test(series, trend="c", max_lag: int | None = None, alpha: float = 0.05) -> AdfResult:
    """Augmented Dickey-Fuller test with SIC lag selection.

    The lag is chosen on the common sample available at ``max_lag``; the
    reported t-ratio is then re-estimated on the full sample for that lag.
    """
    alpha = _check_alpha(alpha)
    y = _validated(series)
    trend = _as_trend(trend)
    T = y.size
    if max_lag is None:
        max_lag = default_max_lag(T)
    if max_lag < 0 or max_lag >= T / 4:
        raise ValueError(f"max_lag must be in [0, T/4); got {max_lag} for T={T}")

    sic = sic_profile(y, trend, max_lag)
    lag = int(np.argmin(sic))
    X, dy = _adf_design(y, trend, lag, lag)
    fit = least_squares(X, dy)
    pos = 2 if trend is TrendSpec.CONSTANT_TREND else 1
    # regressor is y_{t-1}; its coefficient is rho - 1
    stat = float(fit.coefficients[pos] / fit.standard_errors[pos])
    return AdfResult(
        statistic=stat,
        selected_lag=lag,
        max_lag=max_lag,
        nobs=fit.nobs,
        critical_values=_critical_values(fit.nobs + 1, trend),
        alpha=alpha,
        sic_by_lag=tuple(float(s) for s in sic),
    )


def newey_west_bandwidth(T: int) -> int:
    return int(math.floor(4 * (T / 100) ** (2 / 9)))


def long_run_variance(u: np.ndarray, bandwidth: int) -> float:
    """Bartlett-kernel (Newey-West) long-run variance with divisor n."""
    n = u.size
    lrv = float(u @ u) / n
    for j in range(1, bandwidth + 1):
        w = 1.0 - j / (bandwidth + 1)
        lrv += 2.0 * w * float(u[j:] @ u[:-j]) / n
    return lrv


def pp_test(series, trend="c", alpha: float = 0.05) -> PpResult:
    """Phillips-Perron Z_t test."""
    alpha = _check_alpha(alpha)
    y = _validated(series)
    trend = _as_trend(trend)
    X, dy = _adf_design(y, trend, 0, 0)
    fit = least_squares(X, dy)
    pos = X.shape[1] - 1
    n = fit.nobs
    u = fit.residuals
    bw = newey_west_bandwidth(n)
    gamma0 = float(u @ u) / n
    lam2 = long_run_variance(u, bw)
    s = math.sqrt(fit.sigma2)
    se = fit.standard_errors[pos]
    t_rho = fit.coefficients[pos] / se
    lam = math.sqrt(lam2)
    z_t = math.sqrt(gamma0 / lam2) * t_rho - 0.5 * (lam2 - gamma0) / lam * (n * se / s)
    return PpResult(
        statistic=float(z_t),
        bandwidth=bw,
        nobs=n,
        critical_values=_critical_values(n + 1, trend),
        alpha=alpha,
    )
