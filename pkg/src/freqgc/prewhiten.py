"""Univariate ARMA prewhitening by conditional sum of squares.

The model is ``(1 - sum phi_i L^i)(y_t - mu) = (1 + sum theta_j L^j) e_t`` with
pre-sample deviations and innovations set to zero.  Stationarity and
invertibility are enforced by optimising over partial autocorrelations
mapped through ``tanh``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, signal

from .errors import NumericalError
from .regression import RankDeficientError, least_squares

MAX_ITER = 200
NEAR_UNIT_ROOT = 1.001


class ArmaFitError(NumericalError):
    """Optimizer failed to converge within the iteration budget."""


class NearUnitRootWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ArmaModel:
    p: int
    q: int
    mean: float
    ar_coefficients: tuple = ()
    ma_coefficients: tuple = ()
    innovation_variance: float = 1.0
    information_criterion: float = float("nan")
    nobs: int = 0
    near_unit_root: bool = False

    @property
    def intercept(self) -> float:
        return self.mean * (1.0 - sum(self.ar_coefficients))

    @property
    def order(self) -> tuple:
        return (self.p, self.q)

    def ar_roots(self) -> np.ndarray:
        return _poly_roots([-c for c in self.ar_coefficients])

    def ma_roots(self) -> np.ndarray:
        return _poly_roots(list(self.ma_coefficients))


@dataclass(frozen=True)
class InnovationSeries:
    values: np.ndarray
    source_model: ArmaModel
    sample_mean: float = field(default=0.0)

    def __len__(self) -> int:
        return self.values.size


def _poly_roots(tail) -> np.ndarray:
    # roots of 1 + c1 z + ... + cn z^n
    if not tail:
        return np.array([])
    return np.roots(np.r_[1.0, tail][::-1])


def _pacf_to_coefs(r: np.ndarray) -> np.ndarray:
    """Map partial autocorrelations in (-1, 1) to stationary AR coefficients."""
    a = np.zeros(0)
    for k, rk in enumerate(r):
        a = np.r_[a - rk * a[::-1], rk]
    return a


def _coefs_to_pacf(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    r = np.zeros(a.size)
    size = a.size
    for k in range(a.size - 1, -1, -1):
        rk = a[k]
        r[k] = rk
        if k and abs(rk) < 1:
            a = (a[:k] + rk * a[:k][::-1]) / (1 - rk * rk)
        elif k:
            return np.full(size, np.nan)
    return r


def _unpack(params, p, q):
    mu = params[0]
    phi = _pacf_to_coefs(np.tanh(params[1:1 + p]))
    theta = -_pacf_to_coefs(np.tanh(params[1 + p:1 + p + q]))
    return mu, phi, theta


def _jacobian(params, p, q, h=1e-7):
    """d(mu, phi, theta)/d(raw params); block diagonal, central differences."""
    k = 1 + p + q
    J = np.zeros((k, k))
    J[0, 0] = 1.0
    for i in range(1, k):
        up, dn = params.copy(), params.copy()
        up[i] += h
        dn[i] -= h
        _, pu, tu = _unpack(up, p, q)
        _, pd, td = _unpack(dn, p, q)
        J[1:, i] = (np.r_[pu, tu] - np.r_[pd, td]) / (2 * h)
    return J


def _residuals(z: np.ndarray, mu: float, phi, theta) -> np.ndarray:
    return signal.lfilter(np.r_[1.0, -np.asarray(phi)], np.r_[1.0, np.asarray(theta)], z - mu)


def _validated(series) -> np.ndarray:
    y = np.asarray(getattr(series, "values", series), dtype=float)
    if y.ndim != 1 or y.size < 3:
        raise ValueError("series must be one-dimensional with at least 3 points")
    if not np.all(np.isfinite(y)):
        raise ValueError("series contains non-finite values")
    return y


def _start_values(z: np.ndarray, p: int, q: int) -> np.ndarray:
    """Hannan-Rissanen start on the standardised series, as raw parameters."""
    x0 = np.zeros(1 + p + q)
    if p + q == 0:
        return x0
    T = z.size
    m = min(max(p, q) + 6, T // 8)
    try:
        lags = np.column_stack([z[m - j:T - j] for j in range(1, m + 1)])
        ehat = np.zeros(T)
        ehat[m:] = least_squares(np.column_stack([np.ones(T - m), lags]), z[m:]).residuals
        s = m + max(p, q)
        cols = [np.ones(T - s)]
        cols += [z[s - j:T - j] for j in range(1, p + 1)]
        cols += [ehat[s - j:T - j] for j in range(1, q + 1)]
        b = least_squares(np.column_stack(cols), z[s:]).coefficients
    except (RankDeficientError, ValueError):
        return x0
    phi, theta = b[1:1 + p], b[1 + p:]
    r_ar = _coefs_to_pacf(phi)
    r_ma = _coefs_to_pacf(-theta)
    for r in (r_ar, r_ma):
        if not np.all(np.isfinite(r)):
            r[:] = 0.0
        np.clip(r, -0.9, 0.9, out=r)
    x0[1:] = np.arctanh(np.r_[r_ar, r_ma])
    return x0


def _css_ar_ols(z: np.ndarray, p: int, cond: int):
    """Exact CSS solution for a pure AR when OLS lands inside the stationary region."""
    T = z.size
    X = np.column_stack([np.ones(T - cond)] + [z[cond - j:T - j] for j in range(1, p + 1)])
    try:
        b = least_squares(X, z[cond:]).coefficients
    except RankDeficientError:
        return None
    phi = b[1:]
    r = _coefs_to_pacf(phi)
    if not np.all(np.abs(r) < 1 - 1e-10):
        return None
    mu = b[0] / (1.0 - phi.sum())
    return np.r_[mu, np.arctanh(r)]


def fit_arma(series, p: int, q: int, condition: int | None = None) -> ArmaModel:
    """Fit an ARMA(p, q) by conditional sum of squares.

    ``condition`` is the number of leading residuals left out of the objective
    (default ``p``); order selection passes a common value for every cell.
    The information criterion is BIC on the conditioned sample with
    ``p + q + 1`` mean/ARMA parameters.
    """
    y = _validated(series)
    T = y.size
    if p < 0 or q < 0:
        raise ValueError("orders must be non-negative")
    if p + q >= T / 10:
        raise ValueError(f"p + q = {p + q} too large for T = {T}")
    cond = p if condition is None else condition
    if cond < p or cond >= T - 1:
        raise ValueError("invalid conditioning length")

    center, scale = float(y.mean()), float(y.std())
    if scale == 0:
        raise ValueError("series is constant")
    z = (y - center) / scale
    n = T - cond

    def ssr(params):
        mu, phi, theta = _unpack(params, p, q)
        e = _residuals(z, mu, phi, theta)[cond:]
        return float(e @ e) / n

    def ssr_and_grad(params):
        mu, phi, theta = _unpack(params, p, q)
        ar, ma = np.r_[1.0, -phi], np.r_[1.0, theta]
        dev = z - mu
        e_full = signal.lfilter(ar, ma, dev)
        e = e_full[cond:]
        # derivatives of e_t w.r.t. mu, phi_i and theta_j, each filtered by 1/theta(L)
        d = np.empty((1 + p + q, T))
        d[0] = -signal.lfilter(ar, ma, np.ones(T))
        for i in range(1, p + 1):
            d[i] = -signal.lfilter([1.0], ma, np.r_[np.zeros(i), dev[:-i]])
        for j in range(1, q + 1):
            d[p + j] = -signal.lfilter([1.0], ma, np.r_[np.zeros(j), e_full[:-j]])
        g_coef = 2.0 * (d[:, cond:] @ e) / n
        return float(e @ e) / n, g_coef @ _jacobian(params, p, q)

    params = _css_ar_ols(z, p, cond) if q == 0 else None
    if params is None:
        starts = [_start_values(z, p, q)]
        if p and q:
            starts.append(np.zeros(1 + p + q))
        best = None
        for x0 in starts:
            res = optimize.minimize(ssr_and_grad, x0, jac=True, method="BFGS",
                                    options={"maxiter": MAX_ITER, "gtol": 1e-6})
            if not np.isfinite(res.fun):
                continue
            ok = res.success or "precision" in str(res.message)
            if ok and (best is None or res.fun < best.fun - 1e-12):
                best = res
        if best is None:
            raise ArmaFitError(f"ARMA({p},{q}) did not converge in {MAX_ITER} iterations")
        params = best.x

    mu_z, phi, theta = _unpack(params, p, q)
    sigma2_z = ssr(params)
    sigma2 = sigma2_z * scale**2
    k = p + q + 1
    bic = n * math.log(sigma2) + k * math.log(n)

    near = False
    if p:
        roots = _poly_roots(list(-phi))
        near = bool(np.min(np.abs(roots)) < NEAR_UNIT_ROOT)
        if near:
            warnings.warn(f"ARMA({p},{q}) AR estimate is near a unit root",
                          NearUnitRootWarning, stacklevel=2)
    return ArmaModel(
        p=p, q=q,
        mean=center + scale * float(mu_z),
        ar_coefficients=tuple(float(c) for c in phi),
        ma_coefficients=tuple(float(c) for c in theta),
        innovation_variance=sigma2,
        information_criterion=bic,
        nobs=n,
        near_unit_root=near,
    )


def select_arma_order(series, p_max: int = 4, q_max: int = 4) -> tuple:
    """Return the BIC-minimising ``(p, q)`` over the grid 0..p_max x 0..q_max.

    Every cell is fitted on the same sample (the first ``p_max`` residuals are
    conditioned out).  Ties go to the smaller ``p + q``, then the smaller ``p``.
    Cells that fail to converge are skipped.
    """
    y = _validated(series)
    scored = []
    failures = []
    for p in range(p_max + 1):
        for q in range(q_max + 1):
            if p + q >= y.size / 10:
                continue
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", NearUnitRootWarning)
                    model = fit_arma(y, p, q, condition=p_max)
            except ArmaFitError as exc:
                failures.append(str(exc))
                continue
            scored.append((model.information_criterion, p + q, p, q))
    if not scored:
        raise ArmaFitError("no ARMA order converged: " + "; ".join(failures))
    best_bic = min(s[0] for s in scored)
    # BIC values within rounding noise count as ties
    tied = [s for s in scored if s[0] - best_bic <= 1e-9 * max(1.0, abs(best_bic))]
    _, _, p, q = min(tied, key=lambda s: (s[1], s[2]))
    return p, q


def innovations(series, model: ArmaModel) -> InnovationSeries:
    """One-step CSS residuals of ``series`` under ``model``, demeaned, length T."""
    y = _validated(series)
    e = _residuals(y, model.mean, model.ar_coefficients, model.ma_coefficients)
    e = e - e.mean()
    return InnovationSeries(values=e, source_model=model, sample_mean=float(e.mean()))


def prewhiten(series, order: tuple | None = None, p_max: int = 4, q_max: int = 4) -> InnovationSeries:
    """Select (unless ``order`` is given), fit, and filter in one call."""
    if order is None:
        order = select_arma_order(series, p_max, q_max)
    model = fit_arma(series, *order)
    return innovations(series, model)
