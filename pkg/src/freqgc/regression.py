"""Ordinary least squares kernel shared by the unit-root tests and ARMA start-up."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError


class RankDeficientError(NumericalError, ValueError):
    """Raised when a design matrix does not have full column rank."""


@dataclass(frozen=True)
class OlsResult:
    coefficients: np.ndarray
    residuals: np.ndarray
    standard_errors: np.ndarray
    ssr: float
    nobs: int

    @property
    def sigma2(self) -> float:
        dof = self.nobs - self.coefficients.size
        return self.ssr / dof if dof > 0 else float("nan")


def least_squares(design, response, rcond: float = 1e-10) -> OlsResult:
    """Fit ``response ~ design`` by OLS.

    Standard errors use the usual ``s^2 (X'X)^{-1}`` with ``s^2 = SSR / (n - k)``;
    they are NaN when there are no residual degrees of freedom.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"design has {X.shape[0]} rows but response has {y.shape[0]}")
    n, k = X.shape
    if n < k:
        raise RankDeficientError(f"{n} observations for {k} regressors")

    # Column scaling keeps the rank check meaningful for regressors like a trend.
    scale = np.sqrt((X * X).sum(axis=0))
    if np.any(scale == 0):
        raise RankDeficientError("design matrix has an all-zero column")
    Xs = X / scale
    q, r = np.linalg.qr(Xs)
    diag = np.abs(np.diag(r))
    if diag.min() <= rcond * diag.max():
        raise RankDeficientError("design matrix is rank deficient")

    beta_s = np.linalg.solve(r, q.T @ y)
    beta = beta_s / scale
    resid = y - X @ beta
    ssr = float(resid @ resid)
    dof = n - k
    if dof > 0:
        rinv = np.linalg.solve(r, np.eye(k))
        cov_s = (ssr / dof) * (rinv @ rinv.T)
        se = np.sqrt(np.diag(cov_s)) / scale
    else:
        se = np.full(k, np.nan)
    return OlsResult(beta, resid, se, ssr, n)
