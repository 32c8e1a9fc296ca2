"""Bartlett-weighted spectra, cross-spectra, coherence and Granger coherence.

Cross-covariances follow ``gamma_xy(k) = Cov(x_t, y_{t-k})`` with divisor T at
every lag, and every transform uses the kernel ``exp(-i lambda k)``.  Under
that convention x Granger-causes y exactly through the lags ``k < 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .config import LONG_TERM_SPLIT, SpectralConfig

TWO_PI = 2.0 * math.pi


class FrequencyDomainError(ValueError):
    """A frequency outside the open interval (0, pi) was requested."""


class LagMask(str, enum.Enum):
    FULL = "full"
    INSTANTANEOUS = "instantaneous"
    NEGATIVE_LAGS = "negative_lags"
    POSITIVE_LAGS = "positive_lags"

    def select(self, lags: np.ndarray) -> np.ndarray:
        if self is LagMask.FULL:
            return np.ones(lags.shape, dtype=bool)
        if self is LagMask.INSTANTANEOUS:
            return lags == 0
        if self is LagMask.NEGATIVE_LAGS:
            return lags < 0
        return lags > 0


@dataclass(frozen=True)
class WeightScheme:
    """Bartlett lag window ``w_k = 1 - |k|/M`` on ``k = -M..M``."""

    M: int

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 2:
            raise ValueError("M must be an integer >= 2")

    @property
    def lags(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    @property
    def weights(self) -> np.ndarray:
        return 1.0 - np.abs(self.lags) / self.M

    def weight(self, k: int) -> float:
        return 1.0 - abs(k) / self.M if abs(k) <= self.M else 0.0


@dataclass(frozen=True)
class CovarianceSequence:
    lags: np.ndarray
    values: np.ndarray
    kind: str  # "auto" or "cross"


@dataclass(frozen=True)
class EffectiveSampleSizes:
    n: float
    n_prime: float
    T: int
    M: int


def _as_array(x) -> np.ndarray:
    a = np.asarray(getattr(x, "values", x), dtype=float)
    if a.ndim != 1:
        raise ValueError("expected a one-dimensional series")
    return a


def _check_frequencies(lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    if np.any(~np.isfinite(lam)) or np.any(lam <= 0) or np.any(lam >= math.pi):
        raise FrequencyDomainError("frequencies must lie strictly inside (0, pi)")
    return lam


def demeaned_covariance(x, y, k: int) -> float:
    """``(1/T) sum_t (x_t - xbar)(y_{t-k} - ybar)``."""
    x, y = _as_array(x), _as_array(y)
    T = x.size
    if y.size != T:
        raise ValueError("series lengths differ")
    if abs(k) >= T:
        raise ValueError(f"|k|={abs(k)} must be below T={T}")
    xd, yd = x - x.mean(), y - y.mean()
    if k >= 0:
        return float(xd[k:] @ yd[:T - k]) / T
    return float(xd[:T + k] @ yd[-k:]) / T


def covariance_sequence(x, y, M: int) -> CovarianceSequence:
    x, y = _as_array(x), _as_array(y)
    T = x.size
    if y.size != T:
        raise ValueError("series lengths differ")
    if M >= T:
        raise ValueError("M must be below T")
    xd, yd = x - x.mean(), y - y.mean()
    lags = np.arange(-M, M + 1)
    vals = np.empty(lags.size)
    for i, k in enumerate(lags):
        vals[i] = (xd[k:] @ yd[:T - k]) if k >= 0 else (xd[:T + k] @ yd[-k:])
    kind = "auto" if x is y or np.array_equal(x, y) else "cross"
    return CovarianceSequence(lags, vals / T, kind)


def _weighted_sum(cov: CovarianceSequence, scheme: WeightScheme, lam: np.ndarray,
                  mask: LagMask) -> np.ndarray:
    if cov.lags.size != scheme.lags.size:
        raise ValueError("covariance sequence and weight scheme disagree on M")
    coef = scheme.weights * cov.values * mask.select(cov.lags)
    phase = np.exp(-1j * np.multiply.outer(lam, cov.lags))
    return (phase * coef).sum(axis=-1) / TWO_PI


def _spectrum_from_cov(cov: CovarianceSequence, scheme: WeightScheme, lam) -> np.ndarray:
    coef = scheme.weights * cov.values
    return (np.cos(np.multiply.outer(lam, cov.lags)) * coef).sum(axis=-1) / TWO_PI


def spectrum(series, scheme: WeightScheme, lam):
    """Weighted-covariance estimate of the spectral density at ``lam``.

    Accepts a scalar or an array of frequencies and returns the same shape.
    """
    lam = _check_frequencies(lam)
    x = _as_array(series)
    cov = covariance_sequence(x, x, scheme.M)
    out = _spectrum_from_cov(cov, scheme, lam)
    return float(out) if out.ndim == 0 else out


def cross_spectrum(x, y, scheme: WeightScheme, lam, mask=LagMask.FULL):
    """Weighted-covariance cross-spectrum restricted to the lags in ``mask``."""
    lam = _check_frequencies(lam)
    cov = covariance_sequence(x, y, scheme.M)
    out = _weighted_sum(cov, scheme, lam, LagMask(mask))
    return complex(out) if out.ndim == 0 else out


def _ratio(num: np.ndarray, sx: np.ndarray, sy: np.ndarray) -> np.ndarray:
    return np.abs(num) / np.sqrt(sx * sy)


def _require_variance(x: np.ndarray, y: np.ndarray) -> None:
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ValueError("coherence needs both series to have positive variance")


def coherence(x, y, scheme: WeightScheme, lam):
    """``|S_xy| / sqrt(S_x S_y)`` with the full lag window."""
    lam = _check_frequencies(lam)
    x, y = _as_array(x), _as_array(y)
    _require_variance(x, y)
    M = scheme.M
    num = _weighted_sum(covariance_sequence(x, y, M), scheme, lam, LagMask.FULL)
    out = _ratio(num, _spectrum_from_cov(covariance_sequence(x, x, M), scheme, lam),
                 _spectrum_from_cov(covariance_sequence(y, y, M), scheme, lam))
    return float(out) if out.ndim == 0 else out


def granger_coherence(x, y, scheme: WeightScheme, lam):
    """Granger coefficient of coherence for the direction x -> y.

    Only ``gamma_xy(k)`` for ``k < 0`` (x leading y) enters the numerator.  The
    estimate is not clipped to [0, 1].
    """
    lam = _check_frequencies(lam)
    x, y = _as_array(x), _as_array(y)
    _require_variance(x, y)
    M = scheme.M
    num = _weighted_sum(covariance_sequence(x, y, M), scheme, lam, LagMask.NEGATIVE_LAGS)
    out = _ratio(num, _spectrum_from_cov(covariance_sequence(x, x, M), scheme, lam),
                 _spectrum_from_cov(covariance_sequence(y, y, M), scheme, lam))
    return float(out) if out.ndim == 0 else out


def effective_sample_sizes(T: int, scheme: WeightScheme) -> EffectiveSampleSizes:
    M = scheme.M
    if T <= 2 * M:
        raise ValueError(f"T={T} must exceed 2M={2 * M}")
    # sum_{k=1}^{M-1} (1 - k/M)^2 = sum_{j=1}^{M-1} j^2 / M^2, kept in integers
    one_side = (M - 1) * M * (2 * M - 1) // 6 / M**2
    return EffectiveSampleSizes(n=T / (1.0 + 2.0 * one_side), n_prime=T / one_side, T=T, M=M)


def chi2_quantile_2dof(alpha: float) -> float:
    """Upper-``alpha`` quantile of chi-squared with 2 degrees of freedom."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return -2.0 * math.log(alpha)


def coherence_threshold(alpha: float, n_effective: float) -> float:
    if not n_effective > 1:
        raise ValueError("effective sample size must exceed 1")
    return math.sqrt(chi2_quantile_2dof(alpha) / (2.0 * (n_effective - 1.0)))


def frequency_grid(size: int = 256) -> np.ndarray:
    """``j*pi/(size+1)`` for ``j = 1..size``."""
    if size < 1:
        raise ValueError("grid size must be positive")
    return np.arange(1, size + 1) * math.pi / (size + 1)


def period_months(lam):
    return TWO_PI / np.asarray(lam, dtype=float)


@dataclass(frozen=True)
class CoherenceCurve:
    frequencies: np.ndarray
    h_granger: np.ndarray
    crit_granger: float
    M: int
    T: int
    alpha: float
    sizes: EffectiveSampleSizes
    h_full: np.ndarray | None = None
    crit_full: float | None = None
    band_split: float = LONG_TERM_SPLIT
    label: str = "x->y"

    @property
    def significant_granger(self) -> np.ndarray:
        return self.h_granger > self.crit_granger

    @property
    def significant_full(self) -> np.ndarray | None:
        if self.h_full is None:
            return None
        return self.h_full > self.crit_full

    @property
    def period_months(self) -> np.ndarray:
        return period_months(self.frequencies)

    @property
    def bands(self) -> np.ndarray:
        return np.where(self.frequencies <= self.band_split, "long", "short")


def gc_curve(cause, effect, config: SpectralConfig | None = None, frequencies=None,
             label: str = "x->y") -> CoherenceCurve:
    """Granger coherence of ``cause -> effect`` over a frequency grid with thresholds."""
    config = config or SpectralConfig()
    x, y = _as_array(cause), _as_array(effect)
    if x.size != y.size:
        raise ValueError("series lengths differ")
    _require_variance(x, y)
    T = x.size
    M = config.lag_length(T)
    scheme = WeightScheme(M)
    lam = frequency_grid(config.grid_size) if frequencies is None else frequencies
    lam = _check_frequencies(np.atleast_1d(lam))

    cxy = covariance_sequence(x, y, M)
    sx = _spectrum_from_cov(covariance_sequence(x, x, M), scheme, lam)
    sy = _spectrum_from_cov(covariance_sequence(y, y, M), scheme, lam)
    h_g = _ratio(_weighted_sum(cxy, scheme, lam, LagMask.NEGATIVE_LAGS), sx, sy)
    sizes = effective_sample_sizes(T, scheme)
    h_f = crit_f = None
    if config.full_coherence:
        h_f = _ratio(_weighted_sum(cxy, scheme, lam, LagMask.FULL), sx, sy)
        crit_f = coherence_threshold(config.alpha, sizes.n)
    return CoherenceCurve(
        frequencies=lam,
        h_granger=h_g,
        crit_granger=coherence_threshold(config.alpha, sizes.n_prime),
        M=M, T=T, alpha=config.alpha, sizes=sizes,
        h_full=h_f, crit_full=crit_f,
        band_split=config.band_split,
        label=label,
    )


@dataclass(frozen=True)
class BandResult:
    name: str
    points: int
    significant: int
    threshold: float

    @property
    def fraction(self) -> float:
        return self.significant / self.points if self.points else 0.0

    @property
    def causal(self) -> bool:
        return self.points > 0 and self.fraction > self.threshold

    @property
    def verdict(self) -> str:
        return "causal" if self.causal else "not-causal"


@dataclass(frozen=True)
class BandSummary:
    long: BandResult
    short: BandResult
    split: float = field(default=LONG_TERM_SPLIT)


def classify_bands(curve: CoherenceCurve, split: float | None = None,
                   fraction: float = 0.5) -> BandSummary:
    """Split the grid at ``split`` (long-term band inclusive) and summarise significance.

    A band is causal when the share of significant grid points exceeds ``fraction``.
    """
    if curve.frequencies.size == 0:
        raise ValueError("empty coherence curve")
    split = curve.band_split if split is None else split
    sig = curve.significant_granger
    long_mask = curve.frequencies <= split
    return BandSummary(
        long=BandResult("long", int(long_mask.sum()), int(sig[long_mask].sum()), fraction),
        short=BandResult("short", int((~long_mask).sum()), int(sig[~long_mask].sum()), fraction),
        split=split,
    )
