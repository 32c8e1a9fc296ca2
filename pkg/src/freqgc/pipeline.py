"""End-to-end run: unit-root checks, prewhitening, Granger-coherence curves, band verdicts."""

from __future__ import annotations

import hashlib
import logging
import warnings
from dataclasses import dataclass, field

from . import __version__
from .config import Direction, SpectralConfig
from .errors import InputError
from .ingest import TimeSeries, align
from .prewhiten import InnovationSeries, NearUnitRootWarning, fit_arma, innovations, select_arma_order
from .spectral import BandSummary, CoherenceCurve, EffectiveSampleSizes, classify_bands, gc_curve
from .stationarity import AdfResult, PpResult, TrendSpec, adf_test, pp_test

logger = logging.getLogger(__name__)

MIN_LENGTH = 100
WARN_LENGTH = 200


class TooShortError(InputError):
    pass


@dataclass(frozen=True)
class UnitRootSummary:
    name: str
    adf: dict  # TrendSpec -> AdfResult
    pp: dict  # TrendSpec -> PpResult

    def failures(self) -> list:
        out = []
        for label, results in (("ADF", self.adf), ("PP", self.pp)):
            for trend, res in results.items():
                if not res.reject_unit_root_5pct:
                    out.append(f"{self.name}: {label} ({trend.label}) does not reject "
                               f"a unit root at 5% (stat {res.statistic:.3f})")
        return out


@dataclass(frozen=True)
class DirectionResult:
    direction: Direction
    curve: CoherenceCurve
    bands: BandSummary


@dataclass
class GcReport:
    x_name: str
    y_name: str
    start: str
    end: str
    T: int
    config: SpectralConfig
    unit_roots: list
    models: dict  # "x" / "y" -> ArmaModel
    sizes: EffectiveSampleSizes
    results: list
    warnings: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def result(self, direction) -> DirectionResult:
        direction = Direction(direction)
        for r in self.results:
            if r.direction is direction:
                return r
        raise KeyError(direction.value)


def unit_root_summary(series: TimeSeries) -> UnitRootSummary:
    trends = (TrendSpec.CONSTANT, TrendSpec.CONSTANT_TREND)
    return UnitRootSummary(
        name=series.name,
        adf={t: adf_test(series.values, t) for t in trends},
        pp={t: pp_test(series.values, t) for t in trends},
    )


def _whiten(series: TimeSeries, order, arma_max: int, notes: list) -> InnovationSeries:
    if order is None:
        order = select_arma_order(series.values, arma_max, arma_max)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NearUnitRootWarning)
        model = fit_arma(series.values, *order)
    if any(issubclass(w.category, NearUnitRootWarning) for w in caught):
        notes.append(f"{series.name}: ARMA{order} AR part is near a unit root")
    return innovations(series.values, model)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def run_pipeline(x: TimeSeries, y: TimeSeries, config: SpectralConfig | None = None,
                 inputs: dict | None = None, extra: dict | None = None) -> GcReport:
    """Test whether ``x`` Granger-causes ``y`` (and/or the reverse) frequency by frequency.

    ``inputs`` maps labels to file paths whose SHA-256 digests go into the
    provenance block; ``extra`` is copied there verbatim (e.g. ingest options).
    """
    config = config or SpectralConfig()
    x, y = align(x, y)
    T = len(x)
    if T < MIN_LENGTH:
        raise TooShortError(f"aligned sample has {T} observations; need at least {MIN_LENGTH}")
    notes = []
    if T < WARN_LENGTH:
        notes.append(f"short sample: T={T} < {WARN_LENGTH}; chi-squared thresholds are rough")

    unit_roots = [unit_root_summary(x), unit_root_summary(y)]
    for ur in unit_roots:
        notes.extend(ur.failures())

    mu = _whiten(x, config.arma_x, config.arma_max, notes)
    nu = _whiten(y, config.arma_y, config.arma_max, notes)

    results = []
    for d in config.direction.pairs():
        cause, effect = (mu, nu) if d is Direction.X_TO_Y else (nu, mu)
        label = f"{x.name}->{y.name}" if d is Direction.X_TO_Y else f"{y.name}->{x.name}"
        curve = gc_curve(cause, effect, config, label=label)
        results.append(DirectionResult(d, curve, classify_bands(curve, fraction=config.band_fraction)))

    for n in notes:
        logger.warning(n)
    provenance = {
        "version": __version__,
        "config": config.to_dict(),
        "inputs": {k: {"path": str(p), "sha256": file_digest(p)} for k, p in (inputs or {}).items()},
        "resolved": {
            "M": results[0].curve.M,
            "arma_x": list(mu.source_model.order),
            "arma_y": list(nu.source_model.order),
            "sample": [x.start, x.end],
        },
        **(extra or {}),
    }
    return GcReport(
        x_name=x.name, y_name=y.name, start=x.start, end=x.end, T=T,
        config=config, unit_roots=unit_roots,
        models={"x": mu.source_model, "y": nu.source_model},
        sizes=results[0].curve.sizes, results=results,
        warnings=notes, provenance=provenance,
    )
