"""Transfer-function data generators and a Monte Carlo size/power harness.

Each replication draws from its own Philox stream keyed by ``(seed, replication)``,
so results do not depend on how replications are scheduled.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import SpectralConfig
from .prewhiten import prewhiten
from .spectral import _check_frequencies, frequency_grid, gc_curve

RNG_NAME = "numpy.random.Philox"


class McReplicationError(RuntimeError):
    def __init__(self, seed: int, replication: int, cause: Exception):
        super().__init__(f"replication {replication} (seed {seed}) failed: {cause}")
        self.seed = seed
        self.replication = replication


@dataclass(frozen=True)
class TransferGenerator:
    """``effect_t = sum_j b_j cause_{t-j} + noise_t`` with iid Gaussian cause and noise."""

    transfer_coefficients: tuple = ()
    cause_std: float = 1.0
    noise_std: float = 1.0
    T: int = 600
    seed: int = 0

    def __post_init__(self):
        b = tuple(float(c) for c in self.transfer_coefficients)
        object.__setattr__(self, "transfer_coefficients", b)
        if not all(math.isfinite(c) for c in b):
            raise ValueError("transfer coefficients must be finite")
        if self.cause_std <= 0 or self.noise_std <= 0:
            raise ValueError("standard deviations must be positive")
        if self.T <= 10 * (len(b) + 1):
            raise ValueError(f"T must exceed 10(J+1) = {10 * (len(b) + 1)}")

    @property
    def J(self) -> int:
        return len(self.transfer_coefficients)

    def describe(self) -> str:
        b = ",".join(f"{c:g}" for c in self.transfer_coefficients) or "none"
        return (f"b=[{b}] cause_std={self.cause_std:g} noise_std={self.noise_std:g} "
                f"T={self.T} seed={self.seed}")


def replication_rng(seed: int, replication: int | None = None) -> np.random.Generator:
    if replication is None:
        ss = np.random.SeedSequence(seed)
    else:
        ss = np.random.SeedSequence(seed, spawn_key=(replication,))
    return np.random.Generator(np.random.Philox(ss))


def generate(gen: TransferGenerator, replication: int | None = None):
    """Draw one ``(cause, effect)`` pair; ``10 J`` warm-up points are discarded."""
    rng = replication_rng(gen.seed, replication)
    burn = 10 * gen.J
    n = gen.T + burn
    x = gen.cause_std * rng.standard_normal(n)
    y = gen.noise_std * rng.standard_normal(n)
    for j, b in enumerate(gen.transfer_coefficients, start=1):
        y[j:] += b * x[:-j]
    return x[burn:], y[burn:]


def transfer_function(gen: TransferGenerator, lam):
    lam = np.asarray(lam, dtype=float)
    out = np.zeros(lam.shape, dtype=complex)
    for j, b in enumerate(gen.transfer_coefficients, start=1):
        out += b * np.exp(-1j * lam * j)
    return out


def population_granger_coherence(gen: TransferGenerator, lam):
    lam = _check_frequencies(lam)
    gain = np.abs(transfer_function(gen, lam)) * gen.cause_std
    out = gain / np.sqrt(gain**2 + gen.noise_std**2)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class McSummary:
    frequencies: np.ndarray
    rejection_rates: np.ndarray
    mean_h: np.ndarray
    replications: int
    generator: str
    config: dict
    critical_value: float
    n_prime: float
    statistics: np.ndarray | None = field(default=None, repr=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# generator: {self.generator}\n")
        buf.write(f"# replications: {self.replications}; rng: {RNG_NAME}\n")
        buf.write("# config: " + ";".join(f"{k}={v}" for k, v in sorted(self.config.items())) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda", "period_months", "rejection_rate", "mean_h", "crit_granger"])
        for lam, r, h in zip(self.frequencies, self.rejection_rates, self.mean_h):
            w.writerow([f"{lam:.10g}", f"{2 * math.pi / lam:.10g}", f"{r:.10g}",
                        f"{h:.10g}", f"{self.critical_value:.10g}"])
        return buf.getvalue()


def _one(gen, config, frequencies, whiten, i):
    try:
        x, y = generate(gen, i)
        if whiten:
            x = prewhiten(x, config.arma_x, config.arma_max, config.arma_max).values
            y = prewhiten(y, config.arma_y, config.arma_max, config.arma_max).values
        return gc_curve(x, y, config, frequencies)
    except Exception as exc:  # noqa: BLE001 - reported with its seed
        raise McReplicationError(gen.seed, i, exc) from exc


def _chunk(args):
    gen, config, frequencies, whiten, idx = args
    return np.array([_one(gen, config, frequencies, whiten, i).h_granger for i in idx])


def mc_study(gen: TransferGenerator, config: SpectralConfig | None = None,
             replications: int = 1000, frequencies=None, whiten: bool = False,
             keep_statistics: bool = False, workers: int = 1) -> McSummary:
    """Rejection rates of the Granger-coherence test over ``replications`` draws."""
    if replications < 100:
        raise ValueError("mc_study needs at least 100 replications")
    config = config or SpectralConfig()
    lam = frequency_grid(config.grid_size) if frequencies is None else np.atleast_1d(frequencies)
    lam = _check_frequencies(lam)
    first = _one(gen, config, lam, whiten, 0)

    if workers > 1:
        chunks = np.array_split(np.arange(1, replications), workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk, [(gen, config, lam, whiten, c) for c in chunks]))
        h = np.vstack([first.h_granger[None, :]] + [p for p in parts if p.size])
    else:
        h = np.empty((replications, lam.size))
        h[0] = first.h_granger
        for i in range(1, replications):
            h[i] = _one(gen, config, lam, whiten, i).h_granger

    crit = first.crit_granger
    return McSummary(
        frequencies=lam,
        rejection_rates=(h > crit).sum(axis=0) / replications,
        mean_h=h.mean(axis=0),
        replications=replications,
        generator=gen.describe(),
        config={**config.to_dict(), "M": first.M, "whiten": whiten},
        critical_value=crit,
        n_prime=first.sizes.n_prime,
        statistics=h if keep_statistics else None,
    )
