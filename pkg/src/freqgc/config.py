from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

LONG_TERM_SPLIT = 0.52


class Direction(str, enum.Enum):
    X_TO_Y = "x->y"
    Y_TO_X = "y->x"
    BOTH = "both"

    def pairs(self) -> list:
        if self is Direction.BOTH:
            return [Direction.X_TO_Y, Direction.Y_TO_X]
        return [self]


@dataclass(frozen=True)
class SpectralConfig:
    """Settings for a Granger-coherence run.

    ``M=None`` means ``round(sqrt(T))``.  ``arma_x``/``arma_y`` override the
    automatic ARMA order search for the respective series.
    """

    alpha: float = 0.05
    M: int | None = None
    grid_size: int = 256
    band_split: float = LONG_TERM_SPLIT
    band_fraction: float = 0.5
    arma_x: tuple | None = None
    arma_y: tuple | None = None
    arma_max: int = 4
    direction: Direction = Direction.X_TO_Y
    full_coherence: bool = True

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.grid_size < 1:
            raise ValueError("grid_size must be positive")
        if not 0 < self.band_split < math.pi:
            raise ValueError("band_split must lie in (0, pi)")
        if not 0 <= self.band_fraction < 1:
            raise ValueError("band_fraction must lie in [0, 1)")
        if self.M is not None and self.M < 2:
            raise ValueError("M must be at least 2")
        object.__setattr__(self, "direction", Direction(self.direction))

    def lag_length(self, T: int) -> int:
        M = self.M if self.M is not None else auto_lag_length(T)
        if not 2 <= M < T / 2:
            raise ValueError(f"M={M} outside [2, T/2) for T={T}")
        return M

    def to_dict(self) -> dict:
        d = asdict(self)
        d["direction"] = self.direction.value
        return d


def auto_lag_length(T: int) -> int:
    """``round(sqrt(T))`` with halves rounded up."""
    return int(math.floor(math.sqrt(T) + 0.5))
