from dataclasses import dataclass
from typing import Iterable

import numpy as np

RATIO_RANGE = (1.0 / 8.0, 8.0)
HISTOGRAM_BINS = 32


@dataclass(frozen=True, eq=False)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def rows(self) -> list[tuple[float, float, int]]:
        return [(float(lo), float(hi), int(c)) for lo, hi, c in zip(self.edges[:-1], self.edges[1:], self.counts)]


def log_edges(lo: float = RATIO_RANGE[0], hi: float = RATIO_RANGE[1], bins: int = HISTOGRAM_BINS) -> np.ndarray:
    return np.geomspace(lo, hi, bins + 1)


def norm_ratio_histogram(maps: Iterable[np.ndarray], edges: np.ndarray | None = None) -> Histogram:
    """Pool every pixel of every ratio map; values outside the edges land in the outermost bins."""
    edges = log_edges() if edges is None else np.asarray(edges, dtype=np.float64)
    values = np.concatenate([np.asarray(m, dtype=np.float64).reshape(-1) for m in maps])
    index = np.clip(np.searchsorted(edges, values, side="right") - 1, 0, len(edges) - 2)
    return Histogram(edges=edges, counts=np.bincount(index, minlength=len(edges) - 1))
