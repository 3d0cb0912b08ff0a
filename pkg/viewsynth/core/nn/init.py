import numpy as np
from scipy.stats import truncnorm

PROJECTION_STD = 0.02


def trunc_normal(shape, rng: np.random.Generator, std: float = PROJECTION_STD) -> np.ndarray:
    """Normal samples truncated at two standard deviations."""
    return truncnorm.rvs(-2.0, 2.0, scale=std, size=shape, random_state=rng)


def kaiming_normal(shape, fan_in: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(shape) * np.sqrt(2.0 / fan_in)


def initialize(kind: str, shape, fan_in: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "zeros":
        return np.zeros(shape)
    if kind == "trunc":
        return trunc_normal(shape, rng)
    if kind == "kaiming":
        return kaiming_normal(shape, fan_in, rng)
    raise ValueError(f"unknown initializer {kind!r}")
