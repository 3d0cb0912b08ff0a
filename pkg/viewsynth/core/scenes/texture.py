from dataclasses import dataclass

import numpy as np

TEXTURE_KINDS = ("checker", "gradient", "noise")


@dataclass(frozen=True, eq=False)
class Texture:
    """Procedural texture over quad-local coordinates ``(a, b)`` in [0, 1]^2."""
    kind: str
    color_a: np.ndarray
    color_b: np.ndarray
    frequency: int
    angle: float
    lattice: np.ndarray

    @classmethod
    def random(cls, rng: np.random.Generator) -> "Texture":
        kind = TEXTURE_KINDS[int(rng.integers(len(TEXTURE_KINDS)))]
        frequency = int(rng.integers(2, 7))
        return cls(
            kind=kind,
            color_a=rng.uniform(0.05, 0.95, 3),
            color_b=rng.uniform(0.05, 0.95, 3),
            frequency=frequency,
            angle=float(rng.uniform(0.0, 2.0 * np.pi)),
            lattice=rng.uniform(0.0, 1.0, (2, frequency + 1, frequency + 1)),
        )

    def mix(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Blend factor in [0, 1] at each ``(a, b)``."""
        if self.kind == "checker":
            return ((np.floor(a * self.frequency) + np.floor(b * self.frequency)) % 2).astype(np.float64)
        if self.kind == "gradient":
            s = (a * np.cos(self.angle) + b * np.sin(self.angle)) * self.frequency
            return 0.5 + 0.5 * np.sin(s * np.pi)
        return 0.65 * self._value_noise(a, b, 0) + 0.35 * self._value_noise((2 * a) % 1.0, (2 * b) % 1.0, 1)

    def _value_noise(self, a: np.ndarray, b: np.ndarray, octave: int) -> np.ndarray:
        grid = self.lattice[octave]
        n = self.frequency
        x, y = np.clip(a, 0, 1) * n, np.clip(b, 0, 1) * n
        x0, y0 = np.minimum(np.floor(x).astype(int), n - 1), np.minimum(np.floor(y).astype(int), n - 1)
        fx, fy = x - x0, y - y0
        sx, sy = fx * fx * (3 - 2 * fx), fy * fy * (3 - 2 * fy)
        top = grid[y0, x0] * (1 - sx) + grid[y0, x0 + 1] * sx
        bottom = grid[y0 + 1, x0] * (1 - sx) + grid[y0 + 1, x0 + 1] * sx
        return top * (1 - sy) + bottom * sy

    def sample(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        t = self.mix(a, b)[..., None]
        return self.color_a * (1 - t) + self.color_b * t
