from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from viewsynth.core.geometry.errors import ValidationError

ORTHONORMAL_TOL = 1e-6


def check_rotation(R: np.ndarray) -> np.ndarray:
    R = np.asarray(R, dtype=np.float64)
    if R.shape != (3, 3):
        raise ValidationError(f"rotation must be 3x3, got {R.shape}")
    if not np.all(np.isfinite(R)):
        raise ValidationError("rotation has non-finite entries")
    err = np.abs(R.T @ R - np.eye(3)).max()
    if err > ORTHONORMAL_TOL:
        raise ValidationError(f"rotation is not orthonormal (max |R^T R - I| = {err:.3g})")
    if abs(np.linalg.det(R) - 1.0) > ORTHONORMAL_TOL:
        raise ValidationError(f"rotation has determinant {np.linalg.det(R):.6g}, expected 1")
    return R


@dataclass(frozen=True, eq=False)
class RelativePose:
    """Rigid transform taking reference-camera coordinates to target-camera coordinates: ``R @ X + t``."""
    R: np.ndarray = field(default_factory=lambda: np.eye(3))
    t: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "R", check_rotation(self.R))
        t = np.asarray(self.t, dtype=np.float64).reshape(-1)
        if t.shape != (3,) or not np.all(np.isfinite(t)):
            raise ValidationError(f"translation must be 3 finite values, got {self.t!r}")
        object.__setattr__(self, "t", t)

    @classmethod
    def identity(cls) -> "RelativePose":
        return cls()

    @classmethod
    def from_flat(cls, values: Sequence[float]) -> "RelativePose":
        """Build from 12 numbers: ``R`` row-major, then ``t``."""
        values = np.asarray(list(values), dtype=np.float64)
        if values.shape != (12,):
            raise ValidationError(f"pose needs 12 values (R row-major, t), got {values.size}")
        return cls(R=values[:9].reshape(3, 3), t=values[9:])

    def flat(self) -> np.ndarray:
        return np.concatenate([self.R.reshape(-1), self.t])

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.R, np.eye(3)) and not np.any(self.t))

    def inverse(self) -> "RelativePose":
        return RelativePose(R=self.R.T, t=-self.R.T @ self.t)

    def apply(self, points: np.ndarray) -> np.ndarray:
        return points @ self.R.T + self.t
