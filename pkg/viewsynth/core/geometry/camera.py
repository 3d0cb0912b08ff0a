from dataclasses import dataclass
from functools import cached_property

import numpy as np

from viewsynth.core.geometry.errors import ValidationError


@dataclass(frozen=True)
class CameraModel:
    """
    Pinhole intrinsics. Pixel ``(x, y)`` has its centre at integer coordinates,
    so sub-sampling an image with stride ``s`` starting at pixel 0 matches the
    camera returned by ``scaled_by(1 / s)``.
    """
    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise ValidationError(f"focal lengths must be positive, got fx={self.fx}, fy={self.fy}")
        if self.width < 1 or self.height < 1:
            raise ValidationError(f"image extents must be >= 1, got {self.width}x{self.height}")

    @classmethod
    def default(cls, size: int) -> "CameraModel":
        """Square camera with a 90 degree field of view."""
        half = size / 2.0
        return cls(fx=half, fy=half, cx=half, cy=half, width=size, height=size)

    @cached_property
    def K(self) -> np.ndarray:
        return np.array([
            [self.fx, 0.0, self.cx],
            [0.0, self.fy, self.cy],
            [0.0, 0.0, 1.0],
        ])

    @cached_property
    def K_inv(self) -> np.ndarray:
        return np.array([
            [1.0 / self.fx, 0.0, -self.cx / self.fx],
            [0.0, 1.0 / self.fy, -self.cy / self.fy],
            [0.0, 0.0, 1.0],
        ])

    def scaled_by(self, factor: float) -> "CameraModel":
        if factor <= 0:
            raise ValidationError(f"scale factor must be positive, got {factor}")
        width, height = self.width * factor, self.height * factor
        if abs(width - round(width)) > 1e-9 or abs(height - round(height)) > 1e-9:
            raise ValidationError(
                f"scaling {self.width}x{self.height} by {factor} gives non-integral extents {width}x{height}"
            )
        return CameraModel(
            fx=self.fx * factor,
            fy=self.fy * factor,
            cx=self.cx * factor,
            cy=self.cy * factor,
            width=int(round(width)),
            height=int(round(height)),
        )

    def pixel_grid(self) -> np.ndarray:
        """Homogeneous pixel coordinates ``(x, y, 1)`` of shape ``[H, W, 3]``."""
        ys, xs = np.mgrid[0:self.height, 0:self.width].astype(np.float64)
        return np.stack([xs, ys, np.ones_like(xs)], axis=-1)

    def project(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Perspective projection of camera-space points ``[..., 3]`` to pixels ``[..., 2]`` and depth."""
        z = points[..., 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            x = self.fx * points[..., 0] / z + self.cx
            y = self.fy * points[..., 1] / z + self.cy
        return np.stack([x, y], axis=-1), z


def scale_intrinsics(camera: CameraModel, factor: float) -> CameraModel:
    return camera.scaled_by(factor)
