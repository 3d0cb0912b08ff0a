from dataclasses import dataclass

import numpy as np

from viewsynth.core.geometry.camera import CameraModel
from viewsynth.core.geometry.errors import DomainError, ValidationError
from viewsynth.core.geometry.pose import RelativePose

MIN_TARGET_DEPTH = 1e-6


@dataclass(frozen=True, eq=False)
class CoordinateMaps:
    """Per-pixel normalized image coordinates, world coordinates and depth (``x_w = depth * x_img``)."""
    x_img: np.ndarray
    x_w: np.ndarray
    depth: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.depth.shape


@dataclass(frozen=True, eq=False)
class Reprojection:
    flow: np.ndarray
    depth: np.ndarray
    valid: np.ndarray


def unproject(camera: CameraModel, depth: np.ndarray) -> CoordinateMaps:
    depth = np.asarray(depth, dtype=np.float64)
    if depth.shape != (camera.height, camera.width):
        raise ValidationError(
            f"depth map {depth.shape} does not match camera extents {(camera.height, camera.width)}"
        )
    if not np.all(np.isfinite(depth)) or np.any(depth <= 0):
        raise DomainError(f"depth must be finite and positive (min {np.nanmin(depth):.4g})")
    x_img = camera.pixel_grid() @ camera.K_inv.T
    x_img[..., 2] = 1.0
    return CoordinateMaps(x_img=x_img, x_w=depth[..., None] * x_img, depth=depth)


def reproject(camera: CameraModel, maps: CoordinateMaps, pose: RelativePose) -> Reprojection:
    """
    Flow from every source pixel to its landing spot in the target view.

    Pixels landing at target depth <= 1e-6 are flagged invalid and get zero flow.
    """
    if maps.shape != (camera.height, camera.width):
        raise ValidationError(f"coordinate maps {maps.shape} do not match camera {(camera.height, camera.width)}")
    if pose.is_identity:
        return Reprojection(
            flow=np.zeros(maps.shape + (2,)),
            depth=maps.depth.copy(),
            valid=np.ones(maps.shape, dtype=bool),
        )
    points = pose.apply(maps.x_w)
    landed, z = camera.project(points)
    valid = z > MIN_TARGET_DEPTH
    flow = np.where(valid[..., None], landed - camera.pixel_grid()[..., :2], 0.0)
    return Reprojection(flow=flow, depth=z, valid=valid)
