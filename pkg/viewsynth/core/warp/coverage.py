import numpy as np

from viewsynth.core.geometry import CameraModel, RelativePose, reproject, unproject
from viewsynth.core.warp.splat import out_of_view_mask, splat_entries, splat_weight

QUARTER = 4


def quarter_depth(depth: np.ndarray) -> np.ndarray:
    """Depth sampled at every fourth pixel, aligned with ``camera.scaled_by(1/4)``."""
    return np.asarray(depth)[::QUARTER, ::QUARTER]


def out_of_view_from_depth(camera: CameraModel, depth: np.ndarray, pose: RelativePose) -> np.ndarray:
    """Quarter-resolution out-of-view mask for a full-resolution depth map and relative pose."""
    small = camera.scaled_by(1.0 / QUARTER)
    maps = unproject(small, quarter_depth(depth))
    reproj = reproject(small, maps, pose)
    return out_of_view_mask(splat_weight(splat_entries(reproj.flow, reproj.valid)).reshape(maps.shape))


def upsample_mask(mask: np.ndarray, factor: int = QUARTER) -> np.ndarray:
    """Nearest-neighbour enlargement of a low-resolution mask."""
    return np.repeat(np.repeat(mask, factor, axis=0), factor, axis=1)
