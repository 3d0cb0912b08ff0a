from dataclasses import dataclass

import numpy as np
from loguru import logger

from viewsynth.core.geometry import CameraModel, RelativePose, rodrigues
from viewsynth.core.metrics import categorize_split, SPLITS
from viewsynth.core.scenes.errors import GenerationError
from viewsynth.core.scenes.raster import rasterize
from viewsynth.core.scenes.scene import Scene
from viewsynth.core.warp import mask_ratio, out_of_view_from_depth

MAX_ATTEMPTS = 1000
ROTATION_RANGE = (np.deg2rad(10.0), np.deg2rad(60.0))
TRANSLATION_RANGE = (0.0, 3.0)


@dataclass(frozen=True, eq=False)
class SceneSample:
    reference: np.ndarray
    target: np.ndarray
    depth: np.ndarray
    pose: RelativePose
    ratio: float
    seed: int
    bin: str


def quantize(image: np.ndarray) -> np.ndarray:
    """Snap to the 8-bit levels the image files store."""
    return np.round(np.clip(image, 0.0, 1.0) * 255.0) / 255.0


def storable_depth(depth: np.ndarray) -> np.ndarray:
    """Depth as it survives a 32-bit float file."""
    return depth.astype(np.float32).astype(np.float64)


def random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def sample_motion(rng: np.random.Generator) -> RelativePose:
    angle = rng.uniform(*ROTATION_RANGE)
    R = rodrigues(random_unit(rng), angle)
    t = random_unit(rng) * rng.uniform(*TRANSLATION_RANGE)
    return RelativePose(R=R, t=t)


def render_view(scene: Scene, camera: CameraModel, pose: RelativePose | None = None) -> tuple[np.ndarray, np.ndarray]:
    image, depth = rasterize(scene, camera, pose)
    return quantize(image), storable_depth(depth)


def make_pair(scene: Scene, seed: int, target_bin: str, camera: CameraModel, identity: bool = False) -> SceneSample:
    """
    Render a reference view and rejection-sample a camera motion whose
    out-of-view ratio falls in ``target_bin``; ``identity`` skips the motion.
    """
    if target_bin not in SPLITS and not identity:
        raise GenerationError(f"unknown bin {target_bin!r}, expected one of {', '.join(SPLITS)}")
    reference, depth = render_view(scene, camera)
    if identity:
        return SceneSample(reference, reference.copy(), depth, RelativePose.identity(), 0.0, seed,
                           categorize_split(0.0))
    rng = np.random.default_rng([seed, 1])
    for attempt in range(1, MAX_ATTEMPTS + 1):
        pose = sample_motion(rng)
        ratio = mask_ratio(out_of_view_from_depth(camera, depth, pose))
        if categorize_split(ratio) == target_bin:
            target, _ = render_view(scene, camera, pose)
            logger.debug(f"seed {seed}: {target_bin} pair after {attempt} attempts (ratio {ratio:.3f})")
            return SceneSample(reference, target, depth, pose, ratio, seed, target_bin)
    raise GenerationError(f"seed {seed}: no motion landed in bin {target_bin!r} after {MAX_ATTEMPTS} attempts")
