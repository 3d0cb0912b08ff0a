import numpy as np

from viewsynth.core.geometry import CameraModel, RelativePose
from viewsynth.core.scenes.scene import BACKGROUND_DEPTH, Scene

DEGENERATE = 1e-12
NEAR = 1e-6


def rasterize(scene: Scene, camera: CameraModel, pose: RelativePose | None = None) -> tuple[np.ndarray, np.ndarray]:
    """
    Render ``scene`` through ``camera`` placed by ``pose`` (reference to camera coordinates).

    Every pixel ray is intersected with every quad in closed form; the nearest hit
    wins. Returns an ``[H, W, 3]`` image in [0, 1] and ``[H, W]`` z-depth; empty
    pixels get the background colour at ``BACKGROUND_DEPTH``.
    """
    pose = pose or RelativePose.identity()
    rays = camera.pixel_grid() @ camera.K_inv.T
    h, w = rays.shape[:2]
    image = np.broadcast_to(scene.background, (h, w, 3)).copy()
    depth = np.full((h, w), BACKGROUND_DEPTH)
    for quad in scene.quads:
        o = pose.R @ quad.origin + pose.t
        u = pose.R @ quad.edge_u
        v = pose.R @ quad.edge_v
        normal = np.cross(u, v)
        det = rays @ normal
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = np.dot(o, normal) / det
            a = -(rays @ np.cross(o, v)) / det
            b = (rays @ np.cross(o, u)) / det
        hit = (np.abs(det) > DEGENERATE) & (lam > NEAR) & (a >= 0) & (a <= 1) & (b >= 0) & (b <= 1)
        closer = hit & (lam < depth)
        if not closer.any():
            continue
        depth[closer] = lam[closer]
        image[closer] = quad.texture.sample(a[closer], b[closer])
    return np.clip(image, 0.0, 1.0), depth
