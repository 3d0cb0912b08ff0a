from dataclasses import dataclass

import numpy as np

from viewsynth.core.geometry import CameraModel, RelativePose, unproject
from viewsynth.core.model.renderers import ExplicitRenderer
from viewsynth.core.service.base_service import BaseService
from viewsynth.core.tensor import ShapeError, no_grad
from viewsynth.core.utils.timing import TIMINGS, timed
from viewsynth.core.warp import upsample_mask

FORWARD_TIMER = "render.forward"


@dataclass(frozen=True, eq=False)
class RenderResult:
    target: np.ndarray
    warped: np.ndarray
    mask: np.ndarray
    seconds: float
    passes: int


class RenderService(BaseService):
    """Single-image novel view synthesis with a trained ViewNet."""

    @timed(FORWARD_TIMER)
    def forward(self, image: np.ndarray, depth: np.ndarray, pose: RelativePose):
        return self.run_model(image, depth, pose)

    def warp_image(self, image: np.ndarray, depth: np.ndarray, pose: RelativePose) -> np.ndarray:
        """The explicit branch's splat applied to the RGB input at full resolution."""
        camera = CameraModel.default(image.shape[-1])
        with no_grad():
            result = ExplicitRenderer.warp(image, camera, unproject(camera, depth), pose)
        return result.warped.numpy().astype(np.float64)

    def render(self, image: np.ndarray, pose: RelativePose, depth: np.ndarray | None = None) -> RenderResult:
        """``image[3, H, W]`` in [0, 1]; returns the [0, 1] target view, warped input and out-of-view mask."""
        size = self.model.config.image_size
        if image.shape != (3, size, size):
            raise ShapeError(f"model renders {size}x{size} RGB images, got {image.shape}")
        depth = self.depth_for(image, depth)
        TIMINGS.reset(FORWARD_TIMER)
        out = self.forward(image, depth, pose)
        return RenderResult(
            target=(out.image.numpy()[0].astype(np.float64) + 1.0) / 2.0,
            warped=self.warp_image(image, depth, pose),
            mask=upsample_mask(out.pair.mask[0]),
            seconds=TIMINGS.last[FORWARD_TIMER],
            passes=TIMINGS.calls[FORWARD_TIMER],
        )
