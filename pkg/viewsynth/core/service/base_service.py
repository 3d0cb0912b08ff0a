import numpy as np

from viewsynth.core.geometry import RelativePose
from viewsynth.core.model import DepthNet, ViewNet, ViewOutput
from viewsynth.core.tensor import no_grad


class BaseService:
    """Inference with a trained ViewNet; depth comes from the caller or a frozen DepthNet."""

    def __init__(self, model: ViewNet, depth_model: DepthNet | None = None):
        self.model = model
        self.depth_model = depth_model

    def depth_for(self, image: np.ndarray, depth: np.ndarray | None) -> np.ndarray:
        if depth is not None:
            return depth
        if self.depth_model is None:
            raise ValueError("rendering needs a depth map or a DepthNet checkpoint")
        return self.depth_model.predict({"image": image})

    def run_model(self, image: np.ndarray, depth: np.ndarray, pose: RelativePose) -> ViewOutput:
        """One batch-of-one forward pass on a ``[3, H, W]`` image in [0, 1]."""
        with no_grad():
            return self.model(self.model.signed_batch(image), np.asarray(depth)[None], [pose])
