from typing import Dict

import numpy as np

from viewsynth.core.model.config import DepthNetConfig
from viewsynth.core.model.model import Model
from viewsynth.core.nn import Conv2d, Module
from viewsynth.core.tensor import ShapeError, Tensor, as_tensor, no_grad
from viewsynth.core.tensor import functional as F


class DepthNet(Module, Model):
    """Small conv encoder-decoder with skip connections predicting depth through a sigmoid disparity."""

    name = "depthnet"
    config_class = DepthNetConfig

    def __init__(self, config: DepthNetConfig, seed: int = 0):
        rng = np.random.default_rng(seed)
        widths = config.widths
        self.config = config
        self.stem = Conv2d(3, widths[0], 3, rng)
        self.down = [Conv2d(widths[i - 1], widths[i], 3, rng, stride=2) for i in range(1, len(widths))]
        self.up = [Conv2d(widths[i] + widths[i - 1], widths[i - 1], 3, rng) for i in range(len(widths) - 1, 0, -1)]
        self.head = Conv2d(widths[0], 1, 3, rng, init="trunc")

    def disparity(self, image: Tensor) -> Tensor:
        image = as_tensor(image)
        factor = 2 ** len(self.down)
        if image.shape[-1] % factor or image.shape[-2] % factor:
            raise ShapeError(f"DepthNet needs extents divisible by {factor}, got {image.shape[-2:]}")
        x = F.gelu(self.stem(image))
        skips = [x]
        for conv in self.down:
            x = F.gelu(conv(x))
            skips.append(x)
        skips.pop()
        for conv in self.up:
            x = F.gelu(conv(F.concat([F.upsample2x(x), skips.pop()], axis=1)))
        return F.sigmoid(self.head(x))[:, 0]

    def forward(self, image: Tensor) -> Tensor:
        """``image[B, 3, H, W]`` in [-1, 1] to depth ``[B, H, W]`` strictly inside ``[min_depth, max_depth]``."""
        lo, hi = 1.0 / self.config.max_depth, 1.0 / self.config.min_depth
        return 1.0 / (self.disparity(image) * (hi - lo) + lo)

    def predict(self, model_input: Dict) -> np.ndarray:
        image = self.signed_batch(model_input["image"])
        with no_grad():
            return self.forward(image).numpy()[0].astype(np.float64)
