import numpy as np

from viewsynth.core.model.config import ViewNetConfig
from viewsynth.core.nn import Conv2d, Module, ResNetBlock
from viewsynth.core.tensor import Tensor, as_tensor
from viewsynth.core.tensor import functional as F


class Decoder(Module):
    """``h_e (+) h_i`` (optionally ``(+) O``) through four ResNet blocks, two of them x2 upsampling, to RGB in [-1, 1]."""

    def __init__(self, config: ViewNetConfig, rng: np.random.Generator):
        c = config.channels
        self.mask_as_feature = config.mask_as_feature
        in_channels = 2 * c + (1 if self.mask_as_feature else 0)
        self.blocks = [
            ResNetBlock(in_channels, c, rng),
            ResNetBlock(c, c // 2, rng, upsample=True),
            ResNetBlock(c // 2, c // 4, rng, upsample=True),
            ResNetBlock(c // 4, c // 4, rng),
        ]
        self.head = Conv2d(c // 4, 3, 3, rng, init="trunc")

    def forward(self, h_e: Tensor, h_i: Tensor, mask: np.ndarray | None = None) -> Tensor:
        parts = [h_e, h_i]
        if self.mask_as_feature:
            parts.append(as_tensor(mask[:, None]))
        x = F.concat(parts, axis=1)
        for block in self.blocks:
            x = block(x)
        return F.tanh(self.head(F.gelu(x)))
