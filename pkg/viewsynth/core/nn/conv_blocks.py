import numpy as np

from viewsynth.core.nn.layers import ChannelNorm, Conv2d, Linear
from viewsynth.core.nn.module import Module
from viewsynth.core.tensor import ShapeError, Tensor
from viewsynth.core.tensor import functional as F


class PatchEmbed(Module):
    """Overlapping patch embedding: 7x7 then 3x3 stride-2 convolutions, x4 downsampling."""

    def __init__(self, in_channels: int, out_channels: int, rng: np.random.Generator):
        self.conv1 = Conv2d(in_channels, out_channels, 7, rng, stride=2, pad_mode="replicate")
        self.conv2 = Conv2d(out_channels, out_channels, 3, rng, stride=2, pad_mode="replicate")
        self.norm = ChannelNorm(out_channels)

    def forward(self, x: Tensor) -> Tensor:
        if x.shape[-1] % 4 or x.shape[-2] % 4:
            raise ShapeError(f"patch embedding needs extents divisible by 4, got {x.shape[-2:]}")
        return self.norm(self.conv2(F.gelu(self.conv1(x))))


class MixFFN(Module):
    """``x + fc2(GELU(conv3x3(fc1(x))))`` on ``[B, C, H, W]`` maps; ``fc2`` starts at zero."""

    def __init__(self, channels: int, rng: np.random.Generator, hidden: int | None = None):
        hidden = hidden or channels
        self.fc1 = Conv2d(channels, hidden, 1, rng, init="trunc")
        self.conv = Conv2d(hidden, hidden, 3, rng)
        self.fc2 = Conv2d(hidden, channels, 1, rng, init="zeros")

    def branch(self, x: Tensor) -> Tensor:
        return self.fc2(F.gelu(self.conv(self.fc1(x))))

    def forward(self, x: Tensor) -> Tensor:
        return x + self.branch(x)


class TokenMixFFN(MixFFN):
    """Mix-FFN used as the feed-forward layer of a token MAB; returns the branch only."""

    def forward(self, tokens: Tensor, spatial: tuple[int, int] = None) -> Tensor:
        b, n, c = tokens.shape
        h, w = spatial
        fmap = tokens.transpose(0, 2, 1).reshape(b, c, h, w)
        return self.branch(fmap).reshape(b, c, n).transpose(0, 2, 1)


class ResNetBlock(Module):
    """Pre-activation residual block with an optional x2 bilinear upsample in front."""

    def __init__(self, in_channels: int, out_channels: int, rng: np.random.Generator, upsample: bool = False):
        self.upsample = upsample
        self.conv1 = Conv2d(in_channels, out_channels, 3, rng)
        self.conv2 = Conv2d(out_channels, out_channels, 3, rng, init="zeros")
        self.skip = Conv2d(in_channels, out_channels, 1, rng, init="trunc") if in_channels != out_channels else None

    def forward(self, x: Tensor) -> Tensor:
        if self.upsample:
            x = F.upsample2x(x)
        h = self.conv2(F.gelu(self.conv1(F.gelu(x))))
        skip = self.skip(x) if self.skip is not None else x
        return skip + h
