import numpy as np

from viewsynth.core.nn.init import initialize
from viewsynth.core.nn.module import Module, Parameter
from viewsynth.core.tensor import ShapeError, Tensor
from viewsynth.core.tensor import functional as F


class Linear(Module):
    """``x @ weight + bias`` over the last axis; ``weight`` is stored as ``[in, out]``."""

    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator,
                 init: str = "trunc", bias: bool = True):
        self.weight = Parameter(initialize(init, (in_features, out_features), in_features, rng))
        self.bias = Parameter(np.zeros(out_features)) if bias else None

    def forward(self, x: Tensor) -> Tensor:
        if x.shape[-1] != self.weight.shape[0]:
            raise ShapeError(f"linear expects {self.weight.shape[0]} input channels, got {x.shape}")
        out = x @ self.weight
        return out + self.bias if self.bias is not None else out


class Conv2d(Module):

    def __init__(self, in_channels: int, out_channels: int, kernel_size: int, rng: np.random.Generator,
                 stride: int = 1, padding: int | None = None, pad_mode: str = "zeros",
                 init: str = "kaiming", bias: bool = True):
        fan_in = in_channels * kernel_size * kernel_size
        self.weight = Parameter(initialize(init, (out_channels, in_channels, kernel_size, kernel_size), fan_in, rng))
        self.bias = Parameter(np.zeros(out_channels)) if bias else None
        self.stride = stride
        self.padding = kernel_size // 2 if padding is None else padding
        self.pad_mode = pad_mode

    def forward(self, x: Tensor) -> Tensor:
        if self.pad_mode == "zeros":
            return F.conv2d(x, self.weight, self.bias, stride=self.stride, padding=self.padding)
        x = F.pad2d(x, self.padding, mode=self.pad_mode)
        return F.conv2d(x, self.weight, self.bias, stride=self.stride)


class LayerNorm(Module):

    def __init__(self, channels: int, eps: float = 1e-5):
        self.gamma = Parameter(np.ones(channels))
        self.beta = Parameter(np.zeros(channels))
        self.eps = eps

    def forward(self, x: Tensor) -> Tensor:
        return F.layer_norm(x, self.gamma, self.beta, eps=self.eps)


class ChannelNorm(LayerNorm):
    """Layer norm over the channel axis of ``[B, C, H, W]`` maps."""

    def forward(self, x: Tensor) -> Tensor:
        return super().forward(x.transpose(0, 2, 3, 1)).transpose(0, 3, 1, 2)


class Mlp(Module):

    def __init__(self, in_features: int, hidden: int, out_features: int, rng: np.random.Generator,
                 zero_last: bool = False):
        self.fc1 = Linear(in_features, hidden, rng)
        self.fc2 = Linear(hidden, out_features, rng, init="zeros" if zero_last else "trunc")

    def forward(self, x: Tensor) -> Tensor:
        return self.fc2(F.gelu(self.fc1(x)))
