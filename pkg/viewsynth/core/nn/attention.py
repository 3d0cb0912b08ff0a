import numpy as np

from viewsynth.core.nn.layers import LayerNorm, Linear, Mlp
from viewsynth.core.nn.module import Module, Parameter
from viewsynth.core.tensor import ShapeError, Tensor
from viewsynth.core.tensor import functional as F

HEADS = 4


class MultiHeadAttention(Module):

    def __init__(self, channels: int, rng: np.random.Generator, heads: int = HEADS):
        if channels % heads:
            raise ShapeError(f"{channels} channels do not split into {heads} heads")
        self.heads = heads
        self.q = Linear(channels, channels, rng)
        self.k = Linear(channels, channels, rng)
        self.v = Linear(channels, channels, rng)
        self.out = Linear(channels, channels, rng)

    def _split(self, x: Tensor) -> Tensor:
        b, n, c = x.shape
        return x.reshape(b, n, self.heads, c // self.heads).transpose(0, 2, 1, 3)

    def forward(self, x: Tensor, y: Tensor) -> Tensor:
        q, k, v = self._split(self.q(x)), self._split(self.k(y)), self._split(self.v(y))
        scores = (q @ k.transpose(0, 1, 3, 2)) / np.sqrt(q.shape[-1])
        mixed = F.softmax(scores, axis=-1) @ v
        b, _, n, d = mixed.shape
        return self.out(mixed.transpose(0, 2, 1, 3).reshape(b, n, self.heads * d))


class MAB(Module):
    """
    Multihead attention block: ``H = LN(X + Attn(X, Y, Y))``, ``out = LN(H + ff(H))``.

    ``ff`` defaults to a two-layer GELU MLP with hidden width ``2 * channels``;
    extra keyword arguments of ``forward`` are handed to it.
    """

    def __init__(self, channels: int, rng: np.random.Generator, heads: int = HEADS, ff: Module | None = None):
        self.channels = channels
        self.attn = MultiHeadAttention(channels, rng, heads)
        self.norm1 = LayerNorm(channels)
        self.ff = ff if ff is not None else Mlp(channels, 2 * channels, channels, rng)
        self.norm2 = LayerNorm(channels)

    def forward(self, x: Tensor, y: Tensor, **ff_kwargs) -> Tensor:
        if x.shape[-1] != self.channels or y.shape[-1] != self.channels:
            raise ShapeError(f"MAB expects {self.channels} channels, got {x.shape} and {y.shape}")
        h = self.norm1(x + self.attn(x, y))
        return self.norm2(h + self.ff(h, **ff_kwargs))


class ISAB(Module):
    """Induced set attention through ``m`` learned points: ``MAB(X, MAB(I, X))``."""

    def __init__(self, channels: int, rng: np.random.Generator, inducing: int = 32, heads: int = HEADS):
        self.inducing = Parameter(rng.standard_normal((1, inducing, channels)) / np.sqrt(channels))
        self.gather = MAB(channels, rng, heads)
        self.scatter = MAB(channels, rng, heads)

    def forward(self, x: Tensor) -> Tensor:
        g = self.gather(self.inducing, x)
        return self.scatter(x, g)
