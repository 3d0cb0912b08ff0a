import numpy as np

from viewsynth.core.nn.init import trunc_normal
from viewsynth.core.nn.layers import Mlp
from viewsynth.core.nn.module import Module, Parameter
from viewsynth.core.tensor import Tensor

POS_DIM = 32


class PositionalEncoder(Mlp):
    """Two-layer MLP embedding coordinates (3 by default) into ``POS_DIM`` channels."""

    def __init__(self, rng: np.random.Generator, in_features: int = 3, out_features: int = POS_DIM):
        super().__init__(in_features, out_features, out_features, rng)


class PoseEncoder(Mlp):

    def __init__(self, channels: int, rng: np.random.Generator):
        super().__init__(7, channels, channels, rng)


def window_offsets(window: int) -> list[tuple[int, int]]:
    """Row-major ``(dy, dx)`` offsets of a ``window x window`` neighbourhood, centre excluded."""
    radius = window // 2
    return [
        (dy, dx)
        for dy in range(-radius, radius + 1)
        for dx in range(-radius, radius + 1)
        if (dy, dx) != (0, 0)
    ]


class RelativePositionTable(Module):
    """
    Learned encodings of integer pixel offsets inside a local window.

    ``X_img(p) - X_img(q)`` only depends on ``p - q``, so one row per offset
    (``window**2 - 1`` rows) replaces a per-pair encoding.
    """

    def __init__(self, window: int, rng: np.random.Generator, dim: int = POS_DIM):
        if window < 3 or window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {window}")
        self.window = window
        self.table = Parameter(trunc_normal((window * window - 1, dim), rng))

    def index(self, dy: int, dx: int) -> int:
        """Row of the offset ``p - q = (dy, dx)``."""
        radius = self.window // 2
        if max(abs(dy), abs(dx)) > radius or (dy, dx) == (0, 0):
            raise KeyError(f"offset {(dy, dx)} is not inside the window")
        slot = (dy + radius) * self.window + (dx + radius)
        return slot - 1 if slot > self.window * self.window // 2 else slot

    def forward(self, dy: int, dx: int) -> Tensor:
        return self.table[self.index(dy, dx)]
