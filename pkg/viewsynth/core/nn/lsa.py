import numpy as np

from viewsynth.core.nn.layers import Linear
from viewsynth.core.nn.module import Module
from viewsynth.core.nn.positional import POS_DIM, PositionalEncoder, RelativePositionTable, window_offsets
from viewsynth.core.tensor import ShapeError, Tensor, as_tensor
from viewsynth.core.tensor import functional as F

COSINE_EPS = 1e-8


class LocalSetAttention(Module):
    """
    Local set attention over an ``r x r`` window (centre excluded).

    ``l = f (+) enc_abs(X_w - X_img)``; the correlation between ``p`` and a neighbour
    ``q`` is the cosine of ``psi(l(p))`` with the learned encoding of ``p - q``, and
    the output at ``p`` sums ``corr * phi(l(q))`` over in-image neighbours.
    """

    def __init__(self, channels: int, rng: np.random.Generator, window: int = 5, pos_dim: int = POS_DIM):
        self.window = window
        self.abs_encoder = PositionalEncoder(rng, out_features=pos_dim)
        self.psi = Linear(channels + pos_dim, pos_dim, rng)
        self.phi = Linear(channels + pos_dim, channels, rng)
        self.relative = RelativePositionTable(window, rng, dim=pos_dim)

    def lifted(self, f: Tensor, x_img: np.ndarray, x_w: np.ndarray) -> Tensor:
        """``l`` as channels-last tokens ``[B, H, W, C + pos_dim]``."""
        b, c, h, w = f.shape
        if x_img.shape != (b, h, w, 3) or x_w.shape != (b, h, w, 3):
            raise ShapeError(f"coordinate maps {x_img.shape}/{x_w.shape} do not match features {f.shape}")
        encoded = self.abs_encoder(as_tensor(x_w - x_img))
        return F.concat([f.transpose(0, 2, 3, 1), encoded], axis=-1)

    def forward(self, f: Tensor, x_img: np.ndarray, x_w: np.ndarray) -> Tensor:
        b, c, h, w = f.shape
        radius = self.window // 2
        lifted = self.lifted(f, x_img, x_w)
        query = self.psi(lifted)
        values = F.pad2d(self.phi(lifted).transpose(0, 3, 1, 2), radius)
        out = None
        for dy, dx in window_offsets(self.window):
            corr = F.cosine_similarity(query, self.relative(-dy, -dx), eps=COSINE_EPS)
            shifted = values[:, :, radius + dy:radius + dy + h, radius + dx:radius + dx + w]
            term = corr.reshape(b, 1, h, w) * shifted
            out = term if out is None else out + term
        return out
