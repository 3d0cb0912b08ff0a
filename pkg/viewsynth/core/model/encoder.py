import numpy as np

from viewsynth.core.model.config import ViewNetConfig
from viewsynth.core.nn import ISAB, Linear, LocalSetAttention, MixFFN, Module, PatchEmbed, PositionalEncoder
from viewsynth.core.tensor import ShapeError, Tensor, as_tensor
from viewsynth.core.tensor import functional as F


class GLSABlock(Module):
    """``X = f + g_global + g_local`` followed by a Mix-FFN; either attention term can be disabled."""

    def __init__(self, config: ViewNetConfig, rng: np.random.Generator):
        c, d = config.channels, config.pos_dim
        self.use_global = config.use_global
        self.use_local = config.use_local
        if self.use_global:
            self.global_encoder = PositionalEncoder(rng, out_features=d)
            self.isab = ISAB(c + d, rng, inducing=config.inducing, heads=config.heads)
            self.project = Linear(c + d, c, rng)
        if self.use_local:
            self.lsa = LocalSetAttention(c, rng, window=config.window, pos_dim=d)
        self.ffn = MixFFN(c, rng)

    def global_term(self, f: Tensor, x_w: np.ndarray) -> Tensor:
        b, c, h, w = f.shape
        tokens = f.reshape(b, c, h * w).transpose(0, 2, 1)
        encoded = self.global_encoder(as_tensor(x_w.reshape(b, h * w, 3)))
        mixed = self.project(self.isab(F.concat([tokens, encoded], axis=-1)))
        return mixed.transpose(0, 2, 1).reshape(b, c, h, w)

    def forward(self, f: Tensor, x_img: np.ndarray, x_w: np.ndarray) -> Tensor:
        x = f
        if self.use_global:
            x = x + self.global_term(f, x_w)
        if self.use_local:
            x = x + self.lsa(f, x_img, x_w)
        return self.ffn(x)


class Encoder(Module):

    def __init__(self, config: ViewNetConfig, rng: np.random.Generator):
        self.embed = PatchEmbed(3, config.channels, rng)
        self.blocks = [GLSABlock(config, rng) for _ in range(config.blocks)]

    def forward(self, image: Tensor, x_img: np.ndarray, x_w: np.ndarray) -> Tensor:
        f = self.embed(image)
        b, _, h, w = f.shape
        if x_img.shape != (b, h, w, 3):
            raise ShapeError(f"coordinate maps {x_img.shape} do not align with embedded features {f.shape}")
        for block in self.blocks:
            f = block(f, x_img, x_w)
        return f
