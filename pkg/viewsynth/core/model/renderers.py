from dataclasses import dataclass
from typing import Sequence

import numpy as np

from viewsynth.core.geometry import CameraModel, CoordinateMaps, RelativePose, pose_vector, reproject
from viewsynth.core.model.config import ViewNetConfig
from viewsynth.core.nn import MAB, Module, PatchEmbed, PoseEncoder, ResNetBlock, TokenMixFFN
from viewsynth.core.tensor import Tensor, as_tensor
from viewsynth.core.tensor import functional as F
from viewsynth.core.warp import out_of_view_mask, splat_forward


class TransformerBlock(Module):

    def __init__(self, channels: int, rng: np.random.Generator, heads: int):
        self.mab = MAB(channels, rng, heads, ff=TokenMixFFN(channels, rng))

    def forward(self, tokens: Tensor, spatial: tuple[int, int]) -> Tensor:
        return self.mab(tokens, tokens, spatial=spatial)


class RendererBody(Module):
    """Patch embedding (x4 down), ``M`` transformer blocks, two upsampling ResNet blocks (x4 up)."""

    def __init__(self, config: ViewNetConfig, rng: np.random.Generator):
        c = config.channels
        self.embed = PatchEmbed(c, c, rng)
        self.blocks = [TransformerBlock(c, rng, config.heads) for _ in range(config.render_blocks)]
        self.up = [ResNetBlock(c, c, rng, upsample=True) for _ in range(2)]

    def forward(self, x: Tensor, offset: Tensor | None = None) -> Tensor:
        e = self.embed(x)
        b, c, h, w = e.shape
        if offset is not None:
            e = e + offset.reshape(b, c, 1, 1)
        tokens = e.reshape(b, c, h * w).transpose(0, 2, 1)
        for block in self.blocks:
            tokens = block(tokens, spatial=(h, w))
        out = tokens.transpose(0, 2, 1).reshape(b, c, h, w)
        for block in self.up:
            out = block(out)
        return out


@dataclass(frozen=True, eq=False)
class ExplicitOutput:
    features: Tensor
    warped: Tensor
    mask: np.ndarray


class ExplicitRenderer(Module):
    """Splats ``f_N`` to the target view along the depth-and-pose flow, then refines it."""

    def __init__(self, config: ViewNetConfig, rng: np.random.Generator):
        self.body = RendererBody(config, rng)

    @staticmethod
    def warp(features: Tensor, camera: CameraModel, maps: CoordinateMaps, pose: RelativePose):
        reproj = reproject(camera, maps, pose)
        return splat_forward(features, reproj.flow, -reproj.depth, valid=reproj.valid)

    def forward(self, f: Tensor, camera: CameraModel, maps: Sequence[CoordinateMaps],
                poses: Sequence[RelativePose]) -> ExplicitOutput:
        warped, masks = [], []
        for b, (m, pose) in enumerate(zip(maps, poses)):
            result = self.warp(f[b], camera, m, pose)
            warped.append(result.warped)
            masks.append(out_of_view_mask(result.weight))
        stacked = F.stack(warped, axis=0)
        return ExplicitOutput(features=self.body(stacked), warped=stacked, mask=np.stack(masks))


class ImplicitRenderer(Module):
    """Adds the pose embedding to every patch token; no warping."""

    def __init__(self, config: ViewNetConfig, rng: np.random.Generator):
        self.pose_encoder = PoseEncoder(config.channels, rng)
        self.body = RendererBody(config, rng)

    def forward(self, f: Tensor, poses: Sequence[RelativePose]) -> Tensor:
        params = as_tensor(np.stack([pose_vector(p) for p in poses]))
        return self.body(f, offset=self.pose_encoder(params))
