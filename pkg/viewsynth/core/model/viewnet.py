from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np

from viewsynth.core.geometry import CameraModel, CoordinateMaps, RelativePose, unproject
from viewsynth.core.model.config import ViewNetConfig
from viewsynth.core.model.decoder import Decoder
from viewsynth.core.model.encoder import Encoder
from viewsynth.core.model.model import Model
from viewsynth.core.model.renderers import ExplicitRenderer, ImplicitRenderer
from viewsynth.core.nn import Module
from viewsynth.core.tensor import Tensor, as_tensor, no_grad
from viewsynth.core.warp import QUARTER, quarter_depth

NORM_EPS = 1e-8


@dataclass(frozen=True, eq=False)
class RenderedPair:
    explicit: Tensor
    implicit: Tensor
    mask: np.ndarray


@dataclass(frozen=True, eq=False)
class ViewOutput:
    image: Tensor
    pair: RenderedPair
    warped: Tensor


class ViewNet(Module, Model):
    """Encoder, explicit and implicit renderers, decoder."""

    name = "viewnet"
    config_class = ViewNetConfig

    def __init__(self, config: ViewNetConfig, seed: int = 0):
        rng = np.random.default_rng(seed)
        self.config = config
        self.camera = CameraModel.default(config.image_size)
        self.quarter_camera = self.camera.scaled_by(1.0 / QUARTER)
        self.encoder = Encoder(config, rng)
        self.explicit = ExplicitRenderer(config, rng)
        self.implicit = ImplicitRenderer(config, rng)
        self.decoder = Decoder(config, rng)

    def coordinate_maps(self, depth: np.ndarray) -> list[CoordinateMaps]:
        return [unproject(self.quarter_camera, quarter_depth(d)) for d in depth]

    def encode(self, image: Tensor, maps: Sequence[CoordinateMaps]) -> Tensor:
        x_img = np.stack([m.x_img for m in maps])
        x_w = np.stack([m.x_w for m in maps])
        return self.encoder(image, x_img, x_w)

    def render(self, f: Tensor, maps: Sequence[CoordinateMaps], poses: Sequence[RelativePose]):
        explicit = self.explicit(f, self.quarter_camera, maps, poses)
        implicit = self.implicit(f, poses)
        return RenderedPair(explicit=explicit.features, implicit=implicit, mask=explicit.mask), explicit.warped

    def decode(self, pair: RenderedPair) -> Tensor:
        return self.decoder(pair.explicit, pair.implicit, pair.mask)

    def forward(self, image, depth: np.ndarray, poses: Sequence[RelativePose]) -> ViewOutput:
        """
        ``image[B, 3, H, W]`` in [-1, 1], reference depth ``[B, H, W]`` in metres and one
        pose per sample; returns the synthesized target view in [-1, 1] in a single pass.
        """
        maps = self.coordinate_maps(np.asarray(depth))
        f = self.encode(as_tensor(image), maps)
        pair, warped = self.render(f, maps, poses)
        return ViewOutput(image=self.decode(pair), pair=pair, warped=warped)

    def predict(self, model_input: Dict) -> np.ndarray:
        """``{"image": [3, H, W] in [0, 1], "depth": [H, W], "pose": RelativePose}`` to a [0, 1] image."""
        image = self.signed_batch(model_input["image"])
        with no_grad():
            out = self.forward(image, np.asarray(model_input["depth"])[None], [model_input["pose"]])
        return (out.image.numpy()[0] + 1.0) / 2.0


def norm_ratio_map(explicit, implicit, eps: float = NORM_EPS) -> np.ndarray:
    """Per-pixel ``|h_e(p)| / |h_i(p)|`` over the channel axis of ``[..., C, H, W]`` maps."""
    h_e = explicit.numpy() if isinstance(explicit, Tensor) else np.asarray(explicit)
    h_i = implicit.numpy() if isinstance(implicit, Tensor) else np.asarray(implicit)
    num = np.sqrt(np.sum(h_e.astype(np.float64) ** 2, axis=-3))
    den = np.sqrt(np.sum(h_i.astype(np.float64) ** 2, axis=-3))
    return num / np.maximum(den, eps)
