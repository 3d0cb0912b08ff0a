import numpy as np

from viewsynth.core.nn import Conv2d, Module
from viewsynth.core.tensor import Tensor, as_tensor
from viewsynth.core.tensor import functional as F

PERCEPTUAL_SEED = 1234


class PerceptualExtractor(Module):
    """Frozen, seeded random conv pyramid: three stride-2 3x3 layers with GELU."""

    def __init__(self, widths: tuple[int, ...] = (16, 32, 64), seed: int = PERCEPTUAL_SEED):
        rng = np.random.default_rng(seed)
        channels = (3, *widths)
        self.layers = [Conv2d(channels[i], channels[i + 1], 3, rng, stride=2) for i in range(len(widths))]
        self.freeze()

    def forward(self, image: Tensor) -> list[Tensor]:
        features, x = [], as_tensor(image)
        for layer in self.layers:
            x = F.gelu(layer(x))
            features.append(x)
        return features


def l1_loss(prediction, target) -> Tensor:
    return F.abs_(as_tensor(prediction) - target).mean()


def perceptual_loss(prediction, target, extractor: PerceptualExtractor) -> Tensor:
    total = None
    for a, b in zip(extractor(prediction), extractor(target)):
        term = F.abs_(a - b).mean()
        total = term if total is None else total + term
    return total


def l1_and_perceptual(prediction, target, extractor: PerceptualExtractor, lambda_c: float = 1.0) -> Tensor:
    return l1_loss(prediction, target) + perceptual_loss(prediction, target, extractor) * lambda_c
