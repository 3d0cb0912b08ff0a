from dataclasses import dataclass

import numpy as np

from viewsynth.core.nn import Conv2d, Module
from viewsynth.core.tensor import Tensor, as_tensor
from viewsynth.core.tensor import functional as F


class PatchDiscriminator(Module):
    """Four stride-2 convolutions producing a map of real/fake scores."""

    def __init__(self, rng: np.random.Generator, widths: tuple[int, ...] = (32, 64, 128)):
        channels = (3, *widths)
        self.convs = [Conv2d(channels[i], channels[i + 1], 3, rng, stride=2) for i in range(len(widths))]
        self.score = Conv2d(channels[-1], 1, 3, rng, stride=2, init="trunc")

    def forward(self, image: Tensor) -> Tensor:
        x = as_tensor(image)
        for conv in self.convs:
            x = F.gelu(conv(x))
        return self.score(x)


def random_crop_box(size: tuple[int, int], rng: np.random.Generator) -> tuple[int, int, int, int]:
    """Top-left corner and extents of a half-size crop."""
    h, w = size
    ch, cw = h // 2, w // 2
    return int(rng.integers(0, h - ch + 1)), int(rng.integers(0, w - cw + 1)), ch, cw


class DiscriminatorPair(Module):
    """Global discriminator on full images, local one on a random half-extent crop."""

    def __init__(self, seed: int = 0):
        rng = np.random.default_rng(seed)
        self.global_disc = PatchDiscriminator(rng)
        self.local_disc = PatchDiscriminator(rng)

    def forward(self, image: Tensor, box: tuple[int, int, int, int]) -> list[Tensor]:
        image = as_tensor(image)
        y, x, h, w = box
        return [self.global_disc(image), self.local_disc(image[:, :, y:y + h, x:x + w])]


@dataclass(frozen=True, eq=False)
class AdversarialLosses:
    generator: Tensor
    discriminator: Tensor


def hinge_d_loss(real_scores: Tensor, fake_scores: Tensor) -> Tensor:
    return F.relu(1.0 - real_scores).mean() + F.relu(1.0 + fake_scores).mean()


def hinge_g_loss(fake_scores: Tensor) -> Tensor:
    return -fake_scores.mean()


def adversarial_losses(fake, real, discriminators: DiscriminatorPair, rng: np.random.Generator) -> AdversarialLosses:
    """
    Hinge losses summed over the global and local discriminators.

    The discriminator loss sees a detached fake, so it never reaches the generator.
    """
    fake = as_tensor(fake)
    box = random_crop_box(fake.shape[-2:], rng)
    real_scores = discriminators(real, box)
    fake_scores = discriminators(fake.detach(), box)
    gen_scores = discriminators(fake, box)
    d_loss = g_loss = None
    for r, f, g in zip(real_scores, fake_scores, gen_scores):
        d_term, g_term = hinge_d_loss(r, f), hinge_g_loss(g)
        d_loss = d_term if d_loss is None else d_loss + d_term
        g_loss = g_term if g_loss is None else g_loss + g_term
    return AdversarialLosses(generator=g_loss, discriminator=d_loss)
