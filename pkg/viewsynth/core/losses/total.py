from dataclasses import dataclass, field

from viewsynth.core.losses.weights import LossWeights
from viewsynth.core.tensor import Tensor, as_tensor


@dataclass(frozen=True, eq=False)
class ViewLoss:
    total: Tensor
    components: dict[str, float] = field(default_factory=dict)


def total_view_loss(l1, perceptual, adversarial, ts, weights: LossWeights = LossWeights()) -> ViewLoss:
    """``l1 + lambda_c * perceptual + lambda_adv * adversarial + ts``; ``ts`` is already weighted."""
    l1, perceptual, adversarial, ts = (as_tensor(x) for x in (l1, perceptual, adversarial, ts))
    total = l1 + perceptual * weights.lambda_c + adversarial * weights.lambda_adv + ts
    return ViewLoss(
        total=total,
        components={
            "l1": l1.item(),
            "perceptual": perceptual.item(),
            "adv_g": adversarial.item(),
            "ts": ts.item(),
        },
    )


def weighted_sum(components: dict[str, float], weights: LossWeights) -> float:
    return (
        components["l1"]
        + weights.lambda_c * components["perceptual"]
        + weights.lambda_adv * components["adv_g"]
        + components["ts"]
    )
