from dataclasses import dataclass

import numpy as np

from viewsynth.core.losses.weights import LossWeights
from viewsynth.core.tensor import Tensor, as_tensor
from viewsynth.core.tensor import functional as F

COSINE_EPS = 1e-8


@dataclass(frozen=True, eq=False)
class TransformationSimilarity:
    inside: Tensor
    outside: Tensor
    total: Tensor


def _masked_similarity(student: Tensor, teacher: Tensor, region: np.ndarray) -> Tensor:
    """``-sum(region * cos(student, teacher)) / sum(region)`` over all pixels of the batch; 0 if empty."""
    area = float(region.sum())
    if area == 0.0:
        return as_tensor(0.0)
    cos = F.cosine_similarity(student, teacher, axis=1, eps=COSINE_EPS)
    return -(cos * region).sum() / area


def ts_loss(explicit, implicit, mask: np.ndarray, weights: LossWeights = LossWeights()) -> TransformationSimilarity:
    """
    Masked negative cosine between the explicit and implicit feature maps ``[B, C, h, w]``.

    Inside the view (``mask == 0``) the implicit map is pulled towards the explicit
    one; outside (``mask == 1``) the explicit map is pulled towards the implicit one.
    With ``weights.detach`` the map being imitated receives no gradient.
    """
    explicit, implicit = as_tensor(explicit), as_tensor(implicit)
    mask = np.asarray(mask, dtype=np.float64)
    gate = F.detach if weights.detach else (lambda t: t)
    inside = _masked_similarity(implicit, gate(explicit), 1.0 - mask)
    outside = _masked_similarity(explicit, gate(implicit), mask)
    return TransformationSimilarity(
        inside=inside,
        outside=outside,
        total=inside * weights.lambda_in + outside * weights.lambda_out,
    )
