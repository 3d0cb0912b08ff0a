import math

import numpy as np

from viewsynth.core.tensor import ShapeError

PSNR_CAP = 99.0


def psnr(prediction: np.ndarray, target: np.ndarray, mask: np.ndarray | None = None) -> float | None:
    """
    PSNR in dB for [0, 1] images ``[..., H, W]`` (channels anywhere in front or
    trailing as long as shapes agree). ``mask`` is ``[H, W]`` or broadcastable,
    1 = evaluate. Zero error gives ``PSNR_CAP``; an empty mask gives ``None``.
    """
    prediction = np.asarray(prediction, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if prediction.shape != target.shape:
        raise ShapeError(f"psnr needs equal shapes, got {prediction.shape} and {target.shape}")
    err = (prediction - target) ** 2
    if mask is None:
        mse = float(err.mean())
    else:
        weights = np.broadcast_to(np.asarray(mask, dtype=np.float64), err.shape)
        total = float(weights.sum())
        if total == 0.0:
            return None
        mse = float((err * weights).sum() / total)
    if mse == 0.0:
        return PSNR_CAP
    return min(10.0 * math.log10(1.0 / mse), PSNR_CAP)
