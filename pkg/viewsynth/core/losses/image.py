from viewsynth.core.tensor import ShapeError, Tensor, as_tensor
from viewsynth.core.tensor import functional as F

SSIM_C1 = 0.01 ** 2
SSIM_C2 = 0.03 ** 2


def to_unit(image):
    """Map a [-1, 1] image to [0, 1]."""
    return (as_tensor(image) + 1.0) * 0.5


def ssim_map(a, b) -> Tensor:
    """Per-pixel SSIM of ``[B, C, H, W]`` images in [0, 1] over 3x3 reflect-padded windows."""
    a, b = as_tensor(a), as_tensor(b)
    if a.shape != b.shape:
        raise ShapeError(f"ssim needs equal shapes, got {a.shape} and {b.shape}")
    mu_a, mu_b = F.avg_pool3x3(a), F.avg_pool3x3(b)
    var_a = F.avg_pool3x3(a * a) - mu_a * mu_a
    var_b = F.avg_pool3x3(b * b) - mu_b * mu_b
    cov = F.avg_pool3x3(a * b) - mu_a * mu_b
    num = (2 * mu_a * mu_b + SSIM_C1) * (2 * cov + SSIM_C2)
    den = (mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2)
    return num / den


def ssim(a, b) -> Tensor:
    return ssim_map(a, b).mean()


def photometric_error(a, b, alpha: float) -> Tensor:
    """``alpha/2 * (1 - SSIM) + (1 - alpha) * |a - b|`` per pixel, channel-averaged to ``[B, H, W]``."""
    structural = (1.0 - ssim_map(a, b)) * (alpha / 2.0)
    absolute = F.abs_(as_tensor(a) - b) * (1.0 - alpha)
    return (structural + absolute).mean(axis=1)
