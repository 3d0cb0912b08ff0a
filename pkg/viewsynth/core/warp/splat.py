from dataclasses import dataclass

import numpy as np

from viewsynth.core.tensor import Tensor, as_tensor
from viewsynth.core.tensor import functional as F
from viewsynth.core.warp.errors import WarpError

SHARPNESS = 10.0
COVERAGE_EPS = 1e-4


@dataclass(frozen=True, eq=False)
class SplatEntries:
    """Non-zero (source, target, kernel) triples in row-major source order, corners minor."""
    source: np.ndarray
    target: np.ndarray
    kernel: np.ndarray
    size: int


@dataclass(frozen=True, eq=False)
class SplatResult:
    warped: Tensor
    weight: np.ndarray


def splat_entries(flow: np.ndarray, valid: np.ndarray | None = None) -> SplatEntries:
    flow = np.asarray(flow, dtype=np.float64)
    h, w = flow.shape[:2]
    if flow.shape != (h, w, 2):
        raise WarpError(f"flow must be [H, W, 2], got {flow.shape}")
    valid = np.ones((h, w), dtype=bool) if valid is None else np.asarray(valid, dtype=bool)
    if valid.shape != (h, w):
        raise WarpError(f"valid mask {valid.shape} does not match flow {flow.shape[:2]}")
    if np.isnan(flow[valid]).any():
        raise WarpError("flow contains NaN at a valid pixel")
    ys, xs = np.mgrid[0:h, 0:w]
    tx = np.where(valid, xs + flow[..., 0], 0.0)
    ty = np.where(valid, ys + flow[..., 1], 0.0)
    x0, y0 = np.floor(tx), np.floor(ty)
    fx, fy = tx - x0, ty - y0
    x0, y0 = x0.astype(np.int64), y0.astype(np.int64)

    kernels, targets, keeps = [], [], []
    for dy in (0, 1):
        for dx in (0, 1):
            k = (fx if dx else 1.0 - fx) * (fy if dy else 1.0 - fy)
            xt, yt = x0 + dx, y0 + dy
            keep = valid & (k > 0) & (xt >= 0) & (xt < w) & (yt >= 0) & (yt < h)
            kernels.append(k)
            targets.append(yt * w + xt)
            keeps.append(keep)
    kernel = np.stack(kernels, axis=-1).reshape(-1)
    target = np.stack(targets, axis=-1).reshape(-1)
    keep = np.stack(keeps, axis=-1).reshape(-1)
    source = np.repeat(np.arange(h * w), 4)
    return SplatEntries(source=source[keep], target=target[keep], kernel=kernel[keep], size=h * w)


def splat_weight(entries: SplatEntries) -> np.ndarray:
    """Bilinear mass accumulated at every target pixel (independent of importance)."""
    return np.bincount(entries.target, weights=entries.kernel, minlength=entries.size)


def splat_forward(
        features,
        flow: np.ndarray,
        importance,
        valid: np.ndarray | None = None,
        sharpness: float = SHARPNESS,
        eps: float = COVERAGE_EPS,
) -> SplatResult:
    """
    Softmax splatting of ``features[C, H, W]`` along ``flow[H, W, 2]``.

    Each source pixel spreads ``exp(sharpness * importance) * bilinear`` mass to its
    four target neighbours; targets average the incoming features with those
    weights. Targets whose bilinear mass stays below ``eps`` are zero.
    """
    features = as_tensor(features)
    c, h, w = features.shape
    if flow.shape[:2] != (h, w):
        raise WarpError(f"flow {flow.shape} does not match features {features.shape}")
    entries = splat_entries(flow, valid)
    weight = splat_weight(entries).reshape(h, w)
    covered = (weight >= eps).reshape(-1)

    logits = importance * sharpness if isinstance(importance, Tensor) else np.asarray(importance) * sharpness
    logits_np = logits.data if isinstance(logits, Tensor) else logits
    per_source = logits_np.reshape(-1)[entries.source]
    peak = np.full(entries.size, -np.inf)
    np.maximum.at(peak, entries.target, per_source)
    shift = peak[entries.target]
    if isinstance(logits, Tensor):
        gathered = F.index_select(logits.reshape(-1), 0, entries.source)
        e = F.exp(gathered - shift) * entries.kernel
        den = F.scatter_add(e, entries.target, entries.size)
    else:
        e = np.exp(per_source - shift) * entries.kernel
        den = np.bincount(entries.target, weights=e, minlength=entries.size)
    flat = features.reshape(c, h * w)
    num = F.scatter_add(F.index_select(flat, 1, entries.source) * e, entries.target, entries.size, axis=1)
    warped = num / (den + (~covered)) * covered
    return SplatResult(warped=warped.reshape(c, h, w), weight=weight)


def out_of_view_mask(weight: np.ndarray, eps: float = COVERAGE_EPS) -> np.ndarray:
    """Binary map, 1 where nothing landed."""
    return (np.asarray(weight) < eps).astype(np.float64)


def mask_ratio(mask: np.ndarray) -> float:
    return float(np.mean(mask))
