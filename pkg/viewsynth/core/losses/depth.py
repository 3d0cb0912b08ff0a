from typing import Sequence

import numpy as np

from viewsynth.core.geometry import CameraModel, RelativePose
from viewsynth.core.tensor import Tensor, as_tensor
from viewsynth.core.tensor import functional as F
from viewsynth.core.losses.image import photometric_error
from viewsynth.core.losses.weights import LossWeights


class MissingPoseError(ValueError):
    pass


def warp_to_reference(neighbor, depth: Tensor, camera: CameraModel, poses: Sequence[RelativePose]) -> Tensor:
    """
    Backward warp of ``neighbor[B, C, H, W]`` into the reference view.

    Each reference pixel is lifted with ``depth[B, H, W]``, moved by its pose
    (reference to neighbour camera) and projected; the neighbour is sampled there
    with border padding. Differentiable wrt depth and the neighbour image.
    """
    rays = camera.pixel_grid() @ camera.K_inv.T
    coords = []
    for b, pose in enumerate(poses):
        rotated = rays @ pose.R.T @ camera.K.T
        shift = camera.K @ pose.t
        d = depth[b]
        z = d * rotated[..., 2] + shift[2]
        x = (d * rotated[..., 0] + shift[0]) / z
        y = (d * rotated[..., 1] + shift[1]) / z
        coords.append(F.stack([x, y], axis=-1))
    return F.grid_sample(neighbor, F.stack(coords, axis=0), padding_mode="border")


def smoothness_loss(depth: Tensor, image) -> Tensor:
    """Edge-aware smoothness of mean-normalized inverse depth."""
    disparity = 1.0 / as_tensor(depth)
    disparity = disparity / disparity.mean(axis=(1, 2), keepdims=True)
    image = as_tensor(image)
    grad_x = F.abs_(disparity[:, :, :-1] - disparity[:, :, 1:])
    grad_y = F.abs_(disparity[:, :-1, :] - disparity[:, 1:, :])
    edge_x = np.exp(-np.abs(image.numpy()[..., :, :-1] - image.numpy()[..., :, 1:]).mean(axis=1))
    edge_y = np.exp(-np.abs(image.numpy()[..., :-1, :] - image.numpy()[..., 1:, :]).mean(axis=1))
    return (grad_x * edge_x).mean() + (grad_y * edge_y).mean()


def reprojection_errors(reference, neighbors, poses, depth, camera, alpha):
    """Photometric errors ``[B, H, W]`` of every warped neighbour, and of every unwarped one."""
    if len(neighbors) != len(poses):
        raise MissingPoseError(f"{len(neighbors)} neighbour frames but {len(poses)} pose lists")
    warped, identity = [], []
    for frame, frame_poses in zip(neighbors, poses):
        if frame_poses is None or len(frame_poses) != reference.shape[0]:
            raise MissingPoseError("every neighbour frame needs one pose per batch item")
        warped.append(photometric_error(warp_to_reference(frame, depth, camera, frame_poses), reference, alpha))
        identity.append(photometric_error(frame, reference, alpha).numpy())
    return warped, identity


def depth_loss(
        reference,
        neighbors: Sequence,
        poses: Sequence[Sequence[RelativePose]],
        depth: Tensor,
        camera: CameraModel,
        weights: LossWeights = LossWeights(),
) -> Tensor:
    """
    Self-supervised depth objective on [0, 1] images.

    Per-pixel minimum of the photometric error over the warped neighbours,
    auto-masked to pixels where that minimum beats every unwarped neighbour,
    plus ``lambda_sm`` times the edge-aware smoothness term.
    """
    reference = as_tensor(reference)
    if not neighbors:
        raise MissingPoseError("depth loss needs at least one neighbour frame")
    warped, identity = reprojection_errors(reference, neighbors, poses, depth, camera, weights.alpha)
    errors = F.stack(warped, axis=0)
    minimum = -F.max_(-errors, axis=0)
    keep = (minimum.numpy() < np.min(np.stack(identity), axis=0)).astype(np.float64)
    reprojection = (minimum * keep).sum() / max(float(keep.sum()), 1.0)
    return reprojection + weights.lambda_sm * smoothness_loss(depth, reference)
