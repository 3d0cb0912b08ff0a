from dataclasses import dataclass

import numpy as np

from viewsynth.core.geometry.pose import RelativePose, check_rotation

SMALL_AXIS = 1e-8


@dataclass(frozen=True, eq=False)
class PoseParams:
    """Seven-number pose embedding: unit rotation axis (zero at identity), angle, translation."""
    axis: np.ndarray
    theta: float
    t: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.axis, [self.theta], self.t])


def rotation_to_axis_angle(R: np.ndarray) -> tuple[np.ndarray, float]:
    """
    Axis and angle from the skew part ``R - R^T``; ``theta = atan2(|u|, tr(R) - 1)``.

    When ``u`` vanishes the rotation is either the identity (zero axis and angle)
    or a half turn, whose axis is read off the largest diagonal entry of
    ``(R + I) / 2 = a a^T``. The angle lies in the closed range ``[0, pi]``;
    a half turn yields exactly ``pi``.
    """
    R = check_rotation(R)
    u = np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    norm = np.linalg.norm(u)
    trace = np.trace(R)
    if norm >= SMALL_AXIS:
        return u / norm, float(np.arctan2(norm, trace - 1.0))
    if trace > 0.0:
        return np.zeros(3), 0.0
    B = (R + np.eye(3)) / 2.0
    k = int(np.argmax(np.diag(B)))
    axis = B[:, k] / np.sqrt(B[k, k])
    return axis / np.linalg.norm(axis), float(np.pi)


def rodrigues(axis: np.ndarray, theta: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=np.float64)
    if not np.any(axis) or theta == 0.0:
        return np.eye(3)
    axis = axis / np.linalg.norm(axis)
    k = np.array([
        [0.0, -axis[2], axis[1]],
        [axis[2], 0.0, -axis[0]],
        [-axis[1], axis[0], 0.0],
    ])
    return np.eye(3) + np.sin(theta) * k + (1.0 - np.cos(theta)) * (k @ k)


def pose_params(pose: RelativePose) -> PoseParams:
    axis, theta = rotation_to_axis_angle(pose.R)
    return PoseParams(axis=axis, theta=theta, t=pose.t.copy())


def pose_vector(pose: RelativePose) -> np.ndarray:
    return pose_params(pose).vector
