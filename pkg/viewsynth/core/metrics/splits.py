import numpy as np

from viewsynth.core.geometry import RelativePose

SPLITS = ("small", "medium", "large")
OUT_OF_RANGE = "out-of-range"
BOUNDS = {"small": (0.2, 0.4), "medium": (0.4, 0.6), "large": (0.6, 0.8)}


def categorize_split(ratio: float) -> str:
    """Half-open bins [0.2, 0.4), [0.4, 0.6); the last bin [0.6, 0.8] is closed."""
    if 0.2 <= ratio < 0.4:
        return "small"
    if 0.4 <= ratio < 0.6:
        return "medium"
    if 0.6 <= ratio <= 0.8:
        return "large"
    return OUT_OF_RANGE

MOVEMENTS = ("forward-small", "forward-large", "backward-small", "backward-large")
LARGE_MOVE = 1.0


def categorize_movement(pose: RelativePose) -> str:
    """
    Direction and size of the camera move. The target camera centre in
    reference coordinates is ``-R^T t``. It moves backward when its z component
    is negative (zero counts as forward) and is large at ``LARGE_MOVE`` or more.
    """
    centre = pose.inverse().t
    direction = "backward" if centre[2] < 0.0 else "forward"
    size = "large" if np.linalg.norm(centre) >= LARGE_MOVE else "small"
    return f"{direction}-{size}"
