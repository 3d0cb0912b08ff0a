import re

from viewsynth.core.cli.errors import UsageError
from viewsynth.core.geometry import GeometryError, RelativePose
from viewsynth.core.metrics import SPLITS


def parse_bins(value: str) -> list[str]:
    bins = [b.strip() for b in value.split(",") if b.strip()]
    if not bins:
        raise UsageError("--bins", "no bin given")
    for b in bins:
        if b not in SPLITS:
            raise UsageError("--bins", f"unknown bin {b!r}, expected {', '.join(SPLITS)}")
    return bins


def parse_pose(value: str) -> RelativePose:
    """Twelve numbers separated by commas or spaces: ``R`` row-major, then ``t``."""
    tokens = [t for t in re.split(r"[,\s]+", value.strip()) if t]
    try:
        numbers = [float(t) for t in tokens]
    except ValueError:
        raise UsageError("--pose", f"not a list of numbers: {value!r}") from None
    if len(numbers) != 12:
        raise UsageError("--pose", f"expected 12 numbers (R row-major, t), got {len(numbers)}")
    try:
        return RelativePose.from_flat(numbers)
    except GeometryError as e:
        raise UsageError("--pose", str(e)) from None
