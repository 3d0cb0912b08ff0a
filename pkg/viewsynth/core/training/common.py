import math
from pathlib import Path

import numpy as np
from loguru import logger

from viewsynth.core.checkpoint import load_checkpoint
from viewsynth.core.scenes import Sample
from viewsynth.core.tensor import Tensor
from viewsynth.core.training.errors import NonFiniteLossError

STEP_KEY = "train.step"


def batch_seeds(batch: list[Sample]) -> list[int]:
    return [s.entry.seed for s in batch]


def ensure_finite(value: Tensor | float, step: int, batch: list[Sample], component: str, out: Path) -> float:
    """Return the scalar, or dump the batch identity next to the outputs and abort."""
    scalar = value.item() if isinstance(value, Tensor) else float(value)
    if math.isfinite(scalar):
        return scalar
    seeds = batch_seeds(batch)
    dump = Path(out) / "nonfinite_batch.txt"
    dump.write_text(
        f"step={step} component={component}\n"
        + "".join(f"index={s.index} seed={s.entry.seed}\n" for s in batch)
    )
    logger.error(f"non-finite {component} at step {step}; batch written to {dump}")
    raise NonFiniteLossError(step, seeds, component)


def resume_state(path: Path | None) -> tuple[dict[str, np.ndarray], int]:
    if path is None:
        return {}, 0
    tensors = load_checkpoint(path)
    step = int(tensors.get(STEP_KEY, np.array(0.0)))
    logger.info(f"resuming from {path} at step {step}")
    return tensors, step
