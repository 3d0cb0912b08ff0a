from pathlib import Path

import numpy as np

from viewsynth.core.checkpoint import config_tensors, model_tensors
from viewsynth.core.checkpoint.bundle import prefixed
from viewsynth.core.config import RunConfig
from viewsynth.core.geometry import CameraModel
from viewsynth.core.losses import depth_loss, to_unit
from viewsynth.core.model import DepthNet
from viewsynth.core.optim import AdamW, WarmupCosineSchedule
from viewsynth.core.scenes import Dataset, stack_batch
from viewsynth.core.training.common import STEP_KEY, ensure_finite
from viewsynth.core.training.task import Task

DEPTH_COLUMNS = ["step", "total", "lr"]


class DepthTrainer(Task):
    """Self-supervised DepthNet training: each pair's target view is the neighbour frame."""
    checkpoint_file = "depth.nvsc"
    log_file = "depth_loss.csv"
    columns = DEPTH_COLUMNS

    def __init__(self, config: RunConfig, dataset: Dataset, out: Path, resume: Path | None = None):
        self.config = config
        self.dataset = dataset
        self.out = Path(out)
        self.resume = resume
        self.model = DepthNet(config.depth, seed=config.seed)
        self.optimizer = AdamW(self.model.named_parameters(), config.optim)
        self.schedule = WarmupCosineSchedule(config.steps, config.optim.lr, config.optim)
        self.camera = CameraModel.default(dataset.image_size)

    def get_name(self) -> str:
        return "train-depth"

    def checkpoint(self, step: int) -> dict[str, np.ndarray]:
        return {
            **model_tensors(self.model, DepthNet.name),
            **config_tensors(DepthNet.name, self.config.depth),
            **self.optimizer.state_dict("optim"),
            STEP_KEY: np.array(float(step)),
        }

    def restore(self, state: dict[str, np.ndarray]) -> None:
        self.model.load_state_dict(prefixed(state, DepthNet.name))
        self.optimizer.load_state_dict(state, "optim")

    def train_step(self, step: int) -> dict[str, float]:
        batch = self.dataset.batch_at(step, self.config.batch_size, self.config.seed)
        arrays = stack_batch(batch)
        depth = self.model(arrays["reference"])
        poses = [s.entry.pose for s in batch]
        loss = depth_loss(
            to_unit(arrays["reference"]), [to_unit(arrays["target"])], [poses], depth, self.camera, self.config.loss
        )
        value = ensure_finite(loss, step, batch, "depth loss", self.out)
        lr = self.schedule.lr_at(step)
        self.optimizer.zero_grad()
        loss.backward()
        self.optimizer.step(lr)
        return {"total": value, "lr": lr}
