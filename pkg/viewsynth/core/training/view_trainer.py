from pathlib import Path

import numpy as np

from viewsynth.core.checkpoint import config_tensors, load_checkpoint, model_tensors, restore_model
from viewsynth.core.checkpoint.bundle import prefixed
from viewsynth.core.config import RunConfig
from viewsynth.core.losses import (
    DiscriminatorPair,
    PerceptualExtractor,
    adversarial_losses,
    l1_loss,
    perceptual_loss,
    to_unit,
    total_view_loss,
    ts_loss,
)
from viewsynth.core.model import DepthNet, ViewNet
from viewsynth.core.optim import AdamW, WarmupCosineSchedule
from viewsynth.core.scenes import Dataset, stack_batch
from viewsynth.core.tensor import no_grad
from viewsynth.core.training.common import STEP_KEY, ensure_finite
from viewsynth.core.training.errors import TrainingError
from viewsynth.core.training.task import Task

VIEW_COLUMNS = ["step", "total", "l1", "perceptual", "adv_g", "ts", "ts_in", "ts_out", "d_loss", "lr"]
DISC_PREFIX = "disc"


class ViewTrainer(Task):
    """
    Alternating generator/discriminator training of ViewNet.

    Depth comes from a frozen DepthNet checkpoint, or from the generator's
    ground truth when ``depth_checkpoint`` is ``None``.
    """
    checkpoint_file = "view.nvsc"
    log_file = "view_loss.csv"
    columns = VIEW_COLUMNS

    def __init__(self, config: RunConfig, dataset: Dataset, out: Path,
                 depth_checkpoint: Path | None = None, resume: Path | None = None):
        if dataset.image_size != config.view.image_size:
            raise TrainingError(
                f"dataset images are {dataset.image_size}px but image_size is {config.view.image_size}"
            )
        self.config = config
        self.dataset = dataset
        self.out = Path(out)
        self.resume = resume
        self.model = ViewNet(config.view, seed=config.seed)
        self.discriminators = DiscriminatorPair(seed=config.seed + 1)
        self.extractor = PerceptualExtractor()
        self.depth_model: DepthNet | None = None
        if depth_checkpoint is not None:
            self.depth_model = restore_model(load_checkpoint(depth_checkpoint), DepthNet.name).freeze()
        self.g_optimizer = AdamW(self.model.named_parameters(), config.optim)
        self.d_optimizer = AdamW(self.discriminators.named_parameters(), config.optim)
        self.g_schedule = WarmupCosineSchedule(config.steps, config.optim.lr, config.optim)
        self.d_schedule = WarmupCosineSchedule(config.steps, config.optim.disc_lr, config.optim)

    def get_name(self) -> str:
        return "train-view"

    def checkpoint(self, step: int) -> dict[str, np.ndarray]:
        return {
            **model_tensors(self.model, ViewNet.name),
            **config_tensors(ViewNet.name, self.config.view),
            **model_tensors(self.discriminators, DISC_PREFIX),
            **self.g_optimizer.state_dict("optim"),
            **self.d_optimizer.state_dict("optim_d"),
            STEP_KEY: np.array(float(step)),
        }

    def restore(self, state: dict[str, np.ndarray]) -> None:
        self.model.load_state_dict(prefixed(state, ViewNet.name))
        self.discriminators.load_state_dict(prefixed(state, DISC_PREFIX))
        self.g_optimizer.load_state_dict(state, "optim")
        self.d_optimizer.load_state_dict(state, "optim_d")

    def depth_for(self, reference: np.ndarray, depth: np.ndarray) -> np.ndarray:
        if self.depth_model is None:
            return depth
        with no_grad():
            predicted = self.depth_model(reference).numpy().astype(np.float64)
        if any(p.grad is not None for p in self.depth_model.parameters()):
            raise TrainingError("frozen DepthNet received gradients")
        return predicted

    def train_step(self, step: int) -> dict[str, float]:
        batch = self.dataset.batch_at(step, self.config.batch_size, self.config.seed)
        arrays = stack_batch(batch)
        weights = self.config.loss
        depth = self.depth_for(arrays["reference"], arrays["depth"])
        out = self.model(arrays["reference"], depth, [s.entry.pose for s in batch])

        prediction, target = to_unit(out.image), to_unit(arrays["target"])
        adversarial = adversarial_losses(
            prediction, target, self.discriminators, np.random.default_rng([self.config.seed, step, 1])
        )
        similarity = ts_loss(out.pair.explicit, out.pair.implicit, out.pair.mask, weights)
        loss = total_view_loss(
            l1_loss(prediction, target),
            perceptual_loss(prediction, target, self.extractor),
            adversarial.generator,
            similarity.total,
            weights,
        )
        total = ensure_finite(loss.total, step, batch, "generator loss", self.out)
        d_value = ensure_finite(adversarial.discriminator, step, batch, "discriminator loss", self.out)

        self.g_optimizer.zero_grad()
        loss.total.backward()
        self.g_optimizer.step(self.g_schedule.lr_at(step))

        self.d_optimizer.zero_grad()
        adversarial.discriminator.backward()
        self.d_optimizer.step(self.d_schedule.lr_at(step))

        return {
            "total": total,
            **loss.components,
            "ts_in": similarity.inside.item(),
            "ts_out": similarity.outside.item(),
            "d_loss": d_value,
            "lr": self.g_schedule.lr_at(step),
        }
