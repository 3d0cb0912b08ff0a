from abc import ABC, abstractmethod
from pathlib import Path
from typing import ClassVar

import numpy as np
from loguru import logger

from viewsynth.core.checkpoint import save_checkpoint
from viewsynth.core.config import RunConfig
from viewsynth.core.training.common import resume_state
from viewsynth.core.training.loss_log import LossLog


class Task(ABC):
    """
    A resumable training run. Each step appends one row to ``log_file``; the
    checkpoint is rewritten every ``checkpoint_every`` steps and after the last.
    """
    checkpoint_file: ClassVar[str]
    log_file: ClassVar[str]
    columns: ClassVar[list[str]]

    config: RunConfig
    out: Path
    resume: Path | None

    @property
    def name(self):
        return self.get_name()

    @abstractmethod
    def get_name(self) -> str:
        pass

    @abstractmethod
    def checkpoint(self, step: int) -> dict[str, np.ndarray]:
        pass

    @abstractmethod
    def restore(self, state: dict[str, np.ndarray]) -> None:
        pass

    @abstractmethod
    def train_step(self, step: int) -> dict[str, float]:
        """Run one optimisation step and return the logged values except ``step``."""
        pass

    def run(self) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        state, start = resume_state(self.resume)
        if state:
            self.restore(state)
        path = self.out / self.checkpoint_file
        with LossLog(self.out / self.log_file, self.columns, append=start > 0) as log:
            for step in range(start, self.config.steps):
                values = self.train_step(step)
                log.write(step=step, **values)
                logger.debug(f"{self.name} step {step}: total {values['total']:.5f}")
                done = step + 1
                if done % self.config.checkpoint_every == 0 or done == self.config.steps:
                    save_checkpoint(path, self.checkpoint(done))
        logger.info(f"{self.name} finished after {self.config.steps} steps")
        return path
