import math

from viewsynth.core.optim.config import OptimizerConfig


class WarmupCosineSchedule:
    """Linear warmup from ``warmup_start`` to the peak rate, then cosine decay towards zero."""

    def __init__(self, total_steps: int, peak: float, config: OptimizerConfig = OptimizerConfig()):
        self.total_steps = total_steps
        self.peak = peak
        self.start = min(config.warmup_start, peak)
        self.warmup = max(1, round(total_steps * config.warmup_fraction))

    def lr_at(self, step: int) -> float:
        """Rate for the zero-based ``step``: ``warmup_start`` at 0, the peak at ``warmup``."""
        if step < self.warmup:
            return self.start + (self.peak - self.start) * step / self.warmup
        progress = min((step - self.warmup) / max(self.total_steps - self.warmup, 1), 1.0)
        return self.peak * 0.5 * (1.0 + math.cos(math.pi * progress))
