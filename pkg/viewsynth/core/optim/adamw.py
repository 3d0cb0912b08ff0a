import numpy as np

from viewsynth.core.nn import Parameter
from viewsynth.core.optim.config import OptimizerConfig


class AdamW:
    """Adaptive-moment descent with decoupled weight decay over named parameters."""

    def __init__(self, named_parameters, config: OptimizerConfig = OptimizerConfig()):
        self.params: dict[str, Parameter] = dict(named_parameters)
        self.config = config
        self.step_count = 0
        self.m = {name: np.zeros_like(p.data) for name, p in self.params.items()}
        self.v = {name: np.zeros_like(p.data) for name, p in self.params.items()}

    def zero_grad(self) -> None:
        for p in self.params.values():
            p.zero_grad()

    def step(self, lr: float) -> None:
        c = self.config
        self.step_count += 1
        bias1 = 1.0 - c.beta1 ** self.step_count
        bias2 = 1.0 - c.beta2 ** self.step_count
        for name, p in self.params.items():
            if p.grad is None or not p.requires_grad:
                continue
            g = p.grad
            self.m[name] = c.beta1 * self.m[name] + (1.0 - c.beta1) * g
            self.v[name] = c.beta2 * self.v[name] + (1.0 - c.beta2) * g * g
            update = (self.m[name] / bias1) / (np.sqrt(self.v[name] / bias2) + c.eps)
            p.data = (p.data * (1.0 - lr * c.weight_decay) - lr * update).astype(p.dtype)

    def state_dict(self, prefix: str = "optim") -> dict[str, np.ndarray]:
        state = {f"{prefix}.step": np.array(float(self.step_count))}
        for name in self.params:
            state[f"{prefix}.m.{name}"] = self.m[name].copy()
            state[f"{prefix}.v.{name}"] = self.v[name].copy()
        return state

    def load_state_dict(self, state: dict[str, np.ndarray], prefix: str = "optim") -> "AdamW":
        if f"{prefix}.step" not in state:
            return self
        self.step_count = int(state[f"{prefix}.step"])
        for name, p in self.params.items():
            self.m[name] = np.asarray(state[f"{prefix}.m.{name}"], dtype=p.dtype).copy()
            self.v[name] = np.asarray(state[f"{prefix}.v.{name}"], dtype=p.dtype).copy()
        return self
