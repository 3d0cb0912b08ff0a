from typing import Callable, Sequence

import numpy as np

from viewsynth.core.tensor.errors import GradientError
from viewsynth.core.tensor.runtime import no_grad, precision
from viewsynth.core.tensor.tensor import Tensor


def _scalar(out: Tensor, projection: np.ndarray | None) -> Tensor:
    if out.size == 1:
        return out.sum()
    return (out * Tensor(projection)).sum()


def gradcheck(
        fn: Callable[..., Tensor],
        inputs: Sequence[np.ndarray],
        params: Sequence[Tensor] = (),
        seed: int = 0,
        h: float = 1e-4,
        rtol: float = 1e-3,
        atol: float = 1e-6,
        max_coords: int | None = 24,
) -> bool:
    """
    Compare autodiff gradients of ``fn`` with central finite differences.

    ``inputs`` are raw arrays turned into trainable 64-bit tensors and passed to
    ``fn`` positionally; ``params`` are existing leaves (module parameters, already
    cast to 64-bit) that ``fn`` closes over. Non-scalar outputs are reduced with a
    fixed random projection. At most ``max_coords`` coordinates per tensor are
    checked, chosen at random from ``seed``. Raises ``GradientError`` on mismatch.
    """
    rng = np.random.default_rng(seed)
    with precision(np.float64):
        tensors = [Tensor(np.array(x, dtype=np.float64), requires_grad=True) for x in inputs]
        for p in params:
            if p.dtype != np.float64:
                raise GradientError("gradcheck parameters must be 64-bit; cast the module first")
            p.zero_grad()
        out = fn(*tensors)
        projection = None if out.size == 1 else rng.standard_normal(out.shape)
        _scalar(out, projection).backward()

        def loss_value() -> float:
            with no_grad():
                return _scalar(fn(*tensors), projection).item()

        for position, t in enumerate([*tensors, *params]):
            analytic = t.grad if t.grad is not None else np.zeros_like(t.data)
            flat = t.data.reshape(-1)
            coords = np.arange(flat.size)
            if max_coords is not None and flat.size > max_coords:
                coords = rng.choice(flat.size, size=max_coords, replace=False)
            for c in coords:
                original = flat[c]
                flat[c] = original + h
                plus = loss_value()
                flat[c] = original - h
                minus = loss_value()
                flat[c] = original
                numeric = (plus - minus) / (2 * h)
                got = analytic.reshape(-1)[c]
                if abs(got - numeric) > atol + rtol * abs(numeric):
                    raise GradientError(
                        f"gradient mismatch for tensor {position} at flat index {c}: "
                        f"autodiff {got:.8g} vs finite difference {numeric:.8g}"
                    )
    return True
