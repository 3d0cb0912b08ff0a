from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Sequence

import numpy as np

from viewsynth.core.tensor.errors import GradientError
from viewsynth.core.tensor.runtime import Runtime


class Function(ABC):
    """
    A differentiable operation.

    Subclasses implement ``forward`` on raw arrays and ``backward`` returning one
    gradient (or ``None``) per tensor input. ``apply`` runs the forward pass and,
    when any input requires a gradient, records the call as the creator of the
    output so the tape can replay it.
    """

    def __init__(self, *inputs: "Tensor"):
        self.inputs = inputs

    @abstractmethod
    def forward(self, *arrays: np.ndarray, **kwargs: Any) -> np.ndarray:
        pass

    @abstractmethod
    def backward(self, grad: np.ndarray) -> Sequence[np.ndarray | None]:
        pass

    def needs_grad(self, index: int) -> bool:
        return self.inputs[index].requires_grad

    @classmethod
    def apply(cls, *inputs: Any, **kwargs: Any) -> "Tensor":
        tensors = tuple(as_tensor(x) for x in inputs)
        fn = cls(*tensors)
        out = fn.forward(*(t.data for t in tensors), **kwargs)
        track = Runtime().grad_enabled and any(t.requires_grad for t in tensors)
        return Tensor(out, requires_grad=track, _creator=fn if track else None)


class Tape:
    """Operations reachable from a root, ordered so every input precedes its output."""

    def __init__(self, nodes: list["Tensor"]):
        self.nodes = nodes

    @classmethod
    def record(cls, root: "Tensor") -> "Tape":
        order: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            if node._creator is not None:
                for parent in reversed(node._creator.inputs):
                    if parent.requires_grad and id(parent) not in seen:
                        stack.append((parent, False))
        return cls(order)

    def replay(self, seed: np.ndarray) -> None:
        grads: dict[int, np.ndarray] = {id(self.nodes[-1]): seed}
        for node in reversed(self.nodes):
            grad = grads.pop(id(node), None)
            if grad is None:
                continue
            fn = node._creator
            if fn is None:
                node.grad = grad.copy() if node.grad is None else node.grad + grad
                continue
            for parent, parent_grad in zip(fn.inputs, fn.backward(grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                grads[key] = parent_grad if key not in grads else grads[key] + parent_grad


class Tensor:
    """Dense float array that optionally participates in reverse-mode autodiff."""

    __array_priority__ = 100
    __array_ufunc__ = None

    def __init__(self, data: Any, requires_grad: bool = False, _creator: Function | None = None):
        self.data = np.asarray(data, dtype=Runtime().dtype)
        self.requires_grad = requires_grad
        self.grad: np.ndarray | None = None
        self._creator = _creator

    # --- inspection -------------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def is_leaf(self) -> bool:
        return self._creator is None

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def __repr__(self) -> str:
        flag = ", requires_grad=True" if self.requires_grad else ""
        return f"Tensor(shape={self.shape}, dtype={self.dtype}{flag})"

    def __len__(self) -> int:
        return self.shape[0]

    # --- autodiff ---------------------------------------------------------

    def backward(self) -> None:
        if self.size != 1:
            raise GradientError(f"backward needs a scalar loss, got shape {self.shape}")
        if not self.requires_grad:
            raise GradientError("loss is not on the tape: no input requires a gradient")
        Tape.record(self).replay(np.ones_like(self.data))

    def detach(self) -> "Tensor":
        return Tensor(self.data, requires_grad=False)

    def zero_grad(self) -> None:
        self.grad = None

    # --- arithmetic -------------------------------------------------------

    def __add__(self, other):
        return _F.add(self, other)

    def __radd__(self, other):
        return _F.add(other, self)

    def __sub__(self, other):
        return _F.sub(self, other)

    def __rsub__(self, other):
        return _F.sub(other, self)

    def __mul__(self, other):
        return _F.mul(self, other)

    def __rmul__(self, other):
        return _F.mul(other, self)

    def __truediv__(self, other):
        return _F.div(self, other)

    def __rtruediv__(self, other):
        return _F.div(other, self)

    def __neg__(self):
        return _F.neg(self)

    def __pow__(self, exponent: float):
        return _F.power(self, exponent)

    def __matmul__(self, other):
        return _F.matmul(self, other)

    def __rmatmul__(self, other):
        return _F.matmul(other, self)

    def __getitem__(self, key):
        return _F.slice_(self, key)

    # --- shortcuts --------------------------------------------------------

    def sum(self, axis=None, keepdims: bool = False) -> "Tensor":
        return _F.sum_(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims: bool = False) -> "Tensor":
        return _F.mean(self, axis=axis, keepdims=keepdims)

    def max(self, axis=None, keepdims: bool = False) -> "Tensor":
        return _F.max_(self, axis=axis, keepdims=keepdims)

    def reshape(self, *shape) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return _F.reshape(self, shape)

    def transpose(self, *axes) -> "Tensor":
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        return _F.transpose(self, axes or None)

    def exp(self) -> "Tensor":
        return _F.exp(self)

    def log(self) -> "Tensor":
        return _F.log(self)

    def abs(self) -> "Tensor":
        return _F.abs_(self)

    def sqrt(self) -> "Tensor":
        return _F.sqrt(self)

    def relu(self) -> "Tensor":
        return _F.relu(self)

    def gelu(self) -> "Tensor":
        return _F.gelu(self)

    def sigmoid(self) -> "Tensor":
        return _F.sigmoid(self)

    def tanh(self) -> "Tensor":
        return _F.tanh(self)

    def softmax(self, axis: int = -1) -> "Tensor":
        return _F.softmax(self, axis=axis)


def as_tensor(value: Any) -> Tensor:
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


from viewsynth.core.tensor import functional as _F  # noqa: E402
