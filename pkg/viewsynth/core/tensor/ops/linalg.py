import numpy as np

from viewsynth.core.tensor.errors import ShapeError
from viewsynth.core.tensor.ops.elementwise import unbroadcast
from viewsynth.core.tensor.tensor import Function


class MatMul(Function):
    """Batched contraction over the last axis of ``a`` and second-to-last of ``b``."""

    def forward(self, a, b):
        if a.ndim < 2 or b.ndim < 2:
            raise ShapeError(f"matmul needs operands of rank >= 2, got {a.shape} and {b.shape}")
        if a.shape[-1] != b.shape[-2]:
            raise ShapeError(f"matmul inner dimensions differ: {a.shape} @ {b.shape}")
        try:
            np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
        except ValueError:
            raise ShapeError(f"matmul batch dimensions do not broadcast: {a.shape} @ {b.shape}") from None
        return np.matmul(a, b)

    def backward(self, grad):
        a, b = self.inputs
        ga = gb = None
        if a.requires_grad:
            ga = unbroadcast(np.matmul(grad, np.swapaxes(b.data, -1, -2)), a.shape)
        if b.requires_grad:
            gb = unbroadcast(np.matmul(np.swapaxes(a.data, -1, -2), grad), b.shape)
        return ga, gb
