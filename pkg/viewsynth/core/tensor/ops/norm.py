import numpy as np

from viewsynth.core.tensor.errors import ShapeError
from viewsynth.core.tensor.tensor import Function


class LayerNorm(Function):
    """Standardize over the last axis, then apply the affine ``gamma``/``beta``."""

    def forward(self, x, gamma, beta, eps: float = 1e-5):
        c = x.shape[-1]
        if gamma.shape != (c,) or beta.shape != (c,):
            raise ShapeError(f"layer_norm affine shapes {gamma.shape}, {beta.shape} do not match {c} channels")
        mu = x.mean(axis=-1, keepdims=True)
        var = x.var(axis=-1, keepdims=True)
        self.inv_std = 1.0 / np.sqrt(var + eps)
        self.xhat = (x - mu) * self.inv_std
        return self.xhat * gamma + beta

    def backward(self, grad):
        x, gamma, beta = self.inputs
        lead = tuple(range(grad.ndim - 1))
        gx = None
        if x.requires_grad:
            gxhat = grad * gamma.data
            gx = self.inv_std * (
                gxhat
                - gxhat.mean(axis=-1, keepdims=True)
                - self.xhat * (gxhat * self.xhat).mean(axis=-1, keepdims=True)
            )
        gg = (grad * self.xhat).sum(axis=lead) if gamma.requires_grad else None
        gb = grad.sum(axis=lead) if beta.requires_grad else None
        return gx, gg, gb
