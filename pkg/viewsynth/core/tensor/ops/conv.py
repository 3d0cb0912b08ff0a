import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from viewsynth.core.tensor.errors import ShapeError
from viewsynth.core.tensor.tensor import Function


class Conv2d(Function):
    """Cross-correlation of ``x[B, C, H, W]`` with ``w[O, C, kh, kw]``, zero padded."""

    def forward(self, x, w, stride: int = 1, padding: int = 0):
        if x.ndim != 4 or w.ndim != 4:
            raise ShapeError(f"conv2d expects x[B,C,H,W] and w[O,C,kh,kw], got {x.shape} and {w.shape}")
        if x.shape[1] != w.shape[1]:
            raise ShapeError(f"conv2d channel mismatch: input {x.shape} vs kernel {w.shape}")
        if stride < 1 or padding < 0:
            raise ShapeError(f"conv2d needs stride >= 1 and padding >= 0, got {stride}, {padding}")
        kh, kw = w.shape[2:]
        hp, wp = x.shape[2] + 2 * padding, x.shape[3] + 2 * padding
        if kh > hp or kw > wp:
            raise ShapeError(f"kernel {kh}x{kw} larger than padded input {hp}x{wp}")
        self.stride, self.padding = stride, padding
        xp = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding))) if padding else x
        self.padded_shape = xp.shape
        self.windows = sliding_window_view(xp, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]
        out = np.tensordot(self.windows, w, axes=([1, 4, 5], [1, 2, 3]))
        return np.ascontiguousarray(out.transpose(0, 3, 1, 2))

    def backward(self, grad):
        x, w = self.inputs
        gx = gw = None
        if w.requires_grad:
            gw = np.tensordot(grad, self.windows, axes=([0, 2, 3], [0, 2, 3]))
        if x.requires_grad:
            s, p = self.stride, self.padding
            ho, wo = grad.shape[2:]
            gxp = np.zeros(self.padded_shape, dtype=grad.dtype)
            for i in range(w.shape[2]):
                for j in range(w.shape[3]):
                    gxp[:, :, i:i + s * (ho - 1) + 1:s, j:j + s * (wo - 1) + 1:s] += np.einsum(
                        "bohw,oc->bchw", grad, w.data[:, :, i, j], optimize=True
                    )
            gx = gxp[:, :, p:p + x.shape[2], p:p + x.shape[3]] if p else gxp
        return gx, gw


class ZeroPad2d(Function):

    def forward(self, x, padding: int):
        self.padding = padding
        return np.pad(x, ((0, 0),) * (x.ndim - 2) + ((padding, padding), (padding, padding)))

    def backward(self, grad):
        p = self.padding
        return (grad[..., p:grad.shape[-2] - p, p:grad.shape[-1] - p],)
