import numpy as np

from viewsynth.core.tensor.errors import ShapeError
from viewsynth.core.tensor.tensor import Function


def normalize_axes(axis, ndim: int) -> tuple[int, ...]:
    if axis is None:
        return tuple(range(ndim))
    axes = (axis,) if isinstance(axis, int) else tuple(axis)
    out = []
    for ax in axes:
        if not -ndim <= ax < max(ndim, 1):
            raise ShapeError(f"invalid axis {ax} for tensor of rank {ndim}")
        out.append(ax % max(ndim, 1))
    return tuple(sorted(set(out)))


class Sum(Function):

    def forward(self, a, axis=None, keepdims: bool = False):
        self.axes = normalize_axes(axis, a.ndim)
        self.keepdims = keepdims
        return np.sum(a, axis=self.axes, keepdims=keepdims)

    def backward(self, grad):
        shape = self.inputs[0].shape
        if not self.keepdims:
            grad = np.expand_dims(grad, self.axes)
        return (np.broadcast_to(grad, shape).copy(),)


class Max(Function):
    """Maximum along one axis; the gradient goes to the first maximal index."""

    def forward(self, a, axis=None, keepdims: bool = False):
        if axis is None:
            self.flat = True
            a = a.reshape(-1)
            axis = 0
        else:
            self.flat = False
            (axis,) = normalize_axes(axis, a.ndim)
        self.axis = axis
        self.keepdims = keepdims
        self.index = np.expand_dims(np.argmax(a, axis=axis), axis)
        out = np.take_along_axis(a, self.index, axis=axis)
        if self.flat:
            return out.reshape((1,) * self.inputs[0].ndim if keepdims else ())
        return out if keepdims else np.squeeze(out, axis=axis)

    def backward(self, grad):
        shape = self.inputs[0].shape
        if self.flat:
            full = np.zeros(int(np.prod(shape)), dtype=grad.dtype)
            full[self.index[0]] = grad.reshape(-1)[0]
            return (full.reshape(shape),)
        if not self.keepdims:
            grad = np.expand_dims(grad, self.axis)
        full = np.zeros(shape, dtype=grad.dtype)
        np.put_along_axis(full, self.index, grad, axis=self.axis)
        return (full,)


class Softmax(Function):

    def forward(self, a, axis: int = -1):
        (self.axis,) = normalize_axes(axis, a.ndim)
        shifted = a - np.max(a, axis=self.axis, keepdims=True)
        e = np.exp(shifted)
        self.out = e / np.sum(e, axis=self.axis, keepdims=True)
        return self.out

    def backward(self, grad):
        y = self.out
        return (y * (grad - np.sum(grad * y, axis=self.axis, keepdims=True)),)
