"""Functional front-end over the differentiable ops."""
from typing import Sequence

import numpy as np

from viewsynth.core.tensor.errors import ShapeError
from viewsynth.core.tensor.ops import conv, elementwise, linalg, norm, reduce, sample, shape
from viewsynth.core.tensor.ops.reduce import normalize_axes
from viewsynth.core.tensor.tensor import Tensor, as_tensor

PAD_MODES = ("zeros", "replicate", "reflect")


def add(a, b) -> Tensor:
    return elementwise.Add.apply(a, b)


def sub(a, b) -> Tensor:
    return elementwise.Sub.apply(a, b)


def mul(a, b) -> Tensor:
    return elementwise.Mul.apply(a, b)


def div(a, b) -> Tensor:
    return elementwise.Div.apply(a, b)


def neg(a) -> Tensor:
    return elementwise.Neg.apply(a)


def power(a, exponent: float) -> Tensor:
    return elementwise.Power.apply(a, exponent=exponent)


def exp(a) -> Tensor:
    return elementwise.Exp.apply(a)


def log(a) -> Tensor:
    return elementwise.Log.apply(a)


def abs_(a) -> Tensor:
    return elementwise.Abs.apply(a)


def sqrt(a) -> Tensor:
    return elementwise.Sqrt.apply(a)


def relu(a) -> Tensor:
    return elementwise.Relu.apply(a)


def gelu(a) -> Tensor:
    return elementwise.Gelu.apply(a)


def sigmoid(a) -> Tensor:
    return elementwise.Sigmoid.apply(a)


def tanh(a) -> Tensor:
    return elementwise.Tanh.apply(a)


def matmul(a, b) -> Tensor:
    return linalg.MatMul.apply(a, b)


def sum_(a, axis=None, keepdims: bool = False) -> Tensor:
    return reduce.Sum.apply(a, axis=axis, keepdims=keepdims)


def mean(a, axis=None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    count = int(np.prod([a.shape[ax] for ax in normalize_axes(axis, a.ndim)]))
    return sum_(a, axis=axis, keepdims=keepdims) / max(count, 1)


def max_(a, axis=None, keepdims: bool = False) -> Tensor:
    return reduce.Max.apply(a, axis=axis, keepdims=keepdims)


def softmax(a, axis: int = -1) -> Tensor:
    return reduce.Softmax.apply(a, axis=axis)


def reshape(a, shape_: Sequence[int]) -> Tensor:
    return shape.Reshape.apply(a, shape=tuple(shape_))


def transpose(a, axes=None) -> Tensor:
    return shape.Transpose.apply(a, axes=axes)


def concat(tensors: Sequence, axis: int = 0) -> Tensor:
    if not tensors:
        raise ShapeError("concat needs at least one tensor")
    return shape.Concat.apply(*tensors, axis=axis)


def stack(tensors: Sequence, axis: int = 0) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    ndim = tensors[0].ndim + 1
    (axis,) = normalize_axes(axis, ndim)
    expanded = [t.reshape(t.shape[:axis] + (1,) + t.shape[axis:]) for t in tensors]
    return concat(expanded, axis=axis)


def slice_(a, key) -> Tensor:
    return shape.Slice.apply(a, key=key)


def index_select(a, axis: int, index) -> Tensor:
    return shape.IndexSelect.apply(a, axis=axis, index=index)


def scatter_add(values, index, size: int, axis: int = 0) -> Tensor:
    return shape.ScatterAdd.apply(values, index=index, size=size, axis=axis)


def upsample2x(a) -> Tensor:
    return shape.Upsample2x.apply(a)


def conv2d(x, w, bias=None, stride: int = 1, padding: int = 0) -> Tensor:
    out = conv.Conv2d.apply(x, w, stride=stride, padding=padding)
    if bias is not None:
        out = out + reshape(bias, (1, -1, 1, 1))
    return out


def pad2d(x, padding: int, mode: str = "zeros") -> Tensor:
    """Pad the two trailing axes by ``padding`` on every side."""
    if mode not in PAD_MODES:
        raise ValueError(f"unknown pad mode {mode!r}, expected one of {PAD_MODES}")
    x = as_tensor(x)
    if padding == 0:
        return x
    if mode == "zeros":
        return conv.ZeroPad2d.apply(x, padding=padding)
    np_mode = "edge" if mode == "replicate" else "reflect"
    for axis in (x.ndim - 2, x.ndim - 1):
        extent = x.shape[axis]
        if mode == "reflect" and padding >= extent:
            raise ShapeError(f"reflect padding {padding} needs an extent larger than {extent}")
        x = index_select(x, axis, np.pad(np.arange(extent), padding, mode=np_mode))
    return x


def layer_norm(x, gamma, beta, eps: float = 1e-5) -> Tensor:
    return norm.LayerNorm.apply(x, gamma, beta, eps=eps)


def grid_sample(image, grid, padding_mode: str = "zeros") -> Tensor:
    return sample.GridSample.apply(image, grid, padding_mode=padding_mode)


def detach(a) -> Tensor:
    return as_tensor(a).detach()


def cosine_similarity(a, b, axis: int = -1, eps: float = 1e-8) -> Tensor:
    """Cosine of the angle between ``a`` and ``b`` along ``axis``; norms are eps-regularized."""
    dot = sum_(a * b, axis=axis)
    norm_a = sqrt(sum_(a * a, axis=axis) + eps * eps)
    norm_b = sqrt(sum_(b * b, axis=axis) + eps * eps)
    return dot / (norm_a * norm_b)


def avg_pool3x3(x) -> Tensor:
    """3x3 mean filter with reflect padding; keeps the spatial extents of ``x[B, C, H, W]``."""
    x = as_tensor(x)
    channels = x.shape[1]
    kernel = np.zeros((channels, channels, 3, 3))
    kernel[np.arange(channels), np.arange(channels)] = 1.0 / 9.0
    return conv2d(pad2d(x, 1, mode="reflect"), Tensor(kernel))
