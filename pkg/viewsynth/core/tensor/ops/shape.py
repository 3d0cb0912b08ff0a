import numpy as np

from viewsynth.core.tensor.errors import ShapeError
from viewsynth.core.tensor.ops.reduce import normalize_axes
from viewsynth.core.tensor.tensor import Function


class Reshape(Function):

    def forward(self, a, shape):
        try:
            return a.reshape(shape)
        except ValueError:
            raise ShapeError(f"cannot reshape {a.shape} into {tuple(shape)}") from None

    def backward(self, grad):
        return (grad.reshape(self.inputs[0].shape),)


class Transpose(Function):

    def forward(self, a, axes=None):
        self.axes = tuple(reversed(range(a.ndim))) if axes is None else tuple(axes)
        if sorted(ax % a.ndim for ax in self.axes) != list(range(a.ndim)):
            raise ShapeError(f"invalid permutation {self.axes} for rank {a.ndim}")
        return np.transpose(a, self.axes)

    def backward(self, grad):
        return (np.transpose(grad, np.argsort([ax % grad.ndim for ax in self.axes])),)


class Concat(Function):

    def forward(self, *arrays, axis: int = 0):
        ndim = arrays[0].ndim
        (self.axis,) = normalize_axes(axis, ndim)
        for arr in arrays[1:]:
            if arr.ndim != ndim or any(
                arr.shape[i] != arrays[0].shape[i] for i in range(ndim) if i != self.axis
            ):
                raise ShapeError(
                    f"concat operands disagree off axis {self.axis}: {arrays[0].shape} vs {arr.shape}"
                )
        self.splits = np.cumsum([arr.shape[self.axis] for arr in arrays])[:-1]
        return np.concatenate(arrays, axis=self.axis)

    def backward(self, grad):
        return tuple(np.split(grad, self.splits, axis=self.axis))


def _check_key(key, shape):
    if not isinstance(key, tuple):
        key = (key,)
    if sum(1 for k in key if k is Ellipsis) > 1:
        raise ShapeError("at most one ellipsis is allowed in a slice")
    explicit = sum(1 for k in key if k is not Ellipsis and k is not None)
    if explicit > len(shape):
        raise ShapeError(f"too many indices for tensor of shape {shape}")
    dims = []
    for k in key:
        if k is Ellipsis:
            dims.extend([None] * (len(shape) - explicit))
        elif k is not None:
            dims.append(k)
    for k, extent in zip(dims, shape):
        if isinstance(k, (int, np.integer)):
            if not -extent <= k < extent:
                raise ShapeError(f"index {k} out of bounds for axis of size {extent}")
        elif isinstance(k, slice):
            for bound in (k.start, k.stop):
                if bound is not None and not -extent <= bound <= extent:
                    raise ShapeError(f"slice {k} out of bounds for axis of size {extent}")
        elif k is not None:
            raise ShapeError(f"unsupported index {k!r}; use index_select for gathers")


class Slice(Function):
    """Basic (view) indexing: integers, slices, ellipsis and new axes."""

    def forward(self, a, key):
        _check_key(key, a.shape)
        self.key = key
        return a[key]

    def backward(self, grad):
        full = np.zeros(self.inputs[0].shape, dtype=grad.dtype)
        full[self.key] = grad
        return (full,)


class IndexSelect(Function):
    """Gather entries along one axis; repeated indices accumulate in the backward pass."""

    def forward(self, a, axis: int, index):
        (self.axis,) = normalize_axes(axis, a.ndim)
        self.index = np.asarray(index, dtype=np.int64)
        extent = a.shape[self.axis]
        if self.index.size and (self.index.min() < 0 or self.index.max() >= extent):
            raise ShapeError(f"index_select index out of bounds for axis of size {extent}")
        return np.take(a, self.index, axis=self.axis)

    def backward(self, grad):
        full = np.zeros(self.inputs[0].shape, dtype=grad.dtype)
        where = (slice(None),) * self.axis + (self.index,)
        np.add.at(full, where, grad)
        return (full,)


class ScatterAdd(Function):
    """Accumulate ``values`` into ``size`` slots along ``axis``; duplicates add up.

    Differentiable with respect to the values only; the index is data.
    """

    def forward(self, values, index, size: int, axis: int = 0):
        (self.axis,) = normalize_axes(axis, values.ndim)
        self.index = np.asarray(index, dtype=np.int64)
        if self.index.shape != (values.shape[self.axis],):
            raise ShapeError(
                f"scatter_add index of shape {self.index.shape} does not match axis {self.axis} of {values.shape}"
            )
        if self.index.size and (self.index.min() < 0 or self.index.max() >= size):
            raise ShapeError(f"scatter_add target out of bounds for size {size}")
        shape = list(values.shape)
        shape[self.axis] = size
        out = np.zeros(shape, dtype=values.dtype)
        np.add.at(out, (slice(None),) * self.axis + (self.index,), values)
        return out

    def backward(self, grad):
        return (np.take(grad, self.index, axis=self.axis),)


def bilinear_matrix(n: int, dtype) -> np.ndarray:
    """Interpolation weights for doubling an axis of length ``n`` (half-pixel centres)."""
    out = np.zeros((2 * n, n), dtype=dtype)
    for i in range(2 * n):
        src = max((i + 0.5) / 2.0 - 0.5, 0.0)
        lo = min(int(np.floor(src)), n - 1)
        hi = min(lo + 1, n - 1)
        frac = src - lo
        out[i, lo] += 1.0 - frac
        out[i, hi] += frac
    return out


class Upsample2x(Function):

    def forward(self, a):
        if a.ndim != 4:
            raise ShapeError(f"upsample expects [B, C, H, W], got {a.shape}")
        self.rows = bilinear_matrix(a.shape[2], a.dtype)
        self.cols = bilinear_matrix(a.shape[3], a.dtype)
        return np.einsum("ih,bchw,jw->bcij", self.rows, a, self.cols, optimize=True)

    def backward(self, grad):
        return (np.einsum("ih,bcij,jw->bchw", self.rows, grad, self.cols, optimize=True),)
