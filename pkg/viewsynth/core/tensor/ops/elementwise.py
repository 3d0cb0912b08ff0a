import math

import numpy as np
from scipy.special import erf

from viewsynth.core.tensor.errors import BroadcastError
from viewsynth.core.tensor.tensor import Function

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_INV_SQRT2PI = 1.0 / math.sqrt(2.0 * math.pi)


def broadcast_shape(a: tuple, b: tuple) -> tuple:
    try:
        return np.broadcast_shapes(a, b)
    except ValueError:
        raise BroadcastError(f"cannot broadcast shapes {a} and {b}") from None


def unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum a broadcast gradient back down to ``shape``."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class _Binary(Function):

    def forward(self, a, b):
        broadcast_shape(a.shape, b.shape)
        return self.compute(a, b)

    def compute(self, a, b):
        raise NotImplementedError

    def grads(self, grad, a, b):
        raise NotImplementedError

    def backward(self, grad):
        a, b = self.inputs
        ga, gb = self.grads(grad, a.data, b.data)
        return (
            unbroadcast(ga, a.shape) if ga is not None else None,
            unbroadcast(gb, b.shape) if gb is not None else None,
        )


class Add(_Binary):

    def compute(self, a, b):
        return a + b

    def grads(self, grad, a, b):
        return grad, grad


class Sub(_Binary):

    def compute(self, a, b):
        return a - b

    def grads(self, grad, a, b):
        return grad, -grad if self.needs_grad(1) else None


class Mul(_Binary):

    def compute(self, a, b):
        return a * b

    def grads(self, grad, a, b):
        return (
            grad * b if self.needs_grad(0) else None,
            grad * a if self.needs_grad(1) else None,
        )


class Div(_Binary):

    def compute(self, a, b):
        return a / b

    def grads(self, grad, a, b):
        return (
            grad / b if self.needs_grad(0) else None,
            -grad * a / (b * b) if self.needs_grad(1) else None,
        )


class Neg(Function):

    def forward(self, a):
        return -a

    def backward(self, grad):
        return (-grad,)


class Exp(Function):

    def forward(self, a):
        self.out = np.exp(a)
        return self.out

    def backward(self, grad):
        return (grad * self.out,)


class Log(Function):

    def forward(self, a):
        return np.log(a)

    def backward(self, grad):
        return (grad / self.inputs[0].data,)


class Abs(Function):

    def forward(self, a):
        return np.abs(a)

    def backward(self, grad):
        return (grad * np.sign(self.inputs[0].data),)


class Sqrt(Function):

    def forward(self, a):
        self.out = np.sqrt(a)
        return self.out

    def backward(self, grad):
        return (grad * 0.5 / self.out,)


class Power(Function):

    def forward(self, a, exponent: float):
        self.exponent = exponent
        return np.power(a, exponent)

    def backward(self, grad):
        a = self.inputs[0].data
        return (grad * self.exponent * np.power(a, self.exponent - 1),)


class Relu(Function):

    def forward(self, a):
        return np.maximum(a, 0)

    def backward(self, grad):
        return (grad * (self.inputs[0].data > 0),)


class Gelu(Function):
    """Exact GELU, ``x * Phi(x)`` with the Gaussian CDF written through erf."""

    def forward(self, a):
        self.cdf = 0.5 * (1.0 + erf(a * _INV_SQRT2))
        return a * self.cdf

    def backward(self, grad):
        a = self.inputs[0].data
        pdf = np.exp(-0.5 * a * a) * _INV_SQRT2PI
        return (grad * (self.cdf + a * pdf),)


class Sigmoid(Function):

    def forward(self, a):
        self.out = 0.5 * (1.0 + np.tanh(0.5 * a))
        return self.out

    def backward(self, grad):
        return (grad * self.out * (1.0 - self.out),)


class Tanh(Function):

    def forward(self, a):
        self.out = np.tanh(a)
        return self.out

    def backward(self, grad):
        return (grad * (1.0 - self.out * self.out),)
