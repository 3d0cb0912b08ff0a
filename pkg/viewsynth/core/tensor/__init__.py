from .errors import TensorError, ShapeError, BroadcastError, GradientError
from .runtime import Runtime, default_dtype, precision, no_grad
from .tensor import Tensor, Function, Tape, as_tensor
from . import functional
from .gradcheck import gradcheck
