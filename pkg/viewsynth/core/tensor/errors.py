class TensorError(Exception):
    pass


class ShapeError(TensorError, ValueError):
    pass


class BroadcastError(ShapeError):
    pass


class GradientError(TensorError):
    pass
