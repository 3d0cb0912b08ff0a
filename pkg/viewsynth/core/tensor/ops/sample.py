import numpy as np

from viewsynth.core.tensor.errors import ShapeError
from viewsynth.core.tensor.tensor import Function

PADDING_MODES = ("zeros", "border")


class GridSample(Function):
    """
    Bilinear gather from ``image[B, C, H, W]`` at pixel coordinates ``grid[B, Ho, Wo, 2]``.

    The last grid axis holds ``(x, y)`` in pixel units with integer pixel centres.
    ``zeros`` padding treats out-of-frame taps as zero; ``border`` clamps the
    coordinates into the frame (and stops their gradient where clamped).
    """

    def forward(self, image, grid, padding_mode: str = "zeros"):
        if padding_mode not in PADDING_MODES:
            raise ValueError(f"unknown padding mode {padding_mode!r}, expected one of {PADDING_MODES}")
        if image.ndim != 4 or grid.ndim != 4 or grid.shape[-1] != 2 or grid.shape[0] != image.shape[0]:
            raise ShapeError(f"grid_sample expects image[B,C,H,W] and grid[B,Ho,Wo,2], got {image.shape} and {grid.shape}")
        h, w = image.shape[2:]
        x, y = grid[..., 0], grid[..., 1]
        self.free_x = np.ones_like(x)
        self.free_y = np.ones_like(y)
        if padding_mode == "border":
            self.free_x = ((x >= 0) & (x <= w - 1)).astype(x.dtype)
            self.free_y = ((y >= 0) & (y <= h - 1)).astype(y.dtype)
            x = np.clip(x, 0, w - 1)
            y = np.clip(y, 0, h - 1)
        x0 = np.floor(x).astype(np.int64)
        y0 = np.floor(y).astype(np.int64)
        self.wx = (x - x0)[..., None]
        self.wy = (y - y0)[..., None]
        self.batch = np.arange(image.shape[0])[:, None, None]
        self.taps = {}
        for dy in (0, 1):
            for dx in (0, 1):
                yi, xi = y0 + dy, x0 + dx
                inside = (yi >= 0) & (yi < h) & (xi >= 0) & (xi < w)
                yc, xc = np.clip(yi, 0, h - 1), np.clip(xi, 0, w - 1)
                values = image[self.batch, :, yc, xc] * inside[..., None]
                self.taps[dy, dx] = (yc, xc, inside, values)
        out = self._blend(*(self.taps[k][3] for k in ((0, 0), (0, 1), (1, 0), (1, 1))))
        return np.ascontiguousarray(out.transpose(0, 3, 1, 2))

    def _blend(self, v00, v01, v10, v11):
        wx, wy = self.wx, self.wy
        return (1 - wy) * ((1 - wx) * v00 + wx * v01) + wy * ((1 - wx) * v10 + wx * v11)

    def _corner_weight(self, dy, dx):
        wx = self.wx if dx else 1 - self.wx
        wy = self.wy if dy else 1 - self.wy
        return wx * wy

    def backward(self, grad):
        image, grid = self.inputs
        g = grad.transpose(0, 2, 3, 1)
        gimg = ggrid = None
        if image.requires_grad:
            gimg = np.zeros(image.shape, dtype=grad.dtype)
            for (dy, dx), (yc, xc, inside, _) in self.taps.items():
                contrib = g * self._corner_weight(dy, dx) * inside[..., None]
                np.add.at(gimg, (self.batch, slice(None), yc, xc), contrib)
        if grid.requires_grad:
            v00, v01, v10, v11 = (self.taps[k][3] for k in ((0, 0), (0, 1), (1, 0), (1, 1)))
            dx = (1 - self.wy) * (v01 - v00) + self.wy * (v11 - v10)
            dy = (1 - self.wx) * (v10 - v00) + self.wx * (v11 - v01)
            ggrid = np.stack(
                [(g * dx).sum(axis=-1) * self.free_x, (g * dy).sum(axis=-1) * self.free_y], axis=-1
            )
        return gimg, ggrid
