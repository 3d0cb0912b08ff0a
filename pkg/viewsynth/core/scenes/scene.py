from dataclasses import dataclass, field

import numpy as np

from viewsynth.core.geometry import rodrigues
from viewsynth.core.scenes.texture import Texture

BACKGROUND_DEPTH = 12.0
MIN_QUADS = 5
MAX_QUADS = 15


@dataclass(frozen=True, eq=False)
class Quad:
    """Parallelogram ``origin + a * edge_u + b * edge_v`` for ``a, b`` in [0, 1], in reference-camera coordinates."""
    origin: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    texture: Texture

    def corners(self) -> np.ndarray:
        o, u, v = self.origin, self.edge_u, self.edge_v
        return np.stack([o, o + u, o + u + v, o + v])


@dataclass(frozen=True, eq=False)
class Scene:
    quads: list[Quad] = field(default_factory=list)
    background: np.ndarray = field(default_factory=lambda: np.array([0.55, 0.7, 0.9]))
    seed: int = 0

    def __len__(self) -> int:
        return len(self.quads)


def _panel(rng: np.random.Generator, back: float) -> Quad:
    z = rng.uniform(2.0, back - 0.5)
    half_extent = 0.7 * z
    center = np.array([rng.uniform(-half_extent, half_extent), rng.uniform(-half_extent, half_extent), z])
    width, height = rng.uniform(0.3, 1.5, 2)
    yaw = rng.uniform(-np.pi / 4, np.pi / 4)
    turn = rodrigues(np.array([0.0, 1.0, 0.0]), yaw)
    u = turn @ np.array([width, 0.0, 0.0])
    v = np.array([0.0, height, 0.0])
    return Quad(origin=center - (u + v) / 2, edge_u=u, edge_v=v, texture=Texture.random(rng))


def generate_scene(seed: int) -> Scene:
    """
    A room seen from the reference camera (y axis pointing down): back wall,
    floor, side walls and 1 to 11 free-standing panels, all between 1 and 10 m.
    """
    rng = np.random.default_rng(seed)
    back = rng.uniform(6.0, 10.0)
    half_width = rng.uniform(3.0, 5.0)
    floor = rng.uniform(1.0, 2.0)
    ceiling = rng.uniform(2.0, 3.0)
    near = 1.0
    depth_span = np.array([0.0, 0.0, back - near])
    quads = [
        Quad(np.array([-half_width, -ceiling, back]), np.array([2 * half_width, 0, 0]),
             np.array([0, ceiling + floor, 0.0]), Texture.random(rng)),
        Quad(np.array([-half_width, floor, near]), np.array([2 * half_width, 0, 0]), depth_span, Texture.random(rng)),
        Quad(np.array([-half_width, -ceiling, near]), depth_span, np.array([0, ceiling + floor, 0.0]), Texture.random(rng)),
        Quad(np.array([half_width, -ceiling, near]), depth_span, np.array([0, ceiling + floor, 0.0]), Texture.random(rng)),
    ]
    panels = int(rng.integers(MIN_QUADS - len(quads), MAX_QUADS - len(quads) + 1))
    quads.extend(_panel(rng, back) for _ in range(panels))
    return Scene(quads=quads, background=rng.uniform(0.3, 0.9, 3), seed=seed)
