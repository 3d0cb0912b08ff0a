from pathlib import Path

import numpy as np
from PIL import Image

from viewsynth.core.scenes.errors import DatasetError


def write_ppm(path: Path, image: np.ndarray) -> None:
    """``[H, W, 3]`` image in [0, 1] as binary 8-bit PPM (P6)."""
    data = np.round(np.clip(image, 0.0, 1.0) * 255.0).astype(np.uint8)
    Image.fromarray(data).save(path, format="PPM")


def read_ppm(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"), dtype=np.float64) / 255.0


def write_pgm(path: Path, mask: np.ndarray) -> None:
    """Single-channel map in [0, 1] as binary 8-bit PGM (P5)."""
    data = np.round(np.clip(mask, 0.0, 1.0) * 255.0).astype(np.uint8)
    Image.fromarray(data).save(path, format="PPM")


def read_pgm(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        return np.asarray(img.convert("L"), dtype=np.float64) / 255.0


def write_pfm(path: Path, depth: np.ndarray) -> None:
    """Greyscale PFM, little-endian (scale -1.0), rows stored bottom to top."""
    depth = np.asarray(depth, dtype="<f4")
    h, w = depth.shape
    with open(path, "wb") as fh:
        fh.write(f"Pf\n{w} {h}\n-1.0\n".encode("ascii"))
        fh.write(np.flipud(depth).tobytes())


def read_pfm(path: Path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = [fh.readline().decode("ascii").strip() for _ in range(3)]
        payload = fh.read()
    if header[0] != "Pf":
        raise DatasetError(f"{path}: not a greyscale PFM (header {header[0]!r})")
    try:
        w, h = (int(x) for x in header[1].split())
        scale = float(header[2])
    except ValueError:
        raise DatasetError(f"{path}: malformed PFM header {header!r}") from None
    dtype = "<f4" if scale < 0 else ">f4"
    if len(payload) != w * h * 4:
        raise DatasetError(f"{path}: expected {w * h * 4} bytes of depth, found {len(payload)}")
    return np.flipud(np.frombuffer(payload, dtype=dtype).reshape(h, w)).astype(np.float64)
