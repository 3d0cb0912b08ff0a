import os
import struct
from pathlib import Path

import numpy as np
from loguru import logger

from viewsynth.core.checkpoint.errors import CheckpointError

MAGIC = b"NVSC"
VERSION = 1


def encode(tensors: dict[str, np.ndarray]) -> bytes:
    parts = [MAGIC, struct.pack("<II", VERSION, len(tensors))]
    for name, value in tensors.items():
        raw = name.encode("utf-8")
        if len(raw) > 0xFFFF:
            raise CheckpointError(f"tensor name too long: {name[:40]}...")
        array = np.asarray(value, dtype="<f4")
        if array.ndim > 0xFF:
            raise CheckpointError(f"tensor {name} has rank {array.ndim}")
        parts.append(struct.pack("<H", len(raw)))
        parts.append(raw)
        parts.append(struct.pack("<B", array.ndim))
        parts.append(struct.pack(f"<{array.ndim}Q", *array.shape))
        parts.append(array.tobytes())
    return b"".join(parts)


class _Reader:

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int, what: str) -> bytes:
        if self.offset + size > len(self.data):
            raise CheckpointError(f"truncated checkpoint while reading {what}", self.offset)
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, fmt: str, what: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))


def decode(data: bytes) -> dict[str, np.ndarray]:
    reader = _Reader(data)
    if reader.take(4, "magic") != MAGIC:
        raise CheckpointError("not an NVSC checkpoint (bad magic)", 0)
    version, count = reader.unpack("<II", "header")
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}", 4)
    tensors: dict[str, np.ndarray] = {}
    for _ in range(count):
        start = reader.offset
        (length,) = reader.unpack("<H", "name length")
        try:
            name = reader.take(length, "name").decode("utf-8")
        except UnicodeDecodeError:
            raise CheckpointError("tensor name is not UTF-8", start + 2) from None
        (rank,) = reader.unpack("<B", f"rank of {name}")
        shape = reader.unpack(f"<{rank}Q", f"shape of {name}")
        size = int(np.prod(shape, dtype=np.uint64)) if rank else 1
        payload = reader.take(4 * size, f"values of {name}")
        tensors[name] = np.frombuffer(payload, dtype="<f4").reshape(shape).copy()
    if reader.offset != len(data):
        raise CheckpointError("trailing bytes after the last tensor", reader.offset)
    return tensors


def save_checkpoint(path: Path, tensors: dict[str, np.ndarray]) -> None:
    """Write atomically: the target is replaced only once the full file is on disk."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(encode(tensors))
    os.replace(tmp, path)
    logger.info(f"saved checkpoint {path} ({len(tensors)} tensors)")


def load_checkpoint(path: Path) -> dict[str, np.ndarray]:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e.strerror}") from None
    return decode(data)
