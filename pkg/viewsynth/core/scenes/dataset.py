from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np
from loguru import logger

from viewsynth.core.geometry import CameraModel, RelativePose
from viewsynth.core.metrics import SPLITS
from viewsynth.core.registry import RuntimeSettings
from viewsynth.core.scenes.errors import DatasetError
from viewsynth.core.scenes.io import read_pfm, read_ppm, write_pfm, write_ppm
from viewsynth.core.scenes.pairs import SceneSample, make_pair
from viewsynth.core.scenes.scene import generate_scene

MANIFEST = "manifest.txt"


@dataclass(frozen=True, eq=False)
class ManifestEntry:
    seed: int
    bin: str
    pose: RelativePose
    ratio: float

    def line(self) -> str:
        numbers = lambda values: ",".join(f"{v:.17g}" for v in values)
        return (
            f"seed={self.seed} bin={self.bin} R={numbers(self.pose.R.reshape(-1))} "
            f"t={numbers(self.pose.t)} ratio={self.ratio:.17g}"
        )

    @classmethod
    def parse(cls, line: str) -> "ManifestEntry":
        try:
            fields = dict(token.split("=", 1) for token in line.split())
            R = [float(x) for x in fields["R"].split(",")]
            t = [float(x) for x in fields["t"].split(",")]
            return cls(
                seed=int(fields["seed"]),
                bin=fields["bin"],
                pose=RelativePose.from_flat(R + t),
                ratio=float(fields["ratio"]),
            )
        except (KeyError, ValueError) as e:
            raise DatasetError(f"malformed manifest line {line!r}: {e}") from None


def sample_stem(index: int) -> str:
    return f"sample_{index:05d}"


def sample_seeds(count: int, seed: int) -> list[int]:
    rng = np.random.default_rng(seed)
    return [int(s) for s in rng.integers(0, 2 ** 63, size=count, dtype=np.uint64)]


def generate_sample(sample_seed: int, target_bin: str, camera: CameraModel) -> SceneSample:
    return make_pair(generate_scene(sample_seed), sample_seed, target_bin, camera)


def build_dataset(
        out: Path,
        count: int,
        bins: Sequence[str],
        seed: int,
        image_size: int = 64,
        workers: int | None = None,
) -> list[ManifestEntry]:
    """
    Generate ``count`` pairs, cycling through ``bins``, and write images, depth and
    the manifest under ``out``. Samples are produced in parallel but written in
    seed order, so the output is a pure function of the arguments.
    """
    if count < 1:
        raise DatasetError(f"count must be >= 1, got {count}")
    unknown = [b for b in bins if b not in SPLITS]
    if unknown or not bins:
        raise DatasetError(f"invalid bins {unknown or list(bins)}; expected names from {', '.join(SPLITS)}")
    workers = workers or RuntimeSettings.current().threads
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    camera = CameraModel.default(image_size)
    seeds = sample_seeds(count, seed)
    targets = [bins[i % len(bins)] for i in range(count)]
    entries = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        samples = pool.map(generate_sample, seeds, targets, [camera] * count)
        for index, sample in enumerate(samples):
            stem = sample_stem(index)
            write_ppm(out / f"{stem}_ref.ppm", sample.reference)
            write_ppm(out / f"{stem}_gt.ppm", sample.target)
            write_pfm(out / f"{stem}_depth.pfm", sample.depth)
            entries.append(ManifestEntry(seed=sample.seed, bin=sample.bin, pose=sample.pose, ratio=sample.ratio))
    (out / MANIFEST).write_text("".join(e.line() + "\n" for e in entries))
    logger.info(f"wrote {count} samples to {out} ({', '.join(f'{b}={targets.count(b)}' for b in bins)})")
    return entries


def read_manifest(root: Path) -> list[ManifestEntry]:
    path = Path(root) / MANIFEST
    if not path.is_file():
        raise DatasetError(f"no manifest at {path}")
    return [ManifestEntry.parse(line) for line in path.read_text().splitlines() if line.strip()]


@dataclass(frozen=True, eq=False)
class Sample:
    index: int
    reference: np.ndarray
    target: np.ndarray
    depth: np.ndarray
    entry: ManifestEntry


class Dataset:
    """Samples of a generated directory, loaded eagerly."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.entries = read_manifest(self.root)
        self.samples = [self._load(i, e) for i, e in enumerate(self.entries)]
        if not self.samples:
            raise DatasetError(f"{self.root} holds no samples")
        logger.info(f"loaded {len(self.samples)} samples from {self.root}")

    def _load(self, index: int, entry: ManifestEntry) -> Sample:
        stem = self.root / sample_stem(index)
        try:
            return Sample(
                index=index,
                reference=read_ppm(Path(f"{stem}_ref.ppm")),
                target=read_ppm(Path(f"{stem}_gt.ppm")),
                depth=read_pfm(Path(f"{stem}_depth.pfm")),
                entry=entry,
            )
        except FileNotFoundError as e:
            raise DatasetError(f"missing sample file: {e.filename}") from None

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[Sample]:
        return iter(self.samples)

    def __getitem__(self, index: int) -> Sample:
        return self.samples[index]

    @property
    def image_size(self) -> int:
        return self.samples[0].reference.shape[0]

    def batch_at(self, step: int, batch_size: int, seed: int) -> list[Sample]:
        """Batch for a training step; a pure function of ``(seed, step)`` so resumed runs see the same data."""
        rng = np.random.default_rng([seed, step])
        index = rng.choice(len(self.samples), size=batch_size, replace=batch_size > len(self.samples))
        return [self.samples[i] for i in index]


def stack_batch(samples: Sequence[Sample]) -> dict[str, np.ndarray]:
    """Images as ``[B, 3, H, W]`` in [-1, 1], depth as ``[B, H, W]``."""
    to_model = lambda images: np.stack(images).transpose(0, 3, 1, 2) * 2.0 - 1.0
    return {
        "reference": to_model([s.reference for s in samples]),
        "target": to_model([s.target for s in samples]),
        "depth": np.stack([s.depth for s in samples]),
    }
