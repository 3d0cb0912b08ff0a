import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from viewsynth.core.metrics.histogram import Histogram
from viewsynth.core.metrics.splits import MOVEMENTS, SPLITS


@dataclass(frozen=True)
class SampleScore:
    id: str
    bin: str
    psnr_all: float | None
    psnr_vis: float | None
    movement: str | None = None


@dataclass
class EvalReport:
    rows: list[SampleScore] = field(default_factory=list)

    def add(self, row: SampleScore) -> "EvalReport":
        self.rows.append(row)
        return self

    def split_means(self) -> dict[str, tuple[float | None, float | None, int]]:
        """Mean PSNR-all / PSNR-vis and sample count per split; ``None`` when undefined."""
        return {
            split: _summary([r for r in self.rows if split == "all" or r.bin == split])
            for split in (*SPLITS, "all")
        }

    def movement_means(self) -> dict[str, tuple[float | None, float | None, int]]:
        """Same summary keyed by camera movement; empty when no row carries one."""
        if all(r.movement is None for r in self.rows):
            return {}
        return {move: _summary([r for r in self.rows if r.movement == move]) for move in MOVEMENTS}

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["id", "bin", "psnr_all", "psnr_vis"])
            for r in self.rows:
                writer.writerow([r.id, r.bin, _fmt(r.psnr_all), _fmt(r.psnr_vis)])
            writer.writerow([])
            writer.writerow(["split", "count", "mean_psnr_all", "mean_psnr_vis"])
            for split, (psnr_all, psnr_vis, count) in self.split_means().items():
                writer.writerow([split, count, _fmt(psnr_all), _fmt(psnr_vis)])
            movements = self.movement_means()
            if movements:
                writer.writerow([])
                writer.writerow(["movement", "count", "mean_psnr_all", "mean_psnr_vis"])
                for move, (psnr_all, psnr_vis, count) in movements.items():
                    writer.writerow([move, count, _fmt(psnr_all), _fmt(psnr_vis)])


def write_histogram_csv(path: Path, histogram: Histogram) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["bin_lo", "bin_hi", "count"])
        for lo, hi, count in histogram.rows():
            writer.writerow([f"{lo:.6g}", f"{hi:.6g}", count])


def _summary(rows: list[SampleScore]) -> tuple[float | None, float | None, int]:
    return _mean([r.psnr_all for r in rows]), _mean([r.psnr_vis for r in rows]), len(rows)


def _mean(values: list[float | None]) -> float | None:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.4f}"
