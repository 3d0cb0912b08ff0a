from pathlib import Path

import numpy as np
from loguru import logger

from viewsynth.core.metrics import (
    SPLITS,
    EvalReport,
    SampleScore,
    categorize_movement,
    norm_ratio_histogram,
    psnr,
    write_histogram_csv,
)
from viewsynth.core.model import DepthNet, ViewNet, ViewOutput, norm_ratio_map
from viewsynth.core.scenes import Dataset, Sample, quantize, sample_stem, write_ppm
from viewsynth.core.service.base_service import BaseService
from viewsynth.core.warp import upsample_mask


class EvaluationService(BaseService):
    """PSNR-all / PSNR-vis per split and renderer norm-ratio histograms over a dataset."""

    def __init__(self, model: ViewNet, dataset: Dataset, depth_model: DepthNet | None = None):
        super().__init__(model, depth_model)
        self.dataset = dataset

    def run_sample(self, sample: Sample) -> ViewOutput:
        image = sample.reference.transpose(2, 0, 1)
        depth = self.depth_for(image, sample.depth if self.depth_model is None else None)
        return self.run_model(image, depth, sample.entry.pose)

    def evaluate(self, out: Path) -> EvalReport:
        """Score every sample against its ground truth; predictions are saved as 8-bit images first."""
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        report = EvalReport()
        for sample in self.dataset:
            result = self.run_sample(sample)
            prediction = quantize((result.image.numpy()[0].astype(np.float64) + 1.0) / 2.0)
            write_ppm(out / f"{sample_stem(sample.index)}_pred.ppm", prediction.transpose(1, 2, 0))
            target = sample.target.transpose(2, 0, 1)
            visible = upsample_mask(1.0 - result.pair.mask[0])
            report.add(SampleScore(
                id=sample_stem(sample.index),
                bin=sample.entry.bin,
                psnr_all=psnr(prediction, target),
                psnr_vis=psnr(prediction, target, visible),
                movement=categorize_movement(sample.entry.pose),
            ))
        report.write_csv(out / "eval.csv")
        for split, (psnr_all, psnr_vis, count) in report.split_means().items():
            if count == 0:
                logger.warning(f"split {split} has no samples; reported absent")
            else:
                logger.info(f"{split}: {count} samples, PSNR-all {psnr_all:.2f} dB, PSNR-vis {_db(psnr_vis)}")
        for move, (psnr_all, psnr_vis, count) in report.movement_means().items():
            if count:
                logger.info(f"{move}: {count} samples, PSNR-all {psnr_all:.2f} dB, PSNR-vis {_db(psnr_vis)}")
        return report

    def analyze(self, out: Path) -> dict[str, Path]:
        """Norm-ratio histogram per split, written as ``hist_<split>.csv``."""
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        maps: dict[str, list[np.ndarray]] = {split: [] for split in SPLITS}
        for sample in self.dataset:
            if sample.entry.bin not in maps:
                continue
            result = self.run_sample(sample)
            maps[sample.entry.bin].append(norm_ratio_map(result.pair.explicit, result.pair.implicit)[0])
        written = {}
        for split, split_maps in maps.items():
            if not split_maps:
                logger.warning(f"split {split} has no samples; no histogram written")
                continue
            path = out / f"hist_{split}.csv"
            write_histogram_csv(path, norm_ratio_histogram(split_maps))
            written[split] = path
        return written


def _db(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f} dB"
