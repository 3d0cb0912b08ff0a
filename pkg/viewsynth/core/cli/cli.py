from pathlib import Path
from typing import Optional

import typer
from loguru import logger

from viewsynth.core.bootstrap import bootstrap
from viewsynth.core.checkpoint import load_checkpoint, restore_model
from viewsynth.core.cli.errors import UsageError, handle_errors
from viewsynth.core.cli.parsing import parse_bins, parse_pose
from viewsynth.core.config import RunConfig
from viewsynth.core.model import DepthNet, ViewNet
from viewsynth.core.scenes import Dataset, build_dataset, read_pfm, read_ppm, write_pgm, write_ppm
from viewsynth.core.service import EvaluationService, RenderService
from viewsynth.core.training import DepthTrainer, ViewTrainer

app = typer.Typer(help="Single-image novel view synthesis: data, training, rendering and evaluation.")


@app.callback()
def main():
    bootstrap()


def load_config(config: Path | None, data: Path | None, out: Path | None) -> tuple[RunConfig, Path, Path]:
    run = RunConfig.from_file(config) if config is not None else RunConfig()
    data = data or (Path(run.data) if run.data else None)
    out = out or (Path(run.out) if run.out else None)
    if data is None:
        raise UsageError("--data", "no dataset given on the command line or in the config")
    if out is None:
        raise UsageError("--out", "no output directory given on the command line or in the config")
    return run, data, out


def load_view_model(ckpt: Path) -> ViewNet:
    return restore_model(load_checkpoint(ckpt), ViewNet.name)


def load_depth_model(ckpt: Path | None) -> DepthNet | None:
    if ckpt is None:
        return None
    return restore_model(load_checkpoint(ckpt), DepthNet.name).freeze()


@app.command("gen-data")
@handle_errors
def gen_data(
        out: Path = typer.Option(..., "--out", help="Directory to write samples and manifest.txt into"),
        count: int = typer.Option(30, "--count", help="Number of reference/target pairs"),
        bins: str = typer.Option("small,medium,large", "--bins", help="Comma-separated view-change bins, cycled"),
        seed: int = typer.Option(0, "--seed"),
        size: int = typer.Option(64, "--size", help="Image extent in pixels"),
):
    """Generate a synthetic dataset of labelled view pairs."""
    names = parse_bins(bins)
    if count < 1:
        raise UsageError("--count", f"must be >= 1, got {count}")
    if size < 16 or size % 16:
        raise UsageError("--size", f"must be a positive multiple of 16, got {size}")
    entries = build_dataset(out, count, names, seed, image_size=size)
    typer.echo(f"wrote {len(entries)} samples to {out}")


@app.command("train-depth")
@handle_errors
def train_depth(
        config: Optional[Path] = typer.Option(None, "--config", help="key = value run config"),
        data: Optional[Path] = typer.Option(None, "--data"),
        out: Optional[Path] = typer.Option(None, "--out"),
        resume: Optional[Path] = typer.Option(None, "--resume", help="Checkpoint to continue from"),
):
    """Self-supervised DepthNet training."""
    run, data, out = load_config(config, data, out)
    path = DepthTrainer(run, Dataset(data), out, resume=resume).run()
    typer.echo(f"checkpoint: {path}")


@app.command("train-view")
@handle_errors
def train_view(
        config: Optional[Path] = typer.Option(None, "--config", help="key = value run config"),
        data: Optional[Path] = typer.Option(None, "--data"),
        depth_ckpt: Optional[Path] = typer.Option(None, "--depth-ckpt", help="Frozen DepthNet checkpoint"),
        use_gt_depth: bool = typer.Option(False, "--use-gt-depth", help="Feed ground-truth depth instead of DepthNet"),
        out: Optional[Path] = typer.Option(None, "--out"),
        resume: Optional[Path] = typer.Option(None, "--resume", help="Checkpoint to continue from"),
):
    """Adversarial ViewNet training on top of a frozen depth source."""
    if use_gt_depth == (depth_ckpt is not None):
        raise UsageError("--depth-ckpt", "give exactly one of --depth-ckpt and --use-gt-depth")
    run, data, out = load_config(config, data, out)
    path = ViewTrainer(run, Dataset(data), out, depth_checkpoint=depth_ckpt, resume=resume).run()
    typer.echo(f"checkpoint: {path}")


@app.command()
@handle_errors
def render(
        ckpt: Path = typer.Option(..., "--ckpt", help="ViewNet checkpoint"),
        image: Path = typer.Option(..., "--image", help="Reference image (PPM)"),
        pose: str = typer.Option(..., "--pose", help="12 numbers: R row-major then t"),
        out: Path = typer.Option(..., "--out"),
        depth: Optional[Path] = typer.Option(None, "--depth", help="Reference depth (PFM)"),
        depth_ckpt: Optional[Path] = typer.Option(None, "--depth-ckpt", help="DepthNet used when --depth is absent"),
):
    """Render the target view of one image in a single forward pass."""
    relative = parse_pose(pose)
    if depth is None and depth_ckpt is None:
        raise UsageError("--depth", "give a depth map or a --depth-ckpt to predict one")
    service = RenderService(load_view_model(ckpt), load_depth_model(depth_ckpt))
    reference = read_ppm(image).transpose(2, 0, 1)
    result = service.render(reference, relative, read_pfm(depth) if depth is not None else None)
    out.mkdir(parents=True, exist_ok=True)
    write_ppm(out / "target.ppm", result.target.transpose(1, 2, 0))
    write_ppm(out / "warped.ppm", result.warped.transpose(1, 2, 0))
    write_pgm(out / "mask.pgm", result.mask)
    logger.info(f"rendered {image} into {out}")
    typer.echo(f"forward passes: {result.passes}")
    typer.echo(f"forward seconds: {result.seconds:.4f}")


@app.command("eval")
@handle_errors
def evaluate(
        ckpt: Path = typer.Option(..., "--ckpt", help="ViewNet checkpoint"),
        data: Path = typer.Option(..., "--data"),
        out: Path = typer.Option(..., "--out"),
        depth_ckpt: Optional[Path] = typer.Option(None, "--depth-ckpt", help="Predict depth instead of using ground truth"),
):
    """PSNR-all and PSNR-vis per view-change split."""
    service = EvaluationService(load_view_model(ckpt), Dataset(data), load_depth_model(depth_ckpt))
    report = service.evaluate(out)
    for split, (psnr_all, psnr_vis, count) in report.split_means().items():
        if count == 0:
            typer.echo(f"{split}: absent")
        else:
            typer.echo(f"{split}: n={count} psnr_all={_db(psnr_all)} psnr_vis={_db(psnr_vis)}")
    for move, (psnr_all, psnr_vis, count) in report.movement_means().items():
        if count:
            typer.echo(f"{move}: n={count} psnr_all={_db(psnr_all)} psnr_vis={_db(psnr_vis)}")


@app.command()
@handle_errors
def analyze(
        ckpt: Path = typer.Option(..., "--ckpt", help="ViewNet checkpoint"),
        data: Path = typer.Option(..., "--data"),
        out: Path = typer.Option(..., "--out"),
        depth_ckpt: Optional[Path] = typer.Option(None, "--depth-ckpt", help="Predict depth instead of using ground truth"),
):
    """Histograms of the explicit/implicit feature norm ratio per split."""
    service = EvaluationService(load_view_model(ckpt), Dataset(data), load_depth_model(depth_ckpt))
    for split, path in service.analyze(out).items():
        typer.echo(f"{split}: {path}")


@app.command()
def version():
    """Show the package version"""
    import viewsynth
    typer.echo(f"viewsynth version: {viewsynth.__version__}")


def _db(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}"


if __name__ == "__main__":
    app()
