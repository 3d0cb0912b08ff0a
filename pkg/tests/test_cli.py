import csv
from pathlib import Path

import numpy as np
import pytest
from typer.testing import CliRunner

from viewsynth.core.checkpoint import config_tensors, model_tensors, save_checkpoint
from viewsynth.core.cli import app
from viewsynth.core.metrics import psnr
from viewsynth.core.model import DepthNet, DepthNetConfig
from viewsynth.core.scenes import MANIFEST, read_pgm, read_ppm

IDENTITY = "1 0 0 0 1 0 0 0 1 0 0 0"
SMOKE = Path(__file__).resolve().parent.parent / "configs" / "smoke.conf"

runner = CliRunner()


def invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


def eval_rows(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[1:rows.index([])]


def test_version():
    result = invoke("version")
    assert result.exit_code == 0
    assert "viewsynth version: 0.1.0" in result.output


class TestGenData:

    def test_unknown_bin_is_a_usage_error(self, tmp_path):
        result = invoke("gen-data", "--out", tmp_path, "--bins", "small,huge", "--size", 16)
        assert result.exit_code == 2
        assert "error[usage]" in result.output
        assert "--bins" in result.output
        assert not (tmp_path / MANIFEST).exists()

    def test_size_must_divide_by_sixteen(self, tmp_path):
        result = invoke("gen-data", "--out", tmp_path, "--size", 40)
        assert result.exit_code == 2
        assert "--size" in result.output

    def test_same_seed_same_manifest(self, tmp_path):
        for name in ("a", "b"):
            result = invoke("gen-data", "--out", tmp_path / name, "--count", 3, "--seed", 5, "--size", 16)
            assert result.exit_code == 0, result.output
        assert (tmp_path / "a" / MANIFEST).read_text() == (tmp_path / "b" / MANIFEST).read_text()
        assert len((tmp_path / "a" / MANIFEST).read_text().splitlines()) == 3


class TestTraining:

    def test_depth_source_required(self, tmp_path, dataset_dir):
        result = invoke("train-view", "--data", dataset_dir, "--out", tmp_path)
        assert result.exit_code == 2
        assert "--depth-ckpt" in result.output

    def test_both_depth_sources_rejected(self, tmp_path, dataset_dir):
        result = invoke("train-view", "--data", dataset_dir, "--out", tmp_path,
                        "--use-gt-depth", "--depth-ckpt", tmp_path / "d.nvsc")
        assert result.exit_code == 2

    def test_unknown_config_key(self, tmp_path, dataset_dir):
        config = tmp_path / "run.conf"
        config.write_text("channels = 8\nbogus = 1\n")
        result = invoke("train-view", "--config", config, "--data", dataset_dir,
                        "--out", tmp_path / "out", "--use-gt-depth")
        assert result.exit_code == 2
        assert "error[config]" in result.output
        assert "bogus" in result.output

    def test_missing_out_directory(self, dataset_dir):
        result = invoke("train-depth", "--data", dataset_dir)
        assert result.exit_code == 2
        assert "--out" in result.output

    def test_train_depth_from_config_file(self, tmp_path, dataset_dir):
        config = tmp_path / "run.conf"
        config.write_text(
            "# tiny depth run\n"
            f"data = {dataset_dir}\n"
            "image_size = 16\n"
            "widths = 4, 8\n"
            "steps = 1\n"
            "batch_size = 2\n"
        )
        result = invoke("train-depth", "--config", config, "--out", tmp_path / "out")
        assert result.exit_code == 0, result.output
        assert (tmp_path / "out" / "depth.nvsc").exists()
        assert (tmp_path / "out" / "depth_loss.csv").exists()


class TestRender:

    @pytest.fixture
    def sample(self, dataset_dir):
        return dataset_dir / "sample_00000_ref.ppm", dataset_dir / "sample_00000_depth.pfm"

    def test_identity_pose(self, tmp_path, view_checkpoint, sample):
        image, depth = sample
        result = invoke("render", "--ckpt", view_checkpoint, "--image", image, "--pose", IDENTITY,
                        "--depth", depth, "--out", tmp_path)
        assert result.exit_code == 0, result.output
        assert "forward passes: 1" in result.output
        np.testing.assert_array_equal(read_ppm(tmp_path / "warped.ppm"), read_ppm(image))
        assert read_ppm(tmp_path / "target.ppm").shape == (16, 16, 3)
        assert not read_pgm(tmp_path / "mask.pgm").any()

    @pytest.mark.parametrize("pose", ["1,2,3", "1 0 0 0 1 0 0 0 one 0 0 0", "2 0 0 0 1 0 0 0 1 0 0 0"])
    def test_malformed_pose(self, tmp_path, view_checkpoint, sample, pose):
        image, depth = sample
        result = invoke("render", "--ckpt", view_checkpoint, "--image", image, "--pose", pose,
                        "--depth", depth, "--out", tmp_path)
        assert result.exit_code == 2
        assert "error[usage]: --pose" in result.output

    def test_depth_predicted_from_checkpoint(self, tmp_path, view_checkpoint, sample):
        image, _ = sample
        config = DepthNetConfig(widths=(4, 8))
        depth_path = tmp_path / "depth.nvsc"
        model = DepthNet(config, seed=2)
        save_checkpoint(depth_path, {**model_tensors(model, DepthNet.name), **config_tensors(DepthNet.name, config)})
        result = invoke("render", "--ckpt", view_checkpoint, "--image", image, "--pose", IDENTITY,
                        "--depth-ckpt", depth_path, "--out", tmp_path / "out")
        assert result.exit_code == 0, result.output
        assert read_ppm(tmp_path / "out" / "target.ppm").shape == (16, 16, 3)

    def test_depth_source_required(self, tmp_path, view_checkpoint, sample):
        image, _ = sample
        result = invoke("render", "--ckpt", view_checkpoint, "--image", image, "--pose", IDENTITY,
                        "--out", tmp_path)
        assert result.exit_code == 2
        assert "--depth" in result.output

    def test_missing_checkpoint(self, tmp_path, sample):
        image, depth = sample
        result = invoke("render", "--ckpt", tmp_path / "absent.nvsc", "--image", image, "--pose", IDENTITY,
                        "--depth", depth, "--out", tmp_path)
        assert result.exit_code == 1
        assert "error[checkpoint]" in result.output


class TestEvaluation:

    def test_eval_scores_saved_predictions(self, tmp_path, view_checkpoint, dataset_dir):
        result = invoke("eval", "--ckpt", view_checkpoint, "--data", dataset_dir, "--out", tmp_path)
        assert result.exit_code == 0, result.output
        for split in ("small", "medium", "large"):
            assert f"{split}: n=" in result.output

        rows = eval_rows(tmp_path / "eval.csv")
        manifest = (dataset_dir / MANIFEST).read_text().splitlines()
        assert [r[1] for r in rows] == [line.split()[1].removeprefix("bin=") for line in manifest]
        for sample_id, _, psnr_all, _ in rows:
            prediction = read_ppm(tmp_path / f"{sample_id}_pred.ppm").transpose(2, 0, 1)
            target = read_ppm(dataset_dir / f"{sample_id}_gt.ppm").transpose(2, 0, 1)
            assert psnr(prediction, target) == pytest.approx(float(psnr_all), abs=1e-4)

    def test_eval_summarizes_camera_movement(self, tmp_path, view_checkpoint, dataset_dir):
        result = invoke("eval", "--ckpt", view_checkpoint, "--data", dataset_dir, "--out", tmp_path)
        assert result.exit_code == 0, result.output
        with open(tmp_path / "eval.csv") as fh:
            rows = list(csv.reader(fh))
        start = rows.index(["movement", "count", "mean_psnr_all", "mean_psnr_vis"])
        movements = rows[start + 1:]
        assert [r[0] for r in movements] == ["forward-small", "forward-large", "backward-small", "backward-large"]
        assert sum(int(r[1]) for r in movements) == len(eval_rows(tmp_path / "eval.csv"))

    def test_analyze_writes_histogram_per_split(self, tmp_path, view_checkpoint, dataset_dir):
        result = invoke("analyze", "--ckpt", view_checkpoint, "--data", dataset_dir, "--out", tmp_path)
        assert result.exit_code == 0, result.output
        bins = [line.split()[1].removeprefix("bin=") for line in (dataset_dir / MANIFEST).read_text().splitlines()]
        for split in ("small", "medium", "large"):
            with open(tmp_path / f"hist_{split}.csv") as fh:
                rows = list(csv.reader(fh))
            assert rows[0] == ["bin_lo", "bin_hi", "count"]
            assert sum(int(r[2]) for r in rows[1:]) == 16 * bins.count(split)


@pytest.mark.slow
def test_smoke_pipeline(tmp_path):
    config = SMOKE
    data, depth, view, report = (tmp_path / name for name in ("data", "depth", "view", "eval"))
    steps = [
        ("gen-data", "--out", data, "--count", 6, "--seed", 1),
        ("train-depth", "--config", config, "--data", data, "--out", depth),
        ("train-view", "--config", config, "--data", data, "--out", view, "--depth-ckpt", depth / "depth.nvsc"),
        ("eval", "--ckpt", view / "view.nvsc", "--data", data, "--out", report),
    ]
    for args in steps:
        result = invoke(*args)
        assert result.exit_code == 0, result.output
    assert len(eval_rows(report / "eval.csv")) == 6


def smoke_config(path, **values):
    """The smoke config with some keys replaced."""
    kept = [line for line in SMOKE.read_text().splitlines() if line.split("=")[0].strip() not in values]
    path.write_text("\n".join(kept + [f"{k} = {v}" for k, v in values.items()]) + "\n")
    return path


@pytest.mark.slow
def test_smoke_training_converges(tmp_path):
    data, view = tmp_path / "data", tmp_path / "view"
    config = smoke_config(tmp_path / "run.conf", steps=500, batch_size=4, checkpoint_every=100)
    for args in [
        ("gen-data", "--out", data, "--count", 60, "--seed", 0),
        ("train-view", "--config", config, "--data", data, "--out", view, "--use-gt-depth"),
    ]:
        result = invoke(*args)
        assert result.exit_code == 0, result.output

    with open(view / "view_loss.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 500
    assert all(np.isfinite(float(v)) for row in rows for v in row.values())
    total = np.array([float(r["total"]) for r in rows])
    first, last = total[:50].mean(), total[-50:].mean()
    assert first - last >= 0.4 * abs(first)

    scores = []
    for index in range(0, 60, 12):
        stem = f"sample_{index:05d}"
        out = tmp_path / "render" / stem
        result = invoke("render", "--ckpt", view / "view.nvsc", "--image", data / f"{stem}_ref.ppm",
                        "--depth", data / f"{stem}_depth.pfm", "--pose", IDENTITY, "--out", out)
        assert result.exit_code == 0, result.output
        prediction = read_ppm(out / "target.ppm").transpose(2, 0, 1)
        reference = read_ppm(data / f"{stem}_ref.ppm").transpose(2, 0, 1)
        scores.append(psnr(prediction, reference))
    assert np.mean(scores) >= 20.0


@pytest.mark.slow
def test_pipeline_is_deterministic(tmp_path):
    config = smoke_config(tmp_path / "run.conf", steps=50, checkpoint_every=25)
    outputs = []
    for run in ("a", "b"):
        data, view, report = (tmp_path / run / name for name in ("data", "view", "eval"))
        for args in [
            ("gen-data", "--out", data, "--count", 6, "--seed", 5),
            ("train-view", "--config", config, "--data", data, "--out", view, "--use-gt-depth"),
            ("eval", "--ckpt", view / "view.nvsc", "--data", data, "--out", report),
        ]:
            result = invoke(*args)
            assert result.exit_code == 0, result.output
        outputs.append([(view / "view_loss.csv").read_bytes(), (report / "eval.csv").read_bytes()])
    assert outputs[0] == outputs[1]
