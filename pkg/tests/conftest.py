import numpy as np
import pytest

from viewsynth.core.checkpoint import config_tensors, model_tensors, save_checkpoint
from viewsynth.core.config import RunConfig
from viewsynth.core.geometry import CameraModel
from viewsynth.core.model import ViewNet
from viewsynth.core.scenes import Dataset, build_dataset

TINY_RUN = {
    "channels": 8,
    "blocks": 1,
    "render_blocks": 1,
    "window": 3,
    "inducing": 4,
    "heads": 4,
    "pos_dim": 8,
    "image_size": 16,
    "widths": [4, 8],
    "steps": 3,
    "batch_size": 2,
    "checkpoint_every": 2,
}


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def camera():
    return CameraModel.default(16)


@pytest.fixture(scope="session")
def dataset_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("data")
    build_dataset(root, count=4, bins=["small", "medium", "large"], seed=3, image_size=16, workers=1)
    return root


@pytest.fixture(scope="session")
def dataset(dataset_dir):
    return Dataset(dataset_dir)


@pytest.fixture
def run_config():
    return RunConfig.from_mapping(TINY_RUN)


@pytest.fixture(scope="session")
def view_checkpoint(tmp_path_factory):
    config = RunConfig.from_mapping(TINY_RUN).view
    path = tmp_path_factory.mktemp("ckpt") / "view.nvsc"
    model = ViewNet(config, seed=1)
    save_checkpoint(path, {**model_tensors(model, ViewNet.name), **config_tensors(ViewNet.name, config)})
    return path


@pytest.fixture
def randomized():
    """Redraws every parameter of a module and casts it to 64-bit, so zero-initialised branches carry gradient."""
    def redraw(module, rng, scale=0.3):
        for p in module.parameters():
            p.data = rng.normal(0.0, scale, p.shape)
        return module.to(np.float64)
    return redraw
