import struct

import numpy as np
import pytest

from viewsynth.core.checkpoint import (
    MAGIC,
    CheckpointError,
    config_from_tensors,
    config_tensors,
    decode,
    encode,
    load_checkpoint,
    model_tensors,
    restore_model,
    save_checkpoint,
)
from viewsynth.core.model import DepthNet, DepthNetConfig, ViewNet, ViewNetConfig


@pytest.fixture
def tensors(rng):
    return {
        "a.weight": rng.standard_normal((3, 4)).astype(np.float32),
        "a.bias": rng.standard_normal(4).astype(np.float32),
        "scalar": np.array(7.0, dtype=np.float32),
        "empty": np.zeros((0, 2), dtype=np.float32),
        "ünïcode": np.ones((1, 1, 1), dtype=np.float32),
    }


def test_layout_of_header(tensors):
    data = encode(tensors)
    assert data[:4] == MAGIC
    assert struct.unpack("<II", data[4:12]) == (1, len(tensors))
    (length,) = struct.unpack("<H", data[12:14])
    assert data[14:14 + length] == b"a.weight"


def test_save_load_bit_identical(tmp_path, tensors):
    save_checkpoint(tmp_path / "c.nvsc", tensors)
    loaded = load_checkpoint(tmp_path / "c.nvsc")
    assert list(loaded) == list(tensors)
    for name, value in tensors.items():
        assert loaded[name].shape == value.shape
        assert loaded[name].tobytes() == value.tobytes()
    assert not (tmp_path / "c.nvsc.tmp").exists()


@pytest.mark.parametrize("cut", [3, 10, 20, 40])
def test_truncated_file_names_the_offset(tensors, cut):
    data = encode(tensors)
    with pytest.raises(CheckpointError) as info:
        decode(data[:cut])
    assert info.value.offset is not None
    assert info.value.offset <= cut


def test_foreign_magic_rejected(tensors):
    with pytest.raises(CheckpointError) as info:
        decode(b"NOPE" + encode(tensors)[4:])
    assert info.value.offset == 0


def test_unknown_version_rejected(tensors):
    data = bytearray(encode(tensors))
    data[4:8] = struct.pack("<I", 2)
    with pytest.raises(CheckpointError):
        decode(bytes(data))


def test_trailing_bytes_rejected(tensors):
    with pytest.raises(CheckpointError):
        decode(encode(tensors) + b"\0")


def test_missing_file(tmp_path):
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path / "absent.nvsc")


def test_config_round_trip():
    config = DepthNetConfig(widths=(4, 8, 16), min_depth=0.25, max_depth=10.0)
    restored = config_from_tensors(config_tensors("depthnet", config), "depthnet", DepthNetConfig)
    assert restored == config


def test_restore_model_rebuilds_architecture(tmp_path, rng):
    config = ViewNetConfig(blocks=1, render_blocks=1, channels=8, window=3, inducing=4, heads=4, pos_dim=8,
                           image_size=16, use_local=False)
    model = ViewNet(config, seed=5)
    save_checkpoint(tmp_path / "v.nvsc", {**model_tensors(model, "viewnet"), **config_tensors("viewnet", config)})
    restored = restore_model(load_checkpoint(tmp_path / "v.nvsc"))
    assert isinstance(restored, ViewNet)
    assert restored.config == config
    for (name, p), (_, q) in zip(model.named_parameters(), restored.named_parameters()):
        assert p.data.tobytes() == q.data.tobytes(), name


def test_restore_wrong_model_name(rng):
    model = DepthNet(DepthNetConfig(widths=(4, 8)))
    tensors = {**model_tensors(model, "depthnet"), **config_tensors("depthnet", model.config)}
    with pytest.raises(CheckpointError):
        restore_model(tensors, "viewnet")


def test_scalars_keep_rank_zero():
    loaded = decode(encode({"s": np.array(7.0, dtype=np.float32), "v": np.array([7.0], dtype=np.float32)}))
    assert loaded["s"].shape == ()
    assert loaded["v"].shape == (1,)


def test_depth_model_restored_from_file(tmp_path):
    config = DepthNetConfig(widths=(4, 8), min_depth=0.5, max_depth=12.0)
    model = DepthNet(config, seed=2)
    save_checkpoint(tmp_path / "d.nvsc", {**model_tensors(model, "depthnet"), **config_tensors("depthnet", config)})
    restored = restore_model(load_checkpoint(tmp_path / "d.nvsc"), "depthnet")
    assert isinstance(restored, DepthNet)
    assert restored.config == config


def test_invalid_stored_config_is_a_checkpoint_error():
    tensors = config_tensors("depthnet", DepthNetConfig(widths=(4, 8)))
    tensors["config.depthnet.min_depth"] = np.array(-1.0)
    with pytest.raises(CheckpointError, match="min_depth"):
        config_from_tensors(tensors, "depthnet", DepthNetConfig)
