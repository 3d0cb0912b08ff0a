import numpy as np
import pytest

from viewsynth.core.geometry import CameraModel, RelativePose
from viewsynth.core.tensor import Tensor, gradcheck
from viewsynth.core.warp import (
    COVERAGE_EPS,
    WarpError,
    mask_ratio,
    out_of_view_from_depth,
    out_of_view_mask,
    splat_entries,
    splat_forward,
    splat_weight,
    upsample_mask,
)


def test_identity_flow_reproduces_features(rng):
    features = rng.standard_normal((3, 5, 6))
    result = splat_forward(features, np.zeros((5, 6, 2)), np.zeros((5, 6)))
    np.testing.assert_allclose(result.warped.numpy(), features, atol=1e-6)
    np.testing.assert_allclose(result.weight, 1.0)
    assert mask_ratio(out_of_view_mask(result.weight)) == 0.0


def test_identity_is_independent_of_importance(rng):
    features = rng.standard_normal((2, 4, 4))
    result = splat_forward(features, np.zeros((4, 4, 2)), rng.standard_normal((4, 4)) * 5.0)
    np.testing.assert_allclose(result.warped.numpy(), features, atol=1e-6)


def test_integer_shift_moves_columns(rng):
    features = rng.standard_normal((2, 4, 5))
    flow = np.zeros((4, 5, 2))
    flow[..., 0] = 1.0
    result = splat_forward(features, flow, np.zeros((4, 5)))
    warped = result.warped.numpy()
    np.testing.assert_allclose(warped[:, :, 1:], features[:, :, :-1], atol=1e-6)
    assert np.all(warped[:, :, 0] == 0.0)
    mask = out_of_view_mask(result.weight)
    assert np.all(mask[:, 0] == 1.0)
    assert np.all(mask[:, 1:] == 0.0)
    assert mask_ratio(mask) == pytest.approx(0.2)


def test_importance_decides_collisions():
    features = np.array([[[0.0, 1.0]]])
    flow = np.zeros((1, 2, 2))
    flow[0, 0, 0] = 1.0
    result = splat_forward(features, flow, np.array([[1.0, 0.0]]))
    warped = result.warped.numpy()[0, 0]
    assert warped[0] == 0.0
    assert warped[1] == pytest.approx(1.0 / (np.exp(10.0) + 1.0), rel=1e-4)
    flipped = splat_forward(features, flow, np.array([[0.0, 1.0]])).warped.numpy()[0, 0]
    assert flipped[1] == pytest.approx(np.exp(10.0) / (np.exp(10.0) + 1.0), rel=1e-4)


def test_bilinear_mass_is_conserved_inside_the_frame(rng):
    flow = rng.uniform(-0.4, 0.4, (6, 6, 2))
    flow[[0, -1], :, :] = 0.0
    flow[:, [0, -1], :] = 0.0
    entries = splat_entries(flow)
    assert splat_weight(entries).sum() == pytest.approx(36.0)


def test_invalid_pixels_do_not_splat():
    valid = np.ones((3, 3), dtype=bool)
    valid[1, 1] = False
    flow = np.zeros((3, 3, 2))
    flow[1, 1] = np.nan
    result = splat_forward(np.ones((1, 3, 3)), flow, np.zeros((3, 3)), valid=valid)
    assert result.weight[1, 1] == 0.0
    assert result.warped.numpy()[0, 1, 1] == 0.0


def test_nan_flow_at_valid_pixel_raises():
    flow = np.zeros((2, 2, 2))
    flow[0, 0, 0] = np.nan
    with pytest.raises(WarpError):
        splat_forward(np.ones((1, 2, 2)), flow, np.zeros((2, 2)))


def test_mismatched_flow_raises():
    with pytest.raises(WarpError):
        splat_forward(np.ones((1, 3, 3)), np.zeros((2, 3, 2)), np.zeros((3, 3)))


@pytest.mark.parametrize("seed", range(20))
def test_splat_gradients(seed):
    rng = np.random.default_rng(seed)
    flow = rng.uniform(-1.3, 1.3, (8, 8, 2))
    assert gradcheck(
        lambda f, imp: splat_forward(f, flow, imp).warped,
        [rng.standard_normal((2, 8, 8)), rng.standard_normal((8, 8)) * 0.2],
    )


@pytest.mark.parametrize("seed", range(20))
def test_constant_field_stays_constant_where_covered(seed):
    rng = np.random.default_rng(seed)
    level = rng.uniform(-2.0, 2.0, (3, 1, 1))
    flow = rng.uniform(-3.0, 3.0, (8, 8, 2))
    result = splat_forward(np.broadcast_to(level, (3, 8, 8)).copy(), flow, rng.standard_normal((8, 8)) * 0.3)
    covered = result.weight >= COVERAGE_EPS
    assert covered.any()
    warped = result.warped.numpy()
    np.testing.assert_allclose(warped[:, covered], np.broadcast_to(level[:, 0], (3, int(covered.sum()))),
                               rtol=1e-5, atol=1e-6)
    assert np.all(warped[:, ~covered] == 0.0)


def test_importance_tensor_matches_array_path(rng):
    features = rng.standard_normal((2, 4, 4))
    flow = rng.uniform(-1.0, 1.0, (4, 4, 2))
    importance = rng.standard_normal((4, 4))
    as_array = splat_forward(features, flow, importance).warped.numpy()
    as_tensor = splat_forward(features, flow, Tensor(importance)).warped.numpy()
    np.testing.assert_allclose(as_array, as_tensor, atol=1e-5)


def test_out_of_view_mask_for_identity_is_empty():
    camera = CameraModel.default(16)
    mask = out_of_view_from_depth(camera, np.full((16, 16), 3.0), RelativePose.identity())
    assert mask.shape == (4, 4)
    assert not mask.any()


def test_sideways_motion_uncovers_an_edge():
    camera = CameraModel.default(32)
    mask = out_of_view_from_depth(camera, np.full((32, 32), 2.0), RelativePose(t=[1.0, 0.0, 0.0]))
    # quarter-res shift = 4 * 1 / 2 = 2 columns
    assert np.all(mask[:, :2] == 1.0)
    assert np.all(mask[:, 2:] == 0.0)


def brute_force_ratio(camera: CameraModel, depth: float, pose: RelativePose) -> float:
    mass = np.zeros((camera.height, camera.width))
    for y in range(camera.height):
        for x in range(camera.width):
            ray = np.array([(x - camera.cx) / camera.fx, (y - camera.cy) / camera.fy, 1.0])
            point = pose.R @ (depth * ray) + pose.t
            u = camera.fx * point[0] / point[2] + camera.cx
            v = camera.fy * point[1] / point[2] + camera.cy
            for ty in (int(np.floor(v)), int(np.floor(v)) + 1):
                for tx in (int(np.floor(u)), int(np.floor(u)) + 1):
                    if 0 <= ty < camera.height and 0 <= tx < camera.width:
                        mass[ty, tx] += max(0.0, 1 - abs(u - tx)) * max(0.0, 1 - abs(v - ty))
    return float(np.mean(mass < COVERAGE_EPS))


@pytest.mark.parametrize("size", [32, 64])
@pytest.mark.parametrize("depth", [1.0, 2.5, 6.0])
def test_half_width_translation_hides_half_the_view(size, depth):
    camera = CameraModel.default(size)
    small = camera.scaled_by(0.25)
    pose = RelativePose(t=[depth * small.width / (2 * small.fx), 0.0, 0.0])
    ratio = mask_ratio(out_of_view_from_depth(camera, np.full((size, size), depth), pose))
    expected = brute_force_ratio(small, depth, pose)
    assert ratio == pytest.approx(0.5, abs=0.02)
    assert expected == pytest.approx(0.5, abs=0.02)
    assert ratio == pytest.approx(expected)


def test_upsample_mask_nearest():
    mask = np.array([[1.0, 0.0], [0.0, 1.0]])
    big = upsample_mask(mask)
    assert big.shape == (8, 8)
    assert np.all(big[:4, :4] == 1.0)
    assert np.all(big[:4, 4:] == 0.0)
