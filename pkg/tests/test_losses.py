import numpy as np
import pytest

from viewsynth.core.geometry import CameraModel, RelativePose
from viewsynth.core.losses import (
    DiscriminatorPair,
    LossWeights,
    MissingPoseError,
    PerceptualExtractor,
    adversarial_losses,
    depth_loss,
    hinge_d_loss,
    hinge_g_loss,
    l1_and_perceptual,
    l1_loss,
    perceptual_loss,
    photometric_error,
    random_crop_box,
    smoothness_loss,
    ssim,
    to_unit,
    total_view_loss,
    ts_loss,
    warp_to_reference,
    weighted_sum,
)
from viewsynth.core.tensor import Tensor, gradcheck, precision
from viewsynth.core.tensor import functional as F

SEEDS = range(20)


def grad_of(t: Tensor) -> np.ndarray:
    return np.zeros_like(t.data) if t.grad is None else t.grad


def test_to_unit_maps_range():
    np.testing.assert_allclose(to_unit(np.array([-1.0, 0.0, 1.0])).numpy(), [0.0, 0.5, 1.0])


class TestImageLosses:

    def test_ssim_of_identical_images_is_one(self, rng):
        image = rng.uniform(0, 1, (1, 3, 8, 8))
        assert ssim(image, image).item() == pytest.approx(1.0, abs=1e-5)

    def test_ssim_drops_with_noise(self, rng):
        image = rng.uniform(0, 1, (1, 3, 8, 8))
        noisy = np.clip(image + rng.normal(0, 0.2, image.shape), 0, 1)
        assert ssim(image, noisy).item() < 0.9

    def test_photometric_error_is_zero_for_equal_images(self, rng):
        image = rng.uniform(0, 1, (2, 3, 6, 6))
        error = photometric_error(image, image, alpha=0.85).numpy()
        assert error.shape == (2, 6, 6)
        np.testing.assert_allclose(error, 0.0, atol=1e-5)


class TestDepthLoss:

    camera = CameraModel.default(16)
    # shift = f * tx / d = 8 * 0.25 / 2 = 1 pixel
    pose = RelativePose(t=[0.25, 0.0, 0.0])

    def shifted_pair(self, rng):
        reference = rng.uniform(0, 1, (1, 3, 16, 16))
        neighbor = np.empty_like(reference)
        neighbor[..., 1:] = reference[..., :-1]
        neighbor[..., 0] = reference[..., 0]
        return reference, neighbor

    def test_identity_warp_returns_neighbor(self, rng):
        neighbor = rng.uniform(0, 1, (1, 3, 16, 16))
        with precision(np.float64):
            out = warp_to_reference(neighbor, Tensor(np.full((1, 16, 16), 3.0)), self.camera,
                                    [RelativePose.identity()])
        np.testing.assert_allclose(out.numpy(), neighbor, atol=1e-9)

    def test_true_depth_aligns_neighbor(self, rng):
        reference, neighbor = self.shifted_pair(rng)
        with precision(np.float64):
            out = warp_to_reference(neighbor, Tensor(np.full((1, 16, 16), 2.0)), self.camera, [self.pose])
        np.testing.assert_allclose(out.numpy()[..., :-1], reference[..., :-1], atol=1e-9)

    def test_true_depth_scores_better_than_wrong_depth(self, rng):
        reference, neighbor = self.shifted_pair(rng)
        losses = {}
        for d in (2.0, 4.0):
            losses[d] = depth_loss(reference, [neighbor], [[self.pose]], Tensor(np.full((1, 16, 16), d)),
                                   self.camera).item()
        assert losses[2.0] < losses[4.0]

    def test_gradient_reaches_depth(self, rng):
        reference, neighbor = self.shifted_pair(rng)
        depth = Tensor(np.full((1, 16, 16), 3.0), requires_grad=True)
        depth_loss(reference, [neighbor], [[self.pose]], depth, self.camera).backward()
        assert depth.grad is not None and np.any(depth.grad)

    def test_missing_pose_rejected(self, rng):
        reference, neighbor = self.shifted_pair(rng)
        depth = Tensor(np.full((1, 16, 16), 2.0))
        with pytest.raises(MissingPoseError):
            depth_loss(reference, [neighbor], [], depth, self.camera)
        with pytest.raises(MissingPoseError):
            depth_loss(reference, [neighbor], [[]], depth, self.camera)
        with pytest.raises(MissingPoseError):
            depth_loss(reference, [], [], depth, self.camera)

    def test_smoothness_is_zero_for_constant_depth(self, rng):
        image = rng.uniform(0, 1, (1, 3, 8, 8))
        assert smoothness_loss(Tensor(np.full((1, 8, 8), 5.0)), image).item() == pytest.approx(0.0, abs=1e-7)


class TestTransformationSimilarity:

    def maps(self, rng):
        explicit = Tensor(rng.standard_normal((1, 4, 3, 3)), requires_grad=True)
        implicit = Tensor(rng.standard_normal((1, 4, 3, 3)), requires_grad=True)
        return explicit, implicit

    def test_identical_maps_inside_view(self, rng):
        same = rng.standard_normal((1, 4, 3, 3))
        result = ts_loss(same, same, np.zeros((1, 3, 3)))
        assert result.inside.item() == pytest.approx(-1.0, abs=1e-5)
        assert result.outside.item() == 0.0
        assert result.total.item() == pytest.approx(-1.0, abs=1e-5)

    def test_detach_gates_gradients_by_region(self, rng):
        explicit, implicit = self.maps(rng)
        ts_loss(explicit, implicit, np.zeros((1, 3, 3))).total.backward()
        assert explicit.grad is None
        assert np.any(implicit.grad)

        explicit, implicit = self.maps(rng)
        ts_loss(explicit, implicit, np.ones((1, 3, 3))).total.backward()
        assert np.any(explicit.grad)
        assert implicit.grad is None

    def test_without_detach_both_sides_learn(self, rng):
        explicit, implicit = self.maps(rng)
        weights = LossWeights(detach=False)
        ts_loss(explicit, implicit, np.zeros((1, 3, 3)), weights).total.backward()
        assert np.any(explicit.grad) and np.any(implicit.grad)

    def test_region_weights(self, rng):
        explicit, implicit = self.maps(rng)
        mask = np.zeros((1, 3, 3))
        mask[0, 0] = 1.0
        weights = LossWeights(lambda_in=2.0, lambda_out=0.5)
        result = ts_loss(explicit, implicit, mask, weights)
        expected = 2.0 * result.inside.item() + 0.5 * result.outside.item()
        assert result.total.item() == pytest.approx(expected, rel=1e-5)


class TestPerceptualAndAdversarial:

    def test_perceptual_extractor_is_frozen_and_seeded(self, rng):
        a, b = PerceptualExtractor(), PerceptualExtractor()
        assert a.trainable_parameters() == []
        np.testing.assert_array_equal(a.layers[0].weight.data, b.layers[0].weight.data)

    def test_reconstruction_losses_vanish_on_equal_images(self, rng):
        image = rng.uniform(0, 1, (1, 3, 16, 16))
        extractor = PerceptualExtractor()
        assert l1_loss(image, image).item() == 0.0
        assert perceptual_loss(image, image, extractor).item() == 0.0
        other = rng.uniform(0, 1, (1, 3, 16, 16))
        combined = l1_and_perceptual(image, other, extractor, lambda_c=2.0).item()
        expected = l1_loss(image, other).item() + 2.0 * perceptual_loss(image, other, extractor).item()
        assert combined == pytest.approx(expected, rel=1e-5)

    def test_hinge_losses(self):
        assert hinge_d_loss(Tensor([2.0]), Tensor([-2.0])).item() == 0.0
        assert hinge_d_loss(Tensor([0.0]), Tensor([0.0])).item() == pytest.approx(2.0)
        assert hinge_g_loss(Tensor([0.5, 1.5])).item() == pytest.approx(-1.0)

    def test_crop_box_fits(self, rng):
        for _ in range(20):
            y, x, h, w = random_crop_box((16, 12), rng)
            assert (h, w) == (8, 6)
            assert 0 <= y <= 8 and 0 <= x <= 6

    def test_discriminator_loss_does_not_reach_generator(self, rng):
        fake = Tensor(rng.uniform(0, 1, (1, 3, 16, 16)), requires_grad=True)
        losses = adversarial_losses(fake, rng.uniform(0, 1, (1, 3, 16, 16)), DiscriminatorPair(seed=0), rng)
        losses.discriminator.backward()
        assert fake.grad is None
        losses.generator.backward()
        assert np.any(fake.grad)


def test_total_view_loss_combines_weighted_terms():
    weights = LossWeights(lambda_c=2.0, lambda_adv=0.5)
    loss = total_view_loss(Tensor(1.0), Tensor(3.0), Tensor(-4.0), Tensor(0.25), weights)
    assert loss.total.item() == pytest.approx(1.0 + 6.0 - 2.0 + 0.25)
    assert weighted_sum(loss.components, weights) == pytest.approx(loss.total.item())
    assert set(loss.components) == {"l1", "perceptual", "adv_g", "ts"}


class TestTransformationSimilarityGating:

    def triple(self, seed):
        rng = np.random.default_rng(seed)
        mask = (rng.uniform(size=(2, 3, 3)) < 0.5).astype(np.float64)
        mask[0, 0, :2] = [0.0, 1.0]
        explicit = Tensor(rng.standard_normal((2, 4, 3, 3)), requires_grad=True)
        implicit = Tensor(rng.standard_normal((2, 4, 3, 3)), requires_grad=True)
        return explicit, implicit, mask

    @pytest.mark.parametrize("seed", range(50))
    def test_detach_zeroes_the_imitated_side(self, seed):
        explicit, implicit, mask = self.triple(seed)
        ts_loss(explicit, implicit, mask).inside.backward()
        assert np.all(grad_of(explicit) == 0.0)
        assert np.any(grad_of(implicit) != 0.0)

        explicit, implicit, mask = self.triple(seed)
        ts_loss(explicit, implicit, mask).outside.backward()
        assert np.all(grad_of(implicit) == 0.0)
        assert np.any(grad_of(explicit) != 0.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_ablations_change_the_gradient_flow(self, seed):
        grads = {}
        for name, weights in {
            "no_ts": LossWeights(lambda_in=0.0, lambda_out=0.0),
            "no_detach": LossWeights(detach=False),
            "default": LossWeights(),
        }.items():
            explicit, implicit, mask = self.triple(seed)
            ts_loss(explicit, implicit, mask, weights).total.backward()
            grads[name] = (grad_of(explicit), grad_of(implicit))
        assert all(np.all(g == 0.0) for g in grads["no_ts"])
        # with detach, the explicit map only learns outside the view
        inside = np.broadcast_to(self.triple(seed)[2][:, None] == 0.0, grads["default"][0].shape)
        assert np.all(grads["default"][0][inside] == 0.0)
        assert np.any(grads["no_detach"][0][inside] != 0.0)
        assert not np.allclose(grads["default"][1], grads["no_detach"][1])


class TestLossGradients:

    @pytest.mark.parametrize("seed", SEEDS)
    def test_ssim(self, seed):
        rng = np.random.default_rng(seed)
        assert gradcheck(lambda a, b: ssim(a, b), [rng.uniform(0, 1, (1, 2, 6, 6)), rng.uniform(0, 1, (1, 2, 6, 6))])

    @pytest.mark.parametrize("seed", SEEDS)
    def test_photometric_error(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.uniform(0.3, 0.7, (1, 3, 5, 5))
        # keep |a - b| away from zero
        b = a + rng.choice([-1.0, 1.0], a.shape) * rng.uniform(0.05, 0.2, a.shape)
        assert gradcheck(lambda x, y: photometric_error(x, y, alpha=0.85), [a, b])

    @pytest.mark.parametrize("seed", SEEDS)
    def test_ts_loss(self, seed):
        rng = np.random.default_rng(seed)
        mask = (rng.uniform(size=(2, 3, 3)) < 0.5).astype(np.float64)
        mask[0, 0, :2] = [0.0, 1.0]
        weights = LossWeights(detach=False, lambda_in=1.5, lambda_out=0.5)
        assert gradcheck(
            lambda e, i: ts_loss(e, i, mask, weights).total,
            [rng.standard_normal((2, 4, 3, 3)), rng.standard_normal((2, 4, 3, 3))],
        )

    @pytest.mark.parametrize("seed", SEEDS)
    def test_smoothness(self, seed):
        rng = np.random.default_rng(seed)
        ys, xs = np.mgrid[0:6, 0:6]
        # strictly increasing along both axes keeps every difference away from the |.| kink
        depth = (2.0 + 0.05 * xs + 0.15 * ys + rng.uniform(0.0, 0.01, (6, 6)))[None]
        image = rng.uniform(0, 1, (1, 3, 6, 6))
        assert gradcheck(lambda d: smoothness_loss(d, image), [depth])

    @pytest.mark.parametrize("seed", SEEDS)
    def test_depth_loss(self, seed):
        rng = np.random.default_rng(seed)
        camera = CameraModel.default(16)
        # 2 / d pixels of disparity: 0.8 at d = 2.5, never an integer for d in [2.45, 2.55]
        pose = RelativePose(t=[0.25, 0.0, 0.0])
        stripes = 0.1 + 0.8 * (np.arange(16) % 2)
        neighbor = stripes + rng.uniform(0.0, 0.05, (1, 3, 16, 16))
        with precision(np.float64):
            aligned = warp_to_reference(neighbor, Tensor(np.full((1, 16, 16), 2.5)), camera, [pose]).numpy()
        reference = aligned + 0.03
        weights = LossWeights(lambda_sm=0.0)
        assert gradcheck(
            lambda d: depth_loss(reference, [neighbor], [[pose]], d, camera, weights),
            [rng.uniform(2.45, 2.55, (1, 16, 16))],
        )

    @pytest.mark.parametrize("seed", SEEDS)
    def test_discriminators(self, seed):
        rng = np.random.default_rng(seed)
        pair = DiscriminatorPair(seed=seed).to(np.float64)
        box = random_crop_box((16, 16), rng)
        assert gradcheck(
            lambda image: F.concat([s.reshape(-1) for s in pair(image, box)], axis=0),
            [rng.uniform(0, 1, (1, 3, 16, 16))],
            params=pair.parameters(),
            max_coords=3,
        )

    @pytest.mark.parametrize("seed", SEEDS)
    def test_generator_hinge(self, seed):
        rng = np.random.default_rng(seed)
        pair = DiscriminatorPair(seed=seed).to(np.float64)
        real = rng.uniform(0, 1, (1, 3, 16, 16))
        assert gradcheck(
            lambda fake: adversarial_losses(fake, real, pair, np.random.default_rng(seed)).generator,
            [rng.uniform(0, 1, (1, 3, 16, 16))],
            max_coords=8,
        )
