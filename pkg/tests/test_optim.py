import numpy as np
import pytest

from viewsynth.core.nn import Parameter
from viewsynth.core.optim import AdamW, OptimizerConfig, WarmupCosineSchedule


class TestSchedule:

    def test_warmup_then_cosine(self):
        config = OptimizerConfig(warmup_fraction=0.1, warmup_start=1e-6)
        schedule = WarmupCosineSchedule(100, 1e-3, config)
        assert schedule.lr_at(0) == pytest.approx(1e-6)
        assert schedule.lr_at(5) == pytest.approx(1e-6 + (1e-3 - 1e-6) * 0.5)
        assert schedule.lr_at(10) == pytest.approx(1e-3)
        assert schedule.lr_at(55) == pytest.approx(5e-4)
        assert schedule.lr_at(100) == pytest.approx(0.0, abs=1e-12)

    def test_warmup_is_at_least_one_step(self):
        schedule = WarmupCosineSchedule(10, 1e-3, OptimizerConfig(warmup_fraction=0.01))
        assert schedule.warmup == 1
        assert schedule.lr_at(1) == pytest.approx(1e-3)

    def test_monotone_decay_after_warmup(self):
        schedule = WarmupCosineSchedule(50, 1e-3)
        rates = [schedule.lr_at(s) for s in range(1, 50)]
        assert all(a >= b for a, b in zip(rates, rates[1:]))


class TestAdamW:

    def test_minimizes_a_quadratic(self):
        p = Parameter(np.array([3.0, -2.0]))
        optimizer = AdamW([("p", p)], OptimizerConfig(weight_decay=0.0))
        for step in range(300):
            optimizer.zero_grad()
            ((p - 1.0) ** 2).sum().backward()
            optimizer.step(0.1 * (1 - step / 300))
        np.testing.assert_allclose(p.data, [1.0, 1.0], atol=0.05)

    def test_weight_decay_is_decoupled(self):
        p = Parameter(np.array([2.0]))
        p.grad = np.zeros(1, dtype=p.dtype)
        AdamW([("p", p)], OptimizerConfig(weight_decay=0.5)).step(0.1)
        assert p.data[0] == pytest.approx(2.0 * (1 - 0.1 * 0.5))

    def test_frozen_and_gradless_parameters_are_skipped(self):
        frozen = Parameter(np.array([1.0]), requires_grad=False)
        frozen.grad = np.ones(1, dtype=frozen.dtype)
        idle = Parameter(np.array([1.0]))
        AdamW([("frozen", frozen), ("idle", idle)]).step(0.1)
        assert frozen.data[0] == 1.0
        assert idle.data[0] == 1.0

    def test_state_round_trip_continues_identically(self, rng):
        def run(optimizer, p, steps):
            for _ in range(steps):
                optimizer.zero_grad()
                (p * p * p).sum().backward()
                optimizer.step(0.01)

        start = rng.standard_normal(4)
        a = Parameter(start.copy())
        opt_a = AdamW([("w", a)])
        run(opt_a, a, 5)

        b = Parameter(start.copy())
        opt_b = AdamW([("w", b)])
        run(opt_b, b, 2)
        c = Parameter(b.data.copy())
        opt_c = AdamW([("w", c)]).load_state_dict(opt_b.state_dict())
        run(opt_c, c, 3)
        assert a.data.tobytes() == c.data.tobytes()
