import pytest

from viewsynth.core.bootstrap import bootstrap
from viewsynth.core.registry import Registry, RuntimeSettings
from viewsynth.core.utils.timing import TIMINGS, timed


@pytest.fixture
def fresh_registry():
    Registry.reset()
    yield
    Registry.reset()


def test_settings_come_from_environment(monkeypatch, fresh_registry):
    monkeypatch.setenv("NVS_THREADS", "3")
    monkeypatch.setenv("NVS_LOG_LEVEL", "debug")
    settings = bootstrap()
    assert settings.threads == 3
    assert settings.log_level == "DEBUG"
    assert RuntimeSettings.current() is settings


def test_thread_count_is_at_least_one(monkeypatch, fresh_registry):
    monkeypatch.setenv("NVS_THREADS", "0")
    assert RuntimeSettings.from_env().threads == 1


def test_unregistered_settings_fall_back_to_environment(monkeypatch, fresh_registry):
    monkeypatch.setenv("NVS_THREADS", "2")
    assert Registry().get(RuntimeSettings) is None
    assert RuntimeSettings.current().threads == 2


def test_timed_counts_calls():
    @timed("test.square")
    def square(x):
        return x * x

    TIMINGS.reset("test.square")
    assert [square(i) for i in range(3)] == [0, 1, 4]
    assert TIMINGS.calls["test.square"] == 3
    assert TIMINGS.last["test.square"] >= 0.0
