from pathlib import Path

import pytest

from qoe_retry.config import Settings, get_settings


def _clear(monkeypatch):
    for name in ("QOE_RETRY_LOG_LEVEL", "QOE_RETRY_OUT_DIR", "QOE_RETRY_WORKERS", "QOE_RETRY_DEFAULT_SEEDS"):
        monkeypatch.delenv(name, raising=False)


def test_defaults(monkeypatch):
    _clear(monkeypatch)

    settings = get_settings()

    assert settings.log_level == "INFO"
    assert settings.out_dir == Path("results")
    assert settings.workers == 1
    assert settings.default_seeds == 100


def test_reads_environment(monkeypatch, tmp_path):
    _clear(monkeypatch)
    monkeypatch.setenv("QOE_RETRY_LOG_LEVEL", "debug")
    monkeypatch.setenv("QOE_RETRY_OUT_DIR", str(tmp_path))
    monkeypatch.setenv("QOE_RETRY_WORKERS", "4")
    monkeypatch.setenv("QOE_RETRY_DEFAULT_SEEDS", "20")

    settings = get_settings()

    assert settings.log_level == "DEBUG"
    assert settings.out_dir == tmp_path
    assert settings.workers == 4
    assert settings.default_seeds == 20
    assert "Workers: 4" in str(settings)


@pytest.mark.parametrize(
    "name,value,message",
    [
        ("QOE_RETRY_LOG_LEVEL", "VERBOSE", "Invalid QOE_RETRY_LOG_LEVEL"),
        ("QOE_RETRY_WORKERS", "0", "Invalid QOE_RETRY_WORKERS"),
        ("QOE_RETRY_DEFAULT_SEEDS", "0", "Invalid QOE_RETRY_DEFAULT_SEEDS"),
    ],
)
def test_invalid_values(monkeypatch, name, value, message):
    _clear(monkeypatch)
    monkeypatch.setenv(name, value)

    with pytest.raises(ValueError, match=message):
        Settings()


def test_non_numeric_workers(monkeypatch):
    _clear(monkeypatch)
    monkeypatch.setenv("QOE_RETRY_WORKERS", "many")

    with pytest.raises(ValueError):
        get_settings()
