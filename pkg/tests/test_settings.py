import pytest

from gaugeplastic.solver_settings import SolverSettings, get_settings


def test_defaults():
    settings = SolverSettings()
    assert settings.CLOSEST_POINT_SEEDS >= 4
    assert settings.W2INF_RATIO_LIMIT == 1.2
    assert settings.RIDGE_GAP_CELLS == 2.0


def test_environment_override(monkeypatch):
    monkeypatch.setenv("GAUGEPLASTIC_CHUNK_SIZE", "128")
    assert get_settings().CHUNK_SIZE == 128


def test_invalid_environment_value(monkeypatch):
    monkeypatch.setenv("GAUGEPLASTIC_CLOSEST_POINT_SEEDS", "2")
    with pytest.raises(ValueError):
        get_settings()
