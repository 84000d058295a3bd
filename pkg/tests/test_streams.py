import pytest

from src.models.streams import DEFAULT_SEED, default_seed, make_stream


def test_default_seed(monkeypatch):
    monkeypatch.delenv("CSITLAB_SEED", raising=False)
    assert default_seed() == DEFAULT_SEED == 20080706
    monkeypatch.setenv("CSITLAB_SEED", "42")
    assert default_seed() == 42
    monkeypatch.setenv("CSITLAB_SEED", "-3")
    with pytest.raises(ValueError):
        default_seed()


def test_children_depend_only_on_parent_seed():
    first = [child.random() for child in make_stream(5).spawn(3)]
    second = [child.random() for child in make_stream(5).spawn(3)]
    assert first == second
    assert len(set(first)) == 3
