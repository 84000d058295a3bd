import pytest

from src.models.channel_config import (
    ACCEPTED_KEYS,
    format_config,
    parse_config,
    parse_config_text,
    save_config,
)
from src.models.errors import ConfigError, ConfigParseError, MissingConfigError
from src.models.fading import ChannelConfig, FadingModel

from tests.conftest import CONFIG_DIR, GAUSSIAN_TEXT


def test_minimal_file_round_trip(config_file, gaussian_config):
    assert parse_config(config_file) == gaussian_config


def test_save_then_parse(tmp_path):
    config = ChannelConfig(FadingModel.ring_phase(1.5, 0.2), FadingModel.gaussian_iid(0.7, 0.05),
                           noise_var=0.5, power=3.0)
    path = tmp_path / "saved.cfg"
    save_config(config, path)
    assert parse_config(path) == config
    assert "model_a.rho = 1.5" in format_config(config)


def test_zero_eps_names_the_key():
    text = GAUSSIAN_TEXT.replace("model_a.eps = 0.1", "model_a.eps = 0")
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    assert exc.value.key == "model_a.eps"
    assert "finite" in str(exc.value)


def test_unknown_key_lists_accepted_keys():
    with pytest.raises(ConfigParseError) as exc:
        parse_config_text(GAUSSIAN_TEXT + "model_a.mean = 0\n")
    message = str(exc.value)
    assert "model_a.mean" in message
    assert all(key in message for key in ACCEPTED_KEYS)


@pytest.mark.parametrize("extra", ["noise_var = 2\n", "power\n", "power =\n"])
def test_malformed_lines(extra):
    with pytest.raises(ConfigParseError):
        parse_config_text(GAUSSIAN_TEXT + extra)


def test_missing_family():
    text = GAUSSIAN_TEXT.replace("model_h.family = gaussian-iid\n", "")
    with pytest.raises(MissingConfigError):
        parse_config_text(text)


def test_non_numeric_value():
    with pytest.raises(ConfigError) as exc:
        parse_config_text(GAUSSIAN_TEXT.replace("model_h.s = 1.0", "model_h.s = one"))
    assert exc.value.key == "model_h.s"


def test_missing_file(tmp_path):
    with pytest.raises(MissingConfigError):
        parse_config(tmp_path / "absent.cfg")


def test_defaults_for_noise_and_power(config_file):
    config = parse_config(config_file)
    assert config.noise_var == 1.0
    assert config.power == 1.0


@pytest.mark.parametrize("name, family", [("gaussian_iid.cfg", "gaussian-iid"), ("ring_phase.cfg", "ring-phase")])
def test_shipped_configs_parse(name, family):
    config = parse_config(CONFIG_DIR / name)
    assert config.model_a.family == family
    assert config.model_h.family == family
