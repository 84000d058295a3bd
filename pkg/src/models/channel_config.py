"""Plain-text channel configuration files.

One `key = value` per line, `#` starts a comment, blank lines are ignored:

    model_a.family = gaussian-iid
    model_a.s = 1.0
    model_a.eps = 0.1
    model_h.family = ring-phase
    model_h.rho = 1.0
    model_h.eps = 0.1
    noise_var = 1.0
    power = 1.0
"""
import logging

from src.models.errors import ConfigError, ConfigParseError, MissingConfigError
from src.models.fading import GAUSSIAN_IID, RING_PHASE, ChannelConfig, FadingModel

logger = logging.getLogger(__name__)

LINKS = ("model_a", "model_h")
MODEL_KEYS = ("family", "s", "eps", "rho")
ACCEPTED_KEYS = tuple(f"{link}.{key}" for link in LINKS for key in MODEL_KEYS) + ("noise_var", "power")
REQUIRED_PARAMS = {GAUSSIAN_IID: ("s", "eps"), RING_PHASE: ("rho", "eps")}
DEFAULT_NOISE_VAR = 1.0
DEFAULT_POWER = 1.0


def _parse_lines(lines, source):
    entries = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigParseError(f"{source}:{number}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in ACCEPTED_KEYS:
            raise ConfigParseError(
                f"{source}:{number}: unknown key {key!r}; accepted keys are {', '.join(ACCEPTED_KEYS)}"
            )
        if key in entries:
            raise ConfigParseError(f"{source}:{number}: duplicate key {key!r}")
        if not value:
            raise ConfigParseError(f"{source}:{number}: key {key!r} has no value")
        entries[key] = value
    return entries


def _number(entries, key, default=None):
    if key not in entries:
        if default is None:
            raise MissingConfigError(f"missing required key {key}")
        return default
    try:
        return float(entries[key])
    except ValueError:
        raise ConfigError(key, f"expected a number, got {entries[key]!r}") from None


def _build_model(entries, link):
    family_key = f"{link}.family"
    if family_key not in entries:
        raise MissingConfigError(f"missing required key {family_key}")
    family = entries[family_key]
    if family not in REQUIRED_PARAMS:
        raise ConfigError(family_key, f"unknown fading family {family!r}, expected one of "
                                      f"{', '.join(REQUIRED_PARAMS)}")

    params = {name: _number(entries, f"{link}.{name}") for name in REQUIRED_PARAMS[family]}
    unused = [f"{link}.{name}" for name in ("s", "rho") if name not in params and f"{link}.{name}" in entries]
    if unused:
        logger.warning("ignoring %s: not a parameter of the %s family", ", ".join(unused), family)
    try:
        return FadingModel(family, **params)
    except ConfigError as exc:
        raise ConfigError(f"{link}.{exc.key}", exc.detail) from None


def parse_config_text(text, source="<config>"):
    entries = _parse_lines(text.splitlines(), source)
    model_a = _build_model(entries, "model_a")
    model_h = _build_model(entries, "model_h")
    noise_var = _number(entries, "noise_var", DEFAULT_NOISE_VAR)
    power = _number(entries, "power", DEFAULT_POWER)
    return ChannelConfig(model_a, model_h, noise_var=noise_var, power=power)


def parse_config(path):
    try:
        with open(path, 'r') as file:
            text = file.read()
    except FileNotFoundError:
        raise MissingConfigError(f"config file not found: {path}") from None
    except OSError as exc:
        raise MissingConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text, str(path))


def format_config(config):
    lines = []
    for link, model in zip(LINKS, (config.model_a, config.model_h)):
        for key, value in model.get_representation().items():
            lines.append(f"{link}.{key} = {value!r}" if key != 'family' else f"{link}.{key} = {value}")
    lines.append(f"noise_var = {config.noise_var!r}")
    lines.append(f"power = {config.power!r}")
    return '\n'.join(lines) + '\n'


def save_config(config, path):
    with open(path, 'w') as file:
        file.write(format_config(config))
