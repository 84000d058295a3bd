from pathlib import Path

import pytest

from src.models.fading import ChannelConfig, FadingModel
from src.models.streams import make_stream

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

GAUSSIAN_TEXT = """\
# gaussian-iid on both links
model_a.family = gaussian-iid
model_a.s = 1.0
model_a.eps = 0.1
model_h.family = gaussian-iid
model_h.s = 1.0
model_h.eps = 0.1
noise_var = 1.0
"""


@pytest.fixture
def stream():
    return make_stream(12345)


@pytest.fixture
def gaussian_config():
    model = FadingModel.gaussian_iid(1.0, 0.1)
    return ChannelConfig(model, model)


@pytest.fixture
def ring_config():
    model = FadingModel.ring_phase(1.0, 0.1)
    return ChannelConfig(model, model)


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "channel.cfg"
    path.write_text(GAUSSIAN_TEXT)
    return path
