import os

import numpy as np

DEFAULT_SEED = 20080706
SEED_ENV_VAR = "CSITLAB_SEED"


def default_seed():
    value = os.environ.get(SEED_ENV_VAR)
    if value is None or not value.strip():
        return DEFAULT_SEED
    seed = int(value)
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"{SEED_ENV_VAR} must be a 64-bit unsigned integer, got {value}")
    return seed


def make_stream(seed=None):
    if seed is None:
        seed = default_seed()
    return np.random.default_rng(seed)
