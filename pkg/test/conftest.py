import os

import numpy as np
import pytest

from bandlab.cayley import GENERATOR_MOVES


@pytest.fixture(scope="session")
def seed():
    return int(os.environ.get("BANDLAB_SEED", "20240601"))


@pytest.fixture(scope="session")
def scale():
    return float(os.environ.get("BANDLAB_TEST_SCALE", "1.0"))


@pytest.fixture
def rng(seed):
    return np.random.default_rng(seed)


class WordSampler:
    """Draws random words over a fixed alphabet."""

    def __init__(self, rng, letters=GENERATOR_MOVES):
        self.rng = rng
        self.letters = np.array(list(letters))

    def word(self, max_len, min_len=0):
        length = int(self.rng.integers(min_len, max_len + 1))
        return "".join(self.rng.choice(self.letters, size=length))

    def words(self, count, max_len, min_len=0):
        return [self.word(max_len, min_len) for _ in range(count)]


@pytest.fixture
def sampler(rng):
    return WordSampler(rng)


@pytest.fixture
def e_sampler(rng):
    return WordSampler(rng, letters="axXtT")
