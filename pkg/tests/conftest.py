import random

import pytest
from hypothesis import strategies as st

from posetdecomp.catalog import random_poset


@st.composite
def posets(draw, min_size=1, max_size=6):
    n = draw(st.integers(min_size, max_size))
    seed = draw(st.integers(0, 2**32 - 1))
    density = draw(st.sampled_from([0.2, 0.4, 0.6, 0.9]))
    return random_poset(n, random.Random(seed), density)


@pytest.fixture
def rng():
    return random.Random(1234)
