import functools

import pytest
from hypothesis import settings

from qcoha.reps import count_variety

settings.register_profile("qcoha", max_examples=60, deadline=None)
settings.load_profile("qcoha")


@functools.lru_cache(maxsize=None)
def _cached(Q, v, p, kind):
    return count_variety(Q, v, p, kind)


@pytest.fixture(scope="session")
def counter():
    return _cached
