import pytest
from hypothesis import settings
from mpmath import mp

settings.register_profile("qlambert", max_examples=25, deadline=None)
settings.load_profile("qlambert")


@pytest.fixture(autouse=True)
def _reset_mp():
    # oracles below compute at explicit precision; keep the global state clean between tests
    prec = mp.prec
    yield
    mp.prec = prec


def rel(a, b):
    with mp.workprec(600):
        return abs(mp.mpmathify(a) / mp.mpmathify(b) - 1)
