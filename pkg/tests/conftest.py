from __future__ import annotations

import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tmfres.ring import RingId, normalize

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def raw_terms(ring: RingId, max_terms: int = 4, x_max: int = 5, y_max: int = 3):
    y_hi = y_max if ring.has_y else 0
    term = st.tuples(st.integers(-12, 12), st.integers(-12, 12), st.integers(0, x_max),
                     st.integers(0, y_hi), st.integers(-3, 3))
    return st.lists(term, max_size=max_terms)


def elements(ring: RingId, **kw):
    return raw_terms(ring, **kw).map(lambda raw: normalize(raw, ring))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
