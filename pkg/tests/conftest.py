import os
import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from congestlab.graph import Graph  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=1, max_n=10, max_w=20, weighted=True):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    ws = [draw(st.integers(0 if weighted else 1, max_w if weighted else 1)) for _ in chosen]
    return Graph(n, [(u, v, w) for (u, v), w in zip(chosen, ws)])


def random_connected(n, rng, w_max=10, extra=1.0):
    edges = {}
    for v in range(1, n):
        edges[rng.randrange(v), v] = rng.randrange(w_max + 1)
    for _ in range(int(extra * n)):
        if n > 1:
            u, v = sorted(rng.sample(range(n), 2))
            edges[u, v] = rng.randrange(w_max + 1)
    return Graph(n, [(u, v, w) for (u, v), w in edges.items()])


@pytest.fixture
def rng():
    return random.Random(12345)


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion, then assert it."""
    store = request.config.stash.setdefault(_ACCEPTANCE, {})

    def report(num, ok, detail):
        store[num] = (bool(ok), detail)
        print(f"CRITERION {num}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, f"criterion {num}: {detail}"

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_ACCEPTANCE, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(store):
        ok, detail = store[num]
        terminalreporter.write_line(f"CRITERION {num:>2}: {'PASS' if ok else 'FAIL'} - {detail}")
