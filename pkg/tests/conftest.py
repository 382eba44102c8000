from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from ncg.graph import OwnedGraph  # noqa: E402

settings.register_profile(
    "ci", max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")

EXTENDED = os.environ.get("NCG_EXTENDED") == "1"


def pytest_collection_modifyitems(config, items):
    if EXTENDED:
        return
    skip = pytest.mark.skip(reason="extended run; set NCG_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@st.composite
def owned_graphs(draw, min_n=1, max_n=9, connected=False):
    """Random owned graph; with ``connected`` a random spanning tree comes first."""
    n = draw(st.integers(min_n, max_n))
    edges: dict[tuple[int, int], int] = {}
    if connected:
        for v in range(1, n):
            u = draw(st.integers(0, v - 1))
            edges[(u, v)] = draw(st.sampled_from((u, v)))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if pairs:
        extra = draw(st.lists(st.sampled_from(pairs), max_size=2 * n, unique=True))
        for u, v in extra:
            if (u, v) not in edges:
                edges[(u, v)] = draw(st.sampled_from((u, v)))
    return OwnedGraph(n, [(u, v, o) for (u, v), o in sorted(edges.items())])
