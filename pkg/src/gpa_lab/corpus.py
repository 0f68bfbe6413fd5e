"""Small named graphs used by the tests, scripts and the CLI."""

from __future__ import annotations

from .graph import BipartiteGraph

_CORPUS = {
    "A2": (("u",), ("v",), (("u", "v"),)),
    "A3": (("u1", "u2"), ("v",), (("u1", "v"), ("u2", "v"))),
    "A4": (("u1", "u2"), ("v1", "v2"), (("u1", "v1"), ("u2", "v1"), ("u2", "v2"))),
    "A5": (("u1", "u2", "u3"), ("v1", "v2"), (("u1", "v1"), ("u2", "v1"), ("u2", "v2"), ("u3", "v2"))),
    "D4": (("u",), ("v1", "v2", "v3"), (("u", "v1"), ("u", "v2"), ("u", "v3"))),
    "multi": (("u1", "u2"), ("v1", "v2"), (("u1", "v1"), ("u1", "v1"), ("u2", "v1"), ("u2", "v2"))),
}

NAMES = tuple(_CORPUS)


def corpus_graph(name: str) -> BipartiteGraph:
    v_plus, v_minus, edges = _CORPUS[name]
    return BipartiteGraph(v_plus, v_minus, edges)


def corpus() -> dict[str, BipartiteGraph]:
    return {name: corpus_graph(name) for name in NAMES}
