"""Finite connected bipartite multigraphs, their alternating paths and loops.

Vertex order (``v_plus`` then ``v_minus``) and edge order are fixed when the
graph is built; every basis used downstream is derived from them.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import (
    Disconnected,
    DuplicateVertexName,
    EmptyGraph,
    MalformedInput,
    NotBipartite,
    UnknownVertex,
)

PLUS = "+"
MINUS = "-"

# A basis label is a word of (edge index, direction) tokens; direction +1
# means the edge is walked from its + end to its - end.
Token = tuple[int, int]
Label = tuple[Token, ...]


def other_shading(shading: str) -> str:
    return MINUS if shading == PLUS else PLUS


def check_shading(shading: str) -> str:
    if shading not in (PLUS, MINUS):
        raise MalformedInput(f"shading must be '+' or '-', got {shading!r}")
    return shading


@dataclass(frozen=True)
class BipartiteGraph:
    v_plus: tuple[str, ...]
    v_minus: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "v_plus", tuple(self.v_plus))
        object.__setattr__(self, "v_minus", tuple(self.v_minus))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if not self.v_plus or not self.v_minus:
            raise EmptyGraph("both vertex classes must be nonempty")
        names = self.v_plus + self.v_minus
        seen: set[str] = set()
        for name in names:
            if not isinstance(name, str):
                raise MalformedInput(f"vertex names must be strings, got {name!r}")
            if name in seen:
                raise DuplicateVertexName(f"vertex {name!r} appears more than once")
            seen.add(name)
        plus, minus = set(self.v_plus), set(self.v_minus)
        for k, (s, t) in enumerate(self.edges):
            for x in (s, t):
                if x not in seen:
                    raise UnknownVertex(f"edge {k} uses unknown vertex {x!r}")
            if (s in plus) == (t in plus):
                raise NotBipartite(f"edge {k} joins {s!r} and {t!r} in the same class")
            if s in minus:
                raise MalformedInput(f"edge {k} must be listed as [+vertex, -vertex]")
        if not self.edges:
            raise Disconnected("graph has no edges")
        if not self._connected():
            raise Disconnected("underlying undirected graph is not connected")

    def _connected(self) -> bool:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for s, t in self.edges:
            adj[s].add(t)
            adj[t].add(s)
        start = self.vertices[0]
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x] - seen:
                seen.add(y)
                queue.append(y)
        return len(seen) == len(self.vertices)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.v_plus + self.v_minus

    @property
    def r(self) -> int:
        """Number of vertex classes, i.e. simple summands of the unit."""
        return len(self.v_plus) + len(self.v_minus)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def index(self, vertex: str) -> int:
        try:
            return self._index[vertex]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {vertex!r}") from None

    def shading(self, vertex: str) -> str:
        return PLUS if self.index(vertex) < len(self.v_plus) else MINUS

    def vertices_of(self, shading: str) -> tuple[str, ...]:
        return self.v_plus if check_shading(shading) == PLUS else self.v_minus

    def source(self, e: int) -> str:
        return self.edges[e][0]

    def target(self, e: int) -> str:
        return self.edges[e][1]

    @cached_property
    def _incident(self) -> dict[str, tuple[int, ...]]:
        inc: dict[str, list[int]] = {v: [] for v in self.vertices}
        for k, (s, t) in enumerate(self.edges):
            inc[s].append(k)
            inc[t].append(k)
        return {v: tuple(ks) for v, ks in inc.items()}

    def incident(self, vertex: str) -> tuple[int, ...]:
        """Edge indices touching ``vertex``, in increasing order."""
        self.index(vertex)
        return self._incident[vertex]

    def across(self, e: int, vertex: str) -> str:
        s, t = self.edges[e]
        return t if vertex == s else s

    def to_dict(self) -> dict:
        return {
            "v_plus": list(self.v_plus),
            "v_minus": list(self.v_minus),
            "edges": [list(e) for e in self.edges],
        }


def parse_graph(text: str) -> BipartiteGraph:
    """Parse a graph document ``{"v_plus": [...], "v_minus": [...], "edges": [[u, v], ...]}``.

    Edges may be written in either orientation; they are stored as
    ``(+vertex, -vertex)``.
    """
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedInput(f"not a JSON document: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedInput("graph document must be a JSON object")
    missing = {"v_plus", "v_minus", "edges"} - set(doc)
    if missing:
        raise MalformedInput(f"missing keys: {sorted(missing)}")
    v_plus, v_minus, edges = doc["v_plus"], doc["v_minus"], doc["edges"]
    for key, val in (("v_plus", v_plus), ("v_minus", v_minus), ("edges", edges)):
        if not isinstance(val, list):
            raise MalformedInput(f"{key} must be a list")
    if not v_plus and not v_minus:
        raise EmptyGraph("graph has no vertices")
    plus = set(v_plus)
    oriented = []
    for k, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise MalformedInput(f"edge {k} must be a pair of vertex names")
        a, b = e
        # accept [-vertex, +vertex]; same-class edges are left for validation
        oriented.append((b, a) if (b in plus and a not in plus) else (a, b))
    return BipartiteGraph(tuple(v_plus), tuple(v_minus), tuple(oriented))


def serialize_graph(g: BipartiteGraph) -> str:
    return json.dumps(g.to_dict())


def load_graph(path) -> BipartiteGraph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read graph file {path}: {exc}") from None
    return parse_graph(text)


def adjacency_matrix(g: BipartiteGraph) -> np.ndarray:
    """Integer matrix of shape |V+| x |V-| counting edges between each pair."""
    D = np.zeros((len(g.v_plus), len(g.v_minus)), dtype=np.int64)
    n_plus = len(g.v_plus)
    for s, t in g.edges:
        D[g.index(s), g.index(t) - n_plus] += 1
    return D


@dataclass(frozen=True, order=True)
class Path:
    """An alternating walk; ``edges`` are edge indices in walking order."""

    base: str
    shading: str
    edges: tuple[int, ...]
    end: str

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def label(self) -> Label:
        first = 1 if self.shading == PLUS else -1
        return tuple((e, first if k % 2 == 0 else -first) for k, e in enumerate(self.edges))

    def extend(self, g: BipartiteGraph, e: int) -> "Path":
        if e not in g.incident(self.end):
            raise MalformedInput(f"edge {e} does not touch {self.end!r}")
        return Path(self.base, self.shading, self.edges + (e,), g.across(e, self.end))


def empty_path(g: BipartiteGraph, base: str) -> Path:
    return Path(base, g.shading(base), (), base)


def _walks(g: BipartiteGraph, p: Path, n: int) -> Iterator[Path]:
    if n == 0:
        yield p
        return
    for e in g.incident(p.end):
        yield from _walks(g, Path(p.base, p.shading, p.edges + (e,), g.across(e, p.end)), n - 1)


def enumerate_paths(g: BipartiteGraph, base: str, n: int) -> list[Path]:
    """All alternating paths of length ``n`` from ``base``, lexicographic in edge indices."""
    if n < 0:
        raise MalformedInput("path length must be nonnegative")
    return list(_walks(g, empty_path(g, base), n))


def path_from_edges(g: BipartiteGraph, base: str, edges) -> Path:
    p = empty_path(g, base)
    for e in edges:
        if not (isinstance(e, int) and 0 <= e < len(g.edges)):
            raise MalformedInput(f"bad edge index {e!r}")
        p = p.extend(g, e)
    return p


def enumerate_loops(g: BipartiteGraph, shading: str, length: int) -> list[tuple[Path, Path]]:
    """Loops of the given even length based at vertices of one shading.

    A loop is a pair ``(p, q)`` of paths with common base and endpoint; the
    closed walk is ``p`` followed by ``q`` reversed.
    """
    if length < 0 or length % 2:
        raise MalformedInput(f"loop length must be even and nonnegative, got {length}")
    n = length // 2
    loops = []
    for base in g.vertices_of(shading):
        paths = enumerate_paths(g, base, n)
        loops.extend((p, q) for p in paths for q in paths if p.end == q.end)
    return loops


def loop_word(loop: tuple[Path, Path]) -> tuple[int, ...]:
    p, q = loop
    return p.edges + tuple(reversed(q.edges))
