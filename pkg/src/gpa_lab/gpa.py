"""Graph planar algebra: box spaces in the loop basis and the generating tangles.

An element with ``top`` strands on top and ``bottom`` below is a linear
combination of loops ``(p, q)``: ``p`` a path of length ``top`` and ``q`` a
path of length ``bottom`` with common base and common endpoint. Under
:func:`to_matrix` the loop ``(p, q)`` is the matrix unit ``|p><q|``, so
``(p, q) . (q, r) = (p, r)``. Square elements (``top == bottom == n``) form the
box space of degree ``n``.

Tangle coefficients are computed here directly on loops; :mod:`gpa_lab.matcat`
is used only by :func:`to_matrix` / :func:`from_matrix`, which is what the test
suite compares against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from . import matcat
from .errors import MalformedInput, NonScalarLoops, ShapeMismatch
from .graph import (
    MINUS,
    PLUS,
    BipartiteGraph,
    Path,
    check_shading,
    empty_path,
    enumerate_loops,
    enumerate_paths,
    loop_word,
    path_from_edges,
)
from .grading import GroupoidWeight

Loop = tuple[Path, Path]

CAP_ABOVE = "cap_above"  # ev on X^dual (x) X
CAP_BELOW = "cap_below"  # coev^dag on X (x) X^dual
CUP_ABOVE = "cup_above"  # coev, creates X (x) X^dual
CUP_BELOW = "cup_below"  # ev^dag, creates X^dual (x) X
TANGLES = (CAP_ABOVE, CAP_BELOW, CUP_ABOVE, CUP_BELOW)
_ADJOINT_TANGLE = {CAP_ABOVE: CUP_BELOW, CUP_BELOW: CAP_ABOVE, CAP_BELOW: CUP_ABOVE, CUP_ABOVE: CAP_BELOW}
# the pair of strand types each tangle consumes or creates
_TANGLE_STRANDS = {CAP_ABOVE: ("Xd", "X"), CUP_BELOW: ("Xd", "X"), CAP_BELOW: ("X", "Xd"), CUP_ABOVE: ("X", "Xd")}


@dataclass(frozen=True)
class BoxElement:
    graph: BipartiteGraph
    shading: str
    top: int
    bottom: int
    coeffs: Mapping[Loop, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        check_shading(self.shading)
        if self.top < 0 or self.bottom < 0 or (self.top - self.bottom) % 2:
            raise ShapeMismatch(f"boundary sizes {self.top}, {self.bottom} must be nonnegative of equal parity")
        clean: dict[Loop, complex] = {}
        for (p, q), c in self.coeffs.items():
            if len(p) != self.top or len(q) != self.bottom:
                raise ShapeMismatch("loop lengths do not match the boundary")
            if p.base != q.base or p.end != q.end or p.shading != self.shading:
                raise ShapeMismatch("loop is not closed or has the wrong base shading")
            c = complex(c)
            if c != 0:
                clean[(p, q)] = c
        object.__setattr__(self, "coeffs", clean)

    @property
    def n(self) -> int:
        if self.top != self.bottom:
            raise ShapeMismatch("element is not square")
        return self.top

    def _like(self, coeffs: Mapping[Loop, complex]) -> "BoxElement":
        return BoxElement(self.graph, self.shading, self.top, self.bottom, coeffs)

    def _check_same(self, other: "BoxElement") -> None:
        if (self.graph, self.shading, self.top, self.bottom) != (other.graph, other.shading, other.top, other.bottom):
            raise ShapeMismatch("elements live in different box spaces")

    def __add__(self, other: "BoxElement") -> "BoxElement":
        self._check_same(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return self._like(out)

    def __sub__(self, other: "BoxElement") -> "BoxElement":
        return self + (-1) * other

    def __mul__(self, scalar: complex) -> "BoxElement":
        return self._like({k: scalar * c for k, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "BoxElement") -> "BoxElement":
        return multiply(self, other)

    def norm(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def dist(self, other: "BoxElement") -> float:
        return (self - other).norm()

    def __len__(self) -> int:
        return len(self.coeffs)


# -- construction ---------------------------------------------------------------


def box_dim(g: BipartiteGraph, n: int, shading: str = PLUS) -> int:
    """Number of loops of length ``2n`` based at vertices of ``shading``."""
    if n < 0:
        raise MalformedInput("box degree must be nonnegative")
    total = 0
    for base in g.vertices_of(check_shading(shading)):
        ends: dict[str, int] = {}
        for p in enumerate_paths(g, base, n):
            ends[p.end] = ends.get(p.end, 0) + 1
        total += sum(k * k for k in ends.values())
    return total


def loop_element(g: BipartiteGraph, p: Path, q: Path, coeff: complex = 1.0) -> BoxElement:
    return BoxElement(g, p.shading, len(p), len(q), {(p, q): coeff})


def identity_box(g: BipartiteGraph, n: int, shading: str = PLUS) -> BoxElement:
    coeffs = {}
    for base in g.vertices_of(shading):
        for p in enumerate_paths(g, base, n):
            coeffs[(p, p)] = 1.0
    return BoxElement(g, shading, n, n, coeffs)


def unit_box(g: BipartiteGraph, shading: str = PLUS) -> BoxElement:
    return identity_box(g, 0, shading)


def vertex_box(g: BipartiteGraph, vertex: str) -> BoxElement:
    """The minimal projection of the 0-box space at one vertex."""
    p = empty_path(g, vertex)
    return loop_element(g, p, p)


def random_box(g: BipartiteGraph, n: int, shading: str, rng: np.random.Generator) -> BoxElement:
    loops = enumerate_loops(g, shading, 2 * n)
    vals = rng.standard_normal(len(loops)) + 1j * rng.standard_normal(len(loops))
    return BoxElement(g, shading, n, n, dict(zip(loops, vals)))


# -- the matrix picture -----------------------------------------------------------


@lru_cache(maxsize=None)
def _object(g: BipartiteGraph, n: int, shading: str) -> matcat.MatObject:
    return matcat.alt_power(g, n, shading)


@lru_cache(maxsize=None)
def _paths_by_label(g: BipartiteGraph, n: int, shading: str) -> dict:
    """(base, label) -> path; the base matters because every empty path has label ()."""
    return {(p.base, p.label): p for base in g.vertices_of(shading) for p in enumerate_paths(g, base, n)}


def to_matrix(x: BoxElement) -> matcat.MatMorphism:
    g = x.graph
    src, tgt = _object(g, x.bottom, x.shading), _object(g, x.top, x.shading)
    blocks: dict[tuple[int, int], np.ndarray] = {}
    for (p, q), c in x.coeffs.items():
        a, b = g.index(p.base), g.index(p.end)
        m = blocks.get((a, b))
        if m is None:
            m = blocks[(a, b)] = np.zeros((tgt.dim(a, b), src.dim(a, b)), dtype=complex)
        m[tgt.index(a, b)[p.label], src.index(a, b)[q.label]] += c
    return matcat.MatMorphism(src, tgt, blocks)


def from_matrix(f: matcat.MatMorphism, g: BipartiteGraph, shading: str) -> BoxElement:
    top = _degree(f.target, g, shading)
    bottom = _degree(f.source, g, shading)
    if f.source != _object(g, bottom, shading) or f.target != _object(g, top, shading):
        raise ShapeMismatch("morphism is not between alternating powers of the generator")
    top_paths, bottom_paths = _paths_by_label(g, top, shading), _paths_by_label(g, bottom, shading)
    coeffs = {}
    for (a, b), m in f.nonzero_blocks().items():
        rows, cols = f.target.labels(a, b), f.source.labels(a, b)
        base = g.vertices[a]
        for i, j in zip(*np.nonzero(m)):
            coeffs[(top_paths[(base, rows[i])], bottom_paths[(base, cols[j])])] = m[i, j]
    return BoxElement(g, shading, top, bottom, coeffs)


def _degree(obj: matcat.MatObject, g: BipartiteGraph, shading: str) -> int:
    for a, b in obj.blocks():
        return len(obj.labels(a, b)[0])
    raise ShapeMismatch("zero object has no degree")


# -- algebra ------------------------------------------------------------------------


def multiply(x: BoxElement, y: BoxElement) -> BoxElement:
    """Vertical stacking ``x . y`` (``y`` below ``x``)."""
    if x.graph != y.graph or x.shading != y.shading or x.bottom != y.top:
        raise ShapeMismatch("cannot stack: boundaries do not match")
    by_top: dict[Path, list[tuple[Path, complex]]] = {}
    for (q, r), c in y.coeffs.items():
        by_top.setdefault(q, []).append((r, c))
    out: dict[Loop, complex] = {}
    for (p, q), c in x.coeffs.items():
        for r, d in by_top.get(q, ()):
            out[(p, r)] = out.get((p, r), 0) + c * d
    return BoxElement(x.graph, x.shading, x.top, y.bottom, out)


def adjoint(x: BoxElement) -> BoxElement:
    return BoxElement(x.graph, x.shading, x.bottom, x.top, {(q, p): np.conj(c) for (p, q), c in x.coeffs.items()})


def include(x: BoxElement) -> BoxElement:
    """Add a through-strand on the right."""
    g = x.graph
    out = {}
    for (p, q), c in x.coeffs.items():
        for e in g.incident(p.end):
            out[(p.extend(g, e), q.extend(g, e))] = c
    return BoxElement(g, x.shading, x.top + 1, x.bottom + 1, out)


def _strand_pair(shading: str, position: int) -> tuple[str, str]:
    """Types of strands ``position`` and ``position + 1`` (0-based)."""
    types = matcat.strand_types(position + 2, shading)
    return types[position], types[position + 1]


def apply_tangle(x: BoxElement, kind: str, pi: GroupoidWeight) -> BoxElement:
    """Compose a cap or cup onto the two rightmost top strands of ``x``."""
    if kind not in TANGLES:
        raise MalformedInput(f"unknown tangle {kind!r}")
    g = x.graph
    if pi.r != g.r:
        raise ShapeMismatch("pi does not match the graph")
    if kind in (CAP_ABOVE, CAP_BELOW):
        if x.top < 2:
            raise ShapeMismatch("a cap needs two top strands")
        pos = x.top - 2
    else:
        pos = x.top
    if _strand_pair(x.shading, pos) != _TANGLE_STRANDS[kind]:
        raise ShapeMismatch(f"{kind} does not fit the shading at strand {pos + 1}")

    out: dict[Loop, complex] = {}
    if kind in (CAP_ABOVE, CAP_BELOW):
        # ev weighs the walked edge by pi^(1/4), coev^dag by pi^(-1/4)
        expo = 0.25 if kind == CAP_ABOVE else -0.25
        for (p, q), c in x.coeffs.items():
            e1, e2 = p.edges[-2], p.edges[-1]
            if e1 != e2:
                continue
            s, t = g.edges[e1]
            pp = Path(p.base, p.shading, p.edges[:-2], p.end)
            out[(pp, q)] = out.get((pp, q), 0) + c * pi(g.index(s), g.index(t)) ** expo
    else:
        expo = -0.25 if kind == CUP_ABOVE else 0.25
        for (p, q), c in x.coeffs.items():
            for e in g.incident(p.end):
                s, t = g.edges[e]
                pp = Path(p.base, p.shading, p.edges + (e, e), p.end)
                out[(pp, q)] = c * pi(g.index(s), g.index(t)) ** expo
    top = x.top - 2 if kind in (CAP_ABOVE, CAP_BELOW) else x.top + 2
    return BoxElement(g, x.shading, top, x.bottom, out)


def apply_tangle_bottom(x: BoxElement, kind: str, pi: GroupoidWeight) -> BoxElement:
    """Precompose with the cap or cup ``kind`` on the two rightmost bottom strands.

    Here ``kind`` names the morphism inserted below, e.g. ``cup_above`` feeds
    ``coev`` into the bottom and removes two bottom strands.
    """
    if kind not in TANGLES:
        raise MalformedInput(f"unknown tangle {kind!r}")
    return adjoint(apply_tangle(adjoint(x), _ADJOINT_TANGLE[kind], pi))


def close_right(x: BoxElement, pi: GroupoidWeight) -> BoxElement:
    """Close the rightmost strand of a square element around the right side."""
    n = x.n
    if n < 1:
        raise ShapeMismatch("nothing to close")
    last, _ = _strand_pair(x.shading, n - 1)
    cup, cap = (CUP_ABOVE, CAP_BELOW) if last == "X" else (CUP_BELOW, CAP_ABOVE)
    y = include(x)
    y = apply_tangle_bottom(y, cup, pi)
    return apply_tangle(y, cap, pi)


def right_trace(x: BoxElement, pi: GroupoidWeight) -> BoxElement:
    """Close all strands on the right, landing in the 0-box space."""
    while x.top:
        x = close_right(x, pi)
    return x


def zero_box_vector(x: BoxElement) -> dict[str, complex]:
    """Read a 0-box element as vertex -> coefficient."""
    if x.top or x.bottom:
        raise ShapeMismatch("not a 0-box element")
    return {p.base: c for (p, _), c in x.coeffs.items()}


# -- loop values and Jones projections --------------------------------------------


def loop_values(g: BipartiteGraph, pi: GroupoidWeight) -> tuple[np.ndarray, np.ndarray]:
    """Closed circle values: shaded circle per + vertex, unshaded circle per - vertex."""
    shaded = apply_tangle(apply_tangle(unit_box(g, PLUS), CUP_ABOVE, pi), CAP_BELOW, pi)
    unshaded = apply_tangle(apply_tangle(unit_box(g, MINUS), CUP_BELOW, pi), CAP_ABOVE, pi)
    sv, uv = zero_box_vector(shaded), zero_box_vector(unshaded)
    return (
        np.array([sv.get(u, 0).real for u in g.v_plus]),
        np.array([uv.get(v, 0).real for v in g.v_minus]),
    )


def circle_value(g: BipartiteGraph, pi: GroupoidWeight, kind: str, tol: float = 1e-10) -> float:
    """The scalar value of a ``'shaded'`` or ``'unshaded'`` circle; NonScalarLoops if not constant."""
    shaded, unshaded = loop_values(g, pi)
    vals = shaded if kind == "shaded" else unshaded
    if np.ptp(vals) > tol * max(1.0, float(np.max(np.abs(vals)))):
        raise NonScalarLoops(f"{kind} circle values vary over vertices: {vals}")
    return float(vals[0])


def jones_projection(g: BipartiteGraph, pi: GroupoidWeight, i: int, n: int, shading: str = PLUS) -> BoxElement:
    """``e_i`` in degree ``n``: a cap then cup on strands ``i, i+1`` (1-based), over the circle value."""
    if not 1 <= i <= n - 1:
        raise MalformedInput(f"need 1 <= i <= n-1, got i={i}, n={n}")
    a, _ = _strand_pair(shading, i - 1)
    # strands (X, X^dual) enclose a shaded region closed by coev^dag coev
    delta = circle_value(g, pi, "shaded" if a == "X" else "unshaded")
    expo = -0.25 if a == "X" else 0.25
    out: dict[Loop, complex] = {}
    for base in g.vertices_of(shading):
        for head in enumerate_paths(g, base, i - 1):
            for e1 in g.incident(head.end):
                for e2 in g.incident(head.end):
                    p = Path(base, shading, head.edges + (e1, e1), head.end)
                    q = Path(base, shading, head.edges + (e2, e2), head.end)
                    w1 = pi(g.index(g.edges[e1][0]), g.index(g.edges[e1][1])) ** expo
                    w2 = pi(g.index(g.edges[e2][0]), g.index(g.edges[e2][1])) ** expo
                    for tail in enumerate_paths(g, head.end, n - i - 1):
                        out[(Path(base, shading, p.edges + tail.edges, tail.end),
                             Path(base, shading, q.edges + tail.edges, tail.end))] = w1 * w2 / delta
    return BoxElement(g, shading, n, n, out)


# -- serialization -----------------------------------------------------------------


def to_json(x: BoxElement) -> str:
    terms = []
    for (p, q), c in sorted(x.coeffs.items()):
        terms.append({"loop": list(loop_word((p, q))), "base": p.base, "re": c.real, "im": c.imag})
    return json.dumps({"shading": x.shading, "n_top": x.top, "n_bottom": x.bottom, "terms": terms})


def from_json(text: str, g: BipartiteGraph) -> BoxElement:
    try:
        doc = json.loads(text)
        shading, top, bottom = doc["shading"], int(doc["n_top"]), int(doc["n_bottom"])
        terms = doc["terms"]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad box element document: {exc}") from None
    coeffs: dict[Loop, complex] = {}
    for t in terms:
        word = t["loop"]
        if len(word) != top + bottom:
            raise MalformedInput(f"loop {word} has the wrong length")
        p = path_from_edges(g, t["base"], word[:top])
        q = path_from_edges(g, t["base"], list(reversed(word[top:])))
        coeffs[(p, q)] = coeffs.get((p, q), 0) + complex(t["re"], t.get("im", 0.0))
    return BoxElement(g, shading, top, bottom, coeffs)


def span_rank(elements: Iterable[BoxElement], tol: float = 1e-10) -> int:
    """Rank of a family of same-shape elements, as vectors in the loop basis."""
    elements = list(elements)
    if not elements:
        return 0
    keys = sorted({k for x in elements for k in x.coeffs})
    if not keys:
        return 0
    M = np.array([[x.coeffs.get(k, 0) for k in keys] for x in elements], dtype=complex)
    return int(np.linalg.matrix_rank(M, tol=tol))
