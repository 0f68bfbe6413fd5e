"""States on End(1) relative to a partition of the unit, and the spherical one."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import matcat
from .errors import EmptyBlock, MalformedInput, ShapeMismatch, WrongBoxDegree
from .gpa import BoxElement, span_rank, unit_box
from .graph import BipartiteGraph
from .grading import GroupoidWeight
from .matcat import CheckResult, MatMorphism, MatObject

SPHERICAL_TOL = 1e-9
STATE_TOL = 1e-12


@dataclass(frozen=True)
class Partition:
    r: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for b in blocks:
            if not b:
                raise EmptyBlock("partition has an empty block")
        flat = sorted(i for b in blocks for i in b)
        if flat != list(range(self.r)):
            raise MalformedInput(f"blocks {blocks} do not partition 0..{self.r - 1}")

    def block_of(self, i: int) -> tuple[int, ...]:
        for b in self.blocks:
            if i in b:
                return b
        raise MalformedInput(f"class {i} not covered")

    @classmethod
    def trivial(cls, r: int) -> "Partition":
        return cls(r, (tuple(range(r)),))

    @classmethod
    def plus_minus(cls, g: BipartiteGraph) -> "Partition":
        n = len(g.v_plus)
        return cls(g.r, (tuple(range(n)), tuple(range(n, g.r))))


def parse_partition(selector: str, g: BipartiteGraph) -> Partition:
    if selector == "trivial":
        return Partition.trivial(g.r)
    if selector == "pm":
        return Partition.plus_minus(g)
    raise MalformedInput(f"unknown partition {selector!r}; use 'pm' or 'trivial'")


@dataclass(frozen=True, eq=False)
class PartitionState:
    partition: Partition
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float)
        if v.shape != (self.partition.r,):
            raise ShapeMismatch(f"need {self.partition.r} values, got shape {v.shape}")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise MalformedInput("state values must be finite and nonnegative")
        for b in self.partition.blocks:
            s = v[list(b)].sum()
            if abs(s - 1.0) > STATE_TOL * len(b):
                raise MalformedInput(f"values on block {b} sum to {s}, not 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def faithful(self) -> bool:
        return bool(np.all(self.values > 0))

    def __call__(self, z) -> complex:
        """Evaluate on an element of End(1) given as a vector over the classes."""
        return complex(np.dot(self.values, np.asarray(z)))


def spherical_state(pi: GroupoidWeight, partition: Partition) -> PartitionState:
    """The faithful state with ``psi(p_i) / psi(p_j) = pi(E_ij)`` inside each block."""
    if pi.r != partition.r:
        raise ShapeMismatch("pi and partition have different numbers of classes")
    w = pi.weights
    vals = np.empty(pi.r)
    for b in partition.blocks:
        idx = list(b)
        vals[idx] = w[idx] / w[idx].sum()
    return PartitionState(partition, vals)


def state_ratios(psi: PartitionState) -> list[np.ndarray]:
    """Per block, the values relative to the block's first class."""
    if not psi.faithful:
        raise MalformedInput("ratios need a faithful state")
    return [psi.values[list(b)] / psi.values[b[0]] for b in psi.partition.blocks]


def state_from_ratios(partition: Partition, ratios: Sequence[Sequence[float]]) -> PartitionState:
    vals = np.empty(partition.r)
    for b, rat in zip(partition.blocks, ratios, strict=True):
        rat = np.asarray(rat, dtype=float)
        vals[list(b)] = rat / rat.sum()
    return PartitionState(partition, vals)


def check_spherical(
    psi: PartitionState,
    pi: GroupoidWeight,
    samples: Iterable[MatMorphism],
    tol: float = SPHERICAL_TOL,
) -> CheckResult:
    """``|psi(tr_L f) - psi(tr_R f)| < tol`` for every sample, traces from the pi-balanced duals."""
    functor = matcat.BalancedDualFunctor(pi)
    res = 0.0
    for f in samples:
        if f.source != f.target:
            raise ShapeMismatch("samples must be endomorphisms")
        res = max(res, abs(psi(functor.trace_left(f)) - psi(functor.trace_right(f))))
    return CheckResult(res < tol, res)


def simple_witnesses(r: int) -> list[MatMorphism]:
    """Identities of all simples ``E_uv``; enough to detect any non-spherical state."""
    return [matcat.identity(matcat.simple(r, u, v)) for u in range(r) for v in range(r)]


def check_evaluable(spans: Mapping[str, Sequence[BoxElement]], tol: float = 1e-10) -> bool:
    """Each 0-box span must be exactly the scalars."""
    for shading, span in spans.items():
        span = list(span)
        for x in span:
            if x.top or x.bottom:
                raise WrongBoxDegree(f"span element has {x.top} top and {x.bottom} bottom strands")
            if x.shading != shading:
                raise WrongBoxDegree("span element has the wrong shading")
        if not span:
            return False
        one = unit_box(span[0].graph, shading)
        if span_rank(span, tol) != 1 or span_rank(span + [one], tol) != 1:
            return False
    return True


def trace_functional(c: MatObject, pair: matcat.DualityPair, psi: PartitionState) -> dict:
    """``psi(tr_L(E))`` for every matrix unit ``E`` of End(c), keyed by (block, row, col)."""
    out = {}
    for a, b in c.blocks():
        # tr_L of the unit at (i, j) in block (a, b) is delta_ij pi^(1/2) p_b; compute via the pair
        n = c.dim(a, b)
        for i in range(n):
            m = np.zeros((n, n))
            m[i, i] = 1.0
            f = MatMorphism(c, c, {(a, b): m})
            out[((a, b), i, i)] = psi(matcat.trace_left(f, pair))
    return out


def gram_matrix(c: MatObject, pair: matcat.DualityPair, psi: PartitionState) -> np.ndarray:
    """``G[k, l] = psi(tr_L(E_l^dag E_k))`` over the matrix-unit basis of End(c)."""
    tau = trace_functional(c, pair, psi)
    units = [((a, b), i, j) for a, b in c.blocks() for i in range(c.dim(a, b)) for j in range(c.dim(a, b))]
    G = np.zeros((len(units), len(units)), dtype=complex)
    for k, (gk, ik, jk) in enumerate(units):
        for l, (gl, il, jl) in enumerate(units):
            # E_l^dag E_k = |j_l><i_l|i_k><j_k|, off-diagonal units have zero trace
            if gk == gl and ik == il and jl == jk:
                G[k, l] = tau[(gk, jl, jl)]
    return G


def nondegeneracy_gram(c: MatObject, pair: matcat.DualityPair, psi: PartitionState) -> float:
    """Smallest singular value of the trace form on End(c)."""
    if pair.obj != c:
        raise ShapeMismatch("duality pair does not belong to the object")
    G = gram_matrix(c, pair, psi)
    if G.size == 0:
        return float("inf")
    return float(np.linalg.svd(G, compute_uv=False).min())


def default_partition(g: BipartiteGraph, context: str) -> Partition:
    """``pm`` for planar-algebra contexts, trivial where a single normalisation is needed."""
    return Partition.plus_minus(g) if context == "planar" else Partition.trivial(g.r)


__all__ = [
    "Partition",
    "PartitionState",
    "check_evaluable",
    "check_spherical",
    "default_partition",
    "gram_matrix",
    "nondegeneracy_gram",
    "parse_partition",
    "simple_witnesses",
    "spherical_state",
    "state_from_ratios",
    "state_ratios",
    "trace_functional",
]
