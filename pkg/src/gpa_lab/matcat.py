"""The unitary multifusion category of r x r matrices of Hilbert spaces.

Objects carry an explicit basis for every block ``(a, b)``; a basis label is a
word of tokens (see :mod:`gpa_lab.graph`). The tensor product concatenates
labels and sorts them, so associators and unitors are literally identities
and ``(x (x) y)^dual == y^dual (x) x^dual`` as objects. Morphisms are block
matrices, one complex matrix per block, and the block ``(a, b)`` of a
morphism is its component of grade ``E_ab``.

Duals are the pi-balanced ones: on the basis vector with label ``l`` in block
``(a, b)`` the evaluation has coefficient ``pi(E_ab)**(1/4)`` and the
coevaluation ``pi(E_ab)**(-1/4)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Mapping, NamedTuple

import numpy as np

from .errors import LabelCollision, ShapeMismatch, UngradedComponent, UnknownVertex
from .graph import MINUS, PLUS, BipartiteGraph, Label, check_shading
from .grading import GroupoidWeight

Block = tuple[int, int]

# token used for the single basis vector of an abstract simple E_uv
SIMPLE_TOKEN = (-1, 1)


def star(label: Label) -> Label:
    """Label of the dual basis vector: reverse the word and flip every token."""
    return tuple((i, -s) for i, s in reversed(label))


@dataclass(frozen=True)
class MatObject:
    r: int
    basis: tuple[tuple[tuple[Label, ...], ...], ...]  # basis[a][b]

    def labels(self, a: int, b: int) -> tuple[Label, ...]:
        return self.basis[a][b]

    def dim(self, a: int, b: int) -> int:
        return len(self.basis[a][b])

    @cached_property
    def dims(self) -> np.ndarray:
        return np.array([[len(self.basis[a][b]) for b in range(self.r)] for a in range(self.r)])

    @cached_property
    def _index(self) -> tuple[tuple[dict[Label, int], ...], ...]:
        return tuple(tuple({l: k for k, l in enumerate(row)} for row in blk) for blk in self.basis)

    def index(self, a: int, b: int) -> dict[Label, int]:
        return self._index[a][b]

    def blocks(self) -> list[Block]:
        """Inhabited blocks (grades), row-major."""
        return [(a, b) for a in range(self.r) for b in range(self.r) if self.basis[a][b]]

    @property
    def total_dim(self) -> int:
        return int(self.dims.sum())

    @property
    def hom_dim(self) -> int:
        """Dimension of End(self)."""
        return int((self.dims**2).sum())

    def is_zero(self) -> bool:
        return self.total_dim == 0


def make_object(r: int, entries: Mapping[Block, Iterable[Label]]) -> MatObject:
    basis = [[() for _ in range(r)] for _ in range(r)]
    for (a, b), labels in entries.items():
        labels = tuple(sorted(labels))
        if len(set(labels)) != len(labels):
            raise LabelCollision(f"duplicate labels in block {(a, b)}")
        basis[a][b] = labels
    return MatObject(r, tuple(tuple(row) for row in basis))


def _check_class(r: int, *idx: int) -> None:
    for i in idx:
        if not (isinstance(i, (int, np.integer)) and 0 <= i < r):
            raise UnknownVertex(f"vertex class {i!r} out of range for r={r}")


def simple(r: int, u: int, v: int) -> MatObject:
    """The simple object ``E_uv``."""
    _check_class(r, u, v)
    return make_object(r, {(u, v): [(SIMPLE_TOKEN,)]})


def unit(r: int, classes: Iterable[int] | None = None) -> MatObject:
    """The unit object, or its summand over ``classes``."""
    classes = range(r) if classes is None else list(classes)
    return make_object(r, {(v, v): [()] for v in classes})


def zero_object(r: int) -> MatObject:
    return make_object(r, {})


def dual_object(c: MatObject) -> MatObject:
    return make_object(c.r, {(b, a): [star(l) for l in c.basis[a][b]] for (a, b) in c.blocks()})


def tensor_obj(x: MatObject, y: MatObject) -> MatObject:
    if x.r != y.r:
        raise ShapeMismatch("objects live over different numbers of classes")
    r = x.r
    entries: dict[Block, list[Label]] = {}
    for a, b in x.blocks():
        for c in range(r):
            if y.basis[b][c]:
                entries.setdefault((a, c), []).extend(l1 + l2 for l1 in x.basis[a][b] for l2 in y.basis[b][c])
    return make_object(r, entries)


def tensor_objs(*objs: MatObject) -> MatObject:
    out = objs[0]
    for o in objs[1:]:
        out = tensor_obj(out, o)
    return out


# -- the graph model ---------------------------------------------------------


def generator(g: BipartiteGraph) -> MatObject:
    """``F``: one basis vector per edge, in block (source, target)."""
    entries: dict[Block, list[Label]] = {}
    for e, (s, t) in enumerate(g.edges):
        entries.setdefault((g.index(s), g.index(t)), []).append(((e, 1),))
    return make_object(g.r, entries)


def shading_unit(g: BipartiteGraph, shading: str) -> MatObject:
    return unit(g.r, [g.index(v) for v in g.vertices_of(check_shading(shading))])


def alt_power(g: BipartiteGraph, n: int, shading: str = PLUS) -> MatObject:
    """``X (x) X^dual (x) X ...`` (n factors) for ``+``; starts with ``X^dual`` for ``-``.

    For ``n == 0`` this is the unit summand of the given shading. Labels are
    exactly the path labels of :func:`gpa_lab.graph.enumerate_paths`.
    """
    X = generator(g)
    Xd = dual_object(X)
    first, second = (X, Xd) if check_shading(shading) == PLUS else (Xd, X)
    out = shading_unit(g, shading)
    for k in range(n):
        out = tensor_obj(out, first if k % 2 == 0 else second)
    return out


def strand_types(n: int, shading: str) -> list[str]:
    """'X' or 'Xd' for each tensor factor of ``alt_power(g, n, shading)``."""
    first, second = ("X", "Xd") if shading == PLUS else ("Xd", "X")
    return [first if k % 2 == 0 else second for k in range(n)]


# -- morphisms -----------------------------------------------------------------


class MatMorphism:
    """A block matrix ``source -> target``; block (a, b) has shape dim_t(a,b) x dim_s(a,b)."""

    __slots__ = ("source", "target", "_blocks")

    def __init__(self, source: MatObject, target: MatObject, blocks: Mapping[Block, np.ndarray] | None = None):
        if source.r != target.r:
            raise ShapeMismatch("source and target live over different numbers of classes")
        self.source = source
        self.target = target
        stored: dict[Block, np.ndarray] = {}
        for (a, b), m in (blocks or {}).items():
            shape = (target.dim(a, b), source.dim(a, b))
            m = np.asarray(m, dtype=complex)
            if m.shape != shape:
                raise ShapeMismatch(f"block {(a, b)} has shape {m.shape}, expected {shape}")
            if m.size:
                stored[(a, b)] = m
        self._blocks = stored

    @property
    def r(self) -> int:
        return self.source.r

    def block(self, a: int, b: int) -> np.ndarray:
        m = self._blocks.get((a, b))
        if m is None:
            return np.zeros((self.target.dim(a, b), self.source.dim(a, b)), dtype=complex)
        return m

    def nonzero_blocks(self) -> dict[Block, np.ndarray]:
        return dict(self._blocks)

    def is_endo(self) -> bool:
        return self.source == self.target

    def __matmul__(self, other: "MatMorphism") -> "MatMorphism":
        return compose(self, other)

    def __add__(self, other: "MatMorphism") -> "MatMorphism":
        _same_shape(self, other)
        keys = set(self._blocks) | set(other._blocks)
        return MatMorphism(self.source, self.target, {k: self.block(*k) + other.block(*k) for k in keys})

    def __sub__(self, other: "MatMorphism") -> "MatMorphism":
        return self + (-1) * other

    def __mul__(self, scalar: complex) -> "MatMorphism":
        return MatMorphism(self.source, self.target, {k: scalar * m for k, m in self._blocks.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "MatMorphism":
        return self * (1.0 / scalar)

    @property
    def dag(self) -> "MatMorphism":
        return dagger(self)

    def norm(self) -> float:
        """Max-norm of the entries."""
        return max((float(np.max(np.abs(m))) for m in self._blocks.values()), default=0.0)

    def op_norm(self) -> float:
        return max((float(np.linalg.norm(m, 2)) for m in self._blocks.values()), default=0.0)

    def dist(self, other: "MatMorphism") -> float:
        _same_shape(self, other)
        return (self - other).norm()

    def __repr__(self) -> str:
        return f"MatMorphism({self.source.dims.tolist()} -> {self.target.dims.tolist()}, blocks={sorted(self._blocks)})"


def _same_shape(f: MatMorphism, g: MatMorphism) -> None:
    if f.source != g.source or f.target != g.target:
        raise ShapeMismatch("morphisms have different source or target")


def identity(a: MatObject) -> MatMorphism:
    return MatMorphism(a, a, {(i, j): np.eye(a.dim(i, j)) for i, j in a.blocks()})


def zero_morphism(source: MatObject, target: MatObject) -> MatMorphism:
    return MatMorphism(source, target)


def compose(f: MatMorphism, g: MatMorphism) -> MatMorphism:
    """``f o g`` (apply ``g`` first)."""
    if g.target != f.source:
        raise ShapeMismatch("cannot compose: target of the right factor differs from source of the left")
    keys = set(f._blocks) & set(g._blocks)
    return MatMorphism(g.source, f.target, {k: f._blocks[k] @ g._blocks[k] for k in keys})


def compose_all(*fs: MatMorphism) -> MatMorphism:
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = compose(f, out)
    return out


def dagger(f: MatMorphism) -> MatMorphism:
    return MatMorphism(f.target, f.source, {k: m.conj().T for k, m in f._blocks.items()})


def tensor_mor(f: MatMorphism, g: MatMorphism) -> MatMorphism:
    src = tensor_obj(f.source, g.source)
    tgt = tensor_obj(f.target, g.target)
    r = src.r
    out: dict[Block, np.ndarray] = {}
    for (a, b), F in f._blocks.items():
        rows1, cols1 = f.target.basis[a][b], f.source.basis[a][b]
        for c in range(r):
            G = g._blocks.get((b, c))
            if G is None:
                continue
            tidx, sidx = tgt.index(a, c), src.index(a, c)
            rows = [tidx[l1 + l2] for l1 in rows1 for l2 in g.target.basis[b][c]]
            cols = [sidx[l1 + l2] for l1 in cols1 for l2 in g.source.basis[b][c]]
            M = out.get((a, c))
            if M is None:
                M = out[(a, c)] = np.zeros((tgt.dim(a, c), src.dim(a, c)), dtype=complex)
            M[np.ix_(rows, cols)] += np.kron(F, G)
    return MatMorphism(src, tgt, out)


def tensor_mors(*fs: MatMorphism) -> MatMorphism:
    out = fs[0]
    for f in fs[1:]:
        out = tensor_mor(out, f)
    return out


def homogeneous_component(f: MatMorphism, grade: Block) -> MatMorphism:
    """The grade-``E_ab`` part ``f_g`` of ``f``."""
    m = f._blocks.get(grade)
    return MatMorphism(f.source, f.target, {} if m is None else {grade: m})


def random_morphism(source: MatObject, target: MatObject, rng: np.random.Generator) -> MatMorphism:
    blocks = {}
    for a, b in source.blocks():
        shape = (target.dim(a, b), source.dim(a, b))
        if shape[0]:
            blocks[(a, b)] = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return MatMorphism(source, target, blocks)


def is_unitary(f: MatMorphism) -> float:
    """Residual ``max(|f^dag f - 1|, |f f^dag - 1|)``."""
    return max((dagger(f) @ f).dist(identity(f.source)), (f @ dagger(f)).dist(identity(f.target)))


def end_one_vector(z: MatMorphism) -> np.ndarray:
    """Read an endomorphism of (a summand of) the unit as a vector in C^r."""
    if z.source != z.target or any(z.source.dim(a, b) and a != b for a, b in z.source.blocks()):
        raise ShapeMismatch("not an endomorphism of a unit summand")
    out = np.zeros(z.r, dtype=complex)
    for (a, _), m in z._blocks.items():
        out[a] = m[0, 0]
    return out


# -- duality -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DualityPair:
    obj: MatObject
    dual: MatObject
    ev: MatMorphism  # dual (x) obj -> 1
    coev: MatMorphism  # 1 -> obj (x) dual

    def zigzag_residual(self) -> float:
        c, cd = self.obj, self.dual
        lhs1 = tensor_mor(identity(c), self.ev) @ tensor_mor(self.coev, identity(c))
        lhs2 = tensor_mor(self.ev, identity(cd)) @ tensor_mor(identity(cd), self.coev)
        return max(lhs1.dist(identity(c)), lhs2.dist(identity(cd)))


def balanced_duality(
    c: MatObject,
    pi: GroupoidWeight,
    phases: Callable[[Block], complex] | None = None,
) -> DualityPair:
    """The pi-balanced dual of ``c``, built from coordinate isometries.

    ``phases`` optionally multiplies the evaluation on grade ``g`` by a unit
    complex number (and the coevaluation by its inverse); the result is still
    a pi-balanced dual, differing from the default by a unitary.
    """
    if pi.r != c.r:
        raise UngradedComponent(f"pi is defined on {pi.r} classes, object on {c.r}")
    r = c.r
    cd = dual_object(c)
    dc = tensor_obj(cd, c)
    cdc = tensor_obj(c, cd)
    one = unit(r)
    ev_blocks: dict[Block, np.ndarray] = {}
    coev_blocks: dict[Block, np.ndarray] = {}
    for a, b in c.blocks():
        w = pi(a, b)
        ph = 1.0 if phases is None else complex(phases((a, b)))
        e = ev_blocks.setdefault((b, b), np.zeros((1, dc.dim(b, b)), dtype=complex))
        k = coev_blocks.setdefault((a, a), np.zeros((cdc.dim(a, a), 1), dtype=complex))
        di, ci = dc.index(b, b), cdc.index(a, a)
        for l in c.basis[a][b]:
            e[0, di[star(l) + l]] = w**0.25 * ph
            k[ci[l + star(l)], 0] = w**-0.25 / ph
    ev = MatMorphism(dc, one, ev_blocks)
    coev = MatMorphism(one, cdc, coev_blocks)
    return DualityPair(c, cd, ev, coev)


def dual_morphism(f: MatMorphism, src_pair: DualityPair, tgt_pair: DualityPair) -> MatMorphism:
    """``f^dual = (ev_d (x) 1)(1 (x) f (x) 1)(1 (x) coev_c)`` for ``f: c -> d``."""
    if src_pair.obj != f.source or tgt_pair.obj != f.target:
        raise ShapeMismatch("duality pairs do not match the morphism")
    dd, cd = tgt_pair.dual, src_pair.dual
    return compose_all(
        tensor_mor(tgt_pair.ev, identity(cd)),
        tensor_mors(identity(dd), f, identity(cd)),
        tensor_mor(identity(dd), src_pair.coev),
    )


def tensor_pair(pc: DualityPair, pd: DualityPair) -> DualityPair:
    """The dual of ``c (x) d`` assembled as ``(d^dual (x) c^dual, ev_d(1 ev_c 1), (1 coev_d 1)coev_c)``."""
    c, d = pc.obj, pd.obj
    ev = pd.ev @ tensor_mors(identity(pd.dual), pc.ev, identity(d))
    coev = tensor_mors(identity(c), pd.coev, identity(pc.dual)) @ pc.coev
    return DualityPair(tensor_obj(c, d), tensor_obj(pd.dual, pc.dual), ev, coev)


def tensorator_nu(pa: DualityPair, pb: DualityPair, pab: DualityPair) -> MatMorphism:
    """``nu_{a,b}: b^dual (x) a^dual -> (a (x) b)^dual``."""
    a, b = pa.obj, pb.obj
    if pab.obj != tensor_obj(a, b):
        raise ShapeMismatch("third pair must be a duality for a (x) b")
    abd = pab.dual
    return compose_all(
        tensor_mor(pb.ev, identity(abd)),
        tensor_mors(identity(pb.dual), pa.ev, identity(b), identity(abd)),
        tensor_mors(identity(pb.dual), identity(pa.dual), pab.coev),
    )


def pivotal_phi(pair: DualityPair, dual_pair: DualityPair) -> tuple[MatMorphism, MatMorphism]:
    """Both formulas for ``phi_c: c -> c^dual^dual``.

    Returns ``((coev_c^dag (x) 1)(1 (x) coev_{c^dual}), (1 (x) ev_c)(ev_{c^dual}^dag (x) 1))``.
    """
    c = pair.obj
    if dual_pair.obj != pair.dual:
        raise ShapeMismatch("second pair must be a duality for the dual object")
    cdd = dual_pair.dual
    if cdd != c:
        raise ShapeMismatch("double dual is not identified with the object")
    phi1 = tensor_mor(dagger(pair.coev), identity(cdd)) @ tensor_mor(identity(c), dual_pair.coev)
    phi2 = tensor_mor(identity(cdd), pair.ev) @ tensor_mor(dagger(dual_pair.ev), identity(c))
    return phi1, phi2


def zeta(pair1: DualityPair, pair2: DualityPair) -> MatMorphism:
    """The canonical ``c^{dual_2} -> c^{dual_1}``: ``(ev^2 (x) 1)(1 (x) coev^1)``."""
    if pair1.obj != pair2.obj:
        raise ShapeMismatch("pairs are duals of different objects")
    return tensor_mor(pair2.ev, identity(pair1.dual)) @ tensor_mor(identity(pair2.dual), pair1.coev)


def chi(pi1: GroupoidWeight, pi2: GroupoidWeight, pair1: DualityPair, pair2: DualityPair) -> MatMorphism:
    """``zeta`` rescaled to a unitary: the factor on the dual of a grade-``g`` simple is ``(pi1(g)/pi2(g))**(1/4)``.

    This is ``zeta`` computed after sphericalizing both duals, which is what
    makes it unitary.
    """
    z = zeta(pair1, pair2)
    blocks = {}
    for (b, a), m in z.nonzero_blocks().items():
        # block (b, a) of the dual comes from grade (a, b) of the object
        blocks[(b, a)] = (pi1(a, b) / pi2(a, b)) ** 0.25 * m
    return MatMorphism(z.source, z.target, blocks)


# -- traces ----------------------------------------------------------------------


def _check_endo(f: MatMorphism, pair: DualityPair) -> None:
    if f.source != f.target or f.source != pair.obj:
        raise ShapeMismatch("trace needs an endomorphism of the pair's object")


def trace_left(f: MatMorphism, pair: DualityPair) -> np.ndarray:
    """``ev (1 (x) f) ev^dag`` as a vector in End(1) = C^r."""
    _check_endo(f, pair)
    z = pair.ev @ tensor_mor(identity(pair.dual), f) @ dagger(pair.ev)
    return end_one_vector(z)


def trace_right(f: MatMorphism, pair: DualityPair) -> np.ndarray:
    """``coev^dag (f (x) 1) coev`` as a vector in End(1) = C^r."""
    _check_endo(f, pair)
    z = dagger(pair.coev) @ tensor_mor(f, identity(pair.dual)) @ pair.coev
    return end_one_vector(z)


def trace_matrices(f: MatMorphism, pair: DualityPair) -> tuple[np.ndarray, np.ndarray]:
    """Matrix-valued traces: entry (i, j) restricts ``f`` to grade ``E_ij``."""
    _check_endo(f, pair)
    r = f.r
    TL = np.zeros((r, r), dtype=complex)
    TR = np.zeros((r, r), dtype=complex)
    for i, j in f.source.blocks():
        fg = homogeneous_component(f, (i, j))
        TL[i, j] = trace_left(fg, pair)[j]
        TR[i, j] = trace_right(fg, pair)[i]
    return TL, TR


def dim_matrices(pair: DualityPair) -> tuple[np.ndarray, np.ndarray]:
    return trace_matrices(identity(pair.obj), pair)


def psi_functional(z) -> complex:
    """Sends every minimal projection of End(1) to 1."""
    return complex(np.sum(z))


class CheckResult(NamedTuple):
    ok: bool
    residual: float


def check_balanced(pair: DualityPair, pi: GroupoidWeight, f: MatMorphism, tol: float = 1e-9) -> CheckResult:
    """Balancing ``Psi(tr_L(f_g)) == pi(g) Psi(tr_R(f_g))`` for every grade ``g``."""
    _check_endo(f, pair)
    res = 0.0
    for g in f.source.blocks():
        fg = homogeneous_component(f, g)
        lhs = psi_functional(trace_left(fg, pair))
        rhs = pi(*g) * psi_functional(trace_right(fg, pair))
        res = max(res, abs(lhs - rhs))
    return CheckResult(res < tol, res)


def closed_circles(pair: DualityPair) -> tuple[np.ndarray, np.ndarray]:
    """``(coev^dag coev, ev ev^dag)`` as vectors in C^r."""
    return end_one_vector(dagger(pair.coev) @ pair.coev), end_one_vector(pair.ev @ dagger(pair.ev))


# -- a dual functor with cached pairs ------------------------------------------


class BalancedDualFunctor:
    """The pi-balanced unitary dual functor, caching duality pairs per object."""

    def __init__(self, pi: GroupoidWeight):
        self.pi = pi
        self._pairs: dict[MatObject, DualityPair] = {}

    def pair(self, c: MatObject) -> DualityPair:
        p = self._pairs.get(c)
        if p is None:
            p = self._pairs[c] = balanced_duality(c, self.pi)
        return p

    def dual(self, f: MatMorphism) -> MatMorphism:
        return dual_morphism(f, self.pair(f.source), self.pair(f.target))

    def nu(self, a: MatObject, b: MatObject) -> MatMorphism:
        return tensorator_nu(self.pair(a), self.pair(b), self.pair(tensor_obj(a, b)))

    def phi(self, c: MatObject) -> tuple[MatMorphism, MatMorphism]:
        p = self.pair(c)
        return pivotal_phi(p, self.pair(p.dual))

    def trace_left(self, f: MatMorphism) -> np.ndarray:
        return trace_left(f, self.pair(f.source))

    def trace_right(self, f: MatMorphism) -> np.ndarray:
        return trace_right(f, self.pair(f.source))

    def dims(self, c: MatObject) -> tuple[np.ndarray, np.ndarray]:
        return dim_matrices(self.pair(c))


def simple_dims_of(pi: GroupoidWeight, u: int, v: int) -> tuple[float, float]:
    """``(dim_L, dim_R)`` of ``E_uv`` under the pi-balanced functor."""
    DL, DR = dim_matrices(balanced_duality(simple(pi.r, u, v), pi))
    return float(DL[u, v].real), float(DR[u, v].real)


def simple_dims(pi: GroupoidWeight) -> dict[Block, tuple[float, float]]:
    return {(u, v): simple_dims_of(pi, u, v) for u, v in product(range(pi.r), repeat=2)}


__all__ = [
    "MINUS",
    "PLUS",
    "BalancedDualFunctor",
    "CheckResult",
    "DualityPair",
    "MatMorphism",
    "MatObject",
    "alt_power",
    "balanced_duality",
    "check_balanced",
    "chi",
    "closed_circles",
    "compose",
    "dagger",
    "dim_matrices",
    "dual_morphism",
    "dual_object",
    "generator",
    "homogeneous_component",
    "identity",
    "is_unitary",
    "make_object",
    "pivotal_phi",
    "psi_functional",
    "random_morphism",
    "simple",
    "simple_dims",
    "simple_dims_of",
    "star",
    "tensor_mor",
    "tensor_obj",
    "tensor_pair",
    "tensorator_nu",
    "trace_left",
    "trace_matrices",
    "trace_right",
    "unit",
    "zeta",
]
