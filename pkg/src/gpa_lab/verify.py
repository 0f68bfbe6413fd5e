"""The invariant suite behind ``gpa-lab verify``.

Every check returns a :class:`Check`; the report is sorted by name so output
is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import gpa, matcat
from .graph import MINUS, PLUS, BipartiteGraph, adjacency_matrix, enumerate_loops
from .grading import GroupoidWeight, from_ratios, lopsided_pi, ratio_from_dims, standard_pi, trivial_pi
from .matcat import BalancedDualFunctor, MatMorphism, MatObject
from .spectral import PerronFrobeniusData, perron_frobenius
from .states import (
    Partition,
    PartitionState,
    check_evaluable,
    check_spherical,
    nondegeneracy_gram,
    simple_witnesses,
    spherical_state,
)

CONSTRUCTION_TOL = 1e-10
DERIVED_TOL = 1e-9


class Check(NamedTuple):
    name: str
    ok: bool
    residual: float
    detail: str = ""


@dataclass(frozen=True)
class SuiteConfig:
    n_max: int = 3
    tol: float = CONSTRUCTION_TOL
    seed: int = 0
    samples: int = 5
    partition: str = "trivial"


# -- tangle oracles in the category ---------------------------------------------------


def _pair_morphism(g: BipartiteGraph, pi: GroupoidWeight, kind: str) -> MatMorphism:
    X = matcat.generator(g)
    p = matcat.balanced_duality(X, pi)
    return {
        gpa.CAP_ABOVE: p.ev,
        gpa.CAP_BELOW: matcat.dagger(p.coev),
        gpa.CUP_ABOVE: p.coev,
        gpa.CUP_BELOW: matcat.dagger(p.ev),
    }[kind]


def tangle_oracle(g: BipartiteGraph, pi: GroupoidWeight, kind: str, top: int, shading: str) -> MatMorphism:
    """``id (x) m`` where ``m`` is the ev/coev-type map a tangle acts by on ``top`` strands."""
    keep = top - 2 if kind in (gpa.CAP_ABOVE, gpa.CAP_BELOW) else top
    return matcat.tensor_mor(matcat.identity(matcat.alt_power(g, keep, shading)), _pair_morphism(g, pi, kind))


def fitting_tangles(top: int, shading: str) -> list[str]:
    """Tangles that can be applied to an element with ``top`` top strands."""
    out = []
    for kind in gpa.TANGLES:
        is_cap = kind in (gpa.CAP_ABOVE, gpa.CAP_BELOW)
        if is_cap and top < 2:
            continue
        pos = top - 2 if is_cap else top
        types = matcat.strand_types(pos + 2, shading)[pos:]
        if tuple(types) == gpa._TANGLE_STRANDS[kind]:
            out.append(kind)
    return out


# -- helpers --------------------------------------------------------------------------


def _objects(g: BipartiteGraph, n_max: int) -> list[MatObject]:
    return [matcat.alt_power(g, n, s) for n in range(1, n_max + 1) for s in (PLUS, MINUS)]


def _max(values) -> float:
    return max(values, default=0.0)


def perturbed_pi(pi: GroupoidWeight, index: int = 1, factor: float = 1.1) -> GroupoidWeight:
    w = pi.weights.copy()
    w[index % pi.r] *= factor
    return GroupoidWeight(w)


def random_pi(r: int, rng: np.random.Generator) -> GroupoidWeight:
    return from_ratios(np.exp(rng.uniform(-1.5, 1.5, size=r - 1)))


def named_conventions(pf: PerronFrobeniusData, r: int, rng: np.random.Generator) -> dict[str, GroupoidWeight]:
    return {
        "trivial": trivial_pi(r),
        "standard": standard_pi(pf),
        "lopsided": lopsided_pi(pf),
        "random1": random_pi(r, rng),
        "random2": random_pi(r, rng),
    }


# -- the suite ----------------------------------------------------------------------------


class Suite:
    def __init__(self, g: BipartiteGraph, pi: GroupoidWeight, config: SuiteConfig = SuiteConfig()):
        self.g = g
        self.pi = pi
        self.cfg = config
        self.pf = perron_frobenius(adjacency_matrix(g))
        self.rng = np.random.default_rng(config.seed)
        self.F = BalancedDualFunctor(pi)
        self.objects = _objects(g, config.n_max)
        self.X = matcat.generator(g)

    def _rand(self, c: MatObject, d: MatObject | None = None) -> MatMorphism:
        return matcat.random_morphism(c, c if d is None else d, self.rng)

    def _ok(self, name: str, res: float, tol: float | None = None, detail: str = "") -> Check:
        tol = self.cfg.tol if tol is None else tol
        return Check(name, bool(res < tol), float(res), detail)

    # pf
    def check_pf(self) -> Check:
        D = adjacency_matrix(self.g)
        return self._ok("pf.eigen_residual", _max(self.pf.residuals(D)), detail=f"d={self.pf.d:.12g}")

    # duality
    def check_zigzag(self) -> Check:
        return self._ok("duality.zigzag", _max(self.F.pair(c).zigzag_residual() for c in self.objects))

    def check_balanced(self) -> Check:
        res = 0.0
        for c in self.objects:
            for _ in range(self.cfg.samples):
                res = max(res, matcat.check_balanced(self.F.pair(c), self.pi, self._rand(c)).residual)
        return self._ok("duality.balanced", res, DERIVED_TOL)

    def check_balanced_negative(self) -> Check:
        if self.g.r < 2:
            return Check("duality.balanced_negative_control", True, 0.0, "single class")
        wrong = perturbed_pi(self.pi)
        res = matcat.check_balanced(self.F.pair(self.X), wrong, matcat.identity(self.X)).residual
        # must fail by a clear margin
        return Check("duality.balanced_negative_control", bool(res > 1e-3), float(res), "residual must exceed 1e-3")

    def check_tensor_pair(self) -> Check:
        res = 0.0
        for c in self.objects:
            p = matcat.tensor_pair(self.F.pair(self.X), self.F.pair(c))
            if p.obj.is_zero():
                continue
            res = max(res, p.zigzag_residual())
            f = self._rand(p.obj)
            res = max(res, matcat.check_balanced(p, self.pi, f).residual)
        return self._ok("duality.tensor_of_pairs", res, DERIVED_TOL)

    def check_dagger_duality(self) -> Check:
        res = 0.0
        for c in self.objects:
            for d in self.objects[:2]:
                f = self._rand(c, d)
                lhs = matcat.dagger(self.F.dual(f))
                rhs = self.F.dual(matcat.dagger(f))
                res = max(res, lhs.dist(rhs))
        return self._ok("duality.dagger_compatible", res)

    def check_contravariance(self) -> Check:
        res = 0.0
        for c in self.objects[:2]:
            f, h = self._rand(c), self._rand(c)
            res = max(res, self.F.dual(f @ h).dist(self.F.dual(h) @ self.F.dual(f)))
        return self._ok("duality.contravariant", res)

    # nu, phi
    def check_nu(self) -> Check:
        Xd = matcat.dual_object(self.X)
        objs = [self.X, Xd, self.objects[0], self.objects[1]]
        res = _max(matcat.is_unitary(self.F.nu(a, b)) for a in objs for b in objs)
        return self._ok("nu.unitary", res)

    def check_phi(self) -> list[Check]:
        agree = unitary = ident = 0.0
        for c in self.objects:
            p1, p2 = self.F.phi(c)
            agree = max(agree, p1.dist(p2))
            unitary = max(unitary, matcat.is_unitary(p1))
            ident = max(ident, p1.dist(matcat.identity(c)))
        return [
            self._ok("phi.formulas_agree", agree),
            self._ok("phi.unitary", unitary),
            self._ok("phi.identity_gauge", ident),
        ]

    def check_rescaling(self) -> Check:
        other = BalancedDualFunctor(perturbed_pi(self.pi, factor=1.7))
        res = 0.0
        for c in self.objects[:2]:
            res = max(res, self.F.phi(c)[0].dist(other.phi(c)[0]))
            res = max(res, self.F.nu(self.X, c).dist(other.nu(self.X, c)))
        return self._ok("phi.rescaling_invariant", res, 1e-12)

    # chi
    def check_chi(self) -> list[Check]:
        convs = [trivial_pi(self.g.r), standard_pi(self.pf), self.pi]
        Fs = [BalancedDualFunctor(p) for p in convs]
        Xd = matcat.dual_object(self.X)
        unitary = monoidal = cocycle = 0.0
        for c in (self.X, self.objects[1]):
            for i in range(3):
                for j in range(3):
                    ch = matcat.chi(convs[i], convs[j], Fs[i].pair(c), Fs[j].pair(c))
                    unitary = max(unitary, matcat.is_unitary(ch))
            c12 = matcat.chi(convs[0], convs[1], Fs[0].pair(c), Fs[1].pair(c))
            c23 = matcat.chi(convs[1], convs[2], Fs[1].pair(c), Fs[2].pair(c))
            c13 = matcat.chi(convs[0], convs[2], Fs[0].pair(c), Fs[2].pair(c))
            cocycle = max(cocycle, (c12 @ c23).dist(c13))
        a, b = self.X, Xd
        ab = matcat.tensor_obj(a, b)
        F1, F2 = Fs[0], Fs[2]
        chi_ab = matcat.chi(convs[0], convs[2], F1.pair(ab), F2.pair(ab))
        chi_a = matcat.chi(convs[0], convs[2], F1.pair(a), F2.pair(a))
        chi_b = matcat.chi(convs[0], convs[2], F1.pair(b), F2.pair(b))
        lhs = chi_ab @ F2.nu(a, b)
        rhs = F1.nu(a, b) @ matcat.tensor_mor(chi_b, chi_a)
        monoidal = lhs.dist(rhs)
        return [
            self._ok("chi.unitary", unitary),
            self._ok("chi.monoidal", monoidal),
            self._ok("chi.cocycle", cocycle),
        ]

    # traces and dims
    def check_traces(self) -> list[Check]:
        tracial = positive = transpose = 0.0
        for c in self.objects:
            f, h = self._rand(c), self._rand(c)
            tracial = max(tracial, float(np.max(np.abs(self.F.trace_left(f @ h) - self.F.trace_left(h @ f)))))
            tracial = max(tracial, float(np.max(np.abs(self.F.trace_right(f @ h) - self.F.trace_right(h @ f)))))
            t = self.F.trace_left(matcat.dagger(f) @ f)
            positive = max(positive, float(np.max(np.abs(t.imag))), float(-np.min(t.real)))
            TL, _ = matcat.trace_matrices(f, self.F.pair(c))
            _, TRd = matcat.trace_matrices(self.F.dual(f), self.F.pair(self.F.pair(c).dual))
            transpose = max(transpose, float(np.max(np.abs(TL.T - TRd))))
        return [
            self._ok("trace.tracial", tracial, DERIVED_TOL),
            self._ok("trace.positive", positive, DERIVED_TOL),
            self._ok("trace.transpose_dual", transpose, DERIVED_TOL),
        ]

    def check_dims(self) -> list[Check]:
        dims = matcat.simple_dims(self.pi)
        grading = {k: k for k in dims}
        rec = ratio_from_dims({k: v[0] for k, v in dims.items()}, {k: v[1] for k, v in dims.items()}, grading, self.g.r)
        recovery = float(np.max(np.abs(rec.matrix() / self.pi.matrix() - 1)))
        pseudo = min(min(v) for v in dims.values())
        hom = 0.0
        for c in self.objects[:2]:
            DL = self.F.dims(c)[0]
            DLX = self.F.dims(self.X)[0]
            cx = matcat.tensor_obj(c, self.X)
            hom = max(hom, float(np.max(np.abs(self.F.dims(cx)[0] - DL @ DLX))))
        return [
            self._ok("dims.ratio_recovery", recovery),
            Check("dims.pseudounitary", bool(pseudo > 0), float(pseudo), "smallest simple dimension"),
            self._ok("dims.ring_homomorphism", hom, DERIVED_TOL),
        ]

    # planar algebra
    def check_loops(self, label: str | None) -> list[Check]:
        shaded, unshaded = gpa.loop_values(self.g, self.pi)
        cs, cu = matcat.closed_circles(self.F.pair(self.X))
        n_plus = len(self.g.v_plus)
        oracle = max(float(np.max(np.abs(shaded - cs[:n_plus]))), float(np.max(np.abs(unshaded - cu[n_plus:]))))
        detail = f"shaded={_fmt(shaded)} unshaded={_fmt(unshaded)}"
        out = [self._ok("loops.oracle", oracle, detail=detail)]
        d = self.pf.d
        expected = {"standard": (d, d), "lopsided": (1.0, d * d)}.get(label or "")
        if expected is not None:
            res = max(float(np.max(np.abs(shaded - expected[0]))), float(np.max(np.abs(unshaded - expected[1]))))
            out.append(self._ok("loops.expected_values", res, detail=f"expected {expected[0]:.12g}, {expected[1]:.12g}"))
        return out

    def check_box_dims(self) -> Check:
        bad = 0
        for n in range(self.cfg.n_max + 2):
            for s in (PLUS, MINUS):
                a = gpa.box_dim(self.g, n, s)
                b = len(enumerate_loops(self.g, s, 2 * n))
                c = matcat.alt_power(self.g, n, s).hom_dim
                bad += not (a == b == c)
        return Check("gpa.box_dims", bad == 0, float(bad), "mismatching (n, shading) count")

    def check_gpa_oracle(self) -> list[Check]:
        mult = adj = inc = tang = close = cstar = 0.0
        for n in range(0, min(self.cfg.n_max, 3) + 1):
            for s in (PLUS, MINUS):
                x = gpa.random_box(self.g, n, s, self.rng)
                y = gpa.random_box(self.g, n, s, self.rng)
                fx, fy = gpa.to_matrix(x), gpa.to_matrix(y)
                mult = max(mult, gpa.to_matrix(x @ y).dist(fx @ fy))
                adj = max(adj, gpa.to_matrix(gpa.adjoint(x)).dist(matcat.dagger(fx)))
                nxt = matcat.generator(self.g) if matcat.strand_types(n + 1, s)[-1] == "X" else matcat.dual_object(self.X)
                inc = max(inc, gpa.to_matrix(gpa.include(x)).dist(matcat.tensor_mor(fx, matcat.identity(nxt))))
                for kind in fitting_tangles(n, s):
                    lhs = gpa.to_matrix(gpa.apply_tangle(x, kind, self.pi))
                    rhs = tangle_oracle(self.g, self.pi, kind, n, s) @ fx
                    tang = max(tang, lhs.dist(rhs))
                if n:
                    v = gpa.zero_box_vector(gpa.right_trace(x, self.pi))
                    t = self.F.trace_right(fx)
                    close = max(close, max(abs(v.get(u, 0) - t[self.g.index(u)]) for u in self.g.vertices))
                xx = gpa.adjoint(x) @ x
                cstar = max(cstar, abs(gpa.to_matrix(xx).op_norm() - fx.op_norm() ** 2) / max(1.0, fx.op_norm() ** 2))
        return [
            self._ok("gpa.oracle_multiply", mult),
            self._ok("gpa.oracle_adjoint", adj),
            self._ok("gpa.oracle_include", inc),
            self._ok("gpa.oracle_tangles", tang),
            self._ok("gpa.oracle_closure", close),
            self._ok("gpa.cstar_norm", cstar, 1e-8),
        ]

    def check_jones(self) -> list[Check]:
        try:
            gpa.circle_value(self.g, self.pi, "shaded")
            gpa.circle_value(self.g, self.pi, "unshaded")
        except Exception:
            return [Check("jones.relations", True, 0.0, "not applicable: circle values are not scalars")]
        n = max(3, min(self.cfg.n_max, 3))
        shaded, unshaded = gpa.loop_values(self.g, self.pi)
        delta2 = float(shaded[0] * unshaded[0])
        res = 0.0
        spans: dict[str, list] = {PLUS: [], MINUS: []}
        for s in (PLUS, MINUS):
            es = [gpa.jones_projection(self.g, self.pi, i, n, s) for i in range(1, n)]
            for i, e in enumerate(es):
                res = max(res, (e @ e).dist(e), gpa.adjoint(e).dist(e))
                for j in (i - 1, i + 1):
                    if 0 <= j < len(es):
                        res = max(res, (e @ es[j] @ e).dist(e * (1 / delta2)))
            for w in es + [es[0] @ es[1], gpa.identity_box(self.g, n, s)]:
                spans[s].append(gpa.right_trace(w, self.pi))
        ev = check_evaluable(spans)
        return [
            self._ok("jones.relations", res, detail=f"delta^2={delta2:.12g}"),
            Check("jones.closures_evaluable", ev, 0.0 if ev else 1.0),
        ]

    # states
    def check_states(self) -> list[Check]:
        part = Partition.trivial(self.g.r) if self.cfg.partition == "trivial" else Partition.plus_minus(self.g)
        psi = spherical_state(self.pi, part)
        samples = [self._rand(c) for c in self.objects[:2] for _ in range(self.cfg.samples)]
        sph = check_spherical(psi, self.pi, samples + simple_witnesses(self.g.r))
        out = [self._ok("state.spherical", sph.residual, DERIVED_TOL, detail=f"partition={self.cfg.partition}")]
        worst = np.inf
        for _ in range(5):
            vals = psi.values * np.exp(self.rng.uniform(-0.5, 0.5, self.g.r))
            other = PartitionState(part, _renormalize(vals, part))
            if np.max(np.abs(other.values - psi.values)) < 1e-3:
                continue
            worst = min(worst, check_spherical(other, self.pi, simple_witnesses(self.g.r)).residual)
        if np.isfinite(worst):
            out.append(Check("state.unique", bool(worst > 1e-9), float(worst), "smallest residual of perturbed states"))
        gram = min(nondegeneracy_gram(c, self.F.pair(c), psi) for c in self.objects[:4])
        out.append(Check("state.nondegenerate", bool(gram > 1e-8), float(gram), "smallest Gram singular value"))
        return out

    def run(self, label: str | None = None) -> list[Check]:
        checks: list[Check] = [self.check_pf(), self.check_zigzag(), self.check_balanced()]
        checks.append(self.check_balanced_negative())
        checks += [self.check_tensor_pair(), self.check_dagger_duality(), self.check_contravariance()]
        checks += [self.check_nu(), *self.check_phi(), self.check_rescaling(), *self.check_chi()]
        checks += [*self.check_traces(), *self.check_dims(), *self.check_loops(label)]
        checks += [self.check_box_dims(), *self.check_gpa_oracle(), *self.check_jones(), *self.check_states()]
        return sorted(checks, key=lambda c: c.name)


def _renormalize(vals: np.ndarray, part: Partition) -> np.ndarray:
    out = vals.copy()
    for b in part.blocks:
        out[list(b)] /= out[list(b)].sum()
    return out


def _fmt(v) -> str:
    return "[" + ", ".join(f"{x:.12g}" for x in np.asarray(v, dtype=float)) + "]"


def run_suite(
    g: BipartiteGraph,
    pi: GroupoidWeight,
    config: SuiteConfig = SuiteConfig(),
    label: str | None = None,
) -> list[Check]:
    return Suite(g, pi, config).run(label)

