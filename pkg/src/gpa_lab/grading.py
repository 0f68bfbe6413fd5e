"""Positive homomorphisms out of the matrix-unit groupoid.

A homomorphism ``pi`` from the groupoid with objects ``0..r-1`` (one arrow
``E_ij`` between any two objects) to the positive reals is stored as a
weight vector ``w`` with ``w[0] == 1``; its value on ``E_ij`` is ``w[i] / w[j]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import InconsistentRatios, NonpositiveRatio
from .graph import BipartiteGraph
from .spectral import PerronFrobeniusData

RATIO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GroupoidWeight:
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise NonpositiveRatio("weights must be a nonempty vector")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise NonpositiveRatio(f"weights must be finite and positive: {w}")
        w = w / w[0]
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def r(self) -> int:
        return self.weights.size

    def __call__(self, i: int, j: int) -> float:
        """Value on the matrix unit ``E_ij``."""
        return float(self.weights[i] / self.weights[j])

    def matrix(self) -> np.ndarray:
        """All values at once: entry (i, j) is ``pi(E_ij)``."""
        return self.weights[:, None] / self.weights[None, :]

    def ratios(self) -> np.ndarray:
        """``pi(E_{i+1,i})`` for ``i = 0..r-2``."""
        return self.weights[1:] / self.weights[:-1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupoidWeight):
            return NotImplemented
        return bool(np.array_equal(self.weights, other.weights))

    def __hash__(self) -> int:
        return hash(self.weights.tobytes())

    def allclose(self, other: "GroupoidWeight", tol: float = 1e-12) -> bool:
        return self.r == other.r and float(np.max(np.abs(np.log(self.matrix() / other.matrix())))) < tol

    def __mul__(self, other: "GroupoidWeight") -> "GroupoidWeight":
        return GroupoidWeight(self.weights * other.weights)

    def inverse(self) -> "GroupoidWeight":
        return GroupoidWeight(1.0 / self.weights)

    def __repr__(self) -> str:
        return f"GroupoidWeight({np.array2string(self.weights, precision=6)})"


def trivial_pi(r: int) -> GroupoidWeight:
    return GroupoidWeight(np.ones(r))


def from_ratios(ratios: Sequence[float]) -> GroupoidWeight:
    ratios = np.asarray(ratios, dtype=float).reshape(-1)
    if np.any(~np.isfinite(ratios)) or np.any(ratios <= 0):
        raise NonpositiveRatio(f"ratios must be positive: {ratios}")
    return GroupoidWeight(np.concatenate([[1.0], np.cumprod(ratios)]))


def standard_pi(pf: PerronFrobeniusData) -> GroupoidWeight:
    return GroupoidWeight(pf.lam**2)


def lopsided_pi(pf: PerronFrobeniusData) -> GroupoidWeight:
    """Weights ``lambda(u)**2 * d`` on V+ and ``lambda(v)**2 / d`` on V-.

    So ``pi(E_uv) = d**2 (lambda(u)/lambda(v))**2`` from + to -, which gives
    circle values 1 (shaded) and ``d**2`` (unshaded).
    """
    n_plus = pf.lambda_plus.size
    scale = np.concatenate([np.full(n_plus, pf.d), np.full(pf.lambda_minus.size, 1.0 / pf.d)])
    return GroupoidWeight(pf.lam**2 * scale)


def ratio_from_dims(
    dims_left: Mapping[object, float],
    dims_right: Mapping[object, float],
    grading: Mapping[object, tuple[int, int]],
    r: int,
    tol: float = RATIO_TOL,
) -> GroupoidWeight:
    """Recover ``pi`` from left/right dimensions of simples.

    ``grading`` sends each simple to its grade ``(i, j)``. Grades must connect
    all ``r`` classes; simples of equal grade must have equal dimension ratios.
    """
    by_grade: dict[tuple[int, int], float] = {}
    for c, g in grading.items():
        dl, dr = float(dims_left[c]), float(dims_right[c])
        if dl <= 0 or dr <= 0:
            raise NonpositiveRatio(f"dimensions of {c!r} must be positive")
        q = dl / dr
        if g in by_grade and abs(by_grade[g] - q) > tol * max(1.0, abs(q)):
            raise InconsistentRatios(f"grade {g}: ratios {by_grade[g]} and {q} disagree")
        by_grade.setdefault(g, q)

    logw = np.full(r, np.nan)
    logw[0] = 0.0
    changed = True
    while changed:
        changed = False
        for (i, j), q in by_grade.items():
            if np.isnan(logw[i]) and not np.isnan(logw[j]):
                logw[i] = logw[j] + np.log(q)
                changed = True
            elif np.isnan(logw[j]) and not np.isnan(logw[i]):
                logw[j] = logw[i] - np.log(q)
                changed = True
    if np.any(np.isnan(logw)):
        raise InconsistentRatios("grades do not connect all classes")
    pi = GroupoidWeight(np.exp(logw))
    for (i, j), q in by_grade.items():
        if abs(pi(i, j) - q) > tol * max(1.0, q):
            raise InconsistentRatios(f"grade {(i, j)}: ratio {q} is not multiplicative")
    return pi


def parse_pi(selector: str, g: BipartiteGraph, pf: PerronFrobeniusData) -> GroupoidWeight:
    """Parse a ``--pi`` selector: trivial, standard, lopsided or ratios=a,b,..."""
    from .errors import MalformedInput

    selector = selector.strip()
    if selector == "trivial":
        return trivial_pi(g.r)
    if selector == "standard":
        return standard_pi(pf)
    if selector == "lopsided":
        return lopsided_pi(pf)
    if selector.startswith("ratios="):
        try:
            vals = [float(x) for x in selector[len("ratios="):].split(",") if x.strip()]
        except ValueError:
            raise MalformedInput(f"bad ratio list in {selector!r}") from None
        if len(vals) != g.r - 1:
            raise MalformedInput(f"need {g.r - 1} ratios for {g.r} vertices, got {len(vals)}")
        return from_ratios(vals)
    raise MalformedInput(f"unknown --pi selector {selector!r}")
