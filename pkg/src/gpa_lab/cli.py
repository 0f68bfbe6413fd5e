"""Command-line entry point ``gpa-lab``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import gpa, matcat
from .corpus import NAMES, corpus_graph
from .errors import GpaLabError, InputError, MalformedInput
from .graph import MINUS, PLUS, BipartiteGraph, adjacency_matrix, enumerate_loops, load_graph
from .grading import GroupoidWeight, lopsided_pi, parse_pi, standard_pi, trivial_pi
from .spectral import PerronFrobeniusData, perron_frobenius
from .states import parse_partition, spherical_state
from .verify import CONSTRUCTION_TOL, SuiteConfig, run_suite

SEED_ENV = "GPA_LAB_SEED"
SIG_DIGITS = 12


@dataclass(frozen=True)
class RunConfig:
    graph: str
    pi: str = "standard"
    partition: str | None = None
    n_max: int = 3
    tol: float = CONSTRUCTION_TOL
    seed: int = 0
    fmt: str = "json"

    def __post_init__(self) -> None:
        if self.n_max < 0:
            raise MalformedInput("--n-max must be nonnegative")
        if not self.tol > 0:
            raise MalformedInput("--tol must be positive")
        if self.fmt not in ("json", "tsv"):
            raise MalformedInput("--format must be json or tsv")


class Report:
    """Rows of a table plus an optional JSON-shaped document."""

    def __init__(self, columns: Sequence[str], rows: list[Sequence], doc: dict | None = None):
        self.columns = list(columns)
        self.rows = rows
        self.doc = doc if doc is not None else {"rows": [dict(zip(self.columns, r)) for r in rows]}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(_clean(self.doc), indent=2)
        lines = ["\t".join(self.columns)]
        lines += ["\t".join(_cell(v) for v in r) for r in self.rows]
        return "\n".join(lines)


def _num(x):
    x = complex(x)
    if abs(x.imag) > 1e-13 * max(1.0, abs(x.real)):
        return {"re": float(f"{x.real:.{SIG_DIGITS}g}"), "im": float(f"{x.imag:.{SIG_DIGITS}g}")}
    return float(f"{x.real:.{SIG_DIGITS}g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, complex, np.floating, np.complexfloating)):
        return _num(obj)
    return obj


def _cell(v) -> str:
    v = _clean(v)
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    if isinstance(v, dict):
        return f"{v['re']:.{SIG_DIGITS}g}{v['im']:+.{SIG_DIGITS}g}j"
    return str(v)


# -- context ----------------------------------------------------------------------------


def resolve_graph(selector: str) -> BipartiteGraph:
    if not Path(selector).exists() and selector in NAMES:
        return corpus_graph(selector)
    return load_graph(selector)


@dataclass(frozen=True, eq=False)
class Context:
    cfg: RunConfig
    g: BipartiteGraph
    pf: PerronFrobeniusData
    pi: GroupoidWeight

    @classmethod
    def build(cls, cfg: RunConfig) -> "Context":
        g = resolve_graph(cfg.graph)
        pf = perron_frobenius(adjacency_matrix(g))
        return cls(cfg, g, pf, parse_pi(cfg.pi, g, pf))


def _simple_name(g: BipartiteGraph, a: int, b: int) -> str:
    return f"E_{{{g.vertices[a]},{g.vertices[b]}}}"


# -- commands -------------------------------------------------------------------------------


def cmd_pf(ctx: Context) -> tuple[Report, int]:
    """Perron-Frobenius dimension and eigenvectors."""
    g, pf = ctx.g, ctx.pf
    rows = [(v, PLUS, x) for v, x in zip(g.v_plus, pf.lambda_plus)]
    rows += [(v, MINUS, x) for v, x in zip(g.v_minus, pf.lambda_minus)]
    doc = {
        "d": pf.d,
        "lambda_plus": dict(zip(g.v_plus, pf.lambda_plus)),
        "lambda_minus": dict(zip(g.v_minus, pf.lambda_minus)),
    }
    return Report(["vertex", "shading", "lambda"], rows, doc), 0


def cmd_dims(ctx: Context) -> tuple[Report, int]:
    """Left/right dimensions of every simple and their ratio."""
    g, pi = ctx.g, ctx.pi
    rows = []
    for (a, b), (dl, dr) in sorted(matcat.simple_dims(pi).items()):
        rows.append((_simple_name(g, a, b), dl, dr, dl / dr, pi(a, b)))
    return Report(["simple", "dim_L", "dim_R", "ratio", "pi"], rows), 0


def cmd_boxdim(ctx: Context) -> tuple[Report, int]:
    """Box-space dimensions for n up to --n-max."""
    rows = []
    for n in range(ctx.cfg.n_max + 1):
        for s in (PLUS, MINUS):
            rows.append((n, s, gpa.box_dim(ctx.g, n, s), len(enumerate_loops(ctx.g, s, 2 * n)),
                         matcat.alt_power(ctx.g, n, s).hom_dim))
    return Report(["n", "shading", "box_dim", "loops", "hom_dim"], rows), 0


def _loop_doc(g: BipartiteGraph, pi: GroupoidWeight) -> tuple[dict, list]:
    shaded, unshaded = gpa.loop_values(g, pi)
    rows = [("shaded", v, x) for v, x in zip(g.v_plus, shaded)]
    rows += [("unshaded", v, x) for v, x in zip(g.v_minus, unshaded)]
    return {"shaded": dict(zip(g.v_plus, shaded)), "unshaded": dict(zip(g.v_minus, unshaded))}, rows


def cmd_loops(ctx: Context) -> tuple[Report, int]:
    """Closed circle values per vertex."""
    doc, rows = _loop_doc(ctx.g, ctx.pi)
    return Report(["circle", "vertex", "value"], rows, doc), 0


def cmd_state(ctx: Context) -> tuple[Report, int]:
    """The spherical state for the chosen convention."""
    part_name = ctx.cfg.partition or "pm"
    psi = spherical_state(ctx.pi, parse_partition(part_name, ctx.g))
    rows = [(v, x) for v, x in zip(ctx.g.vertices, psi.values)]
    doc = {"partition": part_name, "values": dict(rows)}
    return Report(["vertex", "psi"], rows, doc), 0


def cmd_verify(ctx: Context) -> tuple[Report, int]:
    """Run the invariant suite; exit 1 on any failure."""
    cfg = ctx.cfg
    if cfg.n_max < 1:
        raise MalformedInput("verify needs --n-max >= 1")
    part = cfg.partition or "trivial"
    parse_partition(part, ctx.g)
    suite_cfg = SuiteConfig(n_max=cfg.n_max, tol=cfg.tol, seed=cfg.seed, partition=part)
    label = cfg.pi if cfg.pi in ("trivial", "standard", "lopsided") else None
    checks = run_suite(ctx.g, ctx.pi, suite_cfg, label)
    ok = all(c.ok for c in checks)
    rows = [(c.name, "pass" if c.ok else "FAIL", c.residual, c.detail) for c in checks]
    doc = {
        "pi": cfg.pi,
        "partition": part,
        "ok": ok,
        "checks": [{"name": c.name, "ok": c.ok, "residual": c.residual, "detail": c.detail} for c in checks],
    }
    return Report(["check", "status", "residual", "detail"], rows, doc), 0 if ok else 1


def cmd_compare(ctx: Context) -> tuple[Report, int]:
    """Loop values, dimensions and states across the three named conventions."""
    g, pf = ctx.g, ctx.pf
    convs = {"trivial": trivial_pi(g.r), "standard": standard_pi(pf), "lopsided": lopsided_pi(pf)}
    part = parse_partition(ctx.cfg.partition or "pm", g)
    doc: dict = {}
    rows = []
    for name, pi in convs.items():
        loops, loop_rows = _loop_doc(g, pi)
        dims = {}
        for a, b in sorted({(g.index(s), g.index(t)) for s, t in g.edges}):
            dl, dr = matcat.simple_dims_of(pi, a, b)
            dims[_simple_name(g, a, b)] = {"dim_L": dl, "dim_R": dr}
            rows.append((name, "dim_L", _simple_name(g, a, b), dl))
            rows.append((name, "dim_R", _simple_name(g, a, b), dr))
        psi = spherical_state(pi, part)
        doc[name] = {"loops": loops, "dims": dims, "state": dict(zip(g.vertices, psi.values))}
        rows += [(name, circle, v, x) for circle, v, x in loop_rows]
        rows += [(name, "psi", v, x) for v, x in zip(g.vertices, psi.values)]
    return Report(["convention", "quantity", "key", "value"], rows, doc), 0


COMMANDS = {
    "pf": cmd_pf,
    "dims": cmd_dims,
    "boxdim": cmd_boxdim,
    "loops": cmd_loops,
    "state": cmd_state,
    "verify": cmd_verify,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gpa-lab", description="Balanced dual functors on graph planar algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("graph", help=f"graph JSON file or a corpus name ({', '.join(NAMES)})")
        p.add_argument("--pi", default="standard", help="trivial | standard | lopsided | ratios=a,b,...")
        p.add_argument("--partition", choices=["pm", "trivial"], default=None)
        p.add_argument("--n-max", type=int, default=3, dest="n_max")
        p.add_argument("--tol", type=float, default=CONSTRUCTION_TOL)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--format", choices=["json", "tsv"], default="json", dest="fmt")
    return parser


def _seed(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise MalformedInput(f"{SEED_ENV} must be an integer, got {env!r}") from None


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            graph=args.graph,
            pi=args.pi,
            partition=args.partition,
            n_max=args.n_max,
            tol=args.tol,
            seed=_seed(args.seed),
            fmt=args.fmt,
        )
        report, code = COMMANDS[args.command](Context.build(cfg))
    except InputError as exc:
        print(f"gpa-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except GpaLabError as exc:
        print(f"gpa-lab: {args.command} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(report.render(cfg.fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
