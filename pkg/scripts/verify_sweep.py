"""Run the invariant suite over the corpus for several weightings and seeds, reporting
wall time and the worst residual per check."""

from __future__ import annotations

import argparse
import time
from collections import defaultdict

from gpa_lab.corpus import NAMES, corpus_graph
from gpa_lab.graph import adjacency_matrix
from gpa_lab.grading import parse_pi
from gpa_lab.spectral import perron_frobenius
from gpa_lab.verify import SuiteConfig, run_suite


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pi", nargs="+", default=["trivial", "standard", "lopsided"])
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=3)
    args = ap.parse_args()

    worst: dict[str, float] = defaultdict(float)
    failures = []
    t0 = time.perf_counter()
    for name in NAMES:
        g = corpus_graph(name)
        pf = perron_frobenius(adjacency_matrix(g))
        for conv in args.pi:
            pi = parse_pi(conv, g, pf)
            for seed in range(args.seeds):
                t = time.perf_counter()
                checks = run_suite(g, pi, SuiteConfig(n_max=args.n_max, seed=seed), conv)
                for c in checks:
                    if "negative" not in c.name:
                        worst[c.name] = max(worst[c.name], c.residual)
                    if not c.ok:
                        failures.append((name, conv, seed, c.name, c.residual))
                print(f"{name:6s} {conv:9s} seed={seed}  {time.perf_counter() - t:6.2f}s")
    print(f"\ntotal {time.perf_counter() - t0:.1f}s")
    for k in sorted(worst):
        print(f"  {k:40s} {worst[k]:.2e}")
    print(f"{len(failures)} failures")
    for f in failures:
        print("  FAIL", *f)


if __name__ == "__main__":
    main()
