"""Print loop values, simple dimensions and spherical states for every corpus graph
under the trivial, standard and lopsided weightings."""

from __future__ import annotations

import argparse

import numpy as np

from gpa_lab import gpa, matcat
from gpa_lab.corpus import NAMES, corpus_graph
from gpa_lab.graph import adjacency_matrix
from gpa_lab.grading import lopsided_pi, standard_pi, trivial_pi
from gpa_lab.spectral import perron_frobenius
from gpa_lab.states import Partition, spherical_state


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("graphs", nargs="*", default=list(NAMES))
    args = ap.parse_args()
    np.set_printoptions(precision=6, suppress=True)
    for name in args.graphs:
        g = corpus_graph(name)
        pf = perron_frobenius(adjacency_matrix(g))
        print(f"== {name}  d = {pf.d:.12g}")
        for conv, pi in (("trivial", trivial_pi(g.r)), ("standard", standard_pi(pf)), ("lopsided", lopsided_pi(pf))):
            shaded, unshaded = gpa.loop_values(g, pi)
            dims = matcat.simple_dims(pi)
            x_dims = [dims[(g.index(u), g.index(v))] for u, v in sorted(set(g.edges))]
            psi = spherical_state(pi, Partition.trivial(g.r))
            print(f"  {conv:9s} shaded {shaded}  unshaded {unshaded}")
            print(f"  {'':9s} dims(E_uv) {[(round(a, 6), round(b, 6)) for a, b in x_dims]}")
            print(f"  {'':9s} state {psi.values}")


if __name__ == "__main__":
    main()
