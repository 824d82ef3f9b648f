"""
Random patchworks: the bound, torsion and relabelling
=====================================================

Random regular triangulations come from perturbing convex heights; random
signs give curves with fewer components.  For every one of them we look at
the slack in the bound, at the integral cohomology of C_q (is it ever
torsion?), and at whether relabelling punctures and edges changes anything.
"""

import random

import numpy as np
from scipy.spatial import ConvexHull

from realdegen.complexes import cohomology
from realdegen.main_complexes import build_cq, verdict
from realdegen.patchwork import Convention, PatchworkInput, lattice_points, to_sdd

rng = np.random.default_rng(1)
relabel = random.Random(1)


def random_triangulation(d):
    pts = lattice_points(((0, 0), (d, 0), (0, d)))
    h = {p: 1000 * (p[0] ** 2 + p[1] ** 2) + int(rng.integers(-99, 100)) for p in pts}
    hull = ConvexHull(np.array([[x, y, h[(x, y)]] for x, y in pts], dtype=float))
    tris = [tuple(pts[i] for i in s) for s, eq in zip(hull.simplices, hull.equations)
            if eq[2] < 0]
    return tris, h


for trial in range(8):
    d = int(rng.integers(2, 6))
    tris, h = random_triangulation(d)
    signs = {p: int(rng.choice((1, -1))) for p in h}
    pi = PatchworkInput(((0, 0), (d, 0), (0, d)), tris, signs, h)
    sdd = to_sdd(pi)
    rep = verdict(sdd)
    alt = to_sdd(pi, Convention.random(pi, relabel))
    same = all(cohomology(build_cq(sdd, q)) == cohomology(build_cq(alt, q)) for q in (0, 1))
    print(f"d={d}  b={rep.betti_real}  bound={[r['rhs'] for r in rep.inequality]}  "
          f"torsion free={rep.all_torsion_free}  relabelling invariant={same}")
