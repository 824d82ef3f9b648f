"""
Maximal and non-maximal real cubics from a cycle of three lines
===============================================================

A plane cubic degenerating to three lines in a triangle has one complex
picture (every Hodge number equal to 1) and two real pictures, depending on
how the real sheets over the nodes are glued.
"""

from realdegen import catalog
from realdegen.complexes import cohomology
from realdegen.main_complexes import build_cq, build_real_complex, verdict

untwisted = catalog.get_sdd("elliptic-cycle-3-untwisted")
twisted = catalog.get_sdd("elliptic-cycle-3-twisted")

# The complexes C_q only see the complex geometry, so both gluings agree.
for q in (0, 1):
    c = build_cq(untwisted, q)
    print(f"C_{q}: ranks {[c.rank(p) for p in (0, 1)]}, cohomology {cohomology(c).ranks()}")

# The real complex is a graph: node sheets are vertices, arcs of the lines are edges.
for sdd in (untwisted, twisted):
    rc = build_real_complex(sdd)
    h = cohomology(rc.complex)
    print(f"{sdd.name}: real cover graph has {rc.complex.rank(0)} vertices, "
          f"b = ({h[0].rank}, {h[1].rank})")

# The verdict puts both together: the bound b_p <= sum_q dim H^p(C_q) is sharp
# for the untwisted gluing and misses by one in each degree for the twisted one.
for sdd in (untwisted, twisted):
    print()
    print(verdict(sdd).to_markdown())
