"""Built-in degenerations and patchworks."""

from __future__ import annotations

from .degeneration import (StratifiedDegeneration, point_stratum,
                           torus_stratum)
from .linalg import IntegerMatrix
from .patchwork import (PatchworkInput, harnack_patchwork,
                        standard_triangulation)

__all__ = ["SDD_NAMES", "PATCHWORK_NAMES", "names", "get", "get_sdd", "get_patchwork",
           "elliptic_cycle", "trivial_p1"]


def elliptic_cycle(twisted: bool) -> StratifiedDegeneration:
    """Three lines in a cycle: the special fiber of a degenerating plane cubic.

    Node ``N_j`` sits on lines ``L_j`` and ``L_{j+1}``; the open line ``U_k``
    is ``C*``, punctured at ``N_{k-1}`` and ``N_k``.  The twisted structure
    swaps the two real sheets over ``N_2``.
    """
    nodes = [point_stratum(f"N{j}", 2) for j in range(3)]
    lines = [torus_stratum(f"U{k}") for k in range(3)]
    closure = [(f"N{j}", f"U{k}") for j in range(3) for k in (j, (j + 1) % 3)]

    # C_0: node N_j -> puncture classes in H_c^1(U_k), first puncture +1, second -1
    d0 = [[0] * 3 for _ in range(3)]
    for k in range(3):
        d0[k][(k - 1) % 3] += 1
        d0[k][k] -= 1
    # C_1: the cycle graph, N_j joins U_j and U_{j+1}
    d1 = [[0] * 3 for _ in range(3)]
    for j in range(3):
        d1[(j + 1) % 3][j] += 1
        d1[j][j] -= 1

    # real sheets s_j^g (index 2j + g) -> arcs a_k^g (index 2k + g)
    dr = [[0] * 6 for _ in range(6)]
    for j in range(3):
        for g in range(2):
            dr[2 * j + g][2 * j + g] ^= 1
            k = (j + 1) % 3
            h = 1 - g if twisted and j == 2 else g
            dr[2 * k + h][2 * j + g] ^= 1

    return StratifiedDegeneration(
        fiber_dim=1,
        strata=tuple(nodes + lines),
        closure=tuple(closure),
        cq_differentials={(0, 0): IntegerMatrix.from_rows(d0),
                          (1, 0): IntegerMatrix.from_rows(d1)},
        real_differentials={0: IntegerMatrix.from_rows(dr)},
        name="elliptic-cycle-3-twisted" if twisted else "elliptic-cycle-3-untwisted",
    )


def trivial_p1() -> StratifiedDegeneration:
    """``P^1`` in a constant family, stratified as ``0``, ``infinity`` and ``C*``."""
    strata = (point_stratum("zero", 1), point_stratum("inf", 1), torus_stratum("Cstar"))
    return StratifiedDegeneration(
        fiber_dim=1,
        strata=strata,
        closure=(("zero", "Cstar"), ("inf", "Cstar")),
        cq_differentials={(0, 0): IntegerMatrix.from_rows([[1, -1]])},
        real_differentials={0: IntegerMatrix.from_rows([[1, 1], [1, 1]])},
        name="trivial-p1-toric",
    )


def line_d1() -> PatchworkInput:
    polygon = ((0, 0), (1, 0), (0, 1))
    tris, heights = standard_triangulation(1)
    return PatchworkInput(polygon, tuple(tris), {v: 1 for v in heights}, heights,
                          name="line-d1")


_SDDS = {
    "elliptic-cycle-3-untwisted": lambda: elliptic_cycle(False),
    "elliptic-cycle-3-twisted": lambda: elliptic_cycle(True),
    "trivial-p1-toric": trivial_p1,
}
_PATCHWORKS = {
    "harnack-d3": lambda: harnack_patchwork(3),
    "harnack-d4": lambda: harnack_patchwork(4),
    "harnack-d5": lambda: harnack_patchwork(5),
    "line-d1": line_d1,
}
SDD_NAMES = tuple(_SDDS)
PATCHWORK_NAMES = tuple(_PATCHWORKS)


def names() -> list:
    return list(SDD_NAMES + PATCHWORK_NAMES)


def get_sdd(name: str) -> StratifiedDegeneration:
    return _SDDS[name]()


def get_patchwork(name: str) -> PatchworkInput:
    return _PATCHWORKS[name]()


def get(name: str):
    if name in _SDDS:
        return get_sdd(name)
    if name in _PATCHWORKS:
        return get_patchwork(name)
    raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(names())}")
