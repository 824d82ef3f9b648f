"""Stratified semistable degenerations as data.

A degeneration is described by its strata: each stratum records its complex
dimension, how many components of the special fiber contain it, the ranks
(and torsion) of its compactly supported cohomology, and the number of
connected components of its real locus.  The differentials of the complexes
built from these numbers are carried along as explicit integer matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Optional

from .linalg import IntegerMatrix

__all__ = [
    "DegenerationError",
    "HypothesisViolated",
    "Stratum",
    "StratifiedDegeneration",
    "StratumVerdict",
    "HypothesisReport",
    "validate_hypotheses",
    "log_stratum_hc_ranks",
    "log_stratum_hc_mod2",
    "log_stratum_weights",
    "real_cover_h0",
    "point_stratum",
    "torus_stratum",
    "pair_of_pants",
]


class DegenerationError(ValueError):
    pass


class HypothesisViolated(DegenerationError):
    pass


def _even_count(factors) -> int:
    return sum(1 for f in factors if f % 2 == 0)


@dataclass(frozen=True)
class Stratum:
    """One open stratum of the special fiber.

    ``hc_ranks[j]`` is the rank of compactly supported integral cohomology in
    degree ``j`` (``j = 0 .. 2 dim``).  ``real_filtration``, when given, lists
    spanning vectors (over the real components) for the levels ``F_1, F_2,
    ...`` of the filtration of the real locus' cohomology whose graded pieces
    match the mod-2 Betti numbers ``b_0, b_1, ...``; for points and curves a
    default is used.
    """

    id: str
    dim: int
    multiplicity: int
    hc_ranks: tuple
    real_components: int
    hc_torsion: tuple = ()
    pure_ii: bool = False
    real_acyclic: bool = True
    real_filtration: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "hc_ranks", tuple(int(x) for x in self.hc_ranks))
        if self.dim < 0:
            raise DegenerationError(f"stratum {self.id}: negative dimension")
        if self.multiplicity < 1:
            raise DegenerationError(f"stratum {self.id}: multiplicity must be >= 1")
        if len(self.hc_ranks) != 2 * self.dim + 1:
            raise DegenerationError(
                f"stratum {self.id}: hc_ranks needs {2 * self.dim + 1} entries")
        if any(x < 0 for x in self.hc_ranks) or self.real_components < 0:
            raise DegenerationError(f"stratum {self.id}: negative count")
        torsion = tuple(tuple(int(t) for t in ts) for ts in self.hc_torsion)
        if torsion and len(torsion) != len(self.hc_ranks):
            raise DegenerationError(
                f"stratum {self.id}: hc_torsion needs one entry per degree")
        if any(t <= 1 for ts in torsion for t in ts):
            raise DegenerationError(f"stratum {self.id}: torsion factors must be > 1")
        object.__setattr__(self, "hc_torsion", torsion or ((),) * len(self.hc_ranks))
        if self.real_filtration is not None:
            levels = tuple(tuple(tuple(int(x) & 1 for x in v) for v in level)
                           for level in self.real_filtration)
            for level in levels:
                for v in level:
                    if len(v) != self.real_components:
                        raise DegenerationError(
                            f"stratum {self.id}: filtration vector of length {len(v)}, "
                            f"expected {self.real_components}")
            object.__setattr__(self, "real_filtration", levels)

    @property
    def hc_mod2(self) -> tuple:
        """Mod-2 dimensions of compactly supported cohomology (universal coefficients)."""
        n = len(self.hc_ranks)
        t = [_even_count(ts) for ts in self.hc_torsion]
        return tuple(self.hc_ranks[j] + t[j] + (t[j + 1] if j + 1 < n else 0)
                     for j in range(n))

    @property
    def betti_mod2(self) -> tuple:
        """Ordinary mod-2 Betti numbers ``b_j``, via Poincare duality over F2."""
        return tuple(reversed(self.hc_mod2))

    @property
    def has_torsion(self) -> bool:
        return any(self.hc_torsion)

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "dim": self.dim,
            "multiplicity": self.multiplicity,
            "hc_ranks": list(self.hc_ranks),
            "hc_torsion": [list(ts) for ts in self.hc_torsion],
            "real_components": self.real_components,
            "pure_ii": self.pure_ii,
        }
        if not self.real_acyclic:
            out["real_acyclic"] = False
        if self.real_filtration is not None:
            out["real_filtration"] = [[list(v) for v in lvl] for lvl in self.real_filtration]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Stratum":
        return cls(
            id=str(obj["id"]),
            dim=int(obj["dim"]),
            multiplicity=int(obj["multiplicity"]),
            hc_ranks=tuple(obj["hc_ranks"]),
            real_components=int(obj["real_components"]),
            hc_torsion=tuple(tuple(ts) for ts in obj.get("hc_torsion", ())),
            pure_ii=bool(obj.get("pure_ii", False)),
            real_acyclic=bool(obj.get("real_acyclic", True)),
            real_filtration=obj.get("real_filtration"),
        )


def point_stratum(id: str, multiplicity: int, real_points: int = 1) -> Stratum:
    return Stratum(id, 0, multiplicity, (real_points,), real_points, pure_ii=True)


def torus_stratum(id: str, multiplicity: int = 1) -> Stratum:
    """A copy of C* (real locus: two half-lines)."""
    return Stratum(id, 1, multiplicity, (0, 1, 1), 2, pure_ii=True)


def pair_of_pants(id: str, k: int, multiplicity: int = 1) -> Stratum:
    """``P^k`` minus ``k + 2`` generic real hyperplanes.

    ``b_i = binom(k + 1, i)``, real locus ``2^(k+1) - 1`` open cells.
    """
    hc = tuple(comb(k + 1, 2 * k - n) if n >= k else 0 for n in range(2 * k + 1))
    return Stratum(id, k, multiplicity, hc, 2 ** (k + 1) - 1, pure_ii=True)


def log_stratum_hc_ranks(s: Stratum) -> tuple:
    """Ranks of compactly supported cohomology of the torus bundle over ``s``.

    The fiber is ``(S^1)^(m-1)``, the local systems are constant and the
    Leray sequence degenerates, so the ranks are a binomial convolution.
    """
    return _convolve(s.hc_ranks, s.multiplicity)


def log_stratum_hc_mod2(s: Stratum) -> tuple:
    return _convolve(s.hc_mod2, s.multiplicity)


def _convolve(ranks, m) -> tuple:
    k = m - 1
    n_top = len(ranks) + k
    return tuple(sum(ranks[n - i] * comb(k, i)
                     for i in range(k + 1) if 0 <= n - i < len(ranks))
                 for n in range(n_top))


def log_stratum_weights(s: Stratum) -> dict:
    """Weight ``2j - 2d + 2i`` of the summand ``H_c^j(stratum, R^i)``."""
    d = s.dim
    return {(j, i): 2 * j - 2 * d + 2 * i
            for j in range(2 * d + 1) for i in range(s.multiplicity)}


def real_cover_h0(s: Stratum) -> int:
    """Number of components of the real torus-cover over ``s`` (a trivial cover)."""
    if not s.real_acyclic:
        raise HypothesisViolated(
            f"stratum {s.id}: real locus has higher cohomology, cover need not be trivial")
    return 2 ** (s.multiplicity - 1) * s.real_components


@dataclass(frozen=True)
class StratumVerdict:
    id: str
    a: bool
    b: bool
    c: bool
    reasons: tuple = ()


@dataclass(frozen=True)
class HypothesisReport:
    strata: tuple

    @property
    def a_holds(self) -> bool:
        return all(v.a for v in self.strata)

    @property
    def b_holds(self) -> bool:
        return all(v.b for v in self.strata)

    @property
    def c_holds(self) -> bool:
        return all(v.c for v in self.strata)

    @property
    def bound_applicable(self) -> bool:
        return self.a_holds and self.b_holds

    def to_json(self) -> dict:
        return {
            "a": self.a_holds, "b": self.b_holds, "c": self.c_holds,
            "strata": {v.id: {"a": v.a, "b": v.b, "c": v.c, "reasons": list(v.reasons)}
                       for v in self.strata},
        }


def _verdict(s: Stratum) -> StratumVerdict:
    reasons = []
    a = s.real_acyclic
    if not a:
        reasons.append("(a) real locus marked with nonzero higher cohomology")
    total = sum(s.hc_mod2)
    b = s.real_components == total
    if not b:
        reasons.append(f"(b) real components {s.real_components} != total mod-2 "
                       f"Betti number {total}")
    c = not s.has_torsion and s.pure_ii
    if s.has_torsion:
        reasons.append("(c) integral cohomology has torsion")
    if not s.pure_ii:
        reasons.append("(c) purity of type (i,i) not asserted")
    return StratumVerdict(s.id, a, b, c, tuple(reasons))


@dataclass(frozen=True)
class StratifiedDegeneration:
    """Strata, closure relations and the differential blocks of a degeneration.

    ``cq_differentials[(q, p)]`` is the full map from the degree-``p`` to the
    degree-``p + 1`` term of the ``q``-th complex, in the basis order fixed by
    ``main_complexes``.  ``cq_differentials_f2`` optionally supplies the same
    maps assembled directly over F2.  ``real_differentials[p]`` maps degree
    ``p`` to ``p + 1`` of the real complex.  A missing block between two
    nonzero terms is an error unless ``zero_blocks_ok`` is set.
    """

    fiber_dim: int
    strata: tuple
    closure: tuple = ()
    cq_differentials: Mapping = field(default_factory=dict)
    real_differentials: Mapping = field(default_factory=dict)
    cq_differentials_f2: Mapping = field(default_factory=dict)
    zero_blocks_ok: bool = False
    name: str = ""

    def __post_init__(self):
        strata = tuple(self.strata)
        object.__setattr__(self, "strata", strata)
        ids = [s.id for s in strata]
        if len(set(ids)) != len(ids):
            raise DegenerationError("duplicate stratum ids")
        by_id = {s.id: s for s in strata}
        closure = tuple((str(a), str(b)) for a, b in self.closure)
        for lo, hi in closure:
            if lo not in by_id or hi not in by_id:
                raise DegenerationError(f"closure pair ({lo}, {hi}) names unknown stratum")
            if by_id[lo].dim >= by_id[hi].dim:
                raise DegenerationError(
                    f"closure pair ({lo}, {hi}) does not increase dimension")
        object.__setattr__(self, "closure", closure)
        object.__setattr__(self, "cq_differentials",
                           {(int(q), int(p)): m for (q, p), m in self.cq_differentials.items()})
        object.__setattr__(self, "cq_differentials_f2",
                           {(int(q), int(p)): m.mod(2)
                            for (q, p), m in self.cq_differentials_f2.items()})
        object.__setattr__(self, "real_differentials",
                           {int(p): m.mod(2) for p, m in self.real_differentials.items()})

    def stratum(self, id: str) -> Stratum:
        for s in self.strata:
            if s.id == id:
                return s
        raise KeyError(id)

    def strata_of_dim(self, p: int) -> list:
        return [s for s in self.strata if s.dim == p]

    @property
    def dim_range(self) -> range:
        if not self.strata:
            return range(0)
        return range(min(s.dim for s in self.strata), max(s.dim for s in self.strata) + 1)

    def structure_warnings(self) -> list:
        below = {lo for lo, _ in self.closure}
        out = []
        for s in self.strata:
            if s.id not in below and s.dim != self.fiber_dim:
                out.append(f"maximal stratum {s.id} has dimension {s.dim}, "
                           f"fiber has dimension {self.fiber_dim}")
        return out

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "fiber_dim": self.fiber_dim,
            "strata": [s.to_json() for s in self.strata],
            "closure": [list(c) for c in self.closure],
            "cq_differentials": {f"{q},{p}": m.to_json()
                                 for (q, p), m in sorted(self.cq_differentials.items())},
            "real_differentials": {str(p): m.to_json()
                                   for p, m in sorted(self.real_differentials.items())},
        }
        if self.cq_differentials_f2:
            out["cq_differentials_f2"] = {
                f"{q},{p}": m.to_json() for (q, p), m in sorted(self.cq_differentials_f2.items())}
        if self.zero_blocks_ok:
            out["zero_blocks_ok"] = True
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "StratifiedDegeneration":
        def qp(key):
            q, p = key.split(",")
            return int(q), int(p)

        return cls(
            fiber_dim=int(obj["fiber_dim"]),
            strata=tuple(Stratum.from_json(s) for s in obj["strata"]),
            closure=tuple(tuple(c) for c in obj.get("closure", ())),
            cq_differentials={qp(k): IntegerMatrix.from_json(m)
                              for k, m in obj.get("cq_differentials", {}).items()},
            real_differentials={int(k): IntegerMatrix.from_json(m)
                                for k, m in obj.get("real_differentials", {}).items()},
            cq_differentials_f2={qp(k): IntegerMatrix.from_json(m)
                                 for k, m in obj.get("cq_differentials_f2", {}).items()},
            zero_blocks_ok=bool(obj.get("zero_blocks_ok", False)),
            name=str(obj.get("name", "")),
        )


def validate_hypotheses(sdd: StratifiedDegeneration) -> HypothesisReport:
    """Per-stratum verdicts on hypotheses (a), (b), (c).  Never raises."""
    return HypothesisReport(tuple(_verdict(s) for s in sdd.strata))
