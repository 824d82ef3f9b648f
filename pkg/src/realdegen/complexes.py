"""Cochain complexes over Z and F2, their cohomology, and filtered complexes.

A complex lives in a contiguous range of degrees ``[p_min, p_max]``; the
differential ``d_p`` is an ``IntegerMatrix`` of shape
``rank(p + 1) x rank(p)``.  Missing differentials are zero maps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .linalg import (IntegerMatrix, rank_mod2, row_reduce_mod2,
                     smith_normal_form, to_mod2)

__all__ = [
    "Coefficient",
    "ComplexError",
    "InvalidComplex",
    "NotASubcomplex",
    "CochainComplex",
    "CohomologyGroup",
    "CohomologyResult",
    "FilteredComplex",
    "SpectralPage",
    "validate",
    "cohomology",
    "reduce_mod2",
    "universal_coefficients_check",
    "spectral_sequence",
]


class Coefficient(str, enum.Enum):
    Z = "Z"
    F2 = "F2"


class ComplexError(Exception):
    """Base class for malformed complexes and filtrations."""


class InvalidComplex(ComplexError):
    def __init__(self, degree: int, message: str = ""):
        self.degree = degree
        super().__init__(message or f"d_{degree + 1} . d_{degree} != 0")


class NotASubcomplex(ComplexError):
    def __init__(self, level: int, degree: int, message: str = ""):
        self.level = level
        self.degree = degree
        super().__init__(
            message or f"d does not preserve F_{level} at degree {degree}")


class UniversalCoefficientsMismatch(ComplexError):
    def __init__(self, degree: int, expected: int, found: int):
        self.degree = degree
        super().__init__(
            f"degree {degree}: mod-2 dimension {found}, universal coefficients "
            f"predict {expected}")


@dataclass(frozen=True)
class CochainComplex:
    coefficient: Coefficient
    degrees: tuple
    ranks: Mapping[int, int]
    differentials: Mapping[int, IntegerMatrix] = field(default_factory=dict)
    labels: Optional[Mapping[int, Sequence[str]]] = None

    def __post_init__(self):
        coeff = Coefficient(self.coefficient)
        object.__setattr__(self, "coefficient", coeff)
        lo, hi = (int(x) for x in self.degrees)
        object.__setattr__(self, "degrees", (lo, hi))
        ranks = {p: int(self.ranks.get(p, 0)) for p in range(lo, hi + 1)}
        extra = [p for p, r in self.ranks.items() if r and not lo <= int(p) <= hi]
        if extra:
            raise ValueError(f"ranks outside degree range {self.degrees}: {extra}")
        if any(r < 0 for r in ranks.values()):
            raise ValueError("negative rank")
        object.__setattr__(self, "ranks", ranks)
        diffs = {}
        for p, d in self.differentials.items():
            p = int(p)
            want = (self.rank(p + 1), self.rank(p))
            if d.shape != want:
                raise ValueError(
                    f"d_{p} has shape {d.shape}, ranks require {want}")
            if coeff is Coefficient.F2:
                d = d.mod(2)
            if not d.is_zero():
                diffs[p] = d
        object.__setattr__(self, "differentials", diffs)
        if self.labels is not None:
            labels = {int(p): tuple(v) for p, v in self.labels.items()}
            for p, v in labels.items():
                if len(v) != self.rank(p):
                    raise ValueError(f"{len(v)} labels for rank-{self.rank(p)} term {p}")
            object.__setattr__(self, "labels", labels)

    def rank(self, p: int) -> int:
        return self.ranks.get(p, 0)

    def differential(self, p: int) -> IntegerMatrix:
        d = self.differentials.get(p)
        if d is None:
            return IntegerMatrix.zeros(self.rank(p + 1), self.rank(p))
        return d

    @property
    def degree_range(self) -> range:
        return range(self.degrees[0], self.degrees[1] + 1)

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * self.rank(p) for p in self.degree_range)

    def to_json(self) -> dict:
        out = {
            "coefficient": self.coefficient.value,
            "degrees": list(self.degrees),
            "ranks": {str(p): r for p, r in self.ranks.items()},
            "differentials": {str(p): d.to_json()
                              for p, d in sorted(self.differentials.items())},
        }
        if self.labels is not None:
            out["labels"] = {str(p): list(v) for p, v in self.labels.items()}
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CochainComplex":
        return cls(
            coefficient=Coefficient(obj["coefficient"]),
            degrees=tuple(obj["degrees"]),
            ranks={int(p): r for p, r in obj["ranks"].items()},
            differentials={int(p): IntegerMatrix.from_json(m)
                           for p, m in obj.get("differentials", {}).items()},
            labels=obj.get("labels"),
        )


@dataclass(frozen=True)
class CohomologyGroup:
    degree: int
    rank: int
    torsion: tuple = ()

    @property
    def torsion_free(self) -> bool:
        return not self.torsion

    def even_torsion(self) -> int:
        return sum(1 for t in self.torsion if t % 2 == 0)


@dataclass(frozen=True)
class CohomologyResult:
    """Per-degree cohomology.  Over F2 ``rank`` is the F2-dimension."""

    coefficient: Coefficient
    groups: Mapping[int, CohomologyGroup]

    def __getitem__(self, p: int) -> CohomologyGroup:
        return self.groups.get(p, CohomologyGroup(p, 0))

    def ranks(self) -> dict:
        return {p: g.rank for p, g in self.groups.items()}

    def torsion(self) -> dict:
        return {p: g.torsion for p, g in self.groups.items()}

    @property
    def torsion_free(self) -> bool:
        return all(g.torsion_free for g in self.groups.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * g.rank for p, g in self.groups.items())

    def to_json(self) -> dict:
        return {str(p): {"rank": g.rank, "torsion": list(g.torsion)}
                for p, g in self.groups.items()}


def validate(c: CochainComplex) -> None:
    """Raise ``InvalidComplex`` at the first degree where d . d != 0."""
    for p in c.degree_range:
        d0, d1 = c.differentials.get(p), c.differentials.get(p + 1)
        if d0 is None or d1 is None:
            continue
        prod = d1 @ d0
        if c.coefficient is Coefficient.F2:
            prod = prod.mod(2)
        if not prod.is_zero():
            raise InvalidComplex(p)


def _rank(c: CochainComplex, p: int) -> int:
    d = c.differentials.get(p)
    if d is None:
        return 0
    if c.coefficient is Coefficient.F2:
        return rank_mod2(d)
    return smith_normal_form(d).rank


def cohomology(c: CochainComplex) -> CohomologyResult:
    validate(c)
    groups = {}
    snfs = {}
    if c.coefficient is Coefficient.Z:
        snfs = {p: smith_normal_form(d) for p, d in c.differentials.items()}
    for p in c.degree_range:
        if c.coefficient is Coefficient.Z:
            out_rank = snfs[p].rank if p in snfs else 0
            inc = snfs.get(p - 1)
            in_rank = inc.rank if inc else 0
            torsion = inc.torsion if inc else ()
        else:
            out_rank, in_rank, torsion = _rank(c, p), _rank(c, p - 1), ()
        groups[p] = CohomologyGroup(p, c.rank(p) - out_rank - in_rank, tuple(torsion))
    return CohomologyResult(c.coefficient, groups)


def reduce_mod2(c: CochainComplex) -> CochainComplex:
    if c.coefficient is not Coefficient.Z:
        raise ValueError("reduce_mod2 expects an integer complex")
    return CochainComplex(Coefficient.F2, c.degrees, c.ranks,
                          {p: d.mod(2) for p, d in c.differentials.items()},
                          c.labels)


def universal_coefficients_check(c: CochainComplex) -> CohomologyResult:
    """Compare F2 cohomology of ``c`` with what its integral cohomology predicts.

    ``dim H^p(c (x) F2) = rank H^p + t_p + t_{p+1}`` with ``t_p`` the number of
    even invariant factors in the torsion of ``H^p``.  Returns the mod-2
    cohomology; a mismatch raises because it can only be an internal bug.
    """
    hz = cohomology(c)
    h2 = cohomology(reduce_mod2(c))
    for p in c.degree_range:
        expected = hz[p].rank + hz[p].even_torsion() + hz[p + 1].even_torsion()
        if h2[p].rank != expected:
            raise UniversalCoefficientsMismatch(p, expected, h2[p].rank)
    return h2


# -- F2 subspace helpers ----------------------------------------------------
# Subspaces of F2^n are uint8 matrices whose columns span them.

def _basis(cols: np.ndarray, n: int) -> np.ndarray:
    """Independent columns spanning the same space."""
    if cols.size == 0 or cols.shape[1] == 0:
        return np.zeros((n, 0), dtype=np.uint8)
    red, pivots = row_reduce_mod2(cols.T)
    return red[:len(pivots)].T.copy()


def _dim(cols: np.ndarray) -> int:
    if cols.size == 0:
        return 0
    return rank_mod2(cols)


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    return (a.astype(np.int64) @ b.astype(np.int64) & 1).astype(np.uint8)


def _preimage(d: np.ndarray, source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Basis of ``{x in span(source) : d x in span(target)}``."""
    k = source.shape[1]
    n = source.shape[0]
    if k == 0:
        return np.zeros((n, 0), dtype=np.uint8)
    image = _mul(d, source)
    if image.shape[0] == 0:
        return source
    stacked = np.hstack([image, target]) if target.shape[1] else image
    red, pivots = row_reduce_mod2(stacked)
    free = [c for c in range(stacked.shape[1]) if c not in set(pivots)]
    ys = []
    for f in free:
        y = np.zeros(stacked.shape[1], dtype=np.uint8)
        y[f] = 1
        for r, pc in enumerate(pivots):
            if red[r, f]:
                y[pc] = 1
        ys.append(y[:k])
    if not ys:
        return np.zeros((n, 0), dtype=np.uint8)
    return _basis(_mul(source, np.array(ys, dtype=np.uint8).T), n)


def _contains(big: np.ndarray, small: np.ndarray) -> bool:
    if small.shape[1] == 0 or not small.any():
        return True
    return _dim(np.hstack([big, small])) == _dim(big)


@dataclass(frozen=True)
class SpectralPage:
    r: int
    entries: Mapping[tuple, int]
    stable: bool = False

    def total(self, n: int) -> int:
        return sum(v for (a, b), v in self.entries.items() if a + b == n)

    def nonzero(self) -> dict:
        return {k: v for k, v in self.entries.items() if v}


class FilteredComplex:
    """Decreasing filtration ``F_0 = base >= F_1 >= ... >= F_s >= 0`` of an F2 complex.

    ``levels[i - 1][p]`` is a matrix whose columns span ``F_i`` in degree
    ``p`` (missing degrees mean the zero subspace).  The constructor checks
    nesting and that every level is a subcomplex.
    """

    def __init__(self, base: CochainComplex, levels: Sequence[Mapping[int, np.ndarray]]):
        if base.coefficient is not Coefficient.F2:
            raise ValueError("filtrations are only supported over F2")
        self.base = base
        self._d = {p: to_mod2(base.differential(p)) for p in base.degree_range}
        self._levels = []
        for i, level in enumerate(levels, start=1):
            spaces = {}
            for p in base.degree_range:
                n = base.rank(p)
                m = level.get(p)
                m = np.zeros((n, 0), dtype=np.uint8) if m is None else to_mod2(m)
                if m.shape[0] != n:
                    raise ValueError(f"F_{i} in degree {p} lives in F2^{m.shape[0]}, "
                                     f"term has rank {n}")
                spaces[p] = _basis(m, n)
            self._levels.append(spaces)
        self._check()

    @property
    def depth(self) -> int:
        return len(self._levels)

    def level(self, i: int, p: int) -> np.ndarray:
        n = self.base.rank(p)
        if i <= 0:
            return np.eye(n, dtype=np.uint8)
        if i > self.depth:
            return np.zeros((n, 0), dtype=np.uint8)
        return self._levels[i - 1][p]

    def _check(self):
        for i in range(1, self.depth + 1):
            for p in self.base.degree_range:
                if not _contains(self.level(i - 1, p), self.level(i, p)):
                    raise NotASubcomplex(i, p, f"F_{i} not contained in F_{i - 1} "
                                               f"at degree {p}")
                if p + 1 in self.base.degree_range:
                    img = _mul(self._d[p], self.level(i, p))
                    if not _contains(self.level(i, p + 1), img):
                        raise NotASubcomplex(i, p)

    def graded_dims(self) -> dict:
        """``{(i, p): dim F_i^p / F_{i+1}^p}``."""
        return {(i, p): self.level(i, p).shape[1] - self.level(i + 1, p).shape[1]
                for i in range(self.depth + 1) for p in self.base.degree_range}

    def _z(self, r: int, a: int, n: int) -> np.ndarray:
        source = self.level(a, n)
        if n + 1 not in self.base.degree_range:
            return source
        return _preimage(self._d[n], source, self.level(a + r, n + 1))

    def page(self, r: int) -> dict:
        entries = {}
        for a in range(self.depth + 1):
            for n in self.base.degree_range:
                z = self._z(r, a, n)
                parts = [self._z(r - 1, a + 1, n)]
                if n - 1 in self.base.degree_range:
                    parts.append(_mul(self._d[n - 1], self._z(r - 1, a - r + 1, n - 1)))
                denom = np.hstack(parts)
                # boundaries and deeper cycles both sit inside z
                assert _contains(z, denom)
                entries[(a, n - a)] = z.shape[1] - _dim(denom)
        return entries


def spectral_sequence(f: FilteredComplex) -> list:
    """Pages ``E_1, E_2, ...`` of the spectral sequence of ``f``, up to E_infinity.

    Over F2, with ``E_1^{a,b} = H^{a+b}(F_a / F_{a+1})``.  The final page
    returned is E_infinity and is flagged ``stable``.
    """
    lo, hi = f.base.degrees
    bound = f.depth + max(hi - lo + 1, 0) + 1
    raw = [f.page(r) for r in range(1, bound + 1)]
    last = len(raw) - 1
    while last > 0 and raw[last - 1] == raw[-1]:
        last -= 1
    return [SpectralPage(r + 1, raw[r], stable=(r == last)) for r in range(last + 1)]
