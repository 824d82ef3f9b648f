"""Exact integer and mod-2 matrix kernels.

Integer matrices hold Python ints, so nothing here can overflow.  Mod-2
work is done on ``numpy.uint8`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "IntegerMatrix",
    "SmithForm",
    "smith_normal_form",
    "rank_mod2",
    "kernel_basis_mod2",
    "row_reduce_mod2",
    "span_rank_mod2",
    "in_span_mod2",
    "to_mod2",
]


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense row-major matrix of arbitrary-precision integers.

    Zero-row and zero-column matrices are legal; they stand for the zero map
    into or out of a rank-0 module.
    """

    rows: int
    cols: int
    entries: tuple = field(default=())

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"negative shape {self.rows}x{self.cols}")
        entries = tuple(int(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(entries)}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(a.shape[0], a.shape[1], tuple(int(x) for x in a.ravel()))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def to_array(self) -> np.ndarray:
        """Object-dtype array (keeps exact ints)."""
        out = np.empty((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.to_rows()):
            out[i, :] = row
        return out

    def is_zero(self) -> bool:
        return not any(self.entries)

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self.to_rows(), other.to_rows()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols))
                for j in range(other.cols)] for i in range(self.rows)]
        return IntegerMatrix.from_rows(out, cols=other.cols)

    def mod(self, n: int) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, tuple(x % n for x in self.entries))

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.to_rows()}

    @classmethod
    def from_json(cls, obj) -> "IntegerMatrix":
        if isinstance(obj, list):
            return cls.from_rows(obj)
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj.get("entries", [])
        if entries and isinstance(entries[0], list):
            if len(entries) != rows:
                raise ValueError(f"expected {rows} rows, got {len(entries)}")
            for r in entries:
                if len(r) != cols:
                    raise ValueError(f"expected rows of length {cols}")
            flat = [x for r in entries for x in r]
        else:
            flat = list(entries)
        return cls(rows, cols, tuple(flat))


@dataclass(frozen=True)
class SmithForm:
    """Invariant factors ``d_1 | d_2 | ... | d_r`` of a matrix.

    When transforms were requested, ``left @ m @ right`` is the diagonal
    matrix with the factors on its diagonal (same shape as ``m``).
    """

    invariant_factors: tuple
    left_transform: Optional[IntegerMatrix] = None
    right_transform: Optional[IntegerMatrix] = None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> tuple:
        return tuple(d for d in self.invariant_factors if d > 1)


def smith_normal_form(m: IntegerMatrix, with_transforms: bool = False) -> SmithForm:
    """Smith normal form over the integers.

    Pivots on the smallest nonzero absolute value in the active submatrix,
    ties broken by lowest (row, col), which keeps the result deterministic.
    """
    nr, nc = m.rows, m.cols
    a = m.to_rows()
    u = [[int(i == j) for j in range(nr)] for i in range(nr)] if with_transforms else None
    v = [[int(i == j) for j in range(nc)] for i in range(nc)] if with_transforms else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if u is not None:
            u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        if v is not None:
            for row in v:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        ra, rs = a[dst], a[src]
        for j in range(nc):
            if rs[j]:
                ra[j] += q * rs[j]
        if u is not None:
            ua, us = u[dst], u[src]
            for j in range(nr):
                if us[j]:
                    ua[j] += q * us[j]

    def add_col(dst, src, q):
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        if v is not None:
            for row in v:
                if row[src]:
                    row[dst] += q * row[src]

    factors = []
    t = 0
    while t < min(nr, nc):
        pivot = None
        for i in range(t, nr):
            row = a[i]
            for j in range(t, nc):
                x = row[j]
                if x and (pivot is None or abs(x) < pivot[0]):
                    pivot = (abs(x), i, j)
        if pivot is None:
            break
        _, pi, pj = pivot
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)

        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                pivot = None
                for i in range(t, nr):
                    if a[i][t] and (pivot is None or abs(a[i][t]) < pivot[0]):
                        pivot = (abs(a[i][t]), i, t)
                for j in range(t + 1, nc):
                    if a[t][j] and abs(a[t][j]) < pivot[0]:
                        pivot = (abs(a[t][j]), t, j)
                _, pi, pj = pivot
                if pi != t:
                    swap_rows(t, pi)
                if pj != t:
                    swap_cols(t, pj)
                continue
            # row and column clear; enforce divisibility on the rest
            bad = None
            for i in range(t + 1, nr):
                row = a[i]
                for j in range(t + 1, nc):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
        factors.append(a[t][t])
        t += 1

    if not with_transforms:
        return SmithForm(tuple(factors))
    return SmithForm(tuple(factors),
                     IntegerMatrix.from_rows(u, cols=nr),
                     IntegerMatrix.from_rows(v, cols=nc))


# -- mod 2 ------------------------------------------------------------------

def to_mod2(m) -> np.ndarray:
    """Reduce an ``IntegerMatrix`` or array-like to a uint8 array mod 2."""
    if isinstance(m, IntegerMatrix):
        arr = np.array([x & 1 for x in m.entries], dtype=np.uint8)
        return arr.reshape(m.rows, m.cols)
    arr = np.asarray(m)
    if arr.dtype == object:
        return np.vectorize(lambda x: int(x) & 1, otypes=[np.uint8])(arr) \
            if arr.size else arr.astype(np.uint8)
    return (arr.astype(np.int64) & 1).astype(np.uint8)


def row_reduce_mod2(a) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F2 and the pivot columns."""
    a = to_mod2(a).copy()
    nr, nc = a.shape
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        k = r + hits[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod2(m) -> int:
    """Rank of ``m`` reduced modulo 2."""
    a = to_mod2(m)
    if a.size == 0:
        return 0
    return len(row_reduce_mod2(a)[1])


def kernel_basis_mod2(m) -> list[np.ndarray]:
    """Basis of the right null space of ``m`` over F2."""
    a = to_mod2(m)
    nc = a.shape[1]
    if a.shape[0] == 0:
        return [np.eye(nc, dtype=np.uint8)[i] for i in range(nc)]
    red, pivots = row_reduce_mod2(a)
    free = [c for c in range(nc) if c not in set(pivots)]
    basis = []
    for f in free:
        x = np.zeros(nc, dtype=np.uint8)
        x[f] = 1
        for r, pc in enumerate(pivots):
            if red[r, f]:
                x[pc] = 1
        basis.append(x)
    return basis


def span_rank_mod2(vectors: Iterable) -> int:
    """Dimension of the span of a family of F2 vectors."""
    vectors = [np.asarray(v, dtype=np.uint8) for v in vectors]
    if not vectors:
        return 0
    return rank_mod2(np.vstack(vectors))


def in_span_mod2(basis: np.ndarray, vectors: np.ndarray) -> bool:
    """True when every column of ``vectors`` lies in the column span of ``basis``."""
    basis = to_mod2(basis)
    vectors = to_mod2(vectors)
    if vectors.size == 0 or not vectors.any():
        return True
    if basis.size == 0:
        return False
    return rank_mod2(np.hstack([basis, vectors])) == rank_mod2(basis)
