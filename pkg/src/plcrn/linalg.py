"""Exact rational linear algebra on small dense matrices.

Every independence decision in the package goes through here, so nothing
in this module ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, decimal strings or floats (exactly) to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    raise TypeError(f"cannot convert {value!r} to Fraction")


class RatMatrix:
    """Immutable dense matrix over the rationals, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        data = tuple(as_fraction(e) for e in entries)
        if not data:
            data = (Fraction(0),) * (rows * cols)
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "RatMatrix":
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls.from_rows([list(c) for c in columns], cols=rows).T

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [int(i == j) for i in range(n) for j in range(n)])

    def __getitem__(self, idx):
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return self._data[i * self.cols + j]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self._data[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(e) for e in self.row(i)] for i in range(self.rows)],
                        dtype=float).reshape(self.rows, self.cols)

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def select_columns(self, idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix.from_columns([self.column(j) for j in idx], rows=self.rows)

    def select_rows(self, idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix.from_rows([self.row(i) for i in idx], cols=self.cols)

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        if other.cols != self.cols:
            raise ValueError("column counts differ")
        return RatMatrix(self.rows + other.rows, self.cols, self._data + other._data)

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        return self.T.vstack(other.T).T

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for j in range(other.cols):
                    out.append(sum((r[k] * other[k, j] for k in range(self.cols)), Fraction(0)))
            return RatMatrix(self.rows, other.cols, out)
        vec = [as_fraction(v) for v in other]
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum((a * b for a, b in zip(self.row(i), vec)), Fraction(0)) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"


def rref(a: RatMatrix) -> tuple[RatMatrix, list[int]]:
    """Reduced row-echelon form by exact Gauss-Jordan elimination.

    The pivot in each column is the first nonzero entry at or below the
    current pivot row. Returns the reduced matrix and its pivot columns.
    """
    m = a.tolist()
    pivots: list[int] = []
    r = 0
    for c in range(a.cols):
        if r == a.rows:
            break
        p = next((i for i in range(r, a.rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [e * inv for e in m[r]]
        for i in range(a.rows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return RatMatrix.from_rows(m, cols=a.cols), pivots


def rank(a: RatMatrix) -> int:
    return len(rref(a)[1])


def nullspace(a: RatMatrix) -> list[list[Fraction]]:
    """Exact basis of the right kernel, one vector per free column."""
    red, pivots = rref(a)
    free = [j for j in range(a.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * a.cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i, f]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class ExactSolution:
    particular: list[Fraction]
    nullspace: list[list[Fraction]]


def solve(a: RatMatrix, b: Sequence) -> ExactSolution | None:
    """Solve ``a x = b`` exactly.

    Returns the particular solution with free variables set to zero plus a
    kernel basis, or ``None`` when the system is inconsistent.
    """
    b = [as_fraction(v) for v in b]
    if len(b) != a.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {a.rows}")
    aug = RatMatrix(a.rows, a.cols + 1,
                    [e for i in range(a.rows) for e in (*a.row(i), b[i])])
    red, pivots = rref(aug)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [Fraction(0)] * a.cols
    for i, pc in enumerate(pivots):
        x[pc] = red[i, a.cols]
    return ExactSolution(x, nullspace(a))


def rank_additive(whole: RatMatrix, parts: Sequence[RatMatrix]) -> bool:
    """True iff ``rank(whole)`` equals the sum of the ranks of ``parts``."""
    return rank(whole) == sum(rank(p) for p in parts)
