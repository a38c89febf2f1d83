"""Exact max-plus (tropical) scalar and matrix arithmetic.

The semiring works over the reals extended with ``eps`` (the additive
identity, conventionally minus infinity).  ``eps`` is represented by
``None`` rather than ``float("-inf")`` so that absorption is explicit and no
arithmetic can ever produce a NaN: ``eps (+) x = x`` and ``eps (*) x = eps``
hold by construction for every ``x``.

Matrices are immutable, dense, and row-major.  All entries are either
finite floats or ``None``.  Integer-valued inputs stay exact because float
addition of integers below 2**53 is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Scalar = Optional[float]

#: Additive identity of the semiring (read: minus infinity).
EPS: Scalar = None

#: Tolerance used when a quantity must be compared against zero (cycle
#: means accumulate one rounding error per edge, never more than this).
TOL = 1e-9


class ShapeError(ValueError):
    """Operand dimensions do not allow the requested operation."""


class DivergenceError(ValueError):
    """A star-like series diverges because the maximum cycle mean is positive."""


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    """Tropical sum: max(a, b) with eps as neutral element."""
    if a is None:
        return b
    if b is None:
        return a
    return a if a >= b else b


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    """Tropical product: a + b, absorbed to eps if either factor is eps."""
    if a is None or b is None:
        return None
    return a + b


def _coerce(value) -> Scalar:
    if value is None:
        return None
    return float(value)


@dataclass(frozen=True)
class MaxPlusMatrix:
    """Dense max-plus matrix; ``data[i][j] is None`` encodes an eps entry."""

    rows: int
    cols: int
    data: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ShapeError(f"matrix dimensions must be positive, got {self.rows}x{self.cols}")
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ShapeError(f"entry grid does not have shape {self.rows}x{self.cols}")

    # -- construction -------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "MaxPlusMatrix":
        grid = tuple(tuple(_coerce(v) for v in row) for row in rows)
        if not grid:
            raise ShapeError("matrix needs at least one row")
        return cls(len(grid), len(grid[0]), grid)

    @classmethod
    def identity(cls, n: int) -> "MaxPlusMatrix":
        return cls(n, n, tuple(tuple(0.0 if i == j else None for j in range(n)) for i in range(n)))

    @classmethod
    def epsilon(cls, rows: int, cols: int) -> "MaxPlusMatrix":
        return cls(rows, cols, tuple((None,) * cols for _ in range(rows)))

    # -- JSON wire format ----------------------------------------------

    @classmethod
    def from_json(cls, obj: dict) -> "MaxPlusMatrix":
        """Parse ``{"rows": n, "cols": m, "entries": [[...]]}`` (null = eps)."""
        try:
            rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        except (TypeError, KeyError) as exc:
            raise ShapeError(f"matrix object must carry rows/cols/entries: {exc}") from exc
        mat = cls.from_rows(entries)
        if mat.rows != rows or mat.cols != cols:
            raise ShapeError(
                f"declared shape {rows}x{cols} does not match entry grid {mat.rows}x{mat.cols}"
            )
        return mat

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [list(row) for row in self.data],
        }

    # -- basic queries -------------------------------------------------

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int) -> Scalar:
        return self.data[i][j]

    def support(self) -> frozenset[tuple[int, int]]:
        """Positions of the finite entries."""
        return frozenset(
            (i, j) for i in range(self.rows) for j in range(self.cols) if self.data[i][j] is not None
        )

    def le(self, other: "MaxPlusMatrix") -> bool:
        """Entrywise order; eps is below every finite value."""
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("entrywise comparison needs equal shapes")
        for r, s in zip(self.data, other.data):
            for a, b in zip(r, s):
                if a is None:
                    continue
                if b is None or a > b:
                    return False
        return True

    # -- entrywise rebuilds ---------------------------------------------

    def shift(self, delta: float) -> "MaxPlusMatrix":
        """Add ``delta`` to every finite entry (tropical scaling by a scalar)."""
        return MaxPlusMatrix(
            self.rows,
            self.cols,
            tuple(tuple(None if v is None else v + delta for v in row) for row in self.data),
        )

    def diagonal_similarity(self, x: Sequence[float]) -> "MaxPlusMatrix":
        """Conjugate by diag(x): entry (i, j) becomes a_ij - x_i + x_j."""
        if not self.is_square or len(x) != self.rows:
            raise ShapeError("similarity vector length must match a square matrix")
        return MaxPlusMatrix(
            self.rows,
            self.cols,
            tuple(
                tuple(None if v is None else v - x[i] + x[j] for j, v in enumerate(row))
                for i, row in enumerate(self.data)
            ),
        )

    def mask(self, keep: Iterable[int]) -> "MaxPlusMatrix":
        """Replace every row and column outside ``keep`` with eps."""
        kept = set(keep)
        return MaxPlusMatrix(
            self.rows,
            self.cols,
            tuple(
                tuple(v if i in kept and j in kept else None for j, v in enumerate(row))
                for i, row in enumerate(self.data)
            ),
        )

    def __matmul__(self, other: "MaxPlusMatrix") -> "MaxPlusMatrix":
        return mp_multiply(self, other)


def mp_multiply(a: MaxPlusMatrix, b: MaxPlusMatrix) -> MaxPlusMatrix:
    """Tropical matrix product: out[i][j] = max_k (a[i][k] + b[k][j])."""
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bdata = b.data
    out = []
    for i in range(a.rows):
        arow = a.data[i]
        orow = []
        for j in range(b.cols):
            best = None
            for k in range(a.cols):
                x = arow[k]
                if x is None:
                    continue
                y = bdata[k][j]
                if y is None:
                    continue
                s = x + y
                if best is None or s > best:
                    best = s
            orow.append(best)
        out.append(tuple(orow))
    return MaxPlusMatrix(a.rows, b.cols, tuple(out))


def mp_power(a: MaxPlusMatrix, k: int) -> MaxPlusMatrix:
    """k-fold tropical product of a square matrix; the 0th power is diag(0)."""
    if not a.is_square:
        raise ShapeError(f"powers need a square matrix, got {a.rows}x{a.cols}")
    if k < 0:
        raise ValueError(f"exponent must be nonnegative, got {k}")
    result = MaxPlusMatrix.identity(a.rows)
    base = a
    while k:
        if k & 1:
            result = mp_multiply(result, base)
        k >>= 1
        if k:
            base = mp_multiply(base, base)
    return result


def entrywise_sup(mats: Sequence[MaxPlusMatrix]) -> MaxPlusMatrix:
    """Entrywise tropical sum (max) of a nonempty family of equal-shape matrices."""
    if not mats:
        raise ShapeError("supremum of an empty family is undefined")
    first = mats[0]
    if any((m.rows, m.cols) != (first.rows, first.cols) for m in mats):
        raise ShapeError("entrywise supremum needs equal shapes")
    out = []
    for i in range(first.rows):
        row = []
        for j in range(first.cols):
            best = None
            for m in mats:
                best = scalar_add(best, m.data[i][j])
            row.append(best)
        out.append(tuple(row))
    return MaxPlusMatrix(first.rows, first.cols, tuple(out))


def entrywise_inf(mats: Sequence[MaxPlusMatrix]) -> MaxPlusMatrix:
    """Entrywise infimum; an eps entry in any member makes the infimum eps."""
    if not mats:
        raise ShapeError("infimum of an empty family is undefined")
    first = mats[0]
    if any((m.rows, m.cols) != (first.rows, first.cols) for m in mats):
        raise ShapeError("entrywise infimum needs equal shapes")
    out = []
    for i in range(first.rows):
        row = []
        for j in range(first.cols):
            vals = [m.data[i][j] for m in mats]
            row.append(None if any(v is None for v in vals) else min(vals))
        out.append(tuple(row))
    return MaxPlusMatrix(first.rows, first.cols, tuple(out))


def _check_convergent(a: MaxPlusMatrix) -> None:
    # Local import: the cycle-mean routine lives with the digraph analytics
    # and itself has no dependency on star computations.
    from .digraph import WeightedDigraph, max_cycle_mean

    lam = max_cycle_mean(WeightedDigraph.from_matrix(a))
    if lam is not None and lam > TOL:
        raise DivergenceError(f"maximum cycle mean {lam} is positive; the star series diverges")


def kleene_star(a: MaxPlusMatrix) -> MaxPlusMatrix:
    """I (+) a (+) a^2 (+) ... , truncated exactly at the (n-1)th power.

    Requires a nonpositive maximum cycle mean; then optimal walks shed their
    cycles, so walks of length at most n-1 realise every star entry.
    """
    if not a.is_square:
        raise ShapeError("star needs a square matrix")
    _check_convergent(a)
    result = MaxPlusMatrix.identity(a.rows)
    power = result
    for _ in range(a.rows - 1):
        power = mp_multiply(power, a)
        result = entrywise_sup([result, power])
    return result


def metric_matrix(a: MaxPlusMatrix) -> MaxPlusMatrix:
    """a (+) a^2 (+) ... : optimal weights of nonempty walks between all pairs."""
    return mp_multiply(a, kleene_star(a))


def matrices_equal(a: MaxPlusMatrix, b: MaxPlusMatrix) -> bool:
    return (a.rows, a.cols) == (b.rows, b.cols) and a.data == b.data


def first_difference(a: MaxPlusMatrix, b: MaxPlusMatrix) -> Optional[tuple[int, int]]:
    """Lexicographically first position where the two matrices differ."""
    for i in range(a.rows):
        for j in range(a.cols):
            if a.data[i][j] != b.data[i][j]:
                return (i, j)
    return None


def ceil_int(x: float) -> int:
    """Ceiling that forgives sub-tolerance float dirt just above an integer."""
    return math.ceil(x - TOL)
