"""Exact dense linear algebra over GF(2) with bit-packed rows.

Rows are stored as Python integers, one bit per entry (bit ``j`` of row
``i`` is the (i, j) entry), so XOR gives whole-row addition at machine
speed.  All values are immutable; every operation returns new objects.
Equality of matrices is semantic (rows/cols/entries), never about the
packing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ContractViolationError


def _low_bit(x: int) -> int:
    """Index of the least significant set bit of x > 0."""
    return (x & -x).bit_length() - 1


def _bits(x: int):
    """Yield set-bit indices of x in increasing order."""
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


@dataclass(frozen=True)
class F2Matrix:
    """A rows x cols matrix over GF(2); ``data[i]`` packs row i."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.data) != self.rows:
            raise ContractViolationError("inconsistent matrix shape")
        bound = 1 << self.cols
        if any(r < 0 or r >= bound for r in self.data):
            raise ContractViolationError("row has bits beyond the last column")

    # -- constructors ------------------------------------------------

    @staticmethod
    def from_rows(rows: Sequence[Iterable[int]], cols: Optional[int] = None) -> "F2Matrix":
        packed = []
        width = 0
        for row in rows:
            bits = [int(v) & 1 for v in row]
            width = max(width, len(bits))
            packed.append(sum(b << j for j, b in enumerate(bits)))
        if cols is None:
            cols = width
        return F2Matrix(len(packed), cols, tuple(packed))

    @staticmethod
    def from_row_ints(row_ints: Sequence[int], cols: int) -> "F2Matrix":
        return F2Matrix(len(row_ints), cols, tuple(row_ints))

    @staticmethod
    def zero(rows: int, cols: int) -> "F2Matrix":
        return F2Matrix(rows, cols, (0,) * rows)

    @staticmethod
    def identity(n: int) -> "F2Matrix":
        return F2Matrix(n, n, tuple(1 << i for i in range(n)))

    # -- basic views --------------------------------------------------

    def entry(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.data]

    def transpose(self) -> "F2Matrix":
        cols = [0] * self.cols
        for i, r in enumerate(self.data):
            for j in _bits(r):
                cols[j] |= 1 << i
        return F2Matrix(self.cols, self.rows, tuple(cols))

    def mul_vec(self, v: int) -> int:
        """Matrix times column vector (vector packed like a row)."""
        out = 0
        for i, r in enumerate(self.data):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def mul(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise ContractViolationError("dimension mismatch in matrix product")
        out = []
        for r in self.data:
            acc = 0
            for j in _bits(r):
                acc ^= other.data[j]
            out.append(acc)
        return F2Matrix(self.rows, other.cols, tuple(out))


def rref(m: F2Matrix) -> tuple[F2Matrix, tuple[int, ...]]:
    """Reduced row-echelon form of ``m`` and its pivot columns.

    Uses insertion with immediate reduction: each row is XOR-reduced
    against the current pivot rows until its leading bit lands in a free
    column.  A final back-substitution clears pivot columns everywhere,
    so the result is the (unique) RREF; the row space is preserved.
    """
    piv: dict[int, int] = {}
    for row in m.data:
        while row:
            c = _low_bit(row)
            other = piv.get(c)
            if other is None:
                piv[c] = row
                break
            row ^= other
    cols = sorted(piv)
    # Back-substitute in decreasing column order.
    for idx in range(len(cols) - 1, -1, -1):
        c = cols[idx]
        row = piv[c]
        acc = row
        rest = row ^ (1 << c)
        for b in _bits(rest):
            hit = piv.get(b)
            if hit is not None:
                acc ^= hit
        piv[c] = acc
    out_rows = [piv[c] for c in cols]
    out_rows.extend([0] * (m.rows - len(out_rows)))
    return F2Matrix(m.rows, m.cols, tuple(out_rows)), tuple(cols)


def rank(m: F2Matrix) -> int:
    return len(rref(m)[1])


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(2)^ambient_dim, basis in reduced echelon form.

    Basis vectors are bit-packed, linearly independent, and listed in
    strictly increasing pivot order.
    """

    basis: tuple[int, ...]
    ambient_dim: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: int) -> bool:
        for b in self.basis:
            if v and _low_bit(v) == _low_bit(b):
                v ^= b
        return v == 0

    def reduce(self, v: int) -> int:
        """Canonical coset representative of v modulo this subspace."""
        for b in self.basis:
            p = _low_bit(b)
            if (v >> p) & 1:
                v ^= b
        return v


def row_space(m: F2Matrix) -> Subspace:
    r, pivots = rref(m)
    return Subspace(tuple(r.data[: len(pivots)]), m.cols)


def span(vectors: Iterable[int], ambient_dim: int) -> Subspace:
    return row_space(F2Matrix.from_row_ints(tuple(vectors), ambient_dim))


def kernel(m: F2Matrix) -> Subspace:
    """Null space {x : m x = 0}, basis in reduced echelon form."""
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for f in free:
        v = 1 << f
        for i, p in enumerate(pivots):
            if (r.data[i] >> f) & 1:
                v |= 1 << p
        basis.append(v)
    # Free columns increase, and each basis vector has its lowest set bit
    # at a distinct position; re-reduce to echelon order for the invariant.
    return span(basis, m.cols)


def solve(m: F2Matrix, b: int) -> Optional[int]:
    """Some x with m x = b, or None if b is outside the column space.

    ``b`` is a bit-packed vector of length ``m.rows``.
    """
    if b < 0 or b >> m.rows:
        raise ContractViolationError("right-hand side longer than row count")
    aug_rows = []
    for i, row in enumerate(m.data):
        aug_rows.append(row | (((b >> i) & 1) << m.cols))
    r, pivots = rref(F2Matrix(m.rows, m.cols + 1, tuple(aug_rows)))
    if m.cols in pivots:
        return None
    x = 0
    for i, p in enumerate(pivots):
        if (r.data[i] >> m.cols) & 1:
            x |= 1 << p
    return x
