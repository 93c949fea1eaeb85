"""Dense GF(2) linear algebra on packed rows.

Vectors and matrix rows are Python ints used as bitsets: bit ``i`` is
coordinate ``i``. XOR of two ints is vector addition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch


def pack(bits) -> int:
    """Pack a 0/1 sequence or array into an int, coordinate 0 lowest."""
    arr = np.asarray(bits, dtype=np.uint8).ravel() & 1
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def unpack(x: int, dim: int) -> np.ndarray:
    nbytes = (dim + 7) // 8
    raw = np.frombuffer(x.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, count=dim, bitorder="little")


def pack_rows(arr: np.ndarray) -> list[int]:
    arr = np.asarray(arr, dtype=np.uint8) & 1
    if arr.shape[1] == 0:
        return [0] * arr.shape[0]
    packed = np.packbits(arr, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def parity(x: int) -> int:
    return bin(x).count("1") & 1


@dataclass(frozen=True)
class F2Vector:
    dim: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.dim:
            raise DimensionMismatch(f"bits exceed dimension {self.dim}")

    @classmethod
    def zero(cls, dim: int) -> F2Vector:
        return cls(dim, 0)

    @classmethod
    def unit(cls, dim: int, i: int) -> F2Vector:
        return cls(dim, 1 << i)

    @classmethod
    def from_array(cls, arr) -> F2Vector:
        arr = np.asarray(arr)
        return cls(arr.shape[-1] if arr.ndim else 1, pack(arr))

    @classmethod
    def from_list(cls, coords: Sequence[int]) -> F2Vector:
        return cls(len(coords), pack(coords))

    def to_array(self) -> np.ndarray:
        return unpack(self.bits, self.dim)

    def to_list(self) -> list[int]:
        return [int(b) for b in self.to_array()]

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.dim:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __add__(self, other: F2Vector) -> F2Vector:
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} != {other.dim}")
        return F2Vector(self.dim, self.bits ^ other.bits)

    __sub__ = __add__

    def __neg__(self) -> F2Vector:
        return self

    def __bool__(self) -> bool:
        return self.bits != 0

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def support(self) -> list[int]:
        return [i for i in range(self.dim) if (self.bits >> i) & 1]

    def __repr__(self) -> str:
        return f"F2Vector({''.join(map(str, self.to_list()))})"


@dataclass(frozen=True)
class F2Matrix:
    """Row-packed matrix; ``rows[i]`` is row i as a bitset over columns."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != self.nrows:
            raise DimensionMismatch(f"{len(rows)} rows stored, {self.nrows} declared")
        for r in rows:
            if r < 0 or r >> self.ncols:
                raise DimensionMismatch("row wider than ncols")

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> F2Matrix:
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_array(cls, arr) -> F2Matrix:
        arr = np.atleast_2d(np.asarray(arr, dtype=np.uint8))
        return cls(arr.shape[0], arr.shape[1], tuple(pack_rows(arr)))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> F2Matrix:
        return cls.from_array(np.array(list(rows), dtype=np.uint8))

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i] = unpack(r, self.ncols)
        return out

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return (self.rows[i] >> j) & 1

    def __add__(self, other: F2Matrix) -> F2Matrix:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("shape mismatch")
        return F2Matrix(self.nrows, self.ncols,
                        tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def transpose(self) -> F2Matrix:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return F2Matrix(self.ncols, self.nrows, tuple(cols))

    @property
    def T(self) -> F2Matrix:
        return self.transpose()

    def apply(self, x: F2Vector) -> F2Vector:
        """Column convention: A x."""
        if x.dim != self.ncols:
            raise DimensionMismatch(f"{self.ncols} columns, vector of dim {x.dim}")
        out = 0
        for i, r in enumerate(self.rows):
            if parity(r & x.bits):
                out |= 1 << i
        return F2Vector(self.nrows, out)

    def left_apply(self, v: F2Vector) -> F2Vector:
        """Row convention: v A, the XOR of the rows selected by v."""
        if v.dim != self.nrows:
            raise DimensionMismatch(f"{self.nrows} rows, vector of dim {v.dim}")
        out, b = 0, v.bits
        while b:
            low = b & -b
            out ^= self.rows[low.bit_length() - 1]
            b ^= low
        return F2Vector(self.ncols, out)

    def __matmul__(self, other):
        if isinstance(other, F2Vector):
            return self.apply(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch("inner dimensions differ")
        rows = tuple(other.left_apply(F2Vector(self.ncols, r)).bits for r in self.rows)
        return F2Matrix(self.nrows, other.ncols, rows)


class _Echelon:
    """Rows inserted top to bottom; each row's pivot is its lowest set bit
    after reduction by earlier pivots (leftmost column, topmost row).

    Each stored row carries a tag recording which input rows were summed
    into it.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, int] = {}
        self.tags: dict[int, int] = {}

    def insert(self, row: int, tag: int = 0) -> tuple[int, int]:
        piv = self.pivots
        while row:
            low = row & -row
            p = low.bit_length() - 1
            if p >= self.ncols:
                return row, tag
            r = piv.get(p)
            if r is None:
                piv[p] = row
                self.tags[p] = tag
                return row, tag
            row ^= r
            tag ^= self.tags[p]
        return 0, tag


def rank(A: F2Matrix) -> int:
    ech = _Echelon(A.ncols)
    for r in A.rows:
        ech.insert(r)
    return len(ech.pivots)


def solve(A: F2Matrix, b: F2Vector) -> F2Vector | None:
    """Some x with A x = b, or None if the system is inconsistent.

    Free variables are set to zero, so the witness is determined by the
    fixed pivot order.
    """
    return solve_certified(A, b)[0]


def solve_certified(A: F2Matrix, b: F2Vector) -> tuple[F2Vector | None, F2Vector | None]:
    """``(x, None)`` with A x = b, or ``(None, y)`` with y A = 0 and y.b = 1.

    The vector y selects rows of the system whose sum reads 0 = 1; it is the
    first such combination met in row order.
    """
    if b.dim != A.nrows:
        raise DimensionMismatch(f"A has {A.nrows} rows, b has dim {b.dim}")
    n = A.ncols
    aug = 1 << n
    ech = _Echelon(n)
    for i, r in enumerate(A.rows):
        left, tag = ech.insert(r | (aug if (b.bits >> i) & 1 else 0), 1 << i)
        if left == aug:
            return None, F2Vector(A.nrows, tag)
    x = 0
    mask_lo = aug - 1
    for p in sorted(ech.pivots, reverse=True):
        row = ech.pivots[p]
        rhs = 1 if row & aug else 0
        rest = (row & mask_lo) ^ (1 << p)
        if (rhs ^ parity(rest & x)) & 1:
            x |= 1 << p
    return F2Vector(n, x), None
