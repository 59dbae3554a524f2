"""Dense exact linear algebra over Z/p.

Matrices are int64 numpy arrays holding canonical residues. Since p < 2**31,
the product of two residues fits in an int64; matrix products chunk the inner
dimension so partial sums never overflow.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch
from .gf import Modulus, as_modulus

_INT64_MAX = np.iinfo(np.int64).max


def reduce_mod(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` without int64 overflow."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1]
    step = max(1, _INT64_MAX // ((p - 1) ** 2 + 1))
    if inner <= step:
        return np.mod(a @ b, p)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(0, inner, step):
        out = np.mod(out + np.mod(a[:, k:k + step] @ b[k:k + step], p), p)
    return out


def row_echelon(a: np.ndarray, p: int, *, reduced: bool = False,
                stop_rank: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Gaussian elimination mod p on a copy of ``a``.

    Pivots are the first nonzero entry in each column at or below the current
    row. Pivot rows are normalised to a leading 1. With ``reduced=True`` the
    entries above each pivot are cleared too (RREF). Elimination stops early
    once ``stop_rank`` pivots have been found.

    Returns the reduced matrix and the list of pivot columns.
    """
    m = np.mod(np.array(a, dtype=np.int64, copy=True), p)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d array, got shape {m.shape}")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows or (stop_rank is not None and r >= stop_rank):
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        if inv != 1:
            m[r, c:] = m[r, c:] * inv % p
        pivot_row = m[r, c:]
        below = r + 1 + np.flatnonzero(m[r + 1:, c])
        if below.size:
            m[below, c:] = (m[below, c:] - np.outer(m[below, c], pivot_row)) % p
        if reduced and r:
            above = np.flatnonzero(m[:r, c])
            if above.size:
                m[above, c:] = (m[above, c:] - np.outer(m[above, c], pivot_row)) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank_array(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # Elimination cost is driven by the pivot loop; loop over the short side.
    if a.shape[1] > a.shape[0]:
        a = a.T
    return len(row_echelon(a, p)[1])


def kernel_array(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the right kernel of ``a`` (shape cols x nullity)."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    rref, pivots = row_echelon(a, p, reduced=True)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    k = np.zeros((cols, len(free)), dtype=np.int64)
    for j, c in enumerate(free):
        k[c, j] = 1
        for i, pc in enumerate(pivots):
            k[pc, j] = (-rref[i, c]) % p
    return k


@dataclass(frozen=True, eq=False)
class FMatrix:
    """A dense matrix over Z/p."""

    data: np.ndarray
    modulus: Modulus

    def __post_init__(self):
        m = as_modulus(self.modulus)
        d = np.mod(np.asarray(self.data, dtype=np.int64), m.p)
        if d.ndim != 2:
            raise ShapeMismatch(f"FMatrix needs 2-d data, got shape {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "data", d)
        object.__setattr__(self, "modulus", m)

    @classmethod
    def identity(cls, k: int, modulus) -> FMatrix:
        return cls(np.eye(k, dtype=np.int64), modulus)

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus) -> FMatrix:
        return cls(np.zeros((rows, cols), dtype=np.int64), modulus)

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> FMatrix:
        return FMatrix(self.data.T, self.modulus)

    def __matmul__(self, other: FMatrix) -> FMatrix:
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return FMatrix(matmul_mod(self.data, other.data, self.p), self.modulus)

    def __eq__(self, other):
        if not isinstance(other, FMatrix):
            return NotImplemented
        return (self.modulus == other.modulus and self.shape == other.shape
                and bool(np.array_equal(self.data, other.data)))

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def is_zero(self) -> bool:
        return not self.data.any()

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def dump(self) -> str:
        """Text dump: header ``rows cols p`` then one line of residues per row."""
        lines = [f"{self.rows} {self.cols} {self.p}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.data]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"FMatrix({self.rows}x{self.cols} over Z/{self.p})"


def rank(m: FMatrix) -> int:
    return rank_array(m.data, m.p)


def kernel_basis(m: FMatrix) -> FMatrix:
    """Matrix whose columns are a basis of the right kernel of ``m``."""
    return FMatrix(kernel_array(m.data, m.p), m.modulus)


class StreamingRank:
    """Incremental column-space rank of a horizontally stacked block matrix.

    Each block's columns are reduced against a basis kept in reduced row
    echelon form (basis vectors stored as rows), so memory stays bounded by
    ``rows x rows`` however many blocks arrive.
    """

    def __init__(self, rows: int, modulus):
        self.rows = rows
        self.modulus = as_modulus(modulus)
        self._basis = np.zeros((0, rows), dtype=np.int64)
        self._pivots: list[int] = []
        self.blocks_consumed = 0

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def add(self, block) -> int:
        p = self.modulus.p
        b = block.data if isinstance(block, FMatrix) else np.asarray(block, dtype=np.int64)
        if b.ndim != 2 or b.shape[0] != self.rows:
            raise ShapeMismatch(
                f"block has shape {b.shape}, expected {self.rows} rows")
        self.blocks_consumed += 1
        if self.rank == self.rows or b.shape[1] == 0:
            return self.rank
        v = np.mod(b.T, p)
        if self._pivots:
            v = np.mod(v - matmul_mod(v[:, self._pivots], self._basis, p), p)
        if not v.any():
            return self.rank
        new, new_piv = row_echelon(v, p, reduced=True)
        new = new[:len(new_piv)]
        if self._pivots:
            coeff = self._basis[:, new_piv]
            self._basis = np.mod(self._basis - matmul_mod(coeff, new, p), p)
        basis = np.vstack([self._basis, new])
        pivots = self._pivots + new_piv
        order = np.argsort(pivots, kind="stable")
        self._basis = basis[order]
        self._pivots = [pivots[i] for i in order]
        return self.rank


def rank_lower_bound_streaming(blocks: Iterable, modulus, *, rows: int | None = None,
                               target: int | None = None) -> int:
    """Rank of ``[B_1 | B_2 | ...]`` computed block by block.

    Stops pulling blocks from the iterable as soon as ``target`` is reached,
    so the return value is a lower bound when ``target`` is hit early and the
    exact rank otherwise.
    """
    stream: StreamingRank | None = None
    if rows is not None:
        stream = StreamingRank(rows, modulus)
        if target is not None and target <= 0:
            return 0
    for block in blocks:
        if stream is None:
            shape = block.shape
            stream = StreamingRank(shape[0], modulus)
        stream.add(block)
        if target is not None and stream.rank >= target:
            break
    return 0 if stream is None else stream.rank
