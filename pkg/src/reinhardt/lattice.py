"""Multi-indices on the non-negative integer lattice.

Indices are enumerated by total degree, then lexicographically. Bulk
routines return ``(m, N)`` integer arrays so that coefficient oracles can
be evaluated vectorised; the list-returning functions wrap them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np


class MultiIndex(tuple):
    """Exponent vector J of a monomial z^J."""

    def __new__(cls, entries):
        entries = tuple(int(j) for j in entries)
        if not entries:
            raise ValueError("multi-index needs at least one entry")
        if any(j < 0 for j in entries):
            raise ValueError(f"negative exponent in {entries}")
        return super().__new__(cls, entries)

    @property
    def dimension(self) -> int:
        return len(self)

    def degree(self) -> int:
        return sum(self)

    def __add__(self, other):
        return MultiIndex(a + b for a, b in zip(self, other, strict=True))

    def __mul__(self, k):
        return MultiIndex(k * j for j in self)

    __rmul__ = __mul__

    def __repr__(self):
        return f"MultiIndex{tuple(self)}"


@lru_cache(maxsize=256)
def _degree_block(n: int, k: int) -> np.ndarray:
    # all J with |J| = k, lexicographic; built from the (n-1)-dimensional blocks
    if n == 1:
        out = np.array([[k]], dtype=np.int64)
    elif n == 2:
        j = np.arange(k + 1, dtype=np.int64)
        out = np.column_stack([j, k - j])
    else:
        parts = []
        for first in range(k + 1):
            rest = _degree_block(n - 1, k - first)
            col = np.full((rest.shape[0], 1), first, dtype=np.int64)
            parts.append(np.hstack([col, rest]))
        out = np.vstack(parts)
    out.setflags(write=False)
    return out


def degree_block(n: int, k: int) -> np.ndarray:
    """Array of all multi-indices of dimension ``n`` and degree ``k``."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if k < 0:
        raise ValueError("degree must be >= 0")
    return _degree_block(n, k)


@lru_cache(maxsize=64)
def _degree_range(n: int, lo: int, hi: int) -> np.ndarray:
    if hi < lo:
        return np.zeros((0, n), dtype=np.int64)
    out = np.vstack([_degree_block(n, k) for k in range(lo, hi + 1)])
    out.setflags(write=False)
    return out


def degree_range(n: int, lo: int, hi: int) -> np.ndarray:
    """All multi-indices with ``lo <= |J| <= hi``, by degree then lexicographic."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return _degree_range(n, max(lo, 0), hi)


def count_by_degree(n: int, k: int) -> int:
    return comb(k + n - 1, n - 1)


def enumerate_by_degree(n: int, k: int) -> list[MultiIndex]:
    """All J in N_0^n with |J| = k in lexicographic order."""
    return [MultiIndex(row) for row in degree_block(n, k)]


def normalize(J) -> np.ndarray:
    """Direction J/|J| on the probability simplex."""
    arr = np.asarray(J, dtype=np.int64)
    deg = int(arr.sum())
    if deg <= 0:
        raise ValueError("undefined direction for the zero multi-index")
    return arr / deg


def l1_distance(a, b) -> float:
    return float(np.abs(np.asarray(a, float) - np.asarray(b, float)).sum())


@dataclass(frozen=True)
class DirectionWindow:
    """Multi-indices of bounded degree whose direction lies near ``center``.

    Distance is measured in the l1 norm on the simplex.
    """

    center: tuple[float, ...]
    radius: float
    degree_lo: int
    degree_hi: int

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if self.radius < 0:
            raise ValueError("window radius must be non-negative")
        if self.degree_lo < 1 or self.degree_hi < self.degree_lo:
            raise ValueError(
                f"bad degree range [{self.degree_lo}, {self.degree_hi}]"
            )

    @property
    def dimension(self) -> int:
        return len(self.center)

    def contains(self, J) -> bool:
        deg = sum(J)
        if not (self.degree_lo <= deg <= self.degree_hi):
            return False
        # tiny slack so that exactly-representable boundary cases are kept
        return l1_distance(normalize(J), self.center) <= self.radius + 1e-12

    def mask(self, block: np.ndarray) -> np.ndarray:
        """Boolean mask selecting rows of ``block`` inside the window."""
        deg = block.sum(axis=1)
        ok = (deg >= self.degree_lo) & (deg <= self.degree_hi)
        dirs = block / np.maximum(deg, 1)[:, None]
        dist = np.abs(dirs - np.asarray(self.center)).sum(axis=1)
        return ok & (dist <= self.radius + 1e-12)

    def array(self) -> np.ndarray:
        block = degree_range(self.dimension, self.degree_lo, self.degree_hi)
        return block[self.mask(block)]


def window_indices(w: DirectionWindow) -> list[MultiIndex]:
    return [MultiIndex(row) for row in w.array()]
