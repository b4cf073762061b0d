"""Systematic shortened Hamming codes and the parity maps used to read them from registers."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import RangeError, ShapeError


def parity_length(k: int) -> int:
    """Smallest r with 2^r - r - 1 >= k."""
    if k < 1:
        raise RangeError("a code needs at least one information bit")
    r = 2
    while 2**r - r - 1 < k:
        r += 1
    return r


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Binary code with generator [I_k | P]; column j of the check matrix is ``columns[j]``."""

    k: int
    r: int
    columns: tuple[int, ...] = field(repr=False)

    @property
    def n_hat(self) -> int:
        return self.k + self.r

    @cached_property
    def generator(self) -> np.ndarray:
        g = np.zeros((self.k, self.n_hat), dtype=np.uint8)
        g[:, : self.k] = np.eye(self.k, dtype=np.uint8)
        for i, h in enumerate(self.columns[: self.k]):
            for t in range(self.r):
                g[i, self.k + t] = h >> t & 1
        g.setflags(write=False)
        return g

    @cached_property
    def _position_of(self) -> np.ndarray:
        lookup = np.zeros(2**self.r, dtype=np.int64)
        for j, h in enumerate(self.columns):
            lookup[h] = j + 1
        return lookup

    @cached_property
    def _column_array(self) -> np.ndarray:
        return np.array(self.columns, dtype=np.int64)

    def encode(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=np.uint8)
        if u.shape[-1] != self.k:
            raise ShapeError(f"expected {self.k} information bits, got {u.shape[-1]}")
        return (u.astype(np.int64) @ self.generator % 2).astype(np.uint8)

    def syndrome(self, v) -> np.ndarray | int:
        """XOR of the check columns at the set positions of v (works row-wise on 2-d input)."""
        v = np.asarray(v)
        if v.shape[-1] != self.n_hat:
            raise ShapeError(f"expected {self.n_hat} code bits, got {v.shape[-1]}")
        s = np.zeros(v.shape[:-1], dtype=np.int64)
        for j, h in enumerate(self.columns):
            s ^= np.where(v[..., j] & 1, h, 0)
        return s if s.ndim else int(s)

    def decode_error_position(self, v) -> np.ndarray | int:
        """j >= 1 when v is a codeword with bit j flipped, 0 for codewords and unmatched syndromes."""
        s = self.syndrome(v)
        out = self._position_of[s]
        return out if np.ndim(out) else int(out)

    def codewords(self) -> np.ndarray:
        if self.k > 20:
            raise RangeError("refusing to list more than 2^20 codewords")
        u = ((np.arange(2**self.k)[:, None] >> np.arange(self.k)) & 1).astype(np.uint8)
        return self.encode(u)

    @cached_property
    def min_distance(self) -> int:
        w = self.codewords().sum(axis=1)
        return int(w[w > 0].min())


def shortened_hamming(k: int) -> LinearCode:
    """Hamming code of length 2^r - 1 cut down to k information bits.

    Information columns are the k smallest numerals that are not powers of two;
    the check bits sit behind them with columns 1, 2, 4, ...
    """
    r = parity_length(k)
    info = [h for h in range(3, 2**r) if h & (h - 1)][:k]
    return LinearCode(k, r, tuple(info) + tuple(1 << t for t in range(r)))


def encode(code: LinearCode, u) -> np.ndarray:
    return code.encode(u)


def decode_error_position(code: LinearCode, v):
    return code.decode_error_position(v)


def odd_map(x):
    """Parity of each symbol."""
    x = np.asarray(x)
    out = x & 1
    return out if out.ndim else int(out)


def err_map(a, q: int):
    """a + 1 below the top symbol, q - 2 at the top: always flips the parity."""
    a = np.asarray(a)
    if ((a < 0) | (a >= q)).any():
        raise RangeError(f"symbol outside 0..{q - 1}")
    out = np.where(a < q - 1, a + 1, a - 1)
    return out if out.ndim else int(out)
