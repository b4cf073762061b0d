"""Gray and pseudo-Gray codes with few runs.

A code is an ordered list of states ``a[0], ..., a[L-1]``.  Its delta sequence
``c[i]`` is the 1-based coordinate in which ``a[i-1]`` and ``a[i]`` differ, with
``a[-1]`` read cyclically, so ``c[0]`` is the wrap-around coordinate.  A run is a
stretch of pairwise distinct deltas; runs are found greedily.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import RangeError

__all__ = [
    "GrayCode",
    "PseudoGrayCode",
    "canonical_gray",
    "doubling_gray",
    "product_gray",
    "even_gray",
    "pseudo_gray",
    "greedy_runs",
    "redundancy",
    "gray_problems",
    "is_valid_gray",
]


def _delta(order: np.ndarray) -> tuple[int, ...]:
    prev = np.roll(order, 1, axis=0)
    diff = order != prev
    counts = diff.sum(axis=1)
    if len(order) > 1 and not (counts == 1).all():
        return ()
    return tuple(int(c) + 1 for c in diff.argmax(axis=1))


@dataclass(frozen=True, eq=False)
class GrayCode:
    n: int
    q: int
    order: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(self.order, dtype=np.int64).reshape(-1, self.n)
        arr.setflags(write=False)
        object.__setattr__(self, "order", arr)

    def __len__(self) -> int:
        return len(self.order)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GrayCode)
            and (self.n, self.q) == (other.n, other.q)
            and np.array_equal(self.order, other.order)
        )

    __hash__ = None

    @cached_property
    def delta(self) -> tuple[int, ...]:
        return _delta(self.order)

    @cached_property
    def runs(self) -> list[tuple[int, int]]:
        return greedy_runs(self.delta)

    @property
    def run_count(self) -> int:
        return len(self.runs)

    def strings(self) -> list[str]:
        return ["".join(str(v) if self.q <= 10 else f"{v}," for v in row).rstrip(",") for row in self.order.tolist()]

    def rotated(self, start: int) -> "GrayCode":
        return type(self)(self.n, self.q, np.roll(self.order, -start, axis=0))

    def position(self, state) -> int:
        hits = np.flatnonzero((self.order == np.asarray(state)).all(axis=1))
        if not len(hits):
            raise RangeError(f"state {tuple(state)} is not in the code")
        return int(hits[0])


@dataclass(frozen=True, eq=False)
class PseudoGrayCode(GrayCode):
    @property
    def redundancy(self) -> int:
        return redundancy(self)


def greedy_runs(delta) -> list[tuple[int, int]]:
    """Half-open intervals of a greedy maximal-prefix partition into distinct-entry runs."""
    runs = []
    start = 0
    seen: set = set()
    for i, c in enumerate(delta):
        if c in seen:
            runs.append((start, i))
            start, seen = i, set()
        seen.add(c)
    if len(delta):
        runs.append((start, len(delta)))
    return runs


def redundancy(code: GrayCode) -> int:
    return code.run_count + len(code) - code.q**code.n


def gray_problems(code: GrayCode, exact: bool | None = None) -> list[str]:
    """Reasons the code is not a valid cyclic (pseudo-)Gray code; empty when valid."""
    if exact is None:
        exact = not isinstance(code, PseudoGrayCode)
    problems = []
    order = code.order
    if order.size and (order.min() < 0 or order.max() >= code.q):
        problems.append("symbol out of range")
        return problems
    weights = code.q ** np.arange(code.n)
    idx = order @ weights
    counts = np.bincount(idx, minlength=code.q**code.n)
    if (counts == 0).any():
        problems.append(f"{int((counts == 0).sum())} states missing")
    if exact and (counts > 1).any():
        problems.append(f"{int((counts > 1).sum())} states repeated")
    dist = (order != np.roll(order, 1, axis=0)).sum(axis=1)
    if len(order) > 1 and not (dist == 1).all():
        problems.append(f"{int((dist != 1).sum())} steps not at Hamming distance 1")
    elif len(code.delta) != len(order):
        problems.append("delta inconsistent with order")
    return problems


def is_valid_gray(code: GrayCode, exact: bool | None = None) -> bool:
    return not gray_problems(code, exact)


# -- constructions --------------------------------------------------------------------


def _reflected(n: int, q: int) -> np.ndarray:
    rows = np.arange(q).reshape(q, 1)
    for _ in range(n - 1):
        blocks = [np.hstack([np.full((len(rows), 1), a), rows if a % 2 == 0 else rows[::-1]]) for a in range(q)]
        rows = np.vstack(blocks)
    return rows


def _modular(n: int, q: int) -> np.ndarray:
    k = np.arange(q**n)
    digits = np.stack([(k // q ** (n - 1 - i)) % q for i in range(n)], axis=1)
    out = digits.copy()
    out[:, 1:] = (digits[:, 1:] - digits[:, :-1]) % q
    return out


def canonical_gray(n: int, q: int = 2) -> GrayCode:
    """Reflected code for even q, modular (cyclic) code for odd q; x_n changes fastest."""
    if n < 1 or q < 2:
        raise RangeError("canonical_gray needs n >= 1 and q >= 2")
    return GrayCode(n, q, _reflected(n, q) if q % 2 == 0 else _modular(n, q))


def _concat(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    return np.hstack([outer, inner])


def doubling_gray(n: int) -> GrayCode:
    """Binary code for n a power of two, built by doubling from the canonical 2-bit code.

    Row t of the doubled code starts at (a, 0) with a = -2t mod 2^h and walks
    (a+k, k), (a+k, k+1) for k = 0, ..., 2^h - 1, indices taken in the half code.
    """
    if n < 2 or n & (n - 1):
        raise RangeError(f"doubling_gray needs a power of two >= 2, got {n}")
    code = canonical_gray(2, 2).order
    h = 2
    while h < n:
        size = 2**h
        left, right = [], []
        for t in range(size // 2):
            a = (-2 * t) % size
            for k in range(size):
                left += [(a + k) % size, (a + k) % size]
                right += [k, (k + 1) % size]
        code = _concat(code[left], code[right])
        h *= 2
    return GrayCode(n, 2, code)


def _boustrophedon(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    rows = []
    for i, row in enumerate(outer):
        part = inner if i % 2 == 0 else inner[::-1]
        rows.append(_concat(np.tile(row, (len(part), 1)), part))
    return np.vstack(rows)


def product_gray(n: int) -> GrayCode:
    """Binary code: a doubling code on the largest power-of-two block, rows over the rest."""
    if n < 1:
        raise RangeError("product_gray needs n >= 1")
    if n == 1:
        return canonical_gray(1, 2)
    m = 1 << (n.bit_length() - 1)
    if m == n:
        return doubling_gray(n)
    outer = product_gray(n - m).order
    return GrayCode(n, 2, _boustrophedon(outer, doubling_gray(m).order))


def even_gray(n: int, q: int) -> GrayCode:
    """Code over an even alphabet, writing each symbol as 2u + v with u < q/2 and v a bit."""
    if q % 2 or q < 2:
        raise RangeError(f"even_gray needs an even alphabet, got q={q}")
    p = q // 2
    if p == 1:
        return product_gray(n)
    outer = canonical_gray(n, p).order
    inner = product_gray(n).order
    if len(outer) % 2:
        # the last row runs forward, so the wrap changes the outer and inner
        # parts at once; make both changes land on the same coordinate
        want = int(np.flatnonzero(outer[0] != outer[-1])[0])
        have = int(np.flatnonzero(inner[0] != inner[-1])[0])
        perm = list(range(n))
        perm[want], perm[have] = perm[have], perm[want]
        inner = inner[:, perm]
    rows = []
    for i, u in enumerate(outer):
        part = inner if i % 2 == 0 else inner[::-1]
        rows.append(2 * u + part)
    return GrayCode(n, q, np.vstack(rows))


def _walk(a: np.ndarray, b: np.ndarray) -> list[np.ndarray]:
    """States strictly after a up to and including b, changing one coordinate at a time."""
    out = []
    cur = a.copy()
    for j in np.flatnonzero(a != b):
        cur = cur.copy()
        cur[j] = b[j]
        out.append(cur)
    return out


def pseudo_gray(n: int, Q: int, start=None) -> PseudoGrayCode:
    """Closed walk covering [Q]^n, every step changing one coordinate.

    Even Q gives a Gray code.  Odd Q runs a Gray code on [Q-1]^n first and then
    visits the remaining states in modular Gray order.  ``start`` rotates the
    walk so that it begins at that state.
    """
    if Q < 2 or n < 1:
        raise RangeError("pseudo_gray needs Q >= 2 and n >= 1")
    if Q % 2 == 0:
        order = even_gray(n, Q).order
    else:
        base = even_gray(n, Q - 1).order
        tail = _modular(n, Q)
        tail = tail[(tail == Q - 1).any(axis=1)]
        rows = list(base)
        for state in tail:
            rows += _walk(rows[-1], state)
        rows += _walk(rows[-1], rows[0])[:-1]
        order = np.array(rows)
    code = PseudoGrayCode(n, Q, order)
    if start is not None:
        code = code.rotated(code.position(start))
    return code
