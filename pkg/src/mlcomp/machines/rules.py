"""Intensional coordinate functions.

A rule computes one register's next value from a *view* of the current
state.  Views expose ``col(j)`` (1-based register, returns an int64 array
with one entry per state in the batch) and ``rows``.  Rules never look at
registers outside ``reads``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..codes import LinearCode


# -- views ----------------------------------------------------------------------------


class DenseView:
    """Batch of states stored as an (N, m) array."""

    sparse = False

    def __init__(self, data: np.ndarray):
        self.data = data
        self.rows = data.shape[0]

    def col(self, j: int) -> np.ndarray:
        return self.data[:, j - 1].astype(np.int64)


class SparseView:
    """Single sparse state seen as a batch of one."""

    sparse = True
    rows = 1

    def __init__(self, state):
        self.state = state

    def col(self, j: int) -> np.ndarray:
        return np.array([self.state[j]], dtype=np.int64)


def window_lex(view, window: tuple[int, ...], q: int) -> np.ndarray:
    out = np.zeros(view.rows, dtype=np.int64)
    for k in reversed(window):
        out = out * q + view.col(k)
    return out


# -- selectors ------------------------------------------------------------------------


class Selector:
    reads: tuple[int, ...] = ()
    size: int = 1

    def __call__(self, view) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass(frozen=True)
class SwitchDifference(Selector):
    """(x_b - x_a) mod q."""

    a: int
    b: int
    q: int

    @property
    def reads(self):
        return (self.a, self.b)

    @property
    def size(self):
        return self.q

    def __call__(self, view):
        return (view.col(self.b) - view.col(self.a)) % self.q


@dataclass(frozen=True)
class SwitchInequality(Selector):
    """1 when x_a != x_b, else 0."""

    a: int
    b: int
    size: int = 2

    @property
    def reads(self):
        return (self.a, self.b)

    def __call__(self, view):
        return (view.col(self.a) != view.col(self.b)).astype(np.int64)


@dataclass(frozen=True)
class LexCounter(Selector):
    window: tuple[int, ...]
    q: int

    @property
    def reads(self):
        return self.window

    @property
    def size(self):
        return self.q ** len(self.window)

    def __call__(self, view):
        return window_lex(view, self.window, self.q)


@dataclass(frozen=True, eq=False)
class GrayIndex(Selector):
    """Position of the window's state in a Gray code given as an (L, len) array."""

    window: tuple[int, ...]
    q: int
    order: np.ndarray = field(repr=False)

    @property
    def reads(self):
        return self.window

    @property
    def size(self):
        return len(self.order)

    @cached_property
    def _lookup(self) -> np.ndarray:
        weights = self.q ** np.arange(len(self.window))
        lookup = np.full(self.q ** len(self.window), -1, dtype=np.int64)
        lookup[np.asarray(self.order) @ weights] = np.arange(len(self.order))
        return lookup

    def __call__(self, view):
        return self._lookup[window_lex(view, self.window, self.q)]


@dataclass(frozen=True, eq=False)
class SyndromeSelector(Selector):
    """Error position of the parity pattern of the window under a binary code."""

    window: tuple[int, ...]
    code: LinearCode

    @property
    def reads(self):
        return self.window

    @property
    def size(self):
        return self.code.n_hat + 1

    def __call__(self, view):
        s = np.zeros(view.rows, dtype=np.int64)
        for reg, h in zip(self.window, self.code.columns):
            s ^= (view.col(reg) & 1) * h
        return self.code._position_of[s]


@dataclass(frozen=True)
class ExactlyOneSwitch(Selector):
    """s in 1..count when exactly pair s differs (registers a+s-1 and b+s-1), else 0."""

    a: int
    b: int
    count: int

    @property
    def reads(self):
        return tuple(range(self.a, self.a + self.count)) + tuple(range(self.b, self.b + self.count))

    @property
    def size(self):
        return self.count + 1

    def __call__(self, view):
        if view.sparse:
            return np.array([self._sparse(view.state)], dtype=np.int64)
        data = view.data
        lo, hi = self.a - 1, self.b - 1
        diff = data[:, lo : lo + self.count] != data[:, hi : hi + self.count]
        counts = diff.sum(axis=1)
        return np.where(counts == 1, diff.argmax(axis=1) + 1, 0).astype(np.int64)

    def _sparse(self, state) -> int:
        # registers outside the overrides hold the default, so only pairs
        # touching an override can differ
        touched = set()
        for reg in state.overrides:
            if self.a <= reg < self.a + self.count:
                touched.add(reg - self.a)
            elif self.b <= reg < self.b + self.count:
                touched.add(reg - self.b)
        hits = [s for s in touched if state[self.a + s] != state[self.b + s]]
        return hits[0] + 1 if len(hits) == 1 else 0


@dataclass(frozen=True)
class ProductSelector(Selector):
    """Mixed-radix combination, first selector least significant."""

    parts: tuple

    @property
    def reads(self):
        return tuple(r for p in self.parts for r in p.reads)

    @property
    def size(self):
        return int(np.prod([p.size for p in self.parts]))

    def __call__(self, view):
        out = np.zeros(view.rows, dtype=np.int64)
        for p in reversed(self.parts):
            out = out * p.size + p(view)
        return out


# -- rules ----------------------------------------------------------------------------


class Rule:
    reads: tuple[int, ...] = ()

    def __call__(self, view) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass(frozen=True)
class Projection(Rule):
    src: int

    @property
    def reads(self):
        return (self.src,)

    def __call__(self, view):
        return view.col(self.src)


@dataclass(frozen=True)
class Increment(Rule):
    src: int
    q: int
    step: int = 1

    @property
    def reads(self):
        return (self.src,)

    def __call__(self, view):
        return (view.col(self.src) + self.step) % self.q


@dataclass(frozen=True)
class Constant(Rule):
    value: int

    def __call__(self, view):
        return np.full(view.rows, self.value, dtype=np.int64)


@dataclass(frozen=True)
class ErrMap(Rule):
    """Move a symbol to a neighbour of opposite parity."""

    src: int
    q: int

    @property
    def reads(self):
        return (self.src,)

    def __call__(self, view):
        x = view.col(self.src)
        return np.where(x < self.q - 1, x + 1, x - 1)


@dataclass(frozen=True, eq=False)
class WindowTable(Rule):
    """table[lex(window)]."""

    window: tuple[int, ...]
    q: int
    table: np.ndarray = field(repr=False)

    @property
    def reads(self):
        return self.window

    def __call__(self, view):
        return np.asarray(self.table, dtype=np.int64)[window_lex(view, self.window, self.q)]


@dataclass(frozen=True)
class CodeParity(Rule):
    """XOR of the parities of the window registers selected by ``mask``."""

    window: tuple[int, ...]
    mask: tuple[bool, ...]

    @property
    def reads(self):
        return tuple(r for r, b in zip(self.window, self.mask) if b)

    def __call__(self, view):
        out = np.zeros(view.rows, dtype=np.int64)
        for reg in self.reads:
            out ^= view.col(reg) & 1
        return out


@dataclass(frozen=True, eq=False)
class Dispatch(Rule):
    selector: Selector
    branches: dict
    default: Rule

    @property
    def reads(self):
        regs = set(self.selector.reads) | set(self.default.reads)
        for rule in self.branches.values():
            regs |= set(rule.reads)
        return tuple(sorted(regs))

    def __call__(self, view):
        sel = self.selector(view)
        out = self.default(view).copy()
        for value, rule in self.branches.items():
            mask = sel == value
            if mask.any():
                out[mask] = rule(view)[mask]
        return out


@dataclass(frozen=True, eq=False)
class GammaApply(Rule):
    """Apply the coordinate function with index gammas[selector] to the source window.

    Coordinate function number g maps a state with lex index j to digit j of g
    written in base q.  A negative entry means: keep register ``hold``.
    """

    selector: Selector
    source: tuple[int, ...]
    q: int
    gammas: np.ndarray = field(repr=False)
    hold: int

    @property
    def reads(self):
        return tuple(sorted(set(self.selector.reads) | set(self.source) | {self.hold}))

    def __call__(self, view):
        g = np.asarray(self.gammas, dtype=np.int64)[self.selector(view)]
        lex = window_lex(view, self.source, self.q)
        value = (np.maximum(g, 0) // self.q**lex) % self.q
        return np.where(g >= 0, value, view.col(self.hold))


@dataclass(frozen=True, eq=False)
class CatalogApply(Rule):
    """entries[v] = (window, table): apply table to lex(window) when the selector reads v."""

    selector: Selector
    q: int
    entries: dict = field(repr=False)
    hold: int

    @property
    def reads(self):
        regs = set(self.selector.reads) | {self.hold}
        for window, _ in self.entries.values():
            regs |= set(window)
        return tuple(sorted(regs))

    def __call__(self, view):
        sel = self.selector(view)
        out = view.col(self.hold).copy()
        for value, (window, table) in self.entries.items():
            mask = sel == value
            if mask.any():
                out[mask] = np.asarray(table, dtype=np.int64)[window_lex(view, window, self.q)][mask]
        return out
