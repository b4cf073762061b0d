"""Exact finite algebra over A = Z_q: states, transformations, instructions, programs.

States of A^n are identified with their little-endian lexicographic index
``sum(x_i * q**(i-1))``.  Transformations are stored extensionally as the
table of image indices and act on the right: ``(x)(f * g) = ((x)f)g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import DegenerateInputError, NotInvertibleError, RangeError, ShapeError


def _check_alphabet(n: int, q: int) -> None:
    if q < 2:
        raise RangeError(f"alphabet size must be >= 2, got {q}")
    if n < 1:
        raise RangeError(f"dimension must be >= 1, got {n}")


@lru_cache(maxsize=64)
def state_digits(n: int, q: int) -> np.ndarray:
    """Digit matrix of shape (q**n, n); row j holds the digits of state j."""
    _check_alphabet(n, q)
    idx = np.arange(q**n, dtype=np.int64)
    out = np.empty((q**n, n), dtype=np.int64)
    for i in range(n):
        out[:, i] = (idx // q**i) % q
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class State:
    """A point of A^n, stored as its digit tuple (x_1, ..., x_n)."""

    digits: tuple[int, ...]
    q: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        _check_alphabet(len(self.digits), self.q)
        for d in self.digits:
            if not 0 <= d < self.q:
                raise RangeError(f"symbol {d} outside alphabet of size {self.q}")

    @property
    def n(self) -> int:
        return len(self.digits)

    @property
    def index(self) -> int:
        return lex_index(self)

    @classmethod
    def of_index(cls, j: int, n: int, q: int) -> "State":
        return state_of_index(j, n, q)

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits) if self.q <= 10 else " ".join(map(str, self.digits))


def lex_index(s: State) -> int:
    return sum(d * s.q**i for i, d in enumerate(s.digits))


def state_of_index(j: int, n: int, q: int) -> State:
    _check_alphabet(n, q)
    if not 0 <= j < q**n:
        raise RangeError(f"state index {j} outside 0..{q**n - 1}")
    return State(tuple((j // q**i) % q for i in range(n)), q)


def unit_state(k: int, n: int, q: int, value: int = 1) -> State:
    """``value * e^k``; k = 0 gives the zero state."""
    digits = [0] * n
    if k:
        digits[k - 1] = value % q
    return State(tuple(digits), q)


# -- coordinate functions A^n -> A ------------------------------------------------


def gamma_index(coord: Sequence[int], q: int) -> int:
    """Index of a coordinate function in the lexicographic enumeration by value table."""
    return sum(int(c) * q**j for j, c in enumerate(coord))


def gamma_table(d: int, n: int, q: int) -> tuple[int, ...]:
    size = q**n
    if not 0 <= d < q**size:
        raise RangeError(f"coordinate-function index {d} out of range")
    return tuple((d // q**j) % q for j in range(size))


class Transformation:
    """A map A^n -> A^n as a table of image state indices."""

    __slots__ = ("n", "q", "table", "_key")

    def __init__(self, n: int, q: int, table: Iterable[int]):
        _check_alphabet(n, q)
        arr = np.array(table, dtype=np.int64).reshape(-1)
        if arr.shape[0] != q**n:
            raise ShapeError(f"table has {arr.shape[0]} entries, expected q^n = {q**n}")
        if arr.size and (arr.min() < 0 or arr.max() >= q**n):
            raise RangeError("table entry is not a state index")
        arr.setflags(write=False)
        self.n = n
        self.q = q
        self.table = arr
        self._key = None

    # construction ------------------------------------------------------------
    @classmethod
    def identity(cls, n: int, q: int) -> "Transformation":
        return cls(n, q, range(q**n))

    @classmethod
    def constant(cls, n: int, q: int, value: int) -> "Transformation":
        return cls(n, q, [value] * q**n)

    @classmethod
    def from_function(cls, n: int, q: int, fn: Callable[[tuple[int, ...]], Sequence[int]]) -> "Transformation":
        """Tabulate ``fn`` acting on digit tuples (arithmetic taken mod q)."""
        table = []
        for row in state_digits(n, q):
            image = [int(v) % q for v in fn(tuple(int(v) for v in row))]
            if len(image) != n:
                raise ShapeError("function returned a tuple of the wrong length")
            table.append(sum(v * q**i for i, v in enumerate(image)))
        return cls(n, q, table)

    @classmethod
    def from_coordinates(cls, n: int, q: int, coords: Sequence[Sequence[int]]) -> "Transformation":
        if len(coords) != n:
            raise ShapeError(f"expected {n} coordinate functions, got {len(coords)}")
        table = np.zeros(q**n, dtype=np.int64)
        for i, c in enumerate(coords):
            c = np.asarray(c, dtype=np.int64)
            if c.shape != (q**n,):
                raise ShapeError("coordinate table has the wrong length")
            table += c * q**i
        return cls(n, q, table)

    @classmethod
    def from_p_index(cls, index: int, n: int, q: int) -> "Transformation":
        big_q = q ** (q**n)
        if not 0 <= index < big_q**n:
            raise RangeError(f"transformation index {index} out of range")
        coords = [gamma_table((index // big_q**i) % big_q, n, q) for i in range(n)]
        return cls.from_coordinates(n, q, coords)

    @classmethod
    def transposition(cls, n: int, q: int, a: int, b: int) -> "Transformation":
        if a == b:
            raise DegenerateInputError(f"transposition of a state with itself ({a})")
        table = np.arange(q**n, dtype=np.int64)
        table[a], table[b] = b, a
        return cls(n, q, table)

    @classmethod
    def assignment(cls, n: int, q: int, a: int, b: int) -> "Transformation":
        table = np.arange(q**n, dtype=np.int64)
        table[a] = b
        return cls(n, q, table)

    # basic protocol ----------------------------------------------------------
    @property
    def size(self) -> int:
        return self.q**self.n

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.table.tobytes()
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, Transformation):
            return NotImplemented
        return self.n == other.n and self.q == other.q and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.n, self.q, self.key))

    def __repr__(self) -> str:
        body = " ".join(map(str, self.table[:16].tolist()))
        more = " ..." if self.size > 16 else ""
        return f"Transformation(n={self.n}, q={self.q}, [{body}{more}])"

    def _check_same(self, other: "Transformation") -> None:
        if (self.n, self.q) != (other.n, other.q):
            raise ShapeError(f"shape mismatch: (n={self.n}, q={self.q}) vs (n={other.n}, q={other.q})")

    def __call__(self, x):
        if isinstance(x, State):
            if (x.n, x.q) != (self.n, self.q):
                raise ShapeError("state does not belong to the transformation's domain")
            return state_of_index(int(self.table[x.index]), self.n, self.q)
        return int(self.table[x])

    def compose(self, other: "Transformation") -> "Transformation":
        """``self`` first, then ``other``."""
        self._check_same(other)
        return Transformation(self.n, self.q, other.table[self.table])

    __mul__ = compose

    def power(self, k: int) -> "Transformation":
        if k < 0:
            return self.inverse().power(-k)
        result = Transformation.identity(self.n, self.q)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # structure ---------------------------------------------------------------
    def image(self) -> tuple[int, ...]:
        return tuple(np.unique(self.table).tolist())

    @property
    def rank(self) -> int:
        return int(np.unique(self.table).size)

    def is_permutation(self) -> bool:
        return self.rank == self.size

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(self.size)))

    def inverse(self) -> "Transformation":
        if not self.is_permutation():
            raise NotInvertibleError("transformation is not a permutation")
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(self.size)
        return Transformation(self.n, self.q, inv)

    def kernel_partition(self) -> list[tuple[int, ...]]:
        classes: dict[int, list[int]] = {}
        for x, y in enumerate(self.table.tolist()):
            classes.setdefault(y, []).append(x)
        return sorted(tuple(c) for c in classes.values())

    def cycle_decomposition(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its least element, sorted."""
        if not self.is_permutation():
            raise NotInvertibleError("cycle decomposition needs a permutation")
        seen = np.zeros(self.size, dtype=bool)
        cycles = []
        for start in range(self.size):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            x = int(self.table[start])
            while x != start:
                cycle.append(x)
                seen[x] = True
                x = int(self.table[x])
            if len(cycle) > 1:
                cycles.append(tuple(cycle))
        return cycles

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycle_decomposition()))

    def order(self) -> int:
        result = 1
        for c in self.cycle_decomposition():
            result = result * len(c) // gcd(result, len(c))
        return result

    def coordinate(self, i: int) -> tuple[int, ...]:
        """Value table of the i-th coordinate function (1-based)."""
        if not 1 <= i <= self.n:
            raise RangeError(f"register {i} outside 1..{self.n}")
        return tuple(state_digits(self.n, self.q)[self.table, i - 1].tolist())

    def coordinates(self) -> list[tuple[int, ...]]:
        return [self.coordinate(i) for i in range(1, self.n + 1)]

    def gamma_indices(self) -> tuple[int, ...]:
        return tuple(gamma_index(c, self.q) for c in self.coordinates())

    @property
    def p_index(self) -> int:
        """Index in the canonical enumeration of Tran(A^n) (coordinate-wise, little-endian)."""
        big_q = self.q**self.size
        return sum(g * big_q**i for i, g in enumerate(self.gamma_indices()))

    def images(self) -> list[State]:
        return [state_of_index(int(y), self.n, self.q) for y in self.table]


def identity(n: int, q: int) -> Transformation:
    return Transformation.identity(n, q)


def evaluate(f: Transformation, x: State) -> State:
    return f(x)


def compose(f: Transformation, g: Transformation) -> Transformation:
    return f.compose(g)


def transposition(u: State, v: State) -> Transformation:
    if (u.n, u.q) != (v.n, v.q):
        raise ShapeError("states live in different spaces")
    return Transformation.transposition(u.n, u.q, u.index, v.index)


def assignment(u: State, v: State) -> Transformation:
    if (u.n, u.q) != (v.n, v.q):
        raise ShapeError("states live in different spaces")
    return Transformation.assignment(u.n, u.q, u.index, v.index)


def conjugate(f: Transformation, g: Transformation) -> Transformation:
    """g^-1 f g."""
    f._check_same(g)
    return g.inverse() * f * g


def rank(f: Transformation) -> int:
    return f.rank


def kernel_partition(f: Transformation) -> list[tuple[int, ...]]:
    return f.kernel_partition()


def cycle_decomposition(f: Transformation) -> list[tuple[int, ...]]:
    return f.cycle_decomposition()


def iter_transformations(n: int, q: int) -> Iterator[Transformation]:
    """Every transformation of A^n, in table-lexicographic order."""
    size = q**n
    for code in range(size**size):
        yield Transformation(n, q, [(code // size**j) % size for j in range(size)])


# -- instructions and programs ----------------------------------------------------


@dataclass(frozen=True)
class Instruction:
    """``x_target <- coord(x)``; every other register is left alone."""

    n: int
    q: int
    target: int
    coord: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coord", tuple(int(c) for c in self.coord))
        _check_alphabet(self.n, self.q)
        if not 1 <= self.target <= self.n:
            raise RangeError(f"target register {self.target} outside 1..{self.n}")
        if len(self.coord) != self.q**self.n:
            raise ShapeError(f"coordinate table has {len(self.coord)} entries, expected {self.q**self.n}")
        if any(not 0 <= c < self.q for c in self.coord):
            raise RangeError("coordinate value outside alphabet")

    @classmethod
    def identity(cls, n: int, q: int, target: int = 1) -> "Instruction":
        return cls(n, q, target, tuple(state_digits(n, q)[:, target - 1].tolist()))

    @classmethod
    def from_rule(cls, n: int, q: int, target: int, rule: Callable[[tuple[int, ...]], int]) -> "Instruction":
        return cls(n, q, target, tuple(int(rule(tuple(int(v) for v in row))) % q for row in state_digits(n, q)))

    def is_identity(self) -> bool:
        return self.coord == tuple(state_digits(self.n, self.q)[:, self.target - 1].tolist())

    def as_transformation(self) -> Transformation:
        return self._transformation

    @cached_property
    def _transformation(self) -> Transformation:
        digits = state_digits(self.n, self.q)
        k = self.target - 1
        delta = (np.asarray(self.coord, dtype=np.int64) - digits[:, k]) * self.q**k
        return Transformation(self.n, self.q, np.arange(self.q**self.n) + delta)

    def __call__(self, x):
        return self.as_transformation()(x)


def induced_instruction(f: Transformation, i: int) -> Instruction:
    return Instruction(f.n, f.q, i, f.coordinate(i))


def all_instructions(n: int, q: int) -> list[Instruction]:
    """Every instruction of A^n; the identity appears once per register."""
    out = []
    for target in range(1, n + 1):
        for d in range(q ** (q**n)):
            out.append(Instruction(n, q, target, gamma_table(d, n, q)))
    return out


@dataclass(frozen=True)
class Program:
    n: int
    q: int
    steps: tuple[Instruction, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        for s in self.steps:
            if (s.n, s.q) != (self.n, self.q):
                raise ShapeError("instruction shape does not match the program")

    @property
    def length(self) -> int:
        return sum(1 for s in self.steps if not s.is_identity())

    def __len__(self) -> int:
        return self.length

    def transformation(self) -> Transformation:
        result = Transformation.identity(self.n, self.q)
        for s in self.steps:
            result = result * s.as_transformation()
        return result

    def __add__(self, other: "Program") -> "Program":
        if (self.n, self.q) != (other.n, other.q):
            raise ShapeError("cannot concatenate programs over different spaces")
        return Program(self.n, self.q, self.steps + other.steps)


def run_program(p: Program, x: State) -> State:
    if (x.n, x.q) != (p.n, p.q):
        raise ShapeError("state does not match program shape")
    j = x.index
    for s in p.steps:
        j = int(s.as_transformation().table[j])
    return state_of_index(j, p.n, p.q)
