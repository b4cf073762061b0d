"""Machines, schedules and the enumerations that switch indices refer to."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..algebra import Transformation, gamma_table
from ..errors import RangeError, ShapeError

PARALLEL = 0
LAST = -1


@dataclass(frozen=True, eq=False)
class UniversalMachine:
    """m intensional coordinate functions plus a map of named register groups."""

    kind: str
    q: int
    n: int
    m: int
    coords: tuple = field(repr=False)
    layout: dict = field(repr=False)
    params: dict = field(default_factory=dict, repr=False)

    def rule(self, i: int):
        return self.coords[i - 1]

    def group(self, name: str) -> tuple[int, ...]:
        return self.layout[name]

    def problems(self) -> list[str]:
        """Well-formedness: m rules, layout partitions [m], every window inside [m]."""
        out = []
        if len(self.coords) != self.m:
            out.append(f"{len(self.coords)} rules for {self.m} registers")
        seen: list[int] = [r for regs in self.layout.values() for r in regs]
        if sorted(seen) != list(range(1, self.m + 1)):
            out.append("layout does not partition the registers")
        for i, rule in enumerate(self.coords, 1):
            bad = [r for r in rule.reads if not 1 <= r <= self.m]
            if bad:
                out.append(f"rule {i} reads registers {bad} outside 1..{self.m}")
        return out


@dataclass(frozen=True, eq=False)
class Schedule:
    """Steps are register numbers (>= 1), PARALLEL (all but the last) or LAST.

    ``boundaries`` pairs a step count with the transformation the outputs must
    hold, relative to the original outputs, once that many steps have run.
    """

    m: int
    steps: tuple[int, ...]
    boundaries: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(int(s) for s in self.steps))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        for s in self.steps:
            if s > self.m or s < LAST:
                raise RangeError(f"step {s} outside the {self.m} registers")
        positions = [p for p, _ in self.boundaries]
        if positions != sorted(positions) or any(not 0 <= p <= len(self.steps) for p in positions):
            raise RangeError("boundaries must be sorted step counts within the schedule")

    def __len__(self) -> int:
        return len(self.steps)

    def count(self, step: int) -> int:
        return sum(1 for s in self.steps if s == step)

    def __add__(self, other: "Schedule") -> "Schedule":
        shift = len(self.steps)
        return Schedule(self.m, self.steps + other.steps, self.boundaries + tuple((p + shift, g) for p, g in other.boundaries))


class ScheduleBuilder:
    def __init__(self, m: int):
        self.m = m
        self.steps: list[int] = []
        self.boundaries: list = []

    def update(self, *regs: int) -> "ScheduleBuilder":
        self.steps.extend(regs)
        return self

    def mark(self, target: Transformation) -> None:
        self.boundaries.append((len(self.steps), target))

    def build(self) -> Schedule:
        return Schedule(self.m, tuple(self.steps), tuple(self.boundaries))


@dataclass
class SparseState:
    """State of m registers stored as overrides of a default symbol."""

    m: int
    default: int = 0
    overrides: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.overrides = {k: v for k, v in self.overrides.items() if v != self.default}

    def __getitem__(self, j: int) -> int:
        if not 1 <= j <= self.m:
            raise ShapeError(f"register {j} outside 1..{self.m}")
        return self.overrides.get(j, self.default)

    def __setitem__(self, j: int, value: int) -> None:
        if not 1 <= j <= self.m:
            raise ShapeError(f"register {j} outside 1..{self.m}")
        if value == self.default:
            self.overrides.pop(j, None)
        else:
            self.overrides[j] = int(value)

    def dense(self) -> np.ndarray:
        out = np.full(self.m, self.default, dtype=np.uint8)
        for j, v in self.overrides.items():
            out[j - 1] = v
        return out

    @classmethod
    def from_dense(cls, row, default: int = 0) -> "SparseState":
        return cls(len(row), default, {j + 1: int(v) for j, v in enumerate(row)})

    def copy(self) -> "SparseState":
        return SparseState(self.m, self.default, dict(self.overrides))


# -- enumerations ---------------------------------------------------------------------


def coordinate_count(n: int, q: int) -> int:
    """Q = q^(q^n), the number of coordinate functions A^n -> A."""
    return q ** (q**n)


def transformation_of_gammas(gammas: Sequence[int], n: int, q: int) -> Transformation:
    return Transformation.from_coordinates(n, q, [gamma_table(int(g), n, q) for g in gammas])


def identity_gammas(n: int, q: int) -> tuple[int, ...]:
    return Transformation.identity(n, q).gamma_indices()


def gamma_digit_table(gammas: np.ndarray, n: int, q: int) -> np.ndarray:
    """(len, q^n) table whose row t lists the values of coordinate function gammas[t]."""
    gammas = np.asarray(gammas, dtype=np.int64)
    return (gammas[:, None] // q ** np.arange(q**n)[None, :]) % q
