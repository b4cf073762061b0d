"""Size n+2 machines driven by a two-register switch, and their complete versions.

The switch value is s = (x_{n+2} - x_{n+1}) mod q: F^(n+2) raises it by one
and F^(n+1) resets it to 0.  In the compact machine, position t < rho makes
every output apply (I^(i))^(2^t), position rho applies T^(1) on register 1 and
A^(2) on register 2, and higher positions hold.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..algebra import Transformation
from ..compiler import compile_generators, generating_set
from ..errors import RangeError
from .base import Schedule, ScheduleBuilder, UniversalMachine
from .rules import Dispatch, Increment, Projection, SwitchDifference, SwitchInequality, WindowTable


def _table(gs, atom, n, q):
    return WindowTable(tuple(range(1, n + 1)), q, np.array(gs.instruction(atom).coord))


def _compact_output(gs, i: int, n: int, q: int):
    branches = {t: _table(gs, ("I", i, 2**t), n, q) for t in range(gs.rho)}
    if i == 1:
        branches[gs.rho] = _table(gs, ("T",), n, q)
    elif i == 2:
        branches[gs.rho] = _table(gs, ("A",), n, q)
    return Dispatch(SwitchDifference(n + 1, n + 2, q), branches, Projection(i))


def _simple_output(gs, i: int, n: int, q: int):
    power = _table(gs, ("I", i, 1), n, q)
    if i > 2:
        return power
    other = _table(gs, ("T",) if i == 1 else ("A",), n, q)
    return Dispatch(SwitchDifference(n + 1, n + 2, q), {0: power}, other)


def compact_universal(q: int, n: int) -> UniversalMachine:
    gs = generating_set(q, n)
    coords = [_compact_output(gs, i, n, q) for i in range(1, n + 1)]
    coords += [Projection(n + 2), Increment(n + 2, q)]
    layout = {"outputs": tuple(range(1, n + 1)), "switch": (n + 1, n + 2)}
    return UniversalMachine("compact", q, n, n + 2, tuple(coords), layout, {"rho": gs.rho})


def simple_compact_universal(q: int, n: int) -> UniversalMachine:
    """Two switch positions, equal and unequal; the switch only rises from equal."""
    gs = generating_set(q, n)
    coords = [_simple_output(gs, i, n, q) for i in range(1, n + 1)]
    coords += [
        Projection(n + 2),
        Dispatch(SwitchInequality(n + 1, n + 2), {1: Projection(n + 2)}, Increment(n + 2, q)),
    ]
    layout = {"outputs": tuple(range(1, n + 1)), "switch": (n + 1, n + 2)}
    return UniversalMachine("simple", q, n, n + 2, tuple(coords), layout, {"rho": 1})


# -- emission -------------------------------------------------------------------------


class _Switch:
    """Tracks the switch value while steps are emitted."""

    def __init__(self, n: int, q: int, inc: Sequence[int], pos: int | None = None):
        self.n, self.q, self.inc = n, q, tuple(inc)
        self.pos = pos

    def reset(self, out: list[int]) -> None:
        out.append(self.n + 1)
        self.pos = 0

    def goto(self, target: int, out: list[int]) -> None:
        if self.pos is None or (target - self.pos) % self.q > target + 1:
            self.reset(out)
        for _ in range((target - self.pos) % self.q):
            out.extend(self.inc)
        self.pos = target


def _tracked_blocks(gens, switch: _Switch, rho: int) -> list[list[int]]:
    n = switch.n
    blocks = []
    for gen in gens:
        out: list[int] = []
        if gen[0] in ("T", "A"):
            switch.goto(rho, out)
            out.append(1 if gen[0] == "T" else 2)
        else:
            _, j, lam = gen
            for t in range(rho):
                if lam >> t & 1:
                    switch.goto(t, out)
                    out.append(j)
        blocks.append(out)
    return blocks


def _displayed_blocks(gens, switch: _Switch, rho: int) -> list[list[int]]:
    """Blocks as written in the construction: every block returns the switch to 0."""
    n = switch.n
    blocks = []
    for gen in gens:
        out: list[int] = []
        if gen[0] in ("T", "A"):
            for _ in range(rho):
                out.extend(switch.inc)
            out.append(1 if gen[0] == "T" else 2)
        else:
            _, j, lam = gen
            for t in range(rho):
                if t:
                    out.extend(switch.inc)
                if lam >> t & 1:
                    out.append(j)
        out.append(n + 1)
        switch.pos = 0
        blocks.append(out)
    return blocks


def _simple_blocks(gens, switch: _Switch) -> list[list[int]]:
    n = switch.n
    blocks = []
    for gen in gens:
        if gen[0] in ("T", "A"):
            blocks.append(list(switch.inc) + [1 if gen[0] == "T" else 2, n + 1])
            switch.pos = 0
        else:
            blocks.append([gen[1]] * gen[2])
    return blocks


def _simple_generators(gs, g):
    # the simple machine applies I^(j) once per step, so a power is just repetition
    gens = []
    for gen in compile_generators(gs, g):
        if gen[0] == "I" and gens and gens[-1][0] == "I" and gens[-1][1] == gen[1]:
            gens[-1] = ("I", gen[1], gens[-1][2] + gen[2])
        else:
            gens.append(gen)
    return gens


def compact_blocks(machine: UniversalMachine, g: Transformation, style: str = "tracked", switch=None):
    """Reset step (or empty) followed by one block of steps per generator of g."""
    n, q = machine.n, machine.q
    gs = generating_set(q, n)
    if switch is None:
        switch = _Switch(n, q, (n + 2,))
    head: list[int] = []
    inner = machine.params.get("inner", machine.kind)
    if inner == "simple":
        if switch.pos != 0:
            switch.reset(head)
        return head, _simple_blocks(_simple_generators(gs, g), switch)
    gens = compile_generators(gs, g)
    if style == "displayed":
        if switch.pos != 0:
            switch.reset(head)
        return head, _displayed_blocks(gens, switch, machine.params["rho"])
    if style != "tracked":
        raise ValueError(f"unknown block style {style!r}")
    if switch.pos is None:
        switch.reset(head)
    return head, _tracked_blocks(gens, switch, machine.params["rho"])


def emit_compact(machine: UniversalMachine, g: Transformation, style: str = "tracked") -> Schedule:
    head, blocks = compact_blocks(machine, g, style)
    steps = head + [s for blk in blocks for s in blk]
    return Schedule(machine.m, tuple(steps), ((len(steps), g),))


emit_simple = emit_compact


# -- complete versions ----------------------------------------------------------------


def complete_compact(q: int, n: int) -> UniversalMachine:
    """Compact machine plus a copy of the input and a restore mode.

    q >= 3: registers n+3..2n+2 hold the copy and switch position rho+1 makes
    every output read it back (for q = 3, 5 the simple machine is used inside,
    with rho taken as 1).  q = 2: a third switch register n+3 follows x_{n+2};
    the outputs restore while x_{n+2} != x_{n+3}, and the copy sits in
    n+4..2n+3.
    """
    if q < 2 or n < 2:
        raise RangeError("complete_compact needs q >= 2 and n >= 2")
    gs = generating_set(q, n)
    outputs = tuple(range(1, n + 1))
    if q == 2:
        inner = [_compact_output(gs, i, n, q) for i in outputs]
        coords = [Dispatch(SwitchInequality(n + 2, n + 3), {1: Projection(n + 3 + i)}, inner[i - 1]) for i in outputs]
        coords += [Projection(n + 2), Increment(n + 2, q), Projection(n + 2)]
        coords += [Projection(j - n - 3) for j in range(n + 4, 2 * n + 4)]
        layout = {"outputs": outputs, "switch": (n + 1, n + 2, n + 3), "copy": tuple(range(n + 4, 2 * n + 4))}
        params = {"rho": 1, "inner": "compact", "restore": "inequality"}
        return UniversalMachine("complete", q, n, 2 * n + 3, tuple(coords), layout, params)
    simple = q in (3, 5)
    rho = 1 if simple else gs.rho
    inner = [(_simple_output if simple else _compact_output)(gs, i, n, q) for i in outputs]
    sel = SwitchDifference(n + 1, n + 2, q)
    coords = [Dispatch(sel, {rho + 1: Projection(n + 2 + i)}, inner[i - 1]) for i in outputs]
    coords += [Projection(n + 2), Increment(n + 2, q)]
    coords += [Projection(j - n - 2) for j in range(n + 3, 2 * n + 3)]
    layout = {"outputs": outputs, "switch": (n + 1, n + 2), "copy": tuple(range(n + 3, 2 * n + 3))}
    params = {"rho": rho, "inner": "simple" if simple else "compact", "restore": rho + 1}
    return UniversalMachine("complete", q, n, 2 * n + 2, tuple(coords), layout, params)


def emit_complete(machine: UniversalMachine, targets: Sequence[Transformation], style: str = "tracked") -> Schedule:
    """Prefix (switch set-up, copy, first target), then restore block B and next target."""
    n, q = machine.n, machine.q
    outputs = list(range(1, n + 1))
    b = ScheduleBuilder(machine.m)
    if q == 2:
        switch = _Switch(n, q, (n + 2, n + 3))
        b.update(n + 3)
        b.update(*machine.group("copy"))
    else:
        switch = _Switch(n, q, (n + 2,))
        switch.reset(b.steps)
        b.update(*machine.group("copy"))
    for k, g in enumerate(targets):
        if k:
            if q == 2:
                b.update(n + 2, *outputs, n + 3)
                switch.pos = (switch.pos + 1) % q if switch.pos is not None else None
            else:
                switch.goto(machine.params["restore"], b.steps)
                b.update(*outputs)
                switch.reset(b.steps)
        head, blocks = compact_blocks(machine, g, style, switch)
        b.update(*head)
        for blk in blocks:
            b.update(*blk)
        b.mark(g)
    return b.build()
