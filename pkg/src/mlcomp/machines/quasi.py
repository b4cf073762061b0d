"""Machine driven only by "all registers but the last" steps, plus one update of the last.

The registers form a belt of K+2 blocks of n: block 0 is the output, every
other block copies its predecessor, so the input travels one block per
parallel step.  A counter C picks the block read by the outputs and the
catalog entry applied to it; C = 0 and 1 apply the identity.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..algebra import Transformation
from ..errors import RangeError
from .base import LAST, PARALLEL, Schedule, ScheduleBuilder, UniversalMachine
from .rules import CatalogApply, Constant, Dispatch, Increment, LexCounter, Projection, SwitchInequality, WindowTable

DEFAULT_REGISTER_BUDGET = 1 << 12


def counter_digits(states: int, q: int) -> int:
    width = 0
    while q**width < states:
        width += 1
    return width


def quasi_parallel(q: int, n: int, catalog: Sequence[Transformation],
                   register_budget: int = DEFAULT_REGISTER_BUDGET) -> UniversalMachine:
    k = len(catalog)
    if k < 1:
        raise RangeError("the catalog is empty")
    if any(g.n != n or g.q != q for g in catalog):
        raise RangeError(f"catalog entries must act on A^{n} with q = {q}")
    blocks = k + 2
    width = counter_digits(blocks, q)
    m = blocks * n + width + 2
    if m > register_budget:
        raise RangeError(f"quasi-parallel machine needs {m} registers, budget is {register_budget}")
    window = tuple(range(blocks * n + 1, blocks * n + width + 1))
    selector = LexCounter(window, q)
    ident = Transformation.identity(n, q)
    pattern = [ident, ident] + list(catalog)
    coords = []
    for i in range(1, n + 1):
        entries = {c: (tuple(range(c * n + 1, (c + 1) * n + 1)), np.array(p.coordinate(i))) for c, p in enumerate(pattern)}
        coords.append(CatalogApply(selector, q, entries, i))
    coords += [Projection(j - n) for j in range(n + 1, blocks * n + 1)]
    reset = SwitchInequality(m - 1, m)
    lex = np.arange(q**width)
    succ = np.where(lex < blocks, (lex + 1) % blocks, 0)
    for d in range(width):
        table = succ // q**d % q
        coords.append(Dispatch(reset, {1: Constant(2 // q**d % q)}, WindowTable(window, q, table)))
    coords += [Projection(m), Increment(m, q)]
    layout = {
        "outputs": tuple(range(1, n + 1)),
        "belt": tuple(range(n + 1, blocks * n + 1)),
        "counter": window,
        "reset": (m - 1, m),
    }
    params = {"K": k, "sigma": width, "catalog": list(catalog)}
    return UniversalMachine("quasi-parallel", q, n, m, tuple(coords), layout, params)


def emit_qp(machine: UniversalMachine, repetitions: int = 1) -> Schedule:
    """Play the catalog ``repetitions`` times using parallel steps and a single update of the last register."""
    if repetitions < 1:
        raise RangeError("at least one repetition is needed")
    catalog = machine.params["catalog"]
    k = len(catalog)
    if repetitions > 1 and not catalog[-1].is_identity():
        # the input survives the end of a pass only through the last entry
        raise RangeError("repeating the catalog needs its last entry to be the identity")
    b = ScheduleBuilder(machine.m)
    b.update(PARALLEL, LAST, PARALLEL)
    for g in catalog:
        b.update(PARALLEL)
        b.mark(g)
    for _ in range(repetitions - 1):
        b.update(PARALLEL, PARALLEL)
        for g in catalog:
            b.update(PARALLEL)
            b.mark(g)
    return b.build()
