"""One two-register switch per transformation of A^n."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..algebra import Transformation
from ..errors import RangeError
from .base import ScheduleBuilder, UniversalMachine, coordinate_count
from .rules import ExactlyOneSwitch, GammaApply, Increment, Projection

DEFAULT_REGISTER_BUDGET = 1 << 16


def elementary_universal(q: int, n: int, register_budget: int = DEFAULT_REGISTER_BUDGET) -> UniversalMachine:
    """Switch s is the register pair (2n+s, 2n+N+s), N = Q^n; it is on when the pair differs."""
    count = coordinate_count(n, q) ** n
    m = 2 * n + 2 * count
    if m > register_budget:
        raise RangeError(f"elementary machine needs {m} registers, budget is {register_budget}")
    big_q = coordinate_count(n, q)
    off0, on0 = 2 * n + 1, 2 * n + count + 1
    selector = ExactlyOneSwitch(off0, on0, count)
    s = np.arange(count + 1, dtype=np.int64)
    source = tuple(range(n + 1, 2 * n + 1))
    coords = []
    for i in range(1, n + 1):
        gammas = np.where(s > 0, ((s - 1) // big_q ** (i - 1)) % big_q, -1)
        coords.append(GammaApply(selector, source, q, gammas, i))
    coords += [Projection(r - n) for r in range(n + 1, 2 * n + 1)]
    coords += [Projection(j + count) for j in range(off0, on0)]
    coords += [Increment(k, q) for k in range(on0, m + 1)]
    layout = {
        "outputs": tuple(range(1, n + 1)),
        "copy": source,
        "switch_off": tuple(range(off0, on0)),
        "switch_on": tuple(range(on0, m + 1)),
    }
    return UniversalMachine("elementary", q, n, m, tuple(coords), layout, {"Q": big_q, "switches": count})


def emit_elementary(machine: UniversalMachine, targets: Sequence[Transformation]):
    """Copy, clear every switch, then per target: switch on and compute.

    The previous target's switch is turned off before the next one goes on.

    After the first target only the outputs whose coordinate function changed
    are recomputed.
    """
    n, count = machine.n, machine.params["switches"]
    off0, on0 = 2 * n + 1, 2 * n + count + 1
    b = ScheduleBuilder(machine.m)
    b.update(*range(n + 1, 2 * n + 1))
    b.update(*range(off0, on0))
    prev = None
    last = None
    for g in targets:
        s = g.p_index + 1
        if last is not None:
            b.update(off0 + last - 1)
        b.update(on0 + s - 1)
        gam = g.gamma_indices()
        b.update(*(i for i in range(1, n + 1) if prev is None or prev[i - 1] != gam[i - 1]))
        b.mark(g)
        prev, last = gam, s
    return b.build()
