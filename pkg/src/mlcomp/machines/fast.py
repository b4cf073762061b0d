"""Machine whose switch is a word of a one-error-locating code.

Registers 2n+1..2n+Q carry one information bit each (read through their
parity) and the r registers behind them carry the check bits.  Flipping the
parity of information register k makes the decoder report k, and then every
output applies coordinate function number k-1 to the copy of the input.
"""

from __future__ import annotations

import numpy as np

from ..algebra import Transformation
from ..codes import shortened_hamming
from ..errors import RangeError
from .base import Schedule, ScheduleBuilder, UniversalMachine, coordinate_count
from .rules import CodeParity, ErrMap, GammaApply, Projection, SyndromeSelector

DEFAULT_REGISTER_BUDGET = 1 << 12


def fast_universal(q: int, n: int, register_budget: int = DEFAULT_REGISTER_BUDGET) -> UniversalMachine:
    big_q = coordinate_count(n, q)
    code = shortened_hamming(big_q)
    m = 2 * n + big_q + code.r
    if m > register_budget:
        raise RangeError(f"fast machine needs {m} registers, budget is {register_budget}")
    info = tuple(range(2 * n + 1, 2 * n + big_q + 1))
    parity = tuple(range(2 * n + big_q + 1, m + 1))
    selector = SyndromeSelector(info + parity, code)
    tau = np.arange(code.n_hat + 1)
    gammas = np.where((tau >= 1) & (tau <= big_q), tau - 1, -1)
    copy = tuple(range(n + 1, 2 * n + 1))
    coords = [GammaApply(selector, copy, q, gammas, i) for i in range(1, n + 1)]
    coords += [Projection(j - n) for j in copy]
    coords += [ErrMap(k, q) for k in info]
    for t in range(code.r):
        mask = tuple(bool(h >> t & 1) for h in code.columns[:big_q])
        coords.append(CodeParity(info, mask))
    layout = {"outputs": tuple(range(1, n + 1)), "copy": copy, "info": info, "parity": parity}
    return UniversalMachine("fast", q, n, m, tuple(coords), layout, {"Q": big_q, "r": code.r, "code": code})


def emit_fast(machine: UniversalMachine, g: Transformation) -> Schedule:
    """Copy, encode, then for each output: flip its switch bit, compute, flip back."""
    n = machine.n
    b = ScheduleBuilder(machine.m)
    b.update(*machine.group("copy"))
    b.update(*machine.group("parity"))
    for i, gamma in enumerate(g.gamma_indices(), 1):
        k = 2 * n + gamma + 1
        b.update(k, i, k)
    b.mark(g)
    return b.build()
