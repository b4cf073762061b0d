"""Complete machine that plays whole sequences of Q transformations from a catalog.

Information bits select a catalog entry (one flipped parity, located by the
code), and a Gray counter over q^n registers selects the position inside the
entry.  The catalog is supplied by the caller; entry k is a list of exactly Q
transformations.
"""

from __future__ import annotations

from itertools import product
from typing import Sequence

import numpy as np

from ..algebra import Transformation
from ..codes import shortened_hamming
from ..errors import RangeError
from ..gray import canonical_gray
from .base import Schedule, ScheduleBuilder, UniversalMachine, coordinate_count, transformation_of_gammas
from .mintime import counter_rules
from .rules import CodeParity, ErrMap, GammaApply, GrayIndex, Increment, ProductSelector, Projection, SwitchInequality, SyndromeSelector

DEFAULT_REGISTER_BUDGET = 1 << 12


def all_diff_ordering(Q: int, n: int) -> list[tuple[int, ...]]:
    """Every vector of Z_Q^n once, consecutive vectors differing in every coordinate.

    Rows start at the vectors whose last coordinate is 0, taken in little-endian
    order; a row adds (1, ..., 1) repeatedly.
    """
    if Q < 4:
        raise RangeError(f"the ordering needs Q >= 4, got {Q}")
    out = []
    for rest in product(range(Q), repeat=n - 1):
        start = tuple(reversed(rest)) + (0,)
        out += [tuple((v + j) % Q for v in start) for j in range(Q)]
    return out


def catalog_from_ordering(n: int, q: int, rows: int) -> list[list[Transformation]]:
    """The first ``rows`` rows of the all-coordinates-differ ordering, as catalog entries."""
    big_q = coordinate_count(n, q)
    order = all_diff_ordering(big_q, n)
    return [[transformation_of_gammas(v, n, q) for v in order[r * big_q : (r + 1) * big_q]] for r in range(rows)]


def complete_max_time(q: int, n: int, catalog: Sequence[Sequence[Transformation]],
                      register_budget: int = DEFAULT_REGISTER_BUDGET) -> UniversalMachine:
    if not catalog:
        raise RangeError("the catalog is empty")
    big_q = coordinate_count(n, q)
    if any(len(entry) != big_q for entry in catalog):
        raise RangeError(f"every catalog entry must list exactly Q = {big_q} transformations")
    k = len(catalog)
    code = shortened_hamming(k)
    width = q**n
    m = 2 * n + k + code.r + width + 2
    if m > register_budget:
        raise RangeError(f"max-time machine needs {m} registers, budget is {register_budget}")
    copy = tuple(range(n + 1, 2 * n + 1))
    info = tuple(range(2 * n + 1, 2 * n + k + 1))
    parity = tuple(range(2 * n + k + 1, 2 * n + k + code.r + 1))
    window = tuple(range(2 * n + k + code.r + 1, m - 1))
    counter = canonical_gray(width, q)
    selector = ProductSelector((SyndromeSelector(info + parity, code), GrayIndex(window, q, counter.order)))
    span = code.n_hat + 1
    coords = []
    for i in range(1, n + 1):
        gammas = np.full(span * big_q, -1, dtype=np.int64)
        for tau, entry in enumerate(catalog, 1):
            for l, g in enumerate(entry):
                gammas[tau + span * l] = g.gamma_indices()[i - 1]
        coords.append(GammaApply(selector, copy, q, gammas, i))
    coords += [Projection(j - n) for j in copy]
    coords += [ErrMap(r, q) for r in info]
    for t in range(code.r):
        coords.append(CodeParity(info, tuple(bool(h >> t & 1) for h in code.columns[:k])))
    coords += counter_rules(window, q, counter.order, counter.order[0], SwitchInequality(m - 1, m))
    coords += [Projection(m), Increment(m, q)]
    layout = {
        "outputs": tuple(range(1, n + 1)),
        "copy": copy,
        "info": info,
        "parity": parity,
        "counter": window,
        "reset": (m - 1, m),
    }
    params = {"Q": big_q, "K": k, "r": code.r, "code": code, "counter": counter, "catalog": [list(e) for e in catalog]}
    return UniversalMachine("max-time", q, n, m, tuple(coords), layout, params)


def emit_max(machine: UniversalMachine, sequence: Sequence[int]) -> Schedule:
    """Play catalog entries ``sequence`` (0-based) one after another."""
    n, m = machine.n, machine.m
    catalog = machine.params["catalog"]
    counter = machine.params["counter"]
    base = machine.group("counter")[0] - 1
    b = ScheduleBuilder(m)
    b.update(*machine.group("copy"))
    b.update(*machine.group("parity"))
    b.update(m - 1, m, *machine.group("counter"), m - 1)
    for idx in sequence:
        if not 0 <= idx < len(catalog):
            raise RangeError(f"catalog index {idx} out of range")
        switch = 2 * n + idx + 1
        b.update(switch)
        for l, g in enumerate(catalog[idx]):
            b.update(*range(1, n + 1))
            b.mark(g)
            b.update(base + counter.delta[(l + 1) % len(counter)])
        b.update(switch)
    return b.build()


def max_time_length(q: int, n: int, r: int, lam: int) -> int:
    """n + r + (q^n + 3) + lam (Q (n+1) + 2)."""
    big_q = coordinate_count(n, q)
    return n + r + (q**n + 3) + lam * (big_q * (n + 1) + 2)
