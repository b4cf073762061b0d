"""Complete machine that walks the whole of Tran(A^n) along a pseudo-Gray code.

Transformations are vectors of coordinate-function indices, so Tran(A^n) is
[Q]^n and a pseudo-Gray code over it changes one coordinate function per step.
The delta sequence is cut into runs of distinct coordinates; a small Gray
counter names the current run, and output i applies the coordinate function
that run assigns to it.
"""

from __future__ import annotations

import math

import numpy as np

from ..gray import PseudoGrayCode, canonical_gray, pseudo_gray
from .base import Schedule, ScheduleBuilder, UniversalMachine, coordinate_count, identity_gammas, transformation_of_gammas
from .rules import Constant, Dispatch, GammaApply, GrayIndex, Increment, Projection, SwitchInequality, WindowTable


def counter_width(runs: int, q: int) -> int:
    """sigma = ceil(log_q r) + 1."""
    width = 0
    while q**width < runs:
        width += 1
    return width + 1


def counter_rules(window, q, order, reset_state, reset_switch):
    """Counter register rules: Gray successor while the reset pair agrees, reset otherwise."""
    succ = np.roll(np.asarray(order), -1, axis=0)
    weights = q ** np.arange(len(window))
    lex = np.asarray(order) @ weights
    rules = []
    for k in range(len(window)):
        table = np.zeros(q ** len(window), dtype=np.int64)
        table[lex] = succ[:, k]
        rules.append(Dispatch(reset_switch, {1: Constant(int(reset_state[k]))}, WindowTable(window, q, table)))
    return rules


def complete_min_time(q: int, n: int, code: PseudoGrayCode | None = None) -> UniversalMachine:
    big_q = coordinate_count(n, q)
    if code is None:
        code = pseudo_gray(n, big_q, start=identity_gammas(n, q))
    if not np.array_equal(code.order[0], identity_gammas(n, q)):
        raise ValueError("the pseudo-Gray code must start at the identity")
    runs = code.runs
    sigma = counter_width(len(runs), q)
    counter = canonical_gray(sigma, q)
    m = 2 * n + sigma + 2
    window = tuple(range(2 * n + 1, 2 * n + sigma + 1))
    reset = SwitchInequality(m - 1, m)
    selector = GrayIndex(window, q, counter.order)
    copy = tuple(range(n + 1, 2 * n + 1))
    ident = code.order[0]
    coords = []
    for i in range(1, n + 1):
        # counter state number j (0-based) names run j+1; outputs outside the
        # run keep the identity's coordinate function
        gammas = np.full(len(counter), ident[i - 1], dtype=np.int64)
        for s, (lo, hi) in enumerate(runs):
            for lam in range(lo, hi):
                if code.delta[lam] == i:
                    gammas[s] = code.order[lam][i - 1]
        coords.append(GammaApply(selector, copy, q, gammas, i))
    coords += [Projection(j - n) for j in copy]
    coords += counter_rules(window, q, counter.order, counter.order[0], reset)
    coords += [Projection(m), Increment(m, q)]
    layout = {"outputs": tuple(range(1, n + 1)), "copy": copy, "counter": window, "reset": (m - 1, m)}
    params = {"Q": big_q, "L": len(code), "r": len(runs), "sigma": sigma, "code": code, "counter": counter}
    return UniversalMachine("min-time", q, n, m, tuple(coords), layout, params)


def emit_enumeration(machine: UniversalMachine, repetitions: int = 1) -> Schedule:
    """Copy once, then per pass: reset the counter and walk every run, bumping the counter after each."""
    n, m = machine.n, machine.m
    code: PseudoGrayCode = machine.params["code"]
    counter = machine.params["counter"]
    targets = [transformation_of_gammas(row, n, machine.q) for row in code.order.tolist()]
    b = ScheduleBuilder(m)
    b.update(*machine.group("copy"))
    for _ in range(repetitions):
        b.update(m - 1, m)
        b.update(*machine.group("counter"))
        b.update(m - 1)
        for s, (lo, hi) in enumerate(code.runs):
            for lam in range(lo, hi):
                b.update(code.delta[lam])
                b.mark(targets[lam])
            b.update(2 * n + counter.delta[(s + 1) % len(counter)])
    return b.build()


def pass_length(machine: UniversalMachine) -> int:
    """L + r + sigma + 3 steps per pass."""
    p = machine.params
    return p["L"] + p["r"] + p["sigma"] + 3
