"""Schedule execution and the simulation checks."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .algebra import Instruction, State, Transformation, gamma_table
from .errors import BudgetError, ShapeError
from .machines.base import LAST, PARALLEL, Schedule, SparseState, UniversalMachine
from .machines.rules import DenseView, SparseView

DEFAULT_BUDGET = 1 << 21
DEFAULT_SEED = 20140501
DEFAULT_CHUNK = 1 << 20
MAX_FAILURES = 10


# -- execution ------------------------------------------------------------------------


def apply_step(machine: UniversalMachine, step: int, data: np.ndarray) -> None:
    """Apply one schedule step in place to an (N, m) batch."""
    view = DenseView(data)
    if step >= 1:
        data[:, step - 1] = machine.rule(step)(view)
    elif step == PARALLEL:
        values = [machine.rule(j)(view) for j in range(1, machine.m)]
        for j, v in enumerate(values):
            data[:, j] = v
    elif step == LAST:
        data[:, machine.m - 1] = machine.rule(machine.m)(view)
    else:
        raise ShapeError(f"unknown step {step}")


def apply_step_sparse(machine: UniversalMachine, step: int, state: SparseState) -> None:
    view = SparseView(state)
    if step >= 1:
        state[step] = int(machine.rule(step)(view)[0])
    elif step == PARALLEL:
        values = [int(machine.rule(j)(view)[0]) for j in range(1, machine.m)]
        for j, v in enumerate(values, 1):
            state[j] = v
    elif step == LAST:
        state[machine.m] = int(machine.rule(machine.m)(view)[0])
    else:
        raise ShapeError(f"unknown step {step}")


def run_steps(machine: UniversalMachine, steps: Iterable[int], data: np.ndarray) -> None:
    for s in steps:
        apply_step(machine, s, data)


def run_schedule(machine: UniversalMachine, schedule: Schedule, x):
    """Run a schedule on a State, a SparseState, a 1-d row or an (N, m) batch; returns a new value."""
    if isinstance(x, SparseState):
        if x.m != machine.m:
            raise ShapeError(f"state has {x.m} registers, machine has {machine.m}")
        out = x.copy()
        for s in schedule.steps:
            apply_step_sparse(machine, s, out)
        return out
    if isinstance(x, State):
        if x.n != machine.m:
            raise ShapeError(f"state has {x.n} registers, machine has {machine.m}")
        row = run_schedule(machine, schedule, np.array(x.digits))
        return State(tuple(int(v) for v in row), machine.q)
    arr = np.asarray(x)
    if arr.shape[-1] != machine.m:
        raise ShapeError(f"state has {arr.shape[-1]} registers, machine has {machine.m}")
    data = np.array(arr, dtype=np.uint8).reshape(-1, machine.m)
    run_steps(machine, schedule.steps, data)
    return data.reshape(arr.shape)


# -- reports --------------------------------------------------------------------------


@dataclass
class VerificationReport:
    mode: str
    checked: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0
    schedule_length: int = 0
    boundaries: int = 0
    formulas: dict = field(default_factory=dict)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and all(v.get("holds", True) for v in self.formulas.values() if isinstance(v, dict))

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        self.checked += other.checked
        self.failure_count += other.failure_count
        self.failures.extend(other.failures[: MAX_FAILURES - len(self.failures)])
        return self

    def to_text(self) -> str:
        lines = [
            f"mode: {self.mode}",
            f"checked: {self.checked}",
            f"failures: {self.failure_count}",
            f"schedule_length: {self.schedule_length}",
            f"boundaries: {self.boundaries}",
        ]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for key, value in sorted(self.formulas.items()):
            lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
        for f in self.failures:
            lines.append(f"counterexample: {json.dumps(f, sort_keys=True)}")
        lines.append(f"result: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def to_json(self) -> str:
        data = asdict(self)
        data["passed"] = self.passed
        return json.dumps(data, sort_keys=True)


def formula(measured: int, expected: int) -> dict:
    return {"measured": int(measured), "expected": int(expected), "holds": int(measured) == int(expected)}


# -- state sources --------------------------------------------------------------------


def _digits_of(indices: np.ndarray, m: int, q: int) -> np.ndarray:
    out = np.empty((len(indices), m), dtype=np.uint8)
    rest = indices.astype(np.int64)
    for j in range(m):
        out[:, j] = rest % q
        rest //= q
    return out


def state_batches(m: int, q: int, mode: str = "exhaustive", sample: int = 1000, seed: int = DEFAULT_SEED,
                  budget: int = DEFAULT_BUDGET, chunk: int = DEFAULT_CHUNK) -> Iterator[np.ndarray]:
    if mode == "exhaustive":
        total = q**m
        if total > budget:
            raise BudgetError(f"exhaustive check needs {q}^{m} = {total} states, budget is {budget}")
        for start in range(0, total, chunk):
            yield _digits_of(np.arange(start, min(total, start + chunk)), m, q)
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        for start in range(0, sample, chunk):
            yield rng.integers(0, q, size=(min(chunk, sample - start), m), dtype=np.uint8)
    else:
        raise ValueError(f"unknown mode {mode!r}")


def _lex(data: np.ndarray, n: int, q: int) -> np.ndarray:
    return data[:, :n].astype(np.int64) @ (q ** np.arange(n, dtype=np.int64))


# -- simulation checks ----------------------------------------------------------------


def check_batch(machine: UniversalMachine, schedule: Schedule, batch: np.ndarray) -> VerificationReport:
    """Check every boundary equation on one batch of initial states."""
    n, q = machine.n, machine.q
    report = VerificationReport("batch", checked=len(batch))
    data = batch.copy()
    orig = _lex(batch, n, q)
    pos = 0
    for b, (stop, target) in enumerate(schedule.boundaries):
        run_steps(machine, schedule.steps[pos:stop], data)
        pos = stop
        expected = target.table[orig]
        actual = _lex(data, n, q)
        bad = np.flatnonzero(expected != actual)
        if len(bad):
            report.failure_count += len(bad)
            for row in bad[: MAX_FAILURES - len(report.failures)]:
                report.failures.append(
                    {
                        "state": batch[row].tolist(),
                        "boundary": b,
                        "step": stop,
                        "expected": int(expected[row]),
                        "actual": int(actual[row]),
                    }
                )
    return report


def verify_sequential(machine: UniversalMachine, schedule: Schedule, mode: str = "exhaustive", sample: int = 1000,
                      seed: int = DEFAULT_SEED, budget: int = DEFAULT_BUDGET, chunk: int = DEFAULT_CHUNK,
                      targets: Sequence[Transformation] | None = None) -> VerificationReport:
    """pr o g_i = (steps up to boundary i) o pr for every boundary, on every checked state.

    ``targets``, when given, replaces the transformations stored on the boundaries.
    """
    if targets is not None:
        if len(targets) != len(schedule.boundaries):
            raise ShapeError(f"{len(targets)} targets for {len(schedule.boundaries)} boundaries")
        schedule = Schedule(schedule.m, schedule.steps, tuple((p, g) for (p, _), g in zip(schedule.boundaries, targets)))
    label = "exhaustive" if mode == "exhaustive" else f"sampled({sample})"
    report = VerificationReport(
        label,
        schedule_length=len(schedule),
        boundaries=len(schedule.boundaries),
        seed=None if mode == "exhaustive" else seed,
    )
    for batch in state_batches(machine.m, machine.q, mode, sample, seed, budget, chunk):
        report.merge(check_batch(machine, schedule, batch))
    return report


def verify_simulation(machine: UniversalMachine, schedule: Schedule, g: Transformation, mode: str = "exhaustive",
                      **kwargs) -> VerificationReport:
    """pr o g = h o pr where h runs the whole schedule."""
    single = Schedule(schedule.m, schedule.steps, ((len(schedule.steps), g),))
    return verify_sequential(machine, single, mode, **kwargs)


# -- semigroup closures ---------------------------------------------------------------


@dataclass
class Closure:
    """Elements of a generated semigroup with their shortest word lengths."""

    lengths: dict
    complete: bool

    def __len__(self) -> int:
        return len(self.lengths)

    def __contains__(self, f) -> bool:
        return f in self.lengths

    @property
    def elements(self) -> set:
        return set(self.lengths)


def _as_map(y) -> Transformation:
    return y.as_transformation() if isinstance(y, Instruction) else y


def generated_monoid(generators: Sequence, cap: int | None = None) -> Closure:
    """Breadth-first closure of the generators under composition."""
    gens = [_as_map(y) for y in generators]
    lengths: dict = {}
    queue: deque = deque()
    for y in gens:
        if y not in lengths:
            lengths[y] = 1
            queue.append(y)
    while queue:
        f = queue.popleft()
        for y in gens:
            h = f * y
            if h not in lengths:
                if cap is not None and len(lengths) >= cap:
                    return Closure(lengths, False)
                lengths[h] = lengths[f] + 1
                queue.append(h)
    return Closure(lengths, True)


def singular_count(n: int, q: int) -> int:
    size = q**n
    return size**size - math.factorial(size)


def theorem1_check(q: int = 2, n: int = 2, cap: int | None = None) -> VerificationReport:
    """For every n-tuple of coordinate functions, the induced instructions miss some singular map."""
    big_q = q ** (q**n)
    need = singular_count(n, q)
    report = VerificationReport("exhaustive")
    most = 0
    for gammas in product(range(big_q), repeat=n):
        gens = [Instruction(n, q, i + 1, gamma_table(g, n, q)) for i, g in enumerate(gammas)]
        closure = generated_monoid(gens, cap)
        sing = sum(1 for f in closure.lengths if f.rank < q**n)
        most = max(most, sing)
        report.checked += 1
        if sing >= need:
            report.failure_count += 1
            if len(report.failures) < MAX_FAILURES:
                report.failures.append({"gammas": list(gammas), "singular": sing})
    report.formulas["singular_maps"] = need
    report.formulas["most_singular_in_a_closure"] = most
    return report


# -- parallel simulation --------------------------------------------------------------


def parallel_simulation_search(f: Transformation, g: Transformation, max_k: int | None = None) -> int | None:
    """Smallest k with pr o g = f^k o pr, or None; the orbit of powers is followed until it cycles."""
    if f.q != g.q or f.n < g.n:
        raise ShapeError("parallel simulation needs a common alphabet and m >= n")
    qn = g.q**g.n
    want = g.table[np.arange(f.size) % qn]
    seen = set()
    power = f
    k = 1
    while max_k is None or k <= max_k:
        if power in seen:
            return None
        if np.array_equal(power.table % qn, want):
            return k
        seen.add(power)
        power = power * f
        k += 1
    return None


def check_parallel(q: int = 2, n: int = 2, m: int | None = None) -> VerificationReport:
    """No f in Tran(A^m) simulates in parallel two distinct constant maps of A^n."""
    m = n if m is None else m
    if q ** (m * q**m) > 1 << 20:
        raise BudgetError("exhaustive parallel search is limited to 2^20 maps")
    consts = [Transformation.constant(n, q, c) for c in range(q**n)]
    report = VerificationReport("exhaustive")
    for table in product(range(q**m), repeat=q**m):
        f = Transformation(m, q, table)
        hits = [c for c, g in enumerate(consts) if parallel_simulation_search(f, g) is not None]
        report.checked += 1
        if len(hits) > 1:
            report.failure_count += 1
            if len(report.failures) < MAX_FAILURES:
                report.failures.append({"f": list(table), "constants": hits})
    return report


def witness_sequence(q: int, n: int) -> list[Transformation]:
    """g_k sends state k to state 1 and everything else to state 0."""
    size = q**n
    return [Transformation(n, q, [1 if x == k else 0 for x in range(size)]) for k in range(size)]
