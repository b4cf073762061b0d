"""Memoryless-computation compiler over a small generating set of instructions.

Words are lists of atoms ``("T",)``, ``("A",)`` and ``("I", i, e)``; the last
stands for the e-th power of the cyclic instruction on register i.  A word is
over the generating set Y when every I-exponent is a power of two below
``2**rho``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import lcm
from typing import Iterable, Sequence

from .algebra import Instruction, Program, Transformation, state_digits
from .errors import DegenerateInputError, NotInvertibleError, RangeError

Atom = tuple


def ceil_log2(q: int) -> int:
    return (q - 1).bit_length()


def weight(k: int, n: int, q: int) -> int:
    """Number of non-zero coordinates of state k."""
    return int((state_digits(n, q)[k] != 0).sum())


def i_order(i: int, q: int) -> int:
    """Order of the cyclic instruction on register i."""
    return lcm(q - 1, q) if i == 1 else q


def _t1(n: int, q: int) -> Instruction:
    def rule(x):
        zero = all(v == 0 for v in x)
        e1 = x[0] == 1 and all(v == 0 for v in x[1:])
        return x[0] + zero - e1

    return Instruction.from_rule(n, q, 1, rule)


def _a2(n: int, q: int) -> Instruction:
    return Instruction.from_rule(n, q, 2, lambda x: x[1] + all(v == 0 for v in x))


def _i_power(i: int, power: int, n: int, q: int) -> Instruction:
    """(I^(i))^power, built by iterating the one-step update rule."""
    if i == 1:

        def step(x):
            zero = all(v == 0 for v in x)
            top = x[0] == q - 1 and all(v == 0 for v in x[1:])
            return (x[0] + 1 - zero + top) % q

    else:

        def step(x):
            on_axis = all(v == 0 for j, v in enumerate(x) if j != i - 1)
            return (x[i - 1] + 1 - on_axis) % q

    def rule(x):
        x = list(x)
        for _ in range(power % i_order(i, q)):
            x[i - 1] = step(x)
        return x[i - 1]

    return Instruction.from_rule(n, q, i, rule)


@dataclass(frozen=True)
class GeneratingSet:
    q: int
    n: int
    rho: int
    instructions: dict = field(repr=False)

    def instruction(self, atom: Atom) -> Instruction:
        return self.instructions[atom]

    def atoms(self) -> list[Atom]:
        return list(self.instructions)

    def per_register_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for ins in self.instructions.values():
            counts[ins.target] = counts.get(ins.target, 0) + 1
        return counts


def generating_set(q: int, n: int) -> GeneratingSet:
    if q < 2 or n < 2:
        raise RangeError("the generating set needs q >= 2 and n >= 2")
    rho = ceil_log2(q)
    ins = {("T",): _t1(n, q), ("A",): _a2(n, q)}
    for i in range(1, n + 1):
        for j in range(rho):
            ins[("I", i, 2**j)] = _i_power(i, 2**j, n, q)
    return GeneratingSet(q, n, rho, ins)


@dataclass(frozen=True)
class SynthesisReport:
    program: Program
    word: tuple
    length: int
    bound_terms: dict


# -- word manipulation -------------------------------------------------------------


def normalize(word: Iterable[Atom], q: int) -> list[Atom]:
    """Merge adjacent powers on one register, cancel T T, collapse A A."""
    out: list[Atom] = []
    for atom in word:
        if atom[0] == "I":
            e = atom[2] % i_order(atom[1], q)
            if e == 0:
                continue
            if out and out[-1][0] == "I" and out[-1][1] == atom[1]:
                e = (out.pop()[2] + e) % i_order(atom[1], q)
                if e == 0:
                    continue
            out.append(("I", atom[1], e))
        elif atom[0] == "T":
            if out and out[-1] == ("T",):
                out.pop()
            else:
                out.append(atom)
        elif atom[0] == "A":
            if not (out and out[-1] == ("A",)):
                out.append(atom)
        else:
            raise ValueError(f"unknown atom {atom!r}")
    return out


def expand_power(i: int, e: int, q: int) -> list[Atom]:
    """Write a positive exponent as a sum of available powers 2^j (j < rho)."""
    rho = ceil_log2(q)
    top = 2 ** (rho - 1)
    reps, rest = divmod(e, top) if i == 1 else (0, e)
    atoms = [("I", i, 2**j) for j in range(rho) if rest >> j & 1]
    return atoms + [("I", i, top)] * reps


def expand(word: Iterable[Atom], q: int) -> list[Atom]:
    out = []
    for atom in word:
        if atom[0] == "I":
            out.extend(expand_power(atom[1], atom[2], q))
        else:
            out.append(atom)
    return out


def word_program(gs: GeneratingSet, word: Sequence[Atom]) -> Program:
    return Program(gs.n, gs.q, tuple(gs.instruction(a) for a in word))


def group_powers(word: Sequence[Atom]) -> list[list[Atom]]:
    """Split a Y-word into blocks: single T/A atoms and maximal same-register I runs."""
    blocks: list[list[Atom]] = []
    for atom in word:
        if atom[0] == "I" and blocks and blocks[-1][0][0] == "I" and blocks[-1][0][1] == atom[1]:
            blocks[-1].append(atom)
        else:
            blocks.append([atom])
    return blocks


def _finish(gs: GeneratingSet, raw: Iterable[Atom], target: Transformation, terms: dict) -> SynthesisReport:
    word = tuple(expand(normalize(raw, gs.q), gs.q))
    program = word_program(gs, word)
    if program.transformation() != target:
        raise AssertionError("synthesised program does not compute its target")
    return SynthesisReport(program, word, program.length, terms)


# -- step (i): powers and transpositions ----------------------------------------------


def power_program(gs: GeneratingSet, i: int, lam: int) -> Program:
    if not 1 <= lam <= gs.q - 1:
        raise RangeError(f"exponent {lam} outside 1..{gs.q - 1}")
    if not 1 <= i <= gs.n:
        raise RangeError(f"register {i} outside 1..{gs.n}")
    return word_program(gs, expand_power(i, lam, gs.q) if i != 1 else [("I", 1, 2**j) for j in range(gs.rho) if lam >> j & 1])


def _transposition_word(k: int, n: int, q: int) -> list[Atom]:
    """Exponent-level word for (0, k): T^(1) conjugated by a product of cyclic instructions."""
    digits = state_digits(n, q)[k].tolist()
    if digits[0] != 0:
        conj = [(1, digits[0] - 1)] + [(j + 1, d) for j, d in enumerate(digits) if j > 0 and d]
    else:
        conj = [(j + 1, d) for j, d in enumerate(digits) if d] + [(1, q - 1)]
    forward = [("I", i, e) for i, e in conj]
    backward = [("I", i, -e) for i, e in reversed(conj)]
    return backward + [("T",)] + forward


def transposition_program(gs: GeneratingSet, k: int) -> SynthesisReport:
    if k == 0:
        raise DegenerateInputError("(0, 0) is not a transposition")
    if not 0 < k < gs.q**gs.n:
        raise RangeError(f"state {k} out of range")
    target = Transformation.transposition(gs.n, gs.q, 0, k)
    terms = {"weight": weight(k, gs.n, gs.q), "rho": gs.rho, "branch": "unit" if k % gs.q else "multiple"}
    return _finish(gs, _transposition_word(k, gs.n, gs.q), target, terms)


# -- step (ii): permutations ----------------------------------------------------------


def _push_t(chain: list[int], k: int) -> None:
    if chain and chain[-1] == k:
        chain.pop()
    else:
        chain.append(k)


def transposition_chain(pi: Transformation) -> list[int]:
    """Sequence of states k whose transpositions (0, k) multiply to pi.

    Each cycle is written as a product of adjacent transpositions (a_s, a_s+1),
    each expanded as T^(b) T^(a) T^(b) around the shared even-position state so
    that consecutive conjugators cancel.
    """
    chain: list[int] = []
    for cycle in pi.cycle_decomposition():
        a = [cycle[0]] + list(cycle[:0:-1])
        for s in range(len(a) - 1):
            x, y = a[s], a[s + 1]
            if x == 0:
                seq = [y]
            elif y == 0:
                seq = [x]
            else:
                mid, out = (x, y) if s % 2 == 1 else (y, x)
                seq = [mid, out, mid]
            for k in seq:
                _push_t(chain, k)
    return chain


def _chain_word(chain: Sequence[int], n: int, q: int) -> list[Atom]:
    word: list[Atom] = []
    for k in chain:
        word.extend(_transposition_word(k, n, q))
    return word


def permutation_program(gs: GeneratingSet, pi: Transformation) -> SynthesisReport:
    if not pi.is_permutation():
        raise NotInvertibleError("permutation_program needs a permutation")
    chain = transposition_chain(pi)
    terms = {
        "cycles": len(pi.cycle_decomposition()),
        "transpositions": len(chain),
        "weight_sum": sum(weight(k, gs.n, gs.q) for k in chain),
        "rho": gs.rho,
    }
    return _finish(gs, _chain_word(chain, gs.n, gs.q), pi, terms)


# -- step (iii): arbitrary transformations --------------------------------------------


def _macro_map(op: tuple, n: int, q: int) -> Transformation:
    if op[0] == "A":
        return Transformation.assignment(n, q, 0, q)
    if op[0] == "T":
        return Transformation.transposition(n, q, 0, op[1])
    return Transformation.transposition(n, q, op[1], op[2])


def _macro_chain(op: tuple) -> list[int]:
    if op[0] == "T":
        return [op[1]]
    a, b = op[1], op[2]
    if a == 0 or b == 0:
        return [a or b]
    return [b, a, b]


def kernel_chain(g: Transformation) -> list[tuple]:
    """Macro operations ('A',), ('T', k), ('X', a, b) for a map h with ker(h) = ker(g)."""
    n, q = g.n, g.q
    classes = [list(c) for c in g.kernel_partition()]
    home = next(c for c in classes if 0 in c)
    ops: list[tuple] = []
    if q in home:
        # 0 and q share a class: fold everything onto q, class by class
        first = [0, q] + [p for p in home if p not in (0, q)]
        rest = [c for c in classes if c is not home]
        ops.append(("A",))
        ops += [op for p in first[2:] for op in (("T", p), ("A",))]
        for c in rest:
            ops.append(("X", q, c[0]))
            ops += [op for p in c[1:] for op in (("T", p), ("A",))]
        return ops
    last = next(c for c in classes if q in c)
    middle = [c for c in classes if c is not home and c is not last]
    last = [p for p in last if p != q] + [q]
    ops.append(("T", q))
    ops += [op for p in home[1:] for op in (("T", p), ("A",))]
    for c in middle + [last]:
        if c[0] != q:
            ops.append(("X", q, c[0]))
        ops += [op for p in c[1:] if p != q for op in (("T", p), ("A",))]
    if len(last) > 1:
        # the state q was parked wherever the first transposition sent it;
        # bring it back through 0 and merge it with the rest of its class
        h = Transformation.identity(n, q)
        for op in ops:
            h = h * _macro_map(op, n, q)
        z = h(q)
        if z != 0:
            ops.append(("T", z))
        ops.append(("A",))
    return ops


def transformation_program(gs: GeneratingSet, g: Transformation) -> SynthesisReport:
    n, q = gs.n, gs.q
    if g.is_permutation():
        report = permutation_program(gs, g)
        return SynthesisReport(report.program, report.word, report.length, {"case": 0, **report.bound_terms})
    ops = kernel_chain(g)
    h = Transformation.identity(n, q)
    for op in ops:
        h = h * _macro_map(op, n, q)
    if h.kernel_partition() != g.kernel_partition():
        raise AssertionError("kernel chain does not reproduce ker(g)")
    table = [-1] * g.size
    for cls in g.kernel_partition():
        table[h(cls[0])] = g(cls[0])
    spare_dom = [x for x in range(g.size) if table[x] < 0]
    spare_cod = sorted(set(range(g.size)) - set(g.image()))
    for x, y in zip(spare_dom, spare_cod):
        table[x] = y
    pi = Transformation(n, q, table)
    h_chain: list[int] = []
    word: list[Atom] = []
    for op in ops:
        if op[0] == "A":
            word.append(("A",))
        else:
            for k in _macro_chain(op):
                word.extend(_transposition_word(k, n, q))
                h_chain.append(k)
    pi_chain = transposition_chain(pi)
    word += _chain_word(pi_chain, n, q)
    terms = {
        "case": 1 if any(q in c and 0 in c for c in g.kernel_partition()) else 2,
        "rank": g.rank,
        "assignments": sum(1 for op in ops if op[0] == "A"),
        "kernel_chain": len(ops),
        "h_transpositions": len(h_chain),
        "pi_transpositions": len(pi_chain),
        "rho": gs.rho,
    }
    return _finish(gs, word, g, terms)


# -- reference programs and the breadth-first oracle -----------------------------------


def swap_program(q: int) -> Program:
    """x1 <- x1 + x2; x2 <- x1 - x2; x1 <- x1 - x2."""
    steps = (
        Instruction.from_rule(2, q, 1, lambda x: x[0] + x[1]),
        Instruction.from_rule(2, q, 2, lambda x: x[0] - x[1]),
        Instruction.from_rule(2, q, 1, lambda x: x[0] - x[1]),
    )
    return Program(2, q, steps)


def _as_map(y) -> Transformation:
    return y.as_transformation() if isinstance(y, Instruction) else y


def complexity_table(generators: Sequence, budget: int | None = None) -> dict[Transformation, int]:
    """Breadth-first distances from the identity over products of ``generators``."""
    gens = [_as_map(y) for y in generators]
    start = Transformation.identity(gens[0].n, gens[0].q)
    dist = {start: 0}
    frontier = deque([start])
    while frontier:
        f = frontier.popleft()
        for y in gens:
            h = f * y
            if h not in dist:
                if budget is not None and len(dist) >= budget:
                    return dist
                dist[h] = dist[f] + 1
                frontier.append(h)
    return dist


def exact_complexity(g: Transformation, generators: Sequence, budget: int | None = None) -> int | None:
    """Minimal number of generators whose product is g; None when the budget runs out first."""
    gens = [_as_map(y) for y in generators]
    if g.is_identity():
        return 0
    seen = {Transformation.identity(g.n, g.q)}
    level = [Transformation.identity(g.n, g.q)]
    depth = 0
    while level:
        depth += 1
        nxt = []
        for f in level:
            for y in gens:
                h = f * y
                if h == g:
                    return depth
                if h not in seen:
                    if budget is not None and len(seen) >= budget:
                        return None
                    seen.add(h)
                    nxt.append(h)
        level = nxt
    return None


# -- generator lists for switch-driven machines ----------------------------------------


def exponent_word(word: Sequence[Atom]) -> list[Atom]:
    """Collapse each same-register run of powers in a Y-word into one exponent atom."""
    out = []
    for block in group_powers(word):
        if block[0][0] == "I":
            out.append(("I", block[0][1], sum(a[2] for a in block)))
        else:
            out.extend(block)
    return out


def split_power(i: int, e: int, q: int) -> list[int]:
    """Write an exponent as a sum of parts in 1..q-1 (only register 1 ever needs more than one)."""
    if e <= q - 1:
        return [e]
    top = 2 ** (ceil_log2(q) - 1)
    reps, rest = divmod(e, top)
    return ([rest] if rest else []) + [top] * reps


def compile_generators(gs: GeneratingSet, g: Transformation) -> list[Atom]:
    """g as a product of T, A and powers (I^(i))^lam with 1 <= lam <= q-1."""
    gens: list[Atom] = []
    for atom in exponent_word(transformation_program(gs, g).word):
        if atom[0] == "I":
            gens += [("I", atom[1], lam) for lam in split_power(atom[1], atom[2], gs.q)]
        else:
            gens.append(atom)
    return gens
