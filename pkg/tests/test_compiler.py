import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mlcomp.algebra import Transformation, all_instructions, iter_transformations, state_digits
from mlcomp.compiler import (compile_generators, exact_complexity, expand_power, generating_set, kernel_chain,
                             normalize, permutation_program, power_program, split_power, swap_program,
                             transformation_program, transposition_chain, transposition_program, weight)
from mlcomp.errors import DegenerateInputError, NotInvertibleError, RangeError

from oracles import closure


def test_generating_set_q2():
    gs = generating_set(2, 2)
    assert gs.rho == 1
    assert sorted(gs.atoms()) == [("A",), ("I", 1, 1), ("I", 2, 1), ("T",)]


def test_i2_cycles_at_q3():
    i2 = generating_set(3, 2).instruction(("I", 2, 1)).as_transformation()
    cycles = i2.cycle_decomposition()
    fixed = set(range(9)) - {x for c in cycles for x in c}
    assert fixed == {0, 3, 6}
    assert sorted(len(c) for c in cycles) == [3, 3]


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("n", [2, 3])
def test_at_most_q_instructions_per_register(q, n):
    counts = generating_set(q, n).per_register_counts()
    assert max(counts.values()) <= q


def test_generators_are_the_defined_maps():
    gs = generating_set(3, 2)
    assert gs.instruction(("T",)).as_transformation() == Transformation.transposition(2, 3, 0, 1)
    assert gs.instruction(("A",)).as_transformation() == Transformation.assignment(2, 3, 0, 3)


@pytest.mark.parametrize("q,lam,length", [(5, 3, 2), (4, 2, 1), (3, 1, 1), (5, 1, 1)])
def test_power_program(q, lam, length):
    gs = generating_set(q, 2)
    for i in (1, 2):
        p = power_program(gs, i, lam)
        assert p.transformation() == gs.instruction(("I", i, 1)).as_transformation().power(lam)
        assert p.length == length <= gs.rho


def test_power_program_range():
    with pytest.raises(RangeError):
        power_program(generating_set(3, 2), 1, 3)


def test_transposition_unit_state_is_t1():
    rep = transposition_program(generating_set(3, 2), 1)
    assert rep.length == 1


def test_transposition_examples():
    rep = transposition_program(generating_set(2, 2), 3)
    assert rep.program.transformation() == Transformation.transposition(2, 2, 0, 3)
    rep = transposition_program(generating_set(3, 2), 3)
    assert rep.bound_terms["branch"] == "multiple"
    assert rep.word[-1] == ("I", 1, 2)  # (I^(1))^(q-1)
    with pytest.raises(DegenerateInputError):
        transposition_program(generating_set(2, 2), 0)


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_transposition_length_bound(q, n):
    # measured form: 2 rho w(k) + 2 rho + 1
    gs = generating_set(q, n)
    for k in range(1, q**n):
        rep = transposition_program(gs, k)
        assert rep.program.transformation() == Transformation.transposition(n, q, 0, k)
        assert rep.length <= 2 * gs.rho * weight(k, n, q) + 2 * gs.rho + 1


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_weight_sum(q, n):
    assert sum(weight(k, n, q) for k in range(q**n)) == (q - 1) * n * q ** (n - 1)


def test_weight_counts_nonzero_digits():
    digits = state_digits(3, 3)
    for k in range(27):
        assert weight(k, 3, 3) == int(np.count_nonzero(digits[k]))


def test_permutation_program_identity_and_cycle():
    gs = generating_set(2, 2)
    assert permutation_program(gs, Transformation.identity(2, 2)).length == 0
    cycle = Transformation(2, 2, [1, 2, 3, 0])
    assert permutation_program(gs, cycle).program.transformation() == cycle
    with pytest.raises(NotInvertibleError):
        permutation_program(gs, Transformation(2, 2, [0, 0, 1, 2]))


def test_transposition_chain_multiplies_to_pi():
    rng = np.random.default_rng(4)
    for _ in range(50):
        pi = Transformation(3, 2, rng.permutation(8))
        prod = Transformation.identity(3, 2)
        for k in transposition_chain(pi):
            prod = prod * Transformation.transposition(3, 2, 0, k)
        assert prod == pi


def test_cycle_chain_length():
    # an L-cycle costs at most 2L - 2 transpositions through 0, each state used at most twice
    for pi in (Transformation(2, 2, [1, 2, 3, 0]), Transformation(3, 2, [0, 2, 3, 4, 5, 6, 7, 1])):
        length = max(len(c) for c in pi.cycle_decomposition())
        chain = transposition_chain(pi)
        assert len(chain) <= 2 * length - 2
        assert max(chain.count(k) for k in chain) <= 2


def test_random_permutations_q2_n3():
    gs = generating_set(2, 3)
    rng = np.random.default_rng(9)
    for _ in range(100):
        pi = Transformation(3, 2, rng.permutation(8))
        assert permutation_program(gs, pi).program.transformation() == pi


def test_all_maps_q2_n2_compile():
    gs = generating_set(2, 2)
    for g in iter_transformations(2, 2):
        rep = transformation_program(gs, g)
        assert rep.program.transformation() == g
        assert rep.length == rep.program.length


def test_identity_compiles_to_empty_program():
    assert transformation_program(generating_set(3, 2), Transformation.identity(2, 3)).length == 0


def test_constant_map_length():
    gs = generating_set(2, 2)
    rep = transformation_program(gs, Transformation.constant(2, 2, 0))
    assert rep.program.transformation() == Transformation.constant(2, 2, 0)
    assert rep.length <= 3 * 1 * 1 * 2 * 2 + 16


@pytest.mark.parametrize("q,n", [(3, 2), (2, 3), (4, 2)])
def test_random_maps_compile(q, n):
    gs = generating_set(q, n)
    rng = np.random.default_rng(q + 7 * n)
    for _ in range(60):
        g = Transformation(n, q, rng.integers(0, q**n, q**n))
        assert transformation_program(gs, g).program.transformation() == g


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=9, max_size=9))
def test_compiler_property_q3(table):
    g = Transformation(2, 3, table)
    assert transformation_program(generating_set(3, 2), g).program.transformation() == g


def _literal_case2(g):
    """The h of the second kernel case built literally, for comparison."""
    n, q = g.n, g.q
    classes = [list(c) for c in g.kernel_partition()]
    home = next(c for c in classes if 0 in c)
    last = next(c for c in classes if q in c)
    last = [p for p in last if p != q] + [q]
    ordered = [home] + [c for c in classes if 0 not in c and q not in c] + [last]
    assign = Transformation.assignment(n, q, 0, q)
    h = Transformation.transposition(n, q, 0, q)
    for p in home[1:]:
        h = h * Transformation.transposition(n, q, 0, p) * assign
    for c in ordered[1:]:
        if c[0] != q:
            h = h * Transformation.transposition(n, q, q, c[0])
        for p in c[1:]:
            if p != q:
                h = h * Transformation.transposition(n, q, 0, p) * assign
    j = next(c for c in ordered if len(c) > 1)
    if j[1] != q:
        h = h * Transformation.transposition(n, q, j[1], q)
    return h


def test_literal_second_case_misses_kernels():
    """The repaired chain always reproduces ker(g); the literal one fails on half the cases."""
    gs_n, gs_q = 2, 2
    seen = wrong = 0
    for g in iter_transformations(gs_n, gs_q):
        classes = g.kernel_partition()
        if g.is_permutation() or any(0 in c and gs_q in c for c in classes):
            continue
        seen += 1
        wrong += _literal_case2(g).kernel_partition() != classes
        h = Transformation.identity(gs_n, gs_q)
        for op in kernel_chain(g):
            if op[0] == "A":
                h = h * Transformation.assignment(gs_n, gs_q, 0, gs_q)
            elif op[0] == "T":
                h = h * Transformation.transposition(gs_n, gs_q, 0, op[1])
            else:
                h = h * Transformation.transposition(gs_n, gs_q, op[1], op[2])
        assert h.kernel_partition() == classes
    assert (wrong, seen) == (84, 168)


def test_normalize_and_expand():
    assert normalize([("T",), ("T",)], 3) == []
    assert normalize([("A",), ("A",)], 3) == [("A",)]
    assert normalize([("I", 2, 1), ("I", 2, 2)], 3) == []
    # I^(1) has order lcm(q-1, q) = 6 at q = 3
    assert normalize([("I", 1, 4), ("I", 1, 2)], 3) == []
    assert expand_power(2, 3, 5) == [("I", 2, 1), ("I", 2, 2)]


def test_split_power_parts():
    for q in (3, 4, 5, 7):
        for e in range(1, 3 * q):
            parts = split_power(1, e, q)
            assert sum(parts) == e and all(1 <= p <= q - 1 for p in parts)


def test_compile_generators_multiply_to_target():
    rng = np.random.default_rng(12)
    for q in (2, 3, 4):
        gs = generating_set(q, 2)
        for _ in range(20):
            g = Transformation(2, q, rng.integers(0, q**2, q**2))
            prod = Transformation.identity(2, q)
            for atom in compile_generators(gs, g):
                if atom[0] == "I":
                    prod = prod * gs.instruction(("I", atom[1], 1)).as_transformation().power(atom[2])
                else:
                    prod = prod * gs.instruction(atom).as_transformation()
            assert prod == g


def test_swap_oracle():
    swap = Transformation(2, 2, [0, 2, 1, 3])
    assert swap_program(2).transformation() == swap
    assert exact_complexity(swap, all_instructions(2, 2)) == 3
    assert exact_complexity(Transformation.identity(2, 2), generating_set(2, 2).instructions.values()) == 0


def test_exact_complexity_budget_is_unknown():
    swap = Transformation(2, 2, [0, 2, 1, 3])
    assert exact_complexity(swap, all_instructions(2, 2), budget=3) is None


def test_compiler_never_beats_oracle():
    gs = generating_set(2, 2)
    gens = [tuple(y.as_transformation().table.tolist()) for y in gs.instructions.values()]
    dist = closure(gens, 4)
    assert len(dist) == 256
    for g in iter_transformations(2, 2):
        assert dist[tuple(g.table.tolist())] <= transformation_program(gs, g).length
