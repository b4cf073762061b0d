import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mlcomp.algebra import (Instruction, Program, State, Transformation, all_instructions, assignment, conjugate,
                            induced_instruction, iter_transformations, lex_index, run_program, state_of_index,
                            transposition)
from mlcomp.compiler import generating_set, swap_program
from mlcomp.errors import DegenerateInputError, NotInvertibleError, RangeError, ShapeError

from oracles import closure, instruction, tabulate, then


def random_map(rng, n, q):
    return Transformation(n, q, rng.integers(0, q**n, q**n))


def test_lex_index_examples():
    assert lex_index(State((0, 0), 2)) == 0
    assert lex_index(State((1, 0), 2)) == 1
    assert lex_index(State((0, 1), 2)) == 2
    assert lex_index(State((2, 1), 3)) == 5


def test_state_of_index_rejects_out_of_range():
    with pytest.raises(RangeError):
        state_of_index(9, 2, 3)


@given(st.integers(2, 4), st.integers(1, 4), st.data())
def test_lex_round_trip(q, n, data):
    j = data.draw(st.integers(0, q**n - 1))
    assert lex_index(state_of_index(j, n, q)) == j


def test_swap_program_on_every_state():
    for q in (2, 3, 5):
        p = swap_program(q)
        assert p.length == 3
        for a in range(q):
            for b in range(q):
                assert run_program(p, State((a, b), q)).digits == (b, a)


def test_compose_is_right_action():
    # f first, then g
    f = Transformation(2, 2, [1, 1, 2, 3])
    g = Transformation(2, 2, [3, 2, 1, 0])
    assert (f * g).table.tolist() == list(then(tuple(f.table), tuple(g.table)))


def test_identity_is_neutral_on_random_maps():
    rng = np.random.default_rng(0)
    ident = Transformation.identity(3, 2)
    for _ in range(100):
        f = random_map(rng, 3, 2)
        assert f * ident == f and ident * f == f


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (3, 2)])
def test_compose_associative(q, n):
    rng = np.random.default_rng(q * 10 + n)
    for _ in range(30):
        f, g, h = (random_map(rng, n, q) for _ in range(3))
        assert (f * g) * h == f * (g * h)


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        Transformation.identity(2, 2) * Transformation.identity(2, 3)


def test_transposition_and_assignment_tables():
    t = transposition(State((0, 0), 2), State((1, 0), 2))
    assert t.table.tolist() == [1, 0, 2, 3]
    a = assignment(State((0, 0), 3), State((0, 1), 3))
    gs = generating_set(3, 2)
    assert a == gs.instruction(("A",)).as_transformation()
    with pytest.raises(DegenerateInputError):
        transposition(State((1, 1), 2), State((1, 1), 2))


def test_assignment_rank():
    rng = random.Random(3)
    for _ in range(20):
        u, v = rng.sample(range(8), 2)
        f = assignment(state_of_index(u, 3, 2), state_of_index(v, 3, 2))
        assert f.rank == 7


def test_transposition_is_involution():
    t = Transformation.transposition(2, 3, 2, 7)
    assert (t * t).is_identity()


def test_conjugate_gives_transposition_of_k():
    # k = (2, 0) at q = 3: T^(1) conjugated by (I^(1))^(k_1 - 1) is (0, k)
    gs = generating_set(3, 2)
    t1 = gs.instruction(("T",)).as_transformation()
    i1 = gs.instruction(("I", 1, 1)).as_transformation()
    assert conjugate(t1, i1.power(1)) == Transformation.transposition(2, 3, 0, 2)


def test_conjugate_identity_and_singular():
    f = Transformation(2, 2, [0, 0, 1, 3])
    assert conjugate(f, Transformation.identity(2, 2)) == f
    with pytest.raises(NotInvertibleError):
        conjugate(f, f)


def test_conjugation_preserves_cycle_type():
    rng = np.random.default_rng(7)
    for _ in range(50):
        f = Transformation(3, 2, rng.permutation(8))
        g = Transformation(3, 2, rng.permutation(8))
        assert sorted(f.cycle_type()) == sorted(conjugate(f, g).cycle_type())


def test_i1_cycle_structure():
    # one cycle of length q-1 and q^(n-1)-1 cycles of length q
    i1 = generating_set(3, 2).instruction(("I", 1, 1)).as_transformation()
    lengths = sorted(len(c) for c in i1.cycle_decomposition())
    assert lengths == [2, 3, 3]


def test_rank_kernel_and_cycles():
    assert Transformation.constant(2, 2, 3).rank == 1
    f = Transformation(2, 2, [0, 1, 1, 2])
    assert f.rank == 3
    assert len(f.kernel_partition()) == 3
    with pytest.raises(NotInvertibleError):
        f.cycle_decomposition()


def test_kernel_partition_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(20):
        f = random_map(rng, 2, 3)
        classes = {}
        for x in range(9):
            classes.setdefault(int(f.table[x]), []).append(x)
        assert sorted(map(tuple, classes.values())) == sorted(f.kernel_partition())


def test_induced_instruction_of_identity():
    for i in (1, 2):
        assert induced_instruction(Transformation.identity(2, 3), i).is_identity()


def test_instructions_are_projections_off_target():
    for ins in all_instructions(2, 2):
        f = ins.as_transformation()
        other = 3 - ins.target
        assert f.coordinate(other) == Transformation.identity(2, 2).coordinate(other)


def test_permutation_instructions_of_gf2_squared():
    ins = all_instructions(2, 2)
    assert len(ins) == 32
    perms = {(i.target, i.coord) for i in ins if i.as_transformation().is_permutation()}
    # x1 <- x1 + a x2 + b and x2 <- x2 + a x1 + b
    expected = set()
    for a in (0, 1):
        for b in (0, 1):
            expected.add((1, tuple((x1 + a * x2 + b) % 2 for x2 in (0, 1) for x1 in (0, 1))))
            expected.add((2, tuple((x2 + a * x1 + b) % 2 for x2 in (0, 1) for x1 in (0, 1))))
    assert perms == expected


def test_program_matches_composed_tables():
    rng = np.random.default_rng(5)
    f = random_map(rng, 2, 3)
    steps = [induced_instruction(f, i) for i in (2, 1, 2)]
    p = Program(2, 3, steps)
    ref = tuple(range(9))
    for s in steps:
        ref = then(ref, instruction(2, 3, s.target, s.coord))
    assert p.transformation().table.tolist() == list(ref)
    for x in range(9):
        assert run_program(p, state_of_index(x, 2, 3)).index == ref[x]


def test_program_length_skips_identities():
    p = Program(2, 2, [Instruction.identity(2, 2, 1), swap_program(2).steps[0]])
    assert p.length == 1


def test_from_function_agrees_with_oracle():
    fn = lambda x: (x[0] * x[1] + 1, x[0] - x[1])
    assert Transformation.from_function(2, 3, fn).table.tolist() == list(tabulate(fn, 2, 3))


def test_p_index_round_trip_and_identity_gammas():
    ident = Transformation.identity(2, 2)
    assert ident.gamma_indices() == (10, 12)
    for g in list(iter_transformations(2, 2))[::17]:
        assert Transformation.from_p_index(g.p_index, 2, 2) == g


def test_iter_transformations_enumerates_tran():
    maps = list(iter_transformations(2, 2))
    assert len(maps) == 256 and len(set(maps)) == 256
    assert sorted(g.p_index for g in maps) == list(range(256))


@settings(max_examples=40)
@given(st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_rank_is_image_size(table):
    assert Transformation(2, 2, table).rank == len(set(table))


def test_permutation_instructions_generate_sym():
    gens = [tuple(i.as_transformation().table.tolist()) for i in all_instructions(2, 2)
            if i.as_transformation().is_permutation()]
    assert len(closure(gens, 4)) == 24
