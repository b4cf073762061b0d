import json
from itertools import product

import numpy as np
import pytest

from mlcomp.algebra import Instruction, Transformation, all_instructions, gamma_table
from mlcomp.errors import BudgetError
from mlcomp.machines import (PARALLEL, Schedule, SparseState, compact_universal, emit_compact, fast_universal,
                             quasi_parallel)
from mlcomp.verify import (check_parallel, generated_monoid, parallel_simulation_search, run_schedule,
                           singular_count, theorem1_check, verify_sequential, verify_simulation, witness_sequence)

from oracles import closure, instruction


def test_empty_schedule_leaves_state():
    m = compact_universal(2, 2)
    x = np.array([1, 0, 1, 1], dtype=np.uint8)
    assert list(run_schedule(m, Schedule(4, ()), x)) == [1, 0, 1, 1]


def test_transposition_target_on_every_state():
    m = compact_universal(2, 2)
    g = Transformation.transposition(2, 2, 0, 3)
    s = emit_compact(m, g)
    for j in range(16):
        x = np.array([(j >> b) & 1 for b in range(4)], dtype=np.uint8)
        y = run_schedule(m, s, x)
        assert int(y[0]) + 2 * int(y[1]) == g.table[j & 3]


def test_identity_reset_only_passes():
    m = compact_universal(2, 2)
    assert verify_simulation(m, Schedule(4, (3,)), Transformation.identity(2, 2)).passed


def test_deleting_a_step_is_caught():
    m = compact_universal(2, 2)
    rng = np.random.default_rng(0)
    caught = tried = 0
    while tried < 50:
        g = Transformation(2, 2, rng.integers(0, 4, 4))
        s = emit_compact(m, g)
        if g.is_identity() or len(s) < 2:
            continue
        pos = int(rng.integers(len(s)))
        steps = s.steps[:pos] + s.steps[pos + 1:]
        mutant = Schedule(4, steps, ((len(steps), g),))
        rep = verify_sequential(m, mutant)
        tried += 1
        caught += not rep.passed
        if not rep.passed:
            assert rep.failures and "state" in rep.failures[0]
    # a deleted step can be redundant (e.g. a reset that was already in place)
    assert caught >= 40


def test_exhaustive_beyond_budget_refuses():
    m = fast_universal(2, 2)
    with pytest.raises(BudgetError):
        verify_sequential(m, Schedule(m.m, ()), "exhaustive", budget=1000)


def test_sampled_reports_seed_and_are_reproducible():
    m = fast_universal(2, 2)
    s = Schedule(m.m, (3, 4), ((2, Transformation.constant(2, 2, 0)),))
    a = verify_sequential(m, s, "sampled", sample=200, seed=5)
    b = verify_sequential(m, s, "sampled", sample=200, seed=5)
    assert not a.passed
    assert a.to_json() == b.to_json()
    assert json.loads(a.to_json())["seed"] == 5
    assert "seed: 5" in a.to_text() and "result: FAIL" in a.to_text()


def test_dense_and_sparse_runs_agree():
    m = quasi_parallel(2, 2, [Transformation.identity(2, 2)] * 2)
    rng = np.random.default_rng(3)
    for _ in range(200):
        steps = tuple(int(v) for v in rng.choice([PARALLEL, -1] + list(range(1, m.m + 1)), 12))
        s = Schedule(m.m, steps)
        x = rng.integers(0, 2, m.m).astype(np.uint8)
        dense = run_schedule(m, s, x)
        sparse = run_schedule(m, s, SparseState.from_dense(x, 0))
        assert list(sparse.dense()) == list(dense)


def test_sparse_state_never_stores_default():
    st = SparseState(10, 1, {2: 1, 3: 0})
    assert st.overrides == {3: 0}
    st[3] = 1
    assert st.overrides == {}
    assert st[7] == 1


def test_monoid_examples():
    ident = Transformation.identity(2, 2)
    assert set(generated_monoid([ident]).lengths) == {ident}
    perms = [i for i in all_instructions(2, 2) if i.as_transformation().is_permutation()]
    assert len(generated_monoid(perms).lengths) == 24
    assert len(generated_monoid(all_instructions(2, 2)).lengths) == 256


def test_monoid_cap_flags_incomplete():
    # the generators themselves are always kept; the cap bounds what is added after them
    c = generated_monoid(all_instructions(2, 2), cap=40)
    assert not c.complete and len(c.lengths) == 40


def test_no_instruction_pair_generates_all_singular_maps():
    rep = theorem1_check(2, 2)
    assert rep.passed and rep.checked == 256
    assert rep.formulas["singular_maps"] == singular_count(2, 2) == 232


def test_largest_singular_share_matches_oracle():
    most = 0
    for a, b in product(range(16), repeat=2):
        gens = [instruction(2, 2, 1, gamma_table(a, 2, 2)), instruction(2, 2, 2, gamma_table(b, 2, 2))]
        most = max(most, sum(1 for f in closure(gens, 4) if len(set(f)) < 4))
    assert theorem1_check(2, 2).formulas["most_singular_in_a_closure"] == most == 44


def test_identity_pair_and_sym_generating_pair():
    ident = [Instruction.identity(2, 2, 1), Instruction.identity(2, 2, 2)]
    assert len(generated_monoid(ident).lengths) == 1
    # x1 <- x1 + x2 + 1 and x2 <- x1 + x2 generate permutations only
    a = Instruction.from_rule(2, 2, 1, lambda x: x[0] + x[1] + 1)
    b = Instruction.from_rule(2, 2, 2, lambda x: x[0] + x[1])
    c = generated_monoid([a, b])
    assert all(f.is_permutation() for f in c.lengths)


def test_parallel_search_examples():
    ident = Transformation.identity(2, 2)
    assert parallel_simulation_search(ident, ident) == 1
    shift = Transformation(2, 2, [1, 2, 3, 0])
    assert parallel_simulation_search(shift, shift.power(3)) == 3
    assert parallel_simulation_search(shift, Transformation.constant(2, 2, 0)) is None


def test_no_map_of_a2_hits_two_constants():
    rep = check_parallel(2, 2)
    assert rep.passed and rep.checked == 256


def test_random_maps_of_a3_miss_both_constants():
    rng = np.random.default_rng(17)
    g00 = Transformation.constant(2, 2, 0)
    g11 = Transformation.constant(2, 2, 3)
    for _ in range(10_000):
        f = Transformation(3, 2, rng.integers(0, 8, 8))
        assert parallel_simulation_search(f, g00) is None or parallel_simulation_search(f, g11) is None


def test_witness_sequence():
    seq = witness_sequence(2, 2)
    assert len(seq) == len(set(seq)) == 4
    assert all(g.rank == 2 for g in seq)
    assert seq[0].table.tolist() == [1, 0, 0, 0]
