from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mlcomp.algebra import Transformation
from mlcomp.compiler import generating_set, swap_program, transformation_program
from mlcomp.errors import ParseError
from mlcomp.machines import (catalog_from_ordering, compact_universal, complete_max_time, emit_qp,
                             quasi_parallel)
from mlcomp.textio import (format_machine, format_program, format_schedule, format_transformation,
                           format_transformations, parse_machine, parse_program, parse_schedule,
                           parse_transformation, parse_transformations, write_machine)
from mlcomp.verify import verify_sequential

from oracles import index, states

GOLDEN = Path(__file__).parent / "golden"


def apply_program_text(text, q, n):
    """Read a program file by hand and return its table, independent of the parser."""
    rows = [line.split(":") for line in text.splitlines()[1:]]
    steps = [(int(t), [int(v) for v in c.split()]) for t, c in rows]
    table = []
    for x in states(n, q):
        y = list(x)
        for t, coord in steps:
            y[t - 1] = coord[index(y, q)]
        table.append(index(y, q))
    return table


def test_swap_program_golden():
    text = (GOLDEN / "swap_q2.prog").read_text()
    assert format_program(swap_program(2)) == text
    assert apply_program_text(text, 2, 2) == [0, 2, 1, 3]
    assert parse_program(text).transformation() == Transformation(2, 2, [0, 2, 1, 3])


def test_identity_transform_golden():
    text = (GOLDEN / "identity_q3.tf").read_text()
    assert format_transformation(Transformation.identity(2, 3)) == text
    assert parse_transformation(text).is_identity()


def test_compact_descriptor_golden():
    text = (GOLDEN / "compact_q2.machine").read_text()
    m = compact_universal(2, 2)
    assert format_machine(m) == text
    assert parse_machine(text).layout == m.layout


def test_schedule_golden_runs():
    s, n, q = parse_schedule((GOLDEN / "compact_constant0.sched").read_text())
    m = compact_universal(q, n)
    assert s.boundaries[0][1] == Transformation.constant(2, 2, 0)
    assert verify_sequential(m, s).passed


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2), (2, 3)]), st.data())
def test_transformation_round_trip(qn, data):
    q, n = qn
    table = data.draw(st.lists(st.integers(0, q**n - 1), min_size=q**n, max_size=q**n))
    f = Transformation(n, q, table)
    assert parse_transformation(format_transformation(f)) == f


def test_many_transformations_round_trip():
    rng = np.random.default_rng(0)
    fs = [Transformation(2, 3, rng.integers(0, 9, 9)) for _ in range(5)]
    assert parse_transformations(format_transformations(fs)) == fs


def test_program_round_trip():
    gs = generating_set(3, 2)
    rng = np.random.default_rng(1)
    for _ in range(10):
        g = Transformation(2, 3, rng.integers(0, 9, 9))
        p = transformation_program(gs, g).program
        back = parse_program(format_program(p))
        assert back.transformation() == g
        assert format_program(back) == format_program(p)


def test_schedule_round_trip_with_parallel_steps():
    m = quasi_parallel(2, 2, [Transformation.identity(2, 2)] * 2)
    s = emit_qp(m, 2)
    back, n, q = parse_schedule(format_schedule(s, 2, 2))
    assert (n, q) == (2, 2)
    assert back.steps == s.steps and back.boundaries == s.boundaries


def test_machine_with_catalog_round_trip(tmp_path):
    m = complete_max_time(2, 2, catalog_from_ordering(2, 2, 2))
    files = write_machine(m, tmp_path / "mt.machine")
    assert len(files) == 3
    back = parse_machine(files[0].read_text(), tmp_path)
    assert back.m == m.m and back.params["r"] == m.params["r"]
    assert back.params["catalog"] == m.params["catalog"]


def test_transform_row_count_error():
    text = "transform n=2 q=2\n0 0\n1 0\n0 1\n"
    with pytest.raises(ParseError) as exc:
        parse_transformation(text)
    assert exc.value.line == 1
    assert "q^n = 4" in str(exc.value)


def test_transform_symbol_error_names_line():
    text = "transform n=2 q=2\n0 0\n1 0\n0 2\n1 1\n"
    with pytest.raises(ParseError) as exc:
        parse_transformation(text)
    assert exc.value.line == 4


def test_program_errors():
    with pytest.raises(ParseError) as exc:
        parse_program("program n=2 q=2\n3 : 0 1 1 0\n")
    assert exc.value.line == 2
    with pytest.raises(ParseError) as exc:
        parse_program("program n=2 q=2\n1 : 0 1 1\n")
    assert "q^n = 4" in str(exc.value)
    with pytest.raises(ParseError):
        parse_program("progrm n=2 q=2\n")


def test_schedule_errors():
    with pytest.raises(ParseError) as exc:
        parse_schedule("schedule m=4 n=2 q=2\nu 1\nu 9\n")
    assert exc.value.line == 3
    with pytest.raises(ParseError) as exc:
        parse_schedule("schedule m=4 n=2 q=2\n# boundary 999\n")
    assert exc.value.line == 2


def test_descriptor_disagreement():
    text = (GOLDEN / "compact_q2.machine").read_text().replace("m=4", "m=5")
    with pytest.raises(ParseError):
        parse_machine(text)
    text = (GOLDEN / "compact_q2.machine").read_text().replace("rho=1", "rho=2")
    with pytest.raises(ParseError) as exc:
        parse_machine(text)
    assert exc.value.line == 2
