"""Plain-text formats for transformations, programs, schedules and machine descriptors.

transform n=2 q=2         program n=2 q=2        schedule m=4 n=2 q=2
0 0                       1 : 0 1 1 0            u 4
1 0                       2 : 0 1 0 1            P
...                                              # boundary 27

Boundaries name their target by its p-index.  Machine descriptors carry the
builder parameters; catalogs live in separate transformation files, one file
per catalog entry, referenced by path relative to the descriptor.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .algebra import Instruction, Program, Transformation, state_digits
from .errors import ParseError
from .machines.base import LAST, PARALLEL, Schedule, UniversalMachine


def _header(line: str, word: str, keys: tuple[str, ...], lineno: int = 1) -> dict[str, int]:
    parts = line.split()
    if not parts or parts[0] != word:
        raise ParseError(f"expected a '{word}' header", lineno)
    out = {}
    for item in parts[1:]:
        key, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"malformed header field {item!r}", lineno)
        out[key] = value
    missing = [k for k in keys if k not in out]
    if missing:
        raise ParseError(f"header lacks {', '.join(missing)}", lineno)
    try:
        return {k: int(out[k]) if k in keys else out[k] for k in out}
    except ValueError as exc:
        raise ParseError(f"non-integer header value ({exc})", lineno) from None


def _content(text: str) -> list[tuple[int, str]]:
    return [(i, s.strip()) for i, s in enumerate(text.splitlines(), 1) if s.strip()]


def _ints(s: str, lineno: int) -> list[int]:
    try:
        return [int(v) for v in s.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {s!r}", lineno) from None


# -- transformations ------------------------------------------------------------------


def format_transformation(f: Transformation) -> str:
    digits = state_digits(f.n, f.q)
    lines = [f"transform n={f.n} q={f.q}"]
    lines += [" ".join(str(int(d)) for d in digits[j]) for j in f.table]
    return "\n".join(lines) + "\n"


def _parse_transform_lines(lines: list[tuple[int, str]]) -> tuple[Transformation, list[tuple[int, str]]]:
    lineno, head = lines[0]
    h = _header(head, "transform", ("n", "q"), lineno)
    n, q = h["n"], h["q"]
    size = q**n
    body = [(i, s) for i, s in lines[1 : size + 1] if not s.startswith("transform")]
    if len(body) != size:
        raise ParseError(f"transform n={n} q={q} needs q^n = {size} rows, found {len(body)}", lineno)
    table = []
    for i, s in body:
        row = _ints(s, i)
        if len(row) != n or any(not 0 <= v < q for v in row):
            raise ParseError(f"row must hold {n} symbols below {q}", i)
        table.append(sum(v * q**k for k, v in enumerate(row)))
    return Transformation(n, q, table), lines[size + 1 :]


def parse_transformation(text: str) -> Transformation:
    lines = [(i, s) for i, s in _content(text) if not s.startswith("#")]
    if not lines:
        raise ParseError("empty transformation file", 1)
    f, rest = _parse_transform_lines(lines)
    if rest:
        raise ParseError("trailing content after the table", rest[0][0])
    return f


def format_transformations(fs: Iterable[Transformation]) -> str:
    return "".join(format_transformation(f) for f in fs)


def parse_transformations(text: str) -> list[Transformation]:
    lines = [(i, s) for i, s in _content(text) if not s.startswith("#")]
    out = []
    while lines:
        f, lines = _parse_transform_lines(lines)
        out.append(f)
    return out


# -- programs -------------------------------------------------------------------------


def format_program(p: Program) -> str:
    lines = [f"program n={p.n} q={p.q}"]
    lines += [f"{s.target} : " + " ".join(str(v) for v in s.coord) for s in p.steps]
    return "\n".join(lines) + "\n"


def parse_program(text: str) -> Program:
    lines = [(i, s) for i, s in _content(text) if not s.startswith("#")]
    if not lines:
        raise ParseError("empty program file", 1)
    h = _header(lines[0][1], "program", ("n", "q"), lines[0][0])
    n, q = h["n"], h["q"]
    steps = []
    for i, s in lines[1:]:
        target, sep, coord = s.partition(":")
        if not sep:
            raise ParseError("expected '<target> : <symbols>'", i)
        t = _ints(target, i)
        values = _ints(coord, i)
        if len(t) != 1 or not 1 <= t[0] <= n:
            raise ParseError(f"target must be a register in 1..{n}", i)
        if len(values) != q**n or any(not 0 <= v < q for v in values):
            raise ParseError(f"coordinate table needs q^n = {q**n} symbols below {q}", i)
        steps.append(Instruction(n, q, t[0], tuple(values)))
    return Program(n, q, steps)


# -- schedules ------------------------------------------------------------------------


def format_schedule(s: Schedule, n: int, q: int) -> str:
    lines = [f"schedule m={s.m} n={n} q={q}"]
    marks: dict[int, list[Transformation]] = {}
    for pos, g in s.boundaries:
        marks.setdefault(pos, []).append(g)
    for pos in range(len(s.steps) + 1):
        lines += [f"# boundary {g.p_index}" for g in marks.get(pos, ())]
        if pos < len(s.steps):
            step = s.steps[pos]
            lines.append("P" if step == PARALLEL else "L" if step == LAST else f"u {step}")
    return "\n".join(lines) + "\n"


def parse_schedule(text: str) -> tuple[Schedule, int, int]:
    lines = _content(text)
    if not lines:
        raise ParseError("empty schedule file", 1)
    h = _header(lines[0][1], "schedule", ("m", "n", "q"), lines[0][0])
    m, n, q = h["m"], h["n"], h["q"]
    steps: list[int] = []
    marks = []
    for i, s in lines[1:]:
        if s.startswith("#"):
            words = s[1:].split()
            if words[:1] == ["boundary"]:
                if len(words) != 2 or not words[1].isdigit():
                    raise ParseError("expected '# boundary <p-index>'", i)
                try:
                    marks.append((len(steps), Transformation.from_p_index(int(words[1]), n, q)))
                except ValueError as exc:
                    raise ParseError(str(exc), i) from None
            continue
        if s == "P":
            steps.append(PARALLEL)
        elif s == "L":
            steps.append(LAST)
        else:
            words = s.split()
            if len(words) != 2 or words[0] != "u" or not words[1].isdigit() or not 1 <= int(words[1]) <= m:
                raise ParseError(f"expected 'u <register in 1..{m}>', 'P' or 'L', got {s!r}", i)
            steps.append(int(words[1]))
    return Schedule(m, tuple(steps), tuple(marks)), n, q


# -- machine descriptors --------------------------------------------------------------

_SCALARS = ("Q", "K", "L", "r", "rho", "sigma", "restore", "inner")


def format_machine(machine: UniversalMachine, catalog_paths: Iterable[str] = ()) -> str:
    lines = [f"machine kind={machine.kind} q={machine.q} n={machine.n} m={machine.m}"]
    for key in _SCALARS:
        if key in machine.params:
            lines.append(f"{key}={machine.params[key]}")
    lines += [f"catalog {p}" for p in catalog_paths]
    for name, regs in machine.layout.items():
        lines.append(f"layout {name}=" + ",".join(str(r) for r in regs))
    return "\n".join(lines) + "\n"


def build_machine(kind: str, q: int, n: int, catalog=None) -> UniversalMachine:
    from .machines import (complete_compact, complete_max_time, complete_min_time, compact_universal,
                           elementary_universal, fast_universal, quasi_parallel, simple_compact_universal)

    simple = {
        "elementary": elementary_universal,
        "compact": compact_universal,
        "simple": simple_compact_universal,
        "complete": complete_compact,
        "fast": fast_universal,
        "min-time": complete_min_time,
    }
    if kind in simple:
        return simple[kind](q, n)
    if kind == "max-time":
        return complete_max_time(q, n, catalog or [])
    if kind == "quasi-parallel":
        return quasi_parallel(q, n, [g for entry in (catalog or []) for g in entry])
    raise ValueError(f"unknown machine kind {kind!r}")


def parse_machine(text: str, base: str | Path = ".") -> UniversalMachine:
    """Rebuild the machine and check that every recorded field agrees with it."""
    lines = [(i, s) for i, s in _content(text) if not s.startswith("#")]
    if not lines:
        raise ParseError("empty machine file", 1)
    h = _header(lines[0][1], "machine", ("q", "n", "m"), lines[0][0])
    if "kind" not in h:
        raise ParseError("header lacks kind", lines[0][0])
    scalars: dict[str, tuple[int, str]] = {}
    catalog = []
    layout: dict[str, tuple[int, tuple[int, ...]]] = {}
    for i, s in lines[1:]:
        if s.startswith("catalog "):
            path = Path(base) / s.split(None, 1)[1]
            try:
                catalog.append(parse_transformations(path.read_text()))
            except OSError as exc:
                raise ParseError(f"cannot read catalog file {path} ({exc.strerror})", i) from None
        elif s.startswith("layout "):
            name, sep, regs = s[7:].partition("=")
            if not sep:
                raise ParseError("expected 'layout <group>=<registers>'", i)
            layout[name.strip()] = (i, tuple(_ints(regs.replace(",", " "), i)))
        else:
            key, sep, value = s.partition("=")
            if not sep or key not in _SCALARS:
                raise ParseError(f"unknown descriptor line {s!r}", i)
            scalars[key] = (i, value.strip())
    try:
        machine = build_machine(h["kind"], h["q"], h["n"], catalog)
    except ValueError as exc:
        raise ParseError(str(exc), lines[0][0]) from None
    if machine.m != h["m"]:
        raise ParseError(f"kind {machine.kind} gives m = {machine.m}, descriptor says {h['m']}", lines[0][0])
    for key, (i, value) in scalars.items():
        if str(machine.params.get(key)) != value:
            raise ParseError(f"{key}={value} disagrees with the built machine ({machine.params.get(key)})", i)
    for name, (i, regs) in layout.items():
        if machine.layout.get(name) != regs:
            raise ParseError(f"layout {name} disagrees with the built machine", i)
    return machine


def write_machine(machine: UniversalMachine, path: str | Path) -> list[Path]:
    """Write the descriptor and, for catalog machines, one transformation file per entry."""
    path = Path(path)
    written = []
    names = []
    catalog = machine.params.get("catalog")
    if catalog is not None:
        entries = catalog if machine.kind == "max-time" else [[g] for g in catalog]
        for k, entry in enumerate(entries, 1):
            p = path.with_name(f"{path.stem}.catalog{k}.tf")
            p.write_text(format_transformations(entry))
            written.append(p)
            names.append(p.name)
    path.write_text(format_machine(machine, names))
    return [path] + written
