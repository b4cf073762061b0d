"""Command-line front end: ``mlcomp <subcommand> ...``.

Exit codes: 0 pass, 1 verification failure, 2 usage or parse error.
Reports go to standard output, progress to standard error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path

from . import __version__
from .algebra import Transformation, iter_transformations
from .codes import shortened_hamming
from .compiler import exact_complexity, generating_set, transformation_program
from .errors import MLCompError
from .gray import canonical_gray, doubling_gray, even_gray, product_gray, pseudo_gray
from .machines import (catalog_from_ordering, emit_compact, emit_complete, emit_elementary, emit_enumeration,
                       emit_fast, emit_max, emit_qp)
from .textio import (build_machine, format_machine, format_program, format_schedule, parse_machine,
                     parse_transformation, parse_transformations, write_machine)
from .verify import (DEFAULT_BUDGET, DEFAULT_SEED, VerificationReport, check_parallel, run_schedule,
                     theorem1_check, verify_sequential)

KINDS = ("elementary", "compact", "simple", "complete", "fast", "min-time", "max-time", "quasi-parallel")
SINGLE_TARGET = ("compact", "simple", "fast")
FIXED_SEQUENCE = ("min-time", "max-time", "quasi-parallel")


class UsageError(MLCompError):
    pass


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# -- machines and schedules -----------------------------------------------------------


def default_catalog(kind: str, q: int, n: int, k: int):
    if kind == "max-time":
        return catalog_from_ordering(n, q, k)
    if kind == "quasi-parallel":
        ident = Transformation.identity(n, q)
        # first k-1 maps of the p-enumeration, closed by the identity so passes can repeat
        return [[Transformation.from_p_index(p, n, q)] for p in range(k - 1)] + [[ident]]
    return None


@lru_cache(maxsize=8)
def _machine(kind: str, q: int, n: int, k: int):
    return build_machine(kind, q, n, default_catalog(kind, q, n, k))


def load_machine(args):
    name = args.machine
    if name is None:
        raise UsageError("--machine is required")
    path = Path(name)
    if path.is_file():
        return parse_machine(path.read_text(), path.parent)
    if name not in KINDS:
        raise UsageError(f"unknown machine {name!r}; expected a descriptor file or one of {', '.join(KINDS)}")
    if args.q is None or args.n is None:
        raise UsageError("--q and --n are required when --machine names a kind")
    return _machine(name, args.q, args.n, args.K)


def emit(machine, targets=None, repetitions: int = 1, entries=None):
    kind = machine.kind
    if kind in ("compact", "simple"):
        return emit_compact(machine, targets[0])
    if kind == "fast":
        return emit_fast(machine, targets[0])
    if kind == "elementary":
        return emit_elementary(machine, targets)
    if kind == "complete":
        return emit_complete(machine, targets)
    if kind == "min-time":
        return emit_enumeration(machine, repetitions)
    if kind == "max-time":
        return emit_max(machine, entries if entries is not None else range(machine.params["K"]))
    if kind == "quasi-parallel":
        return emit_qp(machine, repetitions)
    raise UsageError(f"no emitter for machine kind {kind!r}")


def _read_targets(args, q: int, n: int):
    if args.all_targets:
        return list(iter_transformations(n, q))
    if args.target:
        return [parse_transformation(Path(args.target).read_text())]
    if args.targets:
        return parse_transformations(Path(args.targets).read_text())
    if args.sequence:
        return parse_transformations(Path(args.sequence).read_text())
    return None


def _mode(args, machine):
    if args.sample is not None:
        return "sampled", args.sample
    if args.exhaustive or machine.q**machine.m <= args.budget:
        return "exhaustive", 0
    return "sampled", 1000


def _verify_one(job):
    kind, q, n, k, p, mode, sample, seed, budget = job
    machine = _machine(kind, q, n, k)
    g = Transformation.from_p_index(p, n, q)
    schedule = emit(machine, [g])
    return p, verify_sequential(machine, schedule, mode, sample=sample, seed=seed, budget=budget)


# -- subcommands ----------------------------------------------------------------------


def cmd_compile(args) -> int:
    g = parse_transformation(Path(args.target).read_text())
    if (args.q is not None and args.q != g.q) or (args.n is not None and args.n != g.n):
        raise UsageError(f"target file is over n={g.n} q={g.q}, flags disagree")
    gs = generating_set(g.q, g.n)
    report = transformation_program(gs, g)
    text = format_program(report.program)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"# length: {report.length}")
    for key, value in sorted(report.bound_terms.items()):
        print(f"# {key}: {value}")
    ok = report.program.transformation() == g
    if args.oracle:
        best = exact_complexity(g, list(gs.instructions.values()), args.budget)
        print(f"# oracle: {'over budget' if best is None else best}")
        ok = ok and (best is None or best <= report.length)
    print(f"# result: {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_gray(args) -> int:
    q = args.q or 2
    if args.kind == "canonical":
        code = canonical_gray(args.n, q)
    elif args.kind == "doubling":
        code = doubling_gray(args.n)
    elif args.kind == "product":
        code = product_gray(args.n)
    elif args.kind == "even":
        code = even_gray(args.n, q)
    else:
        code = pseudo_gray(args.n, q)
    print(f"gray kind={args.kind} n={args.n} q={q} length={len(code)}")
    for row in code.order.tolist():
        print(" ".join(str(v) for v in row))
    print("delta " + " ".join(str(c) for c in code.delta))
    if args.stats:
        print(f"runs: {code.run_count}")
        print(f"redundancy: {getattr(code, 'redundancy', 0)}")
    return 0


def cmd_code(args) -> int:
    code = shortened_hamming(args.k)
    print(f"code k={code.k} r={code.r} n_hat={code.n_hat}")
    print("columns " + " ".join(str(c) for c in code.columns))
    for row in code.generator.tolist():
        print(" ".join(str(v) for v in row))
    if args.stats:
        print(f"min_distance: {code.min_distance}")
    return 0


def cmd_build(args) -> int:
    if args.machine not in KINDS or args.q is None or args.n is None:
        raise UsageError("build needs --machine <kind> --q --n")
    machine = _machine(args.machine, args.q, args.n, args.K)
    if args.out:
        for p in write_machine(machine, args.out):
            _progress(f"wrote {p}")
    else:
        sys.stdout.write(format_machine(machine))
    problems = machine.problems()
    for p in problems:
        print(f"problem: {p}")
    return 1 if problems else 0


def cmd_simulate(args) -> int:
    machine = load_machine(args)
    targets = _read_targets(args, machine.q, machine.n)
    if targets is None and machine.kind not in FIXED_SEQUENCE:
        raise UsageError("simulate needs --target, --targets or --sequence for this machine")
    if machine.kind in SINGLE_TARGET and len(targets) != 1:
        raise UsageError(f"{machine.kind} machines simulate one target at a time")
    schedule = emit(machine, targets, args.repetitions)
    text = format_schedule(schedule, machine.n, machine.q)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"# length: {len(schedule)}")
    print(f"# boundaries: {len(schedule.boundaries)}")
    if args.state:
        x = [int(v) for v in args.state.split(",")]
        if len(x) != machine.m or any(not 0 <= v < machine.q for v in x):
            raise UsageError(f"--state needs {machine.m} symbols below {machine.q}")
        y = run_schedule(machine, schedule, x)
        print("# final: " + ",".join(str(int(v)) for v in y))
    return 0


def cmd_verify(args) -> int:
    machine = load_machine(args)
    mode, sample = _mode(args, machine)
    targets = _read_targets(args, machine.q, machine.n)
    if machine.kind in SINGLE_TARGET or (machine.kind == "elementary" and args.all_targets):
        if not targets:
            raise UsageError("verify needs --target, --targets or --all-targets for this machine")
        if Path(args.machine).is_file():
            raise UsageError("per-target verification takes --machine <kind>")
        jobs = [(machine.kind, machine.q, machine.n, args.K, g.p_index, mode, sample, args.seed, args.budget)
                for g in targets]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                results = list(pool.map(_verify_one, jobs))
        else:
            results = [_verify_one(j) for j in jobs]
        results.sort(key=lambda r: r[0])
        total = VerificationReport(results[0][1].mode, seed=results[0][1].seed)
        passed = 0
        for p, rep in results:
            total.merge(rep)
            total.schedule_length = max(total.schedule_length, rep.schedule_length)
            total.boundaries += rep.boundaries
            passed += rep.passed
            if not rep.passed:
                print(f"target {p}: FAIL")
        print(total.to_text())
        print(f"{passed}/{len(results)} pass")
        return 0 if passed == len(results) else 1
    if machine.kind not in FIXED_SEQUENCE and not targets:
        raise UsageError("verify needs --target, --targets, --sequence or --all-targets for this machine")
    schedule = emit(machine, targets, args.repetitions)
    report = verify_sequential(machine, schedule, mode, sample=sample, seed=args.seed, budget=args.budget)
    print(report.to_text())
    print(f"{1 if report.passed else 0}/1 pass")
    return 0 if report.passed else 1


def cmd_singular_closures(args) -> int:
    report = theorem1_check(args.q or 2, args.n or 2, args.cap)
    print(report.to_text())
    return 0 if report.passed else 1


def cmd_parallel(args) -> int:
    report = check_parallel(args.q or 2, args.n or 2, args.m)
    print(report.to_text())
    return 0 if report.passed else 1


# -- argument parsing -----------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")


def _targets(p: argparse.ArgumentParser) -> None:
    p.add_argument("--machine")
    p.add_argument("--K", type=int, default=4, help="catalog size for max-time and quasi-parallel kinds")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--target")
    g.add_argument("--targets")
    g.add_argument("--sequence")
    g.add_argument("--all-targets", action="store_true")
    p.add_argument("--repetitions", type=int, default=1)


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mlcomp", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"mlcomp {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a transformation file into a program")
    _common(p)
    p.add_argument("--target", required=True)
    p.add_argument("--oracle", action="store_true", help="compare with the breadth-first optimum")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("gray", help="print a Gray or pseudo-Gray code")
    _common(p)
    p.add_argument("--kind", choices=("canonical", "doubling", "product", "even", "pseudo"), default="canonical")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_gray)

    p = sub.add_parser("code", help="print a shortened Hamming code")
    _common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("build", help="write a machine descriptor")
    _common(p)
    _targets(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("simulate", help="emit a schedule and optionally run it on one state")
    _common(p)
    _targets(p)
    p.add_argument("--state", help="comma-separated initial register values")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check every simulation boundary")
    _common(p)
    _targets(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--sample", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check-theorem1", help="no n-tuple of instructions generates every singular map")
    _common(p)
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_singular_closures)

    p = sub.add_parser("check-parallel", help="no map simulates two distinct constants in parallel")
    _common(p)
    p.add_argument("--m", type=int)
    p.set_defaults(func=cmd_parallel)
    return ap


def dispatch(argv=None) -> int:
    try:
        args = parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (MLCompError, OSError, ValueError) as exc:
        print(f"mlcomp: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
