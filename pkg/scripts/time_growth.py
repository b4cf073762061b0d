"""Schedule length and verification time of the compact machines as n grows.

    python3 scripts/time_growth.py --q 3 --ns 2 3 --targets 50
"""

import argparse
import time
from dataclasses import dataclass, field

import numpy as np

from mlcomp.algebra import Transformation
from mlcomp.machines import compact_universal, emit_compact, simple_compact_universal
from mlcomp.verify import verify_sequential


@dataclass
class Config:
    q: int = 3
    ns: list[int] = field(default_factory=lambda: [2, 3])
    targets: int = 50
    seed: int = 0
    machines: tuple[str, ...] = ("simple", "compact")


BUILDERS = {"simple": simple_compact_universal, "compact": compact_universal}


def run(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for n in cfg.ns:
        size = cfg.q**n
        goals = [Transformation(n, cfg.q, rng.integers(0, size, size)) for _ in range(cfg.targets)]
        for kind in cfg.machines:
            m = BUILDERS[kind](cfg.q, n)
            t0 = time.perf_counter()
            lengths = [len(emit_compact(m, g)) for g in goals]
            t1 = time.perf_counter()
            ok = all(verify_sequential(m, emit_compact(m, g)).passed for g in goals)
            t2 = time.perf_counter()
            rows.append((kind, n, m.m, max(lengths), float(np.mean(lengths)), t1 - t0, t2 - t1, ok))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=Config.q)
    ap.add_argument("--ns", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--targets", type=int, default=Config.targets)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    cfg = Config(q=args.q, ns=args.ns, targets=args.targets, seed=args.seed)
    print(f"{'machine':8} {'n':>2} {'m':>3} {'max len':>8} {'mean len':>9} {'emit s':>7} {'verify s':>8}  ok")
    for kind, n, m, mx, mean, te, tv, ok in run(cfg):
        print(f"{kind:8} {n:2d} {m:3d} {mx:8d} {mean:9.1f} {te:7.2f} {tv:8.2f}  {ok}")


if __name__ == "__main__":
    main()
