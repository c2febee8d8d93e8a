"""Compare the compiled solver kernel with the pure-Python fallback.

Each workload is run once per kernel with all caches cleared, so encoding
time is included in both columns. Verdicts are compared as a sanity check.

    python benchmarks/bench_kernels.py --repeat 3
"""

from __future__ import annotations

import argparse
import random
import statistics
import time
from typing import Callable

from wkb import kernel, reason, search
from wkb.bench import corpus, randgen, reductions
from wkb.bench.fixtures import visa_fixture
from wkb.core import ConceptAtom, Query, RoleAtom


def visa(backend: str) -> list:
    kb = visa_fixture()
    qs = [
        Query((ConceptAtom("NoVisa", "p"),)),
        Query((ConceptAtom("Visa", "p"),)),
        Query((RoleAtom("hasNat", "p", "c"), ConceptAtom("Visa", "p"))),
    ]
    sems = [reason.CertainOpt(), reason.PossibleOpt(), reason.CertainBounded(2), reason.PossibleBounded(2)]
    return [reason.entails(kb, q, s, backend=backend).answer for q in qs for s in sems]


def three_col(backend: str) -> list:
    out = []
    for g in corpus.all_graphs(6, min_n=6)[::4]:
        kb, k = reductions.gen_3col(g)
        out.append(reason.bcs(kb, k, backend=backend).answer)
    return out


def indset(backend: str) -> list:
    rng = random.Random(11)
    out = []
    for _ in range(6):
        g = randgen.random_graph(rng, 7)
        for w in range(g.n):
            kb = reductions.gen_independent_set(g, w)
            out.append(reason.entails(kb, reductions.goal_query(w), reason.CertainOpt(), backend=backend).answer)
    return out


def lexmax(backend: str) -> list:
    rng = random.Random(5)
    out = []
    for _ in range(4):
        phi = randgen.random_two_two(rng, 5, 6)
        kb = reductions.gen_lexmax(phi)
        for k in range(1, phi.n + 1):
            out.append(reason.entails(kb, reductions.lexmax_query(k), reason.CertainOpt(), backend=backend).answer)
    return out


WORKLOADS: dict[str, Callable[[str], list]] = {
    "visa": visa,
    "3col-n6": three_col,
    "indset-n7": indset,
    "lexmax-n5": lexmax,
}


def timed(fn: Callable[[str], list], backend: str) -> tuple[float, list]:
    search.clear_cache()
    reason.clear_caches()
    t0 = time.perf_counter()
    verdicts = fn(backend)
    return time.perf_counter() - t0, verdicts


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--only", choices=sorted(WORKLOADS), action="append")
    args = ap.parse_args()
    if not kernel.compiled_available():
        raise SystemExit("compiled kernel not built; run: pip install -e . --no-build-isolation")
    print(f"{'workload':<12} {'compiled s':>11} {'python s':>10} {'speedup':>8}  agree")
    for name in args.only or WORKLOADS:
        fn = WORKLOADS[name]
        ct, pt = [], []
        agree = True
        for _ in range(args.repeat):
            c, cv = timed(fn, "compiled")
            p, pv = timed(fn, "python")
            ct.append(c)
            pt.append(p)
            agree &= cv == pv
        c, p = statistics.median(ct), statistics.median(pt)
        print(f"{name:<12} {c:>11.3f} {p:>10.3f} {p / c:>7.1f}x  {agree}")


if __name__ == "__main__":
    main()
