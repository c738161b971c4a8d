"""Wall-clock timings for the main computational paths.

    python3 scripts/benchmark.py [--repeats 3]
"""

from __future__ import annotations

import argparse
import random
import statistics
import time
from dataclasses import dataclass, field

from classical_skein import (
    MarkedManifoldSpec,
    PolyRing,
    buchberger,
    build_ring,
    normalize,
    parse_poly,
    relation_suite,
)
from classical_skein.ideals import det_ideal
from classical_skein.randomgen import random_web


@dataclass
class BenchConfig:
    repeats: int = 3
    normalize_cases: list[tuple[int, int, int]] = field(default_factory=lambda: [(2, 2, 2), (3, 2, 1), (3, 2, 2)])
    suite_cases: list[tuple[int, int, int, int]] = field(default_factory=lambda: [(2, 2, 2, 4), (3, 2, 2, 3), (4, 1, 1, 2)])
    webs_per_case: int = 20


def timed(fn, repeats: int) -> tuple[float, float]:
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples), max(samples)


def report(label: str, fn, repeats: int) -> None:
    median, worst = timed(fn, repeats)
    print(f"{label:<44} median {median:8.3f} s   max {worst:8.3f} s")


def bench_normalize(cfg: BenchConfig) -> None:
    for n, m, k in cfg.normalize_cases:
        spec = MarkedManifoldSpec.free(n, m, k)
        rng = random.Random(n * 100 + k)
        budget = 8 if n == 3 and k > 1 else None
        webs = [random_web(spec, rng, 3, 4, letter_budget=budget) for _ in range(cfg.webs_per_case)]

        def run(spec=spec, webs=webs):
            sr = build_ring(spec)
            for w in webs:
                normalize(sr, w)

        report(f"normalize {cfg.webs_per_case} webs n={n} m={m} k={k}", run, cfg.repeats)


def bench_suite(cfg: BenchConfig) -> None:
    for n, m, k, max_word in cfg.suite_cases:
        spec = MarkedManifoldSpec.free(n, m, k)
        report(
            f"relation suite n={n} m={m} k={k} words<={max_word}",
            lambda spec=spec, mw=max_word: relation_suite(build_ring(spec), 20, 0, mw),
            cfg.repeats,
        )


def bench_groebner(cfg: BenchConfig) -> None:
    for blocks in (1, 2):
        ring = PolyRing(2, blocks)
        report(f"buchberger det ideal n=2 blocks={blocks}", lambda ring=ring: buchberger(det_ideal(ring)), cfg.repeats)
    ring = PolyRing.scratch("a", "b", "c", "d")
    cyclic4 = ("a + b + c + d", "a*b + b*c + c*d + d*a", "a*b*c + b*c*d + c*d*a + d*a*b", "a*b*c*d - 1")
    gens = [parse_poly(t, ring) for t in cyclic4]
    report("buchberger cyclic-4", lambda: buchberger(gens), cfg.repeats)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=BenchConfig.repeats)
    cfg = BenchConfig(repeats=parser.parse_args().repeats)
    bench_normalize(cfg)
    bench_suite(cfg)
    bench_groebner(cfg)


if __name__ == "__main__":
    main()
