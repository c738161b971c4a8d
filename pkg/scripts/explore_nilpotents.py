"""Search for nonzero nilpotents in the n = 2 coordinate ring of <a | a^p>.

For each p, builds the manifold ideal (det relation plus the entries of
X^p - I), then tests a pool of candidates built from the trace and the
matrix entries: a candidate is reported when it is nilpotent modulo the
ideal but not a member of it.

    python3 scripts/explore_nilpotents.py --max-order 4
"""

from __future__ import annotations

import argparse
import itertools
import time
from dataclasses import dataclass

from classical_skein import GroupPresentation, MarkedManifoldSpec, is_nilpotent, manifold_ideal, parse_word
from classical_skein.errors import BudgetExceeded


@dataclass
class ExploreConfig:
    min_order: int = 2
    max_order: int = 4
    trace_shifts: tuple[int, ...] = (-2, -1, 0, 1, 2)
    budget: int = 100_000


def candidates(spec: MarkedManifoldSpec, shifts: tuple[int, ...]):
    x = spec.ring.block_matrix("g1")
    tr = x.trace()
    pool = {f"x{i}{j}": x[i, j] for i in (1, 2) for j in (1, 2)}
    pool["x12*x21"] = x[1, 2] * x[2, 1]
    pool["x11-x22"] = x[1, 1] - x[2, 2]
    for c in shifts:
        pool[f"tr-({c})"] = tr - c
    for a, b in itertools.combinations_with_replacement(shifts, 2):
        pool[f"(tr-({a}))*(tr-({b}))"] = (tr - a) * (tr - b)
    return pool


def explore(cfg: ExploreConfig) -> None:
    for p in range(cfg.min_order, cfg.max_order + 1):
        relator = "*".join(["g1"] * p)
        spec = MarkedManifoldSpec(2, GroupPresentation(1, (parse_word(relator),)))
        start = time.perf_counter()
        try:
            gb = manifold_ideal(spec, budget=cfg.budget)
        except BudgetExceeded as exc:
            print(f"p={p}: basis not reached ({exc})")
            continue
        found = []
        for name, poly in candidates(spec, cfg.trace_shifts).items():
            if gb.is_member(poly):
                continue
            try:
                if is_nilpotent(poly, gb, budget=cfg.budget):
                    found.append(name)
            except BudgetExceeded:
                print(f"p={p}: budget exceeded on {name}")
        elapsed = time.perf_counter() - start
        summary = ", ".join(found) if found else "none"
        print(f"p={p}: basis size {len(gb)}, nonzero nilpotents: {summary} ({elapsed:.2f} s)")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--min-order", type=int, default=ExploreConfig.min_order)
    parser.add_argument("--max-order", type=int, default=ExploreConfig.max_order)
    parser.add_argument("--budget", type=int, default=ExploreConfig.budget)
    args = parser.parse_args()
    explore(ExploreConfig(args.min_order, args.max_order, budget=args.budget))


if __name__ == "__main__":
    main()
