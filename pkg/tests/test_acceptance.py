"""Acceptance criteria 1-11; each test records one PASS/FAIL line.

The lines are printed in the pytest terminal summary and also when this
file is run directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import subprocess
import sys
import time

import numpy as np
import sympy

from classical_skein.combinatorics import q_factorial_identity
from classical_skein.evaluation import evaluate, phi_direct, sample_representation
from classical_skein.groups import (
    Circle,
    GroupoidPath,
    GroupPresentation,
    MarkedManifoldSpec,
    Word,
    a_matrix,
    d_sign,
    holonomy,
    parse_word,
)
from classical_skein.ideals import buchberger, det_ideal, is_nilpotent, manifold_ideal
from classical_skein.polyring import PolyMatrix, PolyRing, determinant, parse_poly, reduce_by_dets
from classical_skein.randomgen import random_path, random_vertex_web, random_web, random_word
from classical_skein.skein import (
    FramedKnot,
    StatedArc,
    Vertex,
    Web,
    arc_element,
    build_ring,
    iota,
    jmath,
    normalize,
    relation_suite,
)
from classical_skein.splitting import crossings, glue_rep, theta_split

RESULTS: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


def reduced_matrix(spec, path):
    """AS-matrix with det reduction after every factor."""
    ring = spec.ring
    out = ring.block_matrix(f"c{path.dst}") if path.dst else PolyMatrix.identity(ring)
    for g, e in path.core.letters:
        out = (out @ holonomy(spec, Word(((g, e),)))).map(reduce_by_dets)
    if path.src:
        out = (out @ holonomy_adj_connector(spec, path.src)).map(reduce_by_dets)
    return out


def det_prefix(spec, path, max_degree=4):
    """Longest prefix of ``path`` whose AS-matrix has entry degree <= max_degree.

    Inverse letters and the source connector enter through adjugates of
    degree n - 1; beyond degree 4 at n = 3 the Leibniz determinant passes
    the term cap.
    """
    degree = (path.dst > 0) + (spec.n - 1) * (path.src > 0)
    letters = []
    for g, e in path.core.letters:
        step = 1 if e > 0 else spec.n - 1
        if degree + step > max_degree:
            break
        degree += step
        letters.append((g, e))
    return GroupoidPath(path.src, path.dst, Word(tuple(letters)))


def holonomy_adj_connector(spec, t):
    from classical_skein.groups import connector_matrix

    return connector_matrix(spec.ring, t, inverse=True)


# 1 ---------------------------------------------------------------------------


def test_criterion_01_q_factorial():
    start = time.perf_counter()
    ok = all(q_factorial_identity(k).equal for k in range(1, 9))
    elapsed = time.perf_counter() - start
    record(1, ok and elapsed < 1.0, f"q-factorial identity k=1..8 exact ({elapsed:.3f} s)")


# 2 ---------------------------------------------------------------------------


def test_criterion_02_a_matrix():
    ok = True
    for n in range(2, 6):
        a = sympy.Matrix(a_matrix(n).tolist())
        ok &= a * a == d_sign(n) * sympy.eye(n)
        ok &= a.det() == 1
    record(2, ok, "A^2 = d_n I and det A = 1 for n=2..5, exact")


# 3 ---------------------------------------------------------------------------


def test_criterion_03_presentation_relations():
    start = time.perf_counter()
    rng = random.Random(3)
    # (spec, pair count, max word length)
    plan = [
        (MarkedManifoldSpec.free(2, 2, 3), 25, 4),
        (MarkedManifoldSpec.free(3, 2, 1), 15, 4),
        (MarkedManifoldSpec.free(3, 2, 2), 10, 2),
    ]
    failures = 0
    for spec, count, max_len in plan:
        for _ in range(count):
            first = random_path(spec, rng, max_len)
            second = GroupoidPath(first.dst, rng.randrange(spec.k), random_word(spec.m, rng, max_len))
            whole = reduced_matrix(spec, second.compose(first))
            product = (reduced_matrix(spec, second) @ reduced_matrix(spec, first)).map(reduce_by_dets)
            failures += whole != product
            det_path = first if spec.n == 2 else det_prefix(spec, first)
            failures += reduce_by_dets(determinant(reduced_matrix(spec, det_path))) != 1
            trivial = GroupoidPath(first.src, first.src)
            failures += reduced_matrix(spec, trivial) != PolyMatrix.identity(spec.ring)
    elapsed = time.perf_counter() - start
    record(3, failures == 0 and elapsed < 30, f"50 path pairs, composition/det/identity, {failures} failures ({elapsed:.1f} s)")


# 4 ---------------------------------------------------------------------------


def test_criterion_04_relation_suite():
    start = time.perf_counter()
    plan = [(2, 2, 2, 4), (3, 2, 2, 3), (4, 1, 1, 3), (4, 1, 2, 1)]
    failed = []
    for n, m, k, max_word in plan:
        report = relation_suite(build_ring(MarkedManifoldSpec.free(n, m, k)), instances=20, seed=n * 10 + k, max_word=max_word)
        if not report.passed:
            failed.append(f"n={n},k={k}:\n{report.table()}")
    elapsed = time.perf_counter() - start
    ok = not failed and elapsed < 60
    record(4, ok, f"kink/unknot/turnback/splitting/height for n=2,3,4, 20 instances each ({elapsed:.1f} s)" + "".join(failed))


# 5 ---------------------------------------------------------------------------


def test_criterion_05_killing_order():
    rng = random.Random(5)
    specs = [MarkedManifoldSpec.free(2, 2, 2), MarkedManifoldSpec.free(3, 1, 2)]
    rings = [build_ring(s) for s in specs]
    failures = 0
    for idx in range(20):
        spec, sr = specs[idx % 2], rings[idx % 2]
        web = random_vertex_web(spec, rng, 1 + idx % 2, max_len=2 if spec.n == 2 else 1)
        base = normalize(sr, web)
        ids = [v.id for v in web.vertices]
        for order in itertools.permutations(ids):
            failures += normalize(sr, web, list(order)) != base
        for v in web.vertices:
            gamma = random_word(spec.m, rng, 2, 1)
            moved = tuple(Vertex(c.id, c.kind, c.edges, gamma * c.anchor) if c is v else c for c in web.components)
            failures += normalize(sr, Web(moved)) != base
    record(5, failures == 0, f"20 one/two-vertex webs, all orders and re-anchorings agree ({failures} failures)")


# 6 ---------------------------------------------------------------------------


def test_criterion_06_route_consistency():
    start = time.perf_counter()
    worst = 0.0
    count = 0
    rng = random.Random(6)
    spec2 = MarkedManifoldSpec.free(2, 2, 2)
    spec3 = MarkedManifoldSpec.free(3, 2, 2)
    spec3_one = MarkedManifoldSpec.free(3, 2, 1)
    # at n = 3 with two markings a total letter budget keeps products under the term cap
    batches = [
        (spec2, [random_web(spec2, rng, 3, 4) for _ in range(24)] + [random_vertex_web(spec2, rng, 1 + i % 2, 2) for i in range(6)]),
        (spec3_one, [random_web(spec3_one, rng, 3, 4) for _ in range(12)]),
        (spec3, [random_web(spec3, rng, 3, 4, letter_budget=8) for _ in range(12)] + [random_vertex_web(spec3, rng, 1 + i % 2, 2) for i in range(6)]),
    ]
    for spec, webs in batches:
        sr = build_ring(spec)
        forms = [normalize(sr, w) for w in webs]
        for seed in range(10):
            rep = sample_representation(spec, np.random.default_rng([seed, spec.n, spec.k]))
            for w, f in zip(webs, forms):
                worst = max(worst, abs(evaluate(f, rep) - phi_direct(spec, w, rep)))
                count += 1
    elapsed = time.perf_counter() - start
    record(6, worst <= 1e-8 and elapsed < 60, f"{count} evaluations (30 webs each at n=2 and n=3), max deviation {worst:.2e} ({elapsed:.1f} s)")


# 7 ---------------------------------------------------------------------------


def test_criterion_07_splitting_square():
    start = time.perf_counter()
    worst = 0.0
    webs_checked = 0
    for n, m, k in [(2, 1, 1), (2, 2, 2), (3, 1, 1), (3, 2, 1)]:
        spec = MarkedManifoldSpec.free(n, m, k)
        rng = random.Random(70 + n + m + k)
        webs = []
        while len(webs) < 5:
            w = random_web(spec, rng, 3, 4, letter_budget=6)
            if 1 <= crossings(w, m) <= 3:
                webs.append(w)
        webs.append(random_vertex_web(spec, rng, 1, 1))
        for w in webs:
            result = theta_split(spec, w, symbolic=False)
            for seed in range(10):
                cut_rep = sample_representation(result.cut_spec, np.random.default_rng([seed, 7]))
                whole = phi_direct(spec, w, glue_rep(cut_rep, spec))
                parts = sum(complex(c) * phi_direct(result.cut_spec, p, cut_rep) for c, p in result.combination)
                worst = max(worst, abs(whole - parts))
            webs_checked += 1
    # the normalized cut element closes the same square
    spec = MarkedManifoldSpec.free(2, 1)
    w = Web.of(FramedKnot(parse_word("g1*g1*g1")), StatedArc(GroupoidPath(0, 0, Word.gen(1, -1)), 1, 2))
    result = theta_split(spec, w)
    for seed in range(10):
        cut_rep = sample_representation(result.cut_spec, np.random.default_rng([seed, 8]))
        worst = max(worst, abs(phi_direct(spec, w, glue_rep(cut_rep, spec)) - evaluate(result.element, cut_rep)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 30
    record(7, ok, f"{webs_checked + 1} webs x 10 seeds, max residual {worst:.2e} ({elapsed:.1f} s)")


# 8 ---------------------------------------------------------------------------


def test_criterion_08_iota_jmath():
    start = time.perf_counter()
    failures = 0
    for n, m, k in [(2, 1, 1), (2, 2, 2), (3, 1, 1), (3, 1, 2)]:
        small = build_ring(MarkedManifoldSpec.free(n, m, k))
        big = build_ring(MarkedManifoldSpec.free(n, m, k + 1))
        e = k
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                x = big.ring.var(f"c{e}", i, j)
                image = Web.of(StatedArc(GroupoidPath(0, e), n + 1 - i, j))
                failures += jmath(small, big, image).scale((-1) ** (i + 1)) != x
                for arc in (StatedArc(GroupoidPath(0, e), i, j), StatedArc(GroupoidPath(e, 0), i, j)):
                    failures += iota(big, jmath(small, big, Web.of(arc))) != arc_element(big, arc)
    elapsed = time.perf_counter() - start
    record(8, failures == 0 and elapsed < 10, f"round trips on new-block and connector generators, n=2,3 ({elapsed:.2f} s)")


# 9 ---------------------------------------------------------------------------


def test_criterion_09_groebner():
    start = time.perf_counter()
    checks = []
    for blocks in (1, 2):
        ring = PolyRing(2, blocks)
        dets = det_ideal(ring)
        gb = buchberger(dets)
        checks.append(set(gb.basis) == {d.monic() for d in dets} and gb.reductions == 0)
    z2 = MarkedManifoldSpec(2, GroupPresentation(1, (parse_word("g1*g1"),)))
    gb = manifold_ideal(z2)
    x = z2.ring.block_matrix("g1")
    tr = x.trace()
    checks.append(gb.is_member(tr * tr - 4))
    checks.append(gb.is_member(x[1, 2]))
    # Cayley-Hamilton: X^2 - tr X + I = 0 with X^2 = I gives tr X = 2 I
    ch = (x @ x) - x.map(lambda e: e * tr) + PolyMatrix.identity(z2.ring)
    checks.append(all(reduce_by_dets(e).is_zero() for e in ch.entries()))
    checks.append(all(gb.is_member(e) for e in (x.map(lambda e: e * tr) - PolyMatrix.identity(z2.ring).scale(2)).entries()))
    scratch = PolyRing.scratch("x")
    checks.append(is_nilpotent(parse_poly("x", scratch), [parse_poly("x^2", scratch)]))
    checks.append(not is_nilpotent(scratch.one(), [parse_poly("x^2", scratch)]))
    free = MarkedManifoldSpec.free(2, 1)
    gb_free = manifold_ideal(free)
    rng = random.Random(9)
    entries = free.ring.block_matrix("g1").entries()
    for _ in range(3):
        p = gb_free.reduce(sum((rng.randint(1, 4) * rng.choice(entries) * rng.choice(entries) for _ in range(3)), free.ring.zero()) + 1)
        checks.append(not is_nilpotent(p, gb_free))
    elapsed = time.perf_counter() - start
    record(9, all(checks) and elapsed < 120, f"{sum(checks)}/{len(checks)} Gröbner checks ({elapsed:.2f} s)")


# 10 --------------------------------------------------------------------------


def test_criterion_10_circle_quotient():
    start = time.perf_counter()
    spec = MarkedManifoldSpec.free(2, 1, 1, [Circle(Word.gen(1), 0)])
    sr = build_ring(spec)
    checks = [normalize(sr, Web.of(FramedKnot(Word.gen(1)))) == 2]
    for i in (1, 2):
        for j in (1, 2):
            for h in (0, 1):
                for core in ("", "g1", "g1^-1"):
                    plain = StatedArc(GroupoidPath(0, 0, parse_word(core)), i, j, h)
                    slid = StatedArc(GroupoidPath(0, 0, parse_word(core) * Word.gen(1)), i, j, h)
                    checks.append(normalize(sr, Web.of(slid)) == normalize(sr, Web.of(plain)))
    elapsed = time.perf_counter() - start
    record(10, all(checks) and elapsed < 30, f"knot(g1) -> 2 and {len(checks) - 1} sliding moves ({elapsed:.2f} s)")


# 11 --------------------------------------------------------------------------


CLI_RUNS = [
    ["normalize", "--manifold", "{n:2, generators:1, markings:1}", "--web", "arc(e0->e0; w=; s=(1,2))"],
    ["eval", "--manifold", "{n:3, generators:2, markings:2}", "--web", "knot(w=g1*g2), sink((w= -> e0:1),(w=g1 -> e1:2),(w=g2 -> e0:3))", "--seed", "11", "--trials", "5"],
    ["check", "--manifold", "{n:2, generators:2, markings:2}", "--seed", "4", "--format", "structured"],
    ["split", "--manifold", "{n:2, generators:1, markings:1}", "--web", "knot(w=g1*g1)", "--seed", "2"],
    ["nilpotent", "--poly", "x*y", "--ideal", "x^2*y^3"],
]


def test_criterion_11_determinism():
    identical = True
    for args in CLI_RUNS:
        outs = [subprocess.run([sys.executable, "-m", "classical_skein", *args], capture_output=True).stdout for _ in range(2)]
        identical &= outs[0] == outs[1] and bool(outs[0])
    record(11, identical, f"{len(CLI_RUNS)} CLI invocations repeated, outputs byte-identical")


if __name__ == "__main__":
    tests = [f for name, f in sorted(globals().items()) if name.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
