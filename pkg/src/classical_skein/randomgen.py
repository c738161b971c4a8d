"""Seeded random words, paths and webs for property checks."""

from __future__ import annotations

import random

from .groups import GroupoidPath, MarkedManifoldSpec, Word
from .skein import Edge, FramedKnot, MarkingEnd, StatedArc, Vertex, VertexEnd, Web


def random_word(m: int, rng: random.Random, max_len: int = 4, min_len: int = 0) -> Word:
    if m == 0:
        return Word()
    length = rng.randint(min_len, max_len)
    letters = []
    while len(letters) < length:
        g, e = rng.randint(1, m), rng.choice((1, -1))
        if letters and letters[-1] == (g, -e):
            continue
        letters.append((g, e))
    return Word(tuple(letters))


def random_path(spec: MarkedManifoldSpec, rng: random.Random, max_len: int = 4) -> GroupoidPath:
    return GroupoidPath(rng.randrange(spec.k), rng.randrange(spec.k), random_word(spec.m, rng, max_len))


def random_arc(spec: MarkedManifoldSpec, rng: random.Random, max_len: int = 4) -> StatedArc:
    n = spec.n
    return StatedArc(random_path(spec, rng, max_len), rng.randint(1, n), rng.randint(1, n), rng.randrange(2))


def random_knot(spec: MarkedManifoldSpec, rng: random.Random, max_len: int = 4) -> FramedKnot:
    return FramedKnot(random_word(spec.m, rng, max_len), rng.randrange(2))


def random_web(
    spec: MarkedManifoldSpec,
    rng: random.Random,
    max_components: int = 3,
    max_len: int = 4,
    letter_budget: int | None = None,
) -> Web:
    """Vertex-free web; ``letter_budget`` caps the total letters across components."""
    budget = letter_budget if letter_budget is not None else max_components * max_len
    comps = []
    for _ in range(rng.randint(1, max_components)):
        cap = min(max_len, budget)
        if spec.k >= 1 and rng.random() < 0.6:
            comp = random_arc(spec, rng, cap)
            budget -= len(comp.path.core)
        else:
            comp = random_knot(spec, rng, cap)
            budget -= len(comp.word)
        comps.append(comp)
    return Web(tuple(comps))


def _marking_edge(spec: MarkedManifoldSpec, rng: random.Random, max_len: int) -> Edge:
    return Edge(
        random_word(spec.m, rng, max_len),
        MarkingEnd(rng.randrange(spec.k), rng.randint(1, spec.n)),
        rng.randrange(2),
    )


def random_vertex_web(
    spec: MarkedManifoldSpec,
    rng: random.Random,
    vertices: int = 1,
    max_len: int = 2,
    shared_edges: int | None = None,
) -> Web:
    """One vertex, or a sink/source pair joined by some shared edges."""
    n = spec.n
    if vertices == 1:
        kind = rng.choice(("sink", "source"))
        return Web.of(Vertex("v0", kind, tuple(_marking_edge(spec, rng, max_len) for _ in range(n))))
    if vertices != 2:
        raise ValueError("only one or two vertices are generated")
    shared = rng.randint(0, n) if shared_edges is None else shared_edges
    sink_slots = rng.sample(range(1, n + 1), shared)
    source_slots = rng.sample(range(1, n + 1), shared)
    sink_edges: list[Edge | None] = [None] * n
    source_edges: list[Edge | None] = [None] * n
    for a, b in zip(sink_slots, source_slots):
        w, h = random_word(spec.m, rng, max_len), rng.randrange(2)
        sink_edges[a - 1] = Edge(w, VertexEnd("v1", b), h)
        source_edges[b - 1] = Edge(w, VertexEnd("v0", a), h)
    sink_edges = [e or _marking_edge(spec, rng, max_len) for e in sink_edges]
    source_edges = [e or _marking_edge(spec, rng, max_len) for e in source_edges]
    anchors = [random_word(spec.m, rng, 1) if rng.random() < 0.3 else Word() for _ in range(2)]
    return Web.of(
        Vertex("v0", "sink", tuple(sink_edges), anchors[0]),
        Vertex("v1", "source", tuple(source_edges), anchors[1]),
    )
