"""Stated webs and their normal forms in Γ_n(M) ⊗ O(SL_n)^{⊗(k-1)}.

An arc along the groupoid path p with end state i, start state j and spin h
has value d_n^h (d_n A · AS^[p])_{i,j}; a knot has value d_n^h tr(Q_w).
Vertices are anchored at e_0 and removed by the signed sum over S_n that
cuts their edges at e_0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, Union

from .combinatorics import all_permutations, inversion_length
from .errors import SpecError, StateError, UnsupportedConfiguration
from .groups import (
    GroupoidPath,
    MarkedManifoldSpec,
    Word,
    adjugate,
    bar,
    check_path,
    connector_matrix,
    d_sign,
    holonomy,
    letter_matrix,
    validate_manifold,
)
from .ideals import DEFAULT_BUDGET, GroebnerBasis, manifold_ideal
from .polyring import Coeff, Poly, PolyMatrix, PolyRing, mul, reduce_by_dets


# data model -----------------------------------------------------------------


@dataclass(frozen=True)
class StatedArc:
    path: GroupoidPath
    state_end: int
    state_start: int
    spin: int = 0

    def flipped(self) -> "StatedArc":
        return replace(self, spin=1 - self.spin)


@dataclass(frozen=True)
class FramedKnot:
    word: Word = Word()
    spin: int = 0

    def flipped(self) -> "FramedKnot":
        return replace(self, spin=1 - self.spin)


@dataclass(frozen=True)
class MarkingEnd:
    marking: int
    state: int


@dataclass(frozen=True)
class VertexEnd:
    vertex: str
    slot: int  # 1-based slot on the other vertex


@dataclass(frozen=True)
class Edge:
    """Edge word is the path from the far end to the vertex (sink) or from the vertex (source)."""

    word: Word
    end: Union[MarkingEnd, VertexEnd]
    spin: int = 0


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str  # "sink" or "source"
    edges: tuple[Edge, ...]
    anchor: Word = Word()


Component = Union[StatedArc, FramedKnot, Vertex]


@dataclass(frozen=True)
class Web:
    components: tuple[Component, ...] = ()

    @classmethod
    def of(cls, *components: Component) -> "Web":
        return cls(tuple(components))

    def __or__(self, other: "Web") -> "Web":
        return Web(self.components + other.components)

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(c for c in self.components if isinstance(c, Vertex))

    @property
    def has_vertices(self) -> bool:
        return any(isinstance(c, Vertex) for c in self.components)

    def vertex(self, vid: str) -> Vertex:
        for c in self.components:
            if isinstance(c, Vertex) and c.id == vid:
                return c
        raise KeyError(vid)


Combination = list[tuple[Coeff, Web]]


def _check_state(n: int, s: int, what: str) -> None:
    if not 1 <= s <= n:
        raise StateError(f"{what} state {s} outside 1..{n}")


def _check_spin(h: int) -> None:
    if h not in (0, 1):
        raise StateError(f"spin bit must be 0 or 1, got {h}")


def check_web(spec: MarkedManifoldSpec, web: Web) -> None:
    n = spec.n
    vertices = {}
    for c in web.components:
        if isinstance(c, StatedArc):
            check_path(spec, c.path)
            _check_state(n, c.state_end, "end")
            _check_state(n, c.state_start, "start")
            _check_spin(c.spin)
        elif isinstance(c, FramedKnot):
            top = c.word.max_generator()
            if top > spec.m:
                raise SpecError(f"knot word uses g{top} but the group has {spec.m} generators")
            _check_spin(c.spin)
        elif isinstance(c, Vertex):
            if spec.k < 1:
                raise UnsupportedConfiguration("vertices need at least one marking (k >= 1)")
            if c.kind not in ("sink", "source"):
                raise SpecError(f"vertex kind must be sink or source, got {c.kind!r}")
            if len(c.edges) != n:
                raise SpecError(f"vertex {c.id} has {len(c.edges)} edges, expected n={n}")
            if c.id in vertices:
                raise SpecError(f"duplicate vertex id {c.id}")
            if c.anchor.max_generator() > spec.m:
                raise SpecError(f"vertex {c.id} anchor uses an unknown generator")
            vertices[c.id] = c
        else:
            raise TypeError(f"unknown component {c!r}")
    for v in vertices.values():
        for t, e in enumerate(v.edges, start=1):
            _check_spin(e.spin)
            if e.word.max_generator() > spec.m:
                raise SpecError(f"vertex {v.id} edge {t} uses an unknown generator")
            if isinstance(e.end, MarkingEnd):
                if not 0 <= e.end.marking < spec.k:
                    raise SpecError(f"vertex {v.id} edge {t} ends on missing marking e{e.end.marking}")
                _check_state(n, e.end.state, f"vertex {v.id} edge {t}")
                continue
            other = vertices.get(e.end.vertex)
            if other is None:
                raise SpecError(f"vertex {v.id} edge {t} points at unknown vertex {e.end.vertex}")
            if other.kind == v.kind:
                raise SpecError(f"edge between two {v.kind}s {v.id} and {other.id}")
            if not 1 <= e.end.slot <= n:
                raise SpecError(f"vertex {v.id} edge {t} names slot {e.end.slot}")
            back = other.edges[e.end.slot - 1]
            if back.end != VertexEnd(v.id, t) or back.word != e.word or back.spin != e.spin:
                raise SpecError(f"edge {v.id}.{t} and {other.id}.{e.end.slot} do not match")


# ring -----------------------------------------------------------------------


@dataclass(frozen=True)
class SkeinRing:
    spec: MarkedManifoldSpec
    gb: GroebnerBasis | None = None

    @property
    def ring(self) -> PolyRing:
        return self.spec.ring

    @property
    def n(self) -> int:
        return self.spec.n

    def normal_form(self, p: Poly) -> Poly:
        if self.gb is None:
            return reduce_by_dets(p, self.ring)
        return self.gb.reduce(p)


def build_ring(spec: MarkedManifoldSpec, budget: int = DEFAULT_BUDGET) -> SkeinRing:
    report = validate_manifold(spec)
    if not report.ok:
        raise SpecError("; ".join(report.errors))
    gb = manifold_ideal(spec, budget) if spec.has_constraints else None
    return SkeinRing(spec, gb)


# component values ------------------------------------------------------------


def _row_times(row: list[Poly], m: PolyMatrix) -> list[Poly]:
    ring = m.ring
    out = []
    for j in range(m.size):
        acc: dict = {}
        for t, r in enumerate(row):
            e = m.rows[t][j]
            if r.terms and e.terms:
                for mm, c in mul(r, e).terms.items():
                    acc[mm] = acc.get(mm, 0) + c
        out.append(Poly(ring, acc))
    return out


def as_entry(spec: MarkedManifoldSpec, path: GroupoidPath, r: int, c: int) -> Poly:
    """(AS^[path])_{r,c}, reduced by the determinant relations."""
    check_path(spec, path)
    ring = spec.ring
    row = list(connector_matrix(ring, path.dst).rows[r - 1])
    for g, e in path.core.letters:
        row = [reduce_by_dets(p) for p in _row_times(row, letter_matrix(ring, g, e))]
    col = connector_matrix(ring, path.src, inverse=True)
    acc = ring.zero()
    for t in range(ring.n):
        acc = acc + mul(row[t], col.rows[t][c - 1])
    return reduce_by_dets(acc)


def arc_element(sr: SkeinRing, arc: StatedArc) -> Poly:
    """d_n^h (d_n A · AS)_{i,j} = d_n^(h+1) (-1)^(i+1) AS_{bar i, j}."""
    n = sr.n
    _check_state(n, arc.state_end, "end")
    _check_state(n, arc.state_start, "start")
    _check_spin(arc.spin)
    i, j = arc.state_end, arc.state_start
    sign = d_sign(n) ** (arc.spin + 1) * (-1) ** (i + 1)
    return sr.normal_form(as_entry(sr.spec, arc.path, bar(i, n), j).scale(sign))


def knot_element(sr: SkeinRing, knot: FramedKnot) -> Poly:
    """d_n^h tr(Q_w)."""
    _check_spin(knot.spin)
    q = holonomy(sr.spec, knot.word, reduce=True)
    return sr.normal_form(q.trace().scale(d_sign(sr.n) ** knot.spin))


# vertices --------------------------------------------------------------------


def _spec_of(sr) -> MarkedManifoldSpec:
    return sr.spec if isinstance(sr, SkeinRing) else sr


def expand_vertex(sr: SkeinRing | MarkedManifoldSpec, web: Web, vid: str) -> Combination:
    """Cut every edge of one vertex at e_0: Σ_σ (-1)^ℓ(σ) web_σ."""
    spec = _spec_of(sr)
    if spec.k < 1:
        raise UnsupportedConfiguration("vertex expansion needs a base marking")
    v = web.vertex(vid)
    n = spec.n
    out: Combination = []
    for sigma in all_permutations(n):
        sign = -1 if inversion_length(sigma) % 2 else 1
        new_arcs: list[StatedArc] = []
        patches: dict[tuple[str, int], Edge] = {}
        for t, e in enumerate(v.edges, start=1):
            s = sigma(t)
            if v.kind == "sink":
                word = v.anchor * e.word
                if isinstance(e.end, MarkingEnd):
                    new_arcs.append(StatedArc(GroupoidPath(e.end.marking, 0, word), s, e.end.state, e.spin))
                else:
                    patches[(e.end.vertex, e.end.slot)] = Edge(word, MarkingEnd(0, s), e.spin)
            else:
                word = e.word * v.anchor.inverse()
                if isinstance(e.end, MarkingEnd):
                    new_arcs.append(StatedArc(GroupoidPath(0, e.end.marking, word), e.end.state, s, e.spin))
                else:
                    patches[(e.end.vertex, e.end.slot)] = Edge(word, MarkingEnd(0, s), e.spin)
        comps: list[Component] = []
        for c in web.components:
            if c is v or (isinstance(c, Vertex) and c.id == vid):
                continue
            if isinstance(c, Vertex) and any(key[0] == c.id for key in patches):
                edges = tuple(patches.get((c.id, t), e) for t, e in enumerate(c.edges, start=1))
                c = replace(c, edges=edges)
            comps.append(c)
        comps.extend(new_arcs)
        out.append((sign, Web(tuple(comps))))
    return out


def expand_all(sr: SkeinRing | MarkedManifoldSpec, web: Web, order: Sequence[str] | None = None) -> Combination:
    """Remove all vertices, in the given id order (default: listed order)."""
    ids = list(order) if order is not None else [v.id for v in web.vertices]
    if sorted(ids) != sorted(v.id for v in web.vertices):
        raise SpecError("expansion order must list every vertex exactly once")
    combo: Combination = [(1, web)]
    for vid in ids:
        nxt: Combination = []
        for coeff, w in combo:
            for c2, w2 in expand_vertex(sr, w, vid):
                nxt.append((coeff * c2, w2))
        combo = nxt
    return combo


# normalization -------------------------------------------------------------


def _as_combination(item: Union[Web, Iterable[tuple[Coeff, Web]]]) -> Combination:
    if isinstance(item, Web):
        return [(1, item)]
    return list(item)


def normalize(sr: SkeinRing, item, order: Sequence[str] | None = None) -> Poly:
    """Canonical normal form of a web or a Q-linear combination of webs."""
    ring = sr.ring
    cache: dict = {}

    def value(c: Component) -> Poly:
        got = cache.get(c)
        if got is None:
            got = arc_element(sr, c) if isinstance(c, StatedArc) else knot_element(sr, c)
            cache[c] = got
        return got

    acc: dict = {}
    for coeff, web in _as_combination(item):
        check_web(sr.spec, web)
        for c2, flat in expand_all(sr, web, order if web.has_vertices else None):
            prod = ring.const(coeff * c2)
            for comp in flat.components:
                prod = mul(prod, value(comp))
                if prod.is_zero():
                    break
            for m, c in prod.terms.items():
                acc[m] = acc.get(m, 0) + c
    return sr.normal_form(Poly(ring, acc))


# maps on the polynomial side ---------------------------------------------------


def bar_involution(sr_or_ring, p: Poly) -> Poly:
    """Ring endomorphism x^b_{i,j} -> x^b_{bar i, bar j}."""
    ring = p.ring
    n = ring.n
    names = ring.var_names
    mapping = {}
    for v in p.variables():
        name = names[v]
        if "[" not in name:
            mapping[v] = v
            continue
        block, rest = name.split("[", 1)
        i, j = (int(x) for x in rest.rstrip("]").split("]["))
        mapping[v] = ring.var_of(block, bar(i, n), bar(j, n))
    return p.substitute_vars(mapping)


def _same_but_one_marking(small: MarkedManifoldSpec, big: MarkedManifoldSpec) -> None:
    if (
        small.n != big.n
        or small.group != big.group
        or small.circles != big.circles
        or big.markings != small.markings + 1
        or small.markings < 1
    ):
        raise SpecError("target spec must add exactly one marking to the source spec")


def include_marking(sr_k: SkeinRing, sr_k1: SkeinRing, p: Poly) -> Poly:
    """Adding-a-marking map; in the presentation it keeps every monomial."""
    _same_but_one_marking(sr_k.spec, sr_k1.spec)
    if p.ring != sr_k.ring:
        raise SpecError("polynomial is not in the smaller ring")
    return sr_k1.normal_form(p.embed(sr_k1.ring))


def _mu(sr_k1: SkeinRing, i: int, j: int, inverse: bool) -> Poly:
    """μ(α_{i,j}) = d_n (-1)^(i+1) x_{bar i, j}; inverse uses adj(X)."""
    n = sr_k1.n
    block = f"c{sr_k1.spec.k - 1}"
    sign = d_sign(n) * (-1) ** (i + 1)
    if not inverse:
        return sr_k1.ring.var(block, bar(i, n), j).scale(sign)
    adj = adjugate(sr_k1.ring.block_matrix(block))
    return adj[bar(i, n), j].scale(sign)


def jmath(sr_k: SkeinRing, sr_k1: SkeinRing, web: Web) -> Poly:
    """Splitting formula for webs on k+1 markings into ring_k ⊗ O(SL_n).

    Every endpoint on the newest marking e is slid back to e_0 along the
    connector, summing over its new state with coefficient c_t = (-1)^(n-t)
    (end points) or c_{bar t} (start points) times a connector factor μ.
    """
    _same_but_one_marking(sr_k.spec, sr_k1.spec)
    n = sr_k.n
    e = sr_k1.spec.k - 1
    big = sr_k1.ring
    acc = big.zero()
    for coeff, flat in expand_all(sr_k1, web):
        term = big.const(coeff)
        for comp in flat.components:
            if isinstance(comp, FramedKnot):
                term = term * knot_element(sr_k, comp).embed(big)
                continue
            term = term * _jmath_arc(sr_k, sr_k1, comp, e, n)
        acc = acc + term
    return sr_k1.normal_form(acc)


def _jmath_arc(sr_k: SkeinRing, sr_k1: SkeinRing, arc: StatedArc, e: int, n: int) -> Poly:
    big = sr_k1.ring
    p = arc.path
    end_on_e, start_on_e = p.dst == e, p.src == e
    if not end_on_e and not start_on_e:
        return arc_element(sr_k, arc).embed(big)
    end_states = range(1, n + 1) if end_on_e else [arc.state_end]
    start_states = range(1, n + 1) if start_on_e else [arc.state_start]
    acc = big.zero()
    for t_end in end_states:
        for t_start in start_states:
            coeff = big.one()
            if end_on_e:
                coeff = coeff * _mu(sr_k1, arc.state_end, bar(t_end, n), False).scale((-1) ** (n - t_end))
            if start_on_e:
                coeff = coeff * _mu(sr_k1, bar(t_start, n), arc.state_start, True).scale((-1) ** (t_start - 1))
            closed = StatedArc(
                GroupoidPath(0 if start_on_e else p.src, 0 if end_on_e else p.dst, p.core),
                t_end,
                t_start,
                arc.spin,
            )
            acc = acc + arc_element(sr_k, closed).embed(big) * coeff
    return acc


def jmath_arc(sr_k: SkeinRing, sr_k1: SkeinRing, arc: StatedArc) -> Poly:
    e = sr_k1.spec.k - 1
    if e not in (arc.path.src, arc.path.dst):
        raise SpecError("arc does not meet the newest marking")
    return sr_k1.normal_form(_jmath_arc(sr_k, sr_k1, arc, e, sr_k.n))


def iota(sr_k1: SkeinRing, p: Poly) -> Poly:
    """ring_k ⊗ O(SL_n) -> skein of k+1 markings: 1⊗x_{i,j} -> (AS^[α])_{i,j}.

    (AS)_{i,j} = (-1)^(i+1) S_{bar i, j}, realized by the connector arc.
    """
    n = sr_k1.n
    e = sr_k1.spec.k - 1
    block = f"c{e}"
    ring = sr_k1.ring
    images = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            arc = StatedArc(GroupoidPath(0, e, Word()), bar(i, n), j, 0)
            images[ring.var_of(block, i, j)] = arc_element(sr_k1, arc).scale((-1) ** (i + 1))
    out = ring.zero()
    for m, c in p.terms.items():
        t = ring.const(c)
        for v, k in ring.unpack(m).items():
            factor = images.get(v)
            if factor is None:
                factor = Poly(ring, {ring.pack({v: 1}): 1})
            t = t * factor**k
        out = out + t
    return sr_k1.normal_form(out)


# the two maps between Γ_n(M) and the skein for one marking ---------------------


def entry_as_web(word: Word, i: int, j: int, n: int) -> Combination:
    """[α]_{i,j} as a skein element: (AS)_{i,j} = (-1)^(i+1) arc_{bar i, j}."""
    return [((-1) ** (i + 1), Web.of(StatedArc(GroupoidPath(0, 0, word), bar(i, n), j, 0)))]


def arc_in_gamma(spec: MarkedManifoldSpec, arc: StatedArc) -> Poly:
    """arc -> d_n^(h+1) (-1)^(i+1) (Q_w)_{bar i, j}, read from the full holonomy matrix."""
    if spec.k != 1:
        raise UnsupportedConfiguration("the Γ_n presentation map is defined for one marking")
    n = spec.n
    q = holonomy(spec, arc.path.core)
    i, j = arc.state_end, arc.state_start
    return reduce_by_dets(q[bar(i, n), j].scale(d_sign(n) ** (arc.spin + 1) * (-1) ** (i + 1)))


# relation checks ----------------------------------------------------------------


@dataclass
class RelationRow:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class RelationReport:
    rows: list[RelationRow]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def table(self) -> str:
        lines = []
        for r in self.rows:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status}  {r.name:<28} {r.checked} instances")
            lines.extend(f"      {f}" for f in r.failures[:5])
        return "\n".join(lines)


def relation_suite(sr: SkeinRing, instances: int = 20, seed: int = 0, max_word: int = 3) -> RelationReport:
    """Kink, unknot, turnback, arc splitting and height exchange at q = 1."""
    from .randomgen import random_arc, random_knot, random_word

    spec = sr.spec
    if spec.k < 1:
        raise UnsupportedConfiguration("relation suite needs a marking")
    n = spec.n
    d = d_sign(n)
    rng = random.Random(seed)
    nf = lambda *comps: normalize(sr, Web(tuple(comps)))  # noqa: E731

    kink = RelationRow("kink")
    unknot = RelationRow("trivial unknot")
    turnback = RelationRow("turnback")
    split = RelationRow("arc splitting")
    height = RelationRow("height exchange")

    for it in range(instances):
        arc = random_arc(spec, rng, max_word)
        knot = random_knot(spec, rng, max_word)
        for comp in (arc, knot):
            kink.checked += 1
            if nf(comp.flipped()) != nf(comp).scale(d):
                kink.failures.append(f"{comp}")

        unknot.checked += 1
        trivial = FramedKnot(Word(), 1)
        if nf(trivial) != d * n or nf(arc, trivial) != nf(arc).scale(d * n):
            unknot.failures.append(f"with {arc}")

        a = rng.randrange(spec.k)
        ctx = nf(knot)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                expected = (-1) ** (n - i) if bar(j, n) == i else 0
                turnback.checked += 1
                left = nf(StatedArc(GroupoidPath(a, a), i, j, 0), knot)
                right = nf(StatedArc(GroupoidPath(a, a), j, i, 1), knot)
                if left != ctx.scale(expected) or right != ctx.scale(expected):
                    turnback.failures.append(f"e{a} states ({i},{j})")

        b, c = rng.randrange(spec.k), rng.randrange(spec.k)
        first = GroupoidPath(a, b, random_word(spec.m, rng, max_word))
        second = GroupoidPath(b, c, random_word(spec.m, rng, max_word))
        h1, h2 = rng.randrange(2), rng.randrange(2)
        i, j = rng.randrange(1, n + 1), rng.randrange(1, n + 1)
        split.checked += 1
        whole = nf(StatedArc(second.compose(first), i, j, (h1 + h2) % 2))
        parts = sr.ring.zero()
        for t in range(1, n + 1):
            parts = parts + nf(StatedArc(second, i, t, h2), StatedArc(first, bar(t, n), j, h1)).scale((-1) ** (t + 1))
        if whole != sr.normal_form(parts):
            split.failures.append(f"{first} then {second} states ({i},{j})")
        split.checked += 1
        loop = GroupoidPath(a, a, knot.word)
        closed = sr.ring.zero()
        for t in range(1, n + 1):
            closed = closed + nf(StatedArc(loop, bar(t, n), t, knot.spin)).scale((-1) ** (t + 1))
        if nf(knot) != sr.normal_form(closed):
            split.failures.append(f"closing {knot} at e{a}")

        other = random_arc(spec, rng, max_word)
        other = replace(other, path=replace(other.path, dst=arc.path.dst))
        height.checked += 1
        one, two = nf(arc, other), nf(other, arc)
        if one != two or one != sr.normal_form(nf(arc) * nf(other)):
            height.failures.append(f"{arc} / {other}")

    return RelationReport([kink, unknot, turnback, split, height])
