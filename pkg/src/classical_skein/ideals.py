"""Buchberger's algorithm over Q, membership, and radical membership."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import BudgetExceeded, RingMismatchError
from .groups import MarkedManifoldSpec, d_sign, holonomy
from .polyring import Divisor, Poly, PolyMatrix, PolyRing, divisor, reduce_by_dets, reduce_terms

DEFAULT_BUDGET = 10**5


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis (grevlex, block-major variables), sorted by leading monomial."""

    ring: PolyRing
    basis: tuple[Poly, ...]
    reductions: int = 0
    order: str = field(default="grevlex")

    @cached_property
    def divisors(self) -> tuple[Divisor, ...]:
        return tuple(divisor(g) for g in self.basis)

    def reduce(self, p: Poly) -> Poly:
        if p.ring != self.ring:
            raise RingMismatchError("polynomial and basis live in different rings")
        return Poly(self.ring, reduce_terms(self.ring, p.terms, self.divisors))

    def is_member(self, p: Poly) -> bool:
        return self.reduce(p).is_zero()

    @property
    def is_unit_ideal(self) -> bool:
        return len(self.basis) == 1 and self.basis[0] == 1

    def __len__(self) -> int:
        return len(self.basis)


def _s_poly(ring: PolyRing, f: Poly, g: Poly, lm_f: int, lm_g: int, lcm: int) -> dict:
    # f and g are monic
    out: dict = {}
    qf = lcm - lm_f
    qg = lcm - lm_g
    for m, c in f.terms.items():
        if m != lm_f:
            out[m + qf] = out.get(m + qf, 0) + c
    for m, c in g.terms.items():
        if m != lm_g:
            out[m + qg] = out.get(m + qg, 0) - c
    return {m: c for m, c in out.items() if c != 0}


def _interreduce(ring: PolyRing, polys: list[Poly]) -> list[Poly]:
    lms = [p.leading()[0] for p in polys]
    keep: list[int] = []
    for i, lm in enumerate(lms):
        redundant = False
        for j, other in enumerate(lms):
            if j == i:
                continue
            if ring.divides(other, lm) and (other != lm or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    minimal = [polys[i] for i in keep]
    out = []
    for i, p in enumerate(minimal):
        others = [divisor(q) for j, q in enumerate(minimal) if j != i]
        r = Poly(ring, reduce_terms(ring, p.terms, others))
        out.append(r.monic())
    out.sort(key=lambda p: ring.order_key(p.leading()[0]))
    return out


def buchberger(generators: Sequence[Poly], budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
    """Reduced Gröbner basis with the normal selection strategy.

    Raises BudgetExceeded (carrying the partial basis) once more than
    ``budget`` S-pair reductions would be needed.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator to fix the ring")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError("generators from different rings")
    basis: list[Poly] = []
    for g in gens:
        if g.is_zero():
            continue
        r = Poly(ring, reduce_terms(ring, g.terms, [divisor(b) for b in basis])) if basis else g
        if not r.is_zero():
            basis.append(r.monic())
    if not basis:
        return GroebnerBasis(ring, (), 0)
    if any(b.is_constant() for b in basis):
        return GroebnerBasis(ring, (ring.one(),), 0)

    lms = [b.leading()[0] for b in basis]
    divs = [divisor(b) for b in basis]
    heap: list[tuple[int, int, int]] = []
    pending: set[tuple[int, int]] = set()

    def add_pairs(j: int) -> None:
        for i in range(j):
            lcm = ring.lcm(lms[i], lms[j])
            heapq.heappush(heap, (ring.order_key(lcm), i, j))
            pending.add((i, j))

    for j in range(1, len(basis)):
        add_pairs(j)

    used = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        lm_i, lm_j = lms[i], lms[j]
        if ring.coprime(lm_i, lm_j):
            continue
        lcm = ring.lcm(lm_i, lm_j)
        chain = False
        for t in range(len(basis)):
            if t in (i, j):
                continue
            a, b = (min(i, t), max(i, t)), (min(j, t), max(j, t))
            if a not in pending and b not in pending and ring.divides(lms[t], lcm):
                chain = True
                break
        if chain:
            continue
        used += 1
        if used > budget:
            raise BudgetExceeded(f"Gröbner budget of {budget} pair reductions exhausted", list(basis), used - 1)
        s = _s_poly(ring, basis[i], basis[j], lm_i, lm_j, lcm)
        r = reduce_terms(ring, s, divs)
        if not r:
            continue
        p = Poly(ring, r).monic()
        if p.is_constant():
            return GroebnerBasis(ring, (ring.one(),), used)
        basis.append(p)
        lms.append(p.leading()[0])
        divs.append(divisor(p))
        add_pairs(len(basis) - 1)

    return GroebnerBasis(ring, tuple(_interreduce(ring, basis)), used)


def gb_reduce(p: Poly, gb: GroebnerBasis) -> Poly:
    return gb.reduce(p)


def is_member(p: Poly, gb: GroebnerBasis) -> bool:
    return gb.is_member(p)


def _fresh_name(ring: PolyRing) -> str:
    name = "_y"
    k = 0
    while name in ring.var_index:
        k += 1
        name = f"_y{k}"
    return name


def is_nilpotent(p: Poly, ideal: GroebnerBasis | Sequence[Poly], budget: int = DEFAULT_BUDGET) -> bool:
    """p is nilpotent modulo I  iff  1 ∈ I + (1 - y p) for a fresh last variable y."""
    gb = ideal if isinstance(ideal, GroebnerBasis) else buchberger(ideal, budget)
    if p.ring != gb.ring:
        raise RingMismatchError("element and ideal live in different rings")
    if gb.is_unit_ideal or gb.is_member(p):
        return True
    big = gb.ring.with_extra(_fresh_name(gb.ring))
    y = big.named(big.extra[-1])
    gens = [g.embed(big) for g in gb.basis] + [big.one() - y * p.embed(big)]
    return buchberger(gens, budget).is_unit_ideal


def det_ideal(ring: PolyRing) -> list[Poly]:
    return list(ring.det_relations)


def constraint_polys(spec: MarkedManifoldSpec) -> list[Poly]:
    """Entries of Q_r - I for relators and Q_c - d_n^h I for circles."""
    ring = spec.ring
    out: list[Poly] = []
    for r in spec.group.relators:
        q = holonomy(spec, r, reduce=True) - PolyMatrix.identity(ring)
        out.extend(reduce_by_dets(e) for e in q.entries())
    for c in spec.circles:
        target = PolyMatrix.identity(ring).scale(d_sign(spec.n) ** c.spin)
        q = holonomy(spec, c.word, reduce=True) - target
        out.extend(reduce_by_dets(e) for e in q.entries())
    return out


def manifold_ideal(spec: MarkedManifoldSpec, budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
    return buchberger(det_ideal(spec.ring) + constraint_polys(spec), budget)


