"""Cutting a free-group manifold along the disk dual to its last generator.

Every occurrence of g_m^{±1} in a word is one crossing with the disk.  With
k markings the cut creates markings k (β_1) and k+1 (β_2); a positive
crossing enters β_1 and leaves from β_2.  On the polynomial side

    Q_{g_m} = adj(X_{c(k+1)}) · d_n A · X_{ck},

and the inverse letter inserts A = d_n (d_n A) instead, so each negative
crossing adds one to the spin bit.  The state sum over the new endpoints
reproduces the product because the state-sum pairing of two arc matrices
inserts exactly d_n A between their AS-matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import SpecError, UnsupportedConfiguration
from .evaluation import Representation
from .groups import GroupoidPath, MarkedManifoldSpec, Word, a_matrix
from .polyring import Coeff, Poly
from .skein import FramedKnot, MarkingEnd, SkeinRing, StatedArc, Web, build_ring, check_web, expand_all, normalize


@dataclass(frozen=True)
class SplitResult:
    cut_spec: MarkedManifoldSpec
    combination: tuple[tuple[Coeff, Web], ...]
    element: Poly | None = None


def cut_spec_of(spec: MarkedManifoldSpec) -> MarkedManifoldSpec:
    if spec.group.relators:
        raise UnsupportedConfiguration("splitting needs a free group")
    if spec.circles:
        raise UnsupportedConfiguration("splitting does not handle circle markings")
    if spec.m < 1 or spec.k < 1:
        raise UnsupportedConfiguration("splitting needs m >= 1 and k >= 1")
    return MarkedManifoldSpec.free(spec.n, spec.m - 1, spec.k + 2)


def _segments(letters, g):
    """Split a letter sequence at occurrences of generator g."""
    segs, signs, cur = [], [], []
    for gen, e in letters:
        if gen == g:
            segs.append(Word(tuple(cur)))
            signs.append(e)
            cur = []
        else:
            cur.append((gen, e))
    segs.append(Word(tuple(cur)))
    return segs, signs


def _markings(k: int, e: int) -> tuple[int, int]:
    """(entry marking, exit marking) of a crossing with sign e."""
    return (k, k + 1) if e == 1 else (k + 1, k)


def _split_arc(arc: StatedArc, m: int, k: int, n: int) -> list[tuple[StatedArc, ...]]:
    segs, signs = _segments(arc.path.core.letters, m)
    c = len(signs)
    if c == 0:
        return [(arc,)]
    spin = (arc.spin + sum(1 for e in signs if e == -1)) % 2
    paths = []
    # written order: seg_0 · g^{e_1} · seg_1 · ... · g^{e_c} · seg_c
    paths.append(GroupoidPath(_markings(k, signs[0])[1], arc.path.dst, segs[0]))
    for t in range(1, c):
        paths.append(GroupoidPath(_markings(k, signs[t])[1], _markings(k, signs[t - 1])[0], segs[t]))
    paths.append(GroupoidPath(arc.path.src, _markings(k, signs[c - 1])[0], segs[c]))
    out = []
    for states in itertools.product(range(1, n + 1), repeat=c):
        chain = (arc.state_end,) + states + (arc.state_start,)
        out.append(
            tuple(
                StatedArc(p, chain[t], chain[t + 1], spin if t == 0 else 0) for t, p in enumerate(paths)
            )
        )
    return out


def _split_knot(knot: FramedKnot, m: int, k: int, n: int) -> list[tuple[StatedArc, ...]] | None:
    letters = knot.word.letters
    first = next((idx for idx, (g, _) in enumerate(letters) if g == m), None)
    if first is None:
        return None
    rotated = letters[first:] + letters[:first]
    segs, signs = _segments(rotated, m)
    # rotated = g^{e_1} seg_1 g^{e_2} ... g^{e_c} seg_c  (segs[0] is empty)
    c = len(signs)
    spin = (knot.spin + sum(1 for e in signs if e == -1)) % 2
    paths = [
        GroupoidPath(_markings(k, signs[t % c])[1], _markings(k, signs[t - 1])[0], segs[t]) for t in range(1, c + 1)
    ]
    out = []
    for states in itertools.product(range(1, n + 1), repeat=c):
        out.append(
            tuple(
                StatedArc(p, states[t], states[(t + 1) % c], spin if t == 0 else 0) for t, p in enumerate(paths)
            )
        )
    return out


def _split_flat(web: Web, m: int, k: int, n: int) -> list[Web]:
    alternatives = []
    for comp in web.components:
        if isinstance(comp, StatedArc):
            alternatives.append(_split_arc(comp, m, k, n))
        elif isinstance(comp, FramedKnot):
            pieces = _split_knot(comp, m, k, n)
            alternatives.append([(comp,)] if pieces is None else pieces)
        else:
            raise SpecError(f"unknown component {comp!r}")
    return [Web(tuple(c for part in choice for c in part)) for choice in itertools.product(*alternatives)]


def theta_split(
    spec: MarkedManifoldSpec,
    web: Web,
    cut_ring: SkeinRing | None = None,
    symbolic: bool = True,
) -> SplitResult:
    """State-sum image of a web in the cut manifold.

    Vertices are first removed at e_0.  With ``symbolic`` the image is also
    normalized in the cut ring, which is the expensive part.
    """
    cut = cut_spec_of(spec)
    check_web(spec, web)
    m, k, n = spec.m, spec.k, spec.n
    combo = []
    for coeff, flat in expand_all(spec, web):
        combo.extend((coeff, piece) for piece in _split_flat(flat, m, k, n))
    element = None
    if symbolic:
        element = normalize(cut_ring or build_ring(cut), combo)
    return SplitResult(cut, tuple(combo), element)


def crossings(web: Web, g: int) -> int:
    """Number of letters g^{±1} in all words of the web."""
    total = 0
    for comp in web.components:
        if isinstance(comp, StatedArc):
            words = [comp.path.core]
        elif isinstance(comp, FramedKnot):
            words = [comp.word]
        else:
            # an edge between two vertices is listed on both; count it on the sink
            words = [e.word for e in comp.edges if comp.kind == "sink" or isinstance(e.end, MarkingEnd)]
        total += sum(1 for w in words for gen, _ in w.letters if gen == g)
    return total


def glue_rep(cut_rep: Representation, spec: MarkedManifoldSpec) -> Representation:
    """Representation of the uncut manifold: ρ(g_m) = ρ'(c_{k+1})^-1 · A · ρ'(c_k)."""
    m, k, n = spec.m, spec.k, spec.n
    blocks = {}
    try:
        for g in range(1, m):
            blocks[f"g{g}"] = cut_rep.blocks[f"g{g}"]
        for t in range(1, k):
            blocks[f"c{t}"] = cut_rep.blocks[f"c{t}"]
        enter, leave = cut_rep.blocks[f"c{k}"], cut_rep.blocks[f"c{k + 1}"]
    except KeyError as exc:
        raise SpecError(f"cut representation lacks block {exc.args[0]}") from None
    blocks[f"g{m}"] = np.linalg.inv(leave) @ a_matrix(n).astype(complex) @ enter
    return Representation(blocks, cut_rep.tolerance)
