"""Representations into SL_n(C), direct evaluation of webs, zero testing.

The coordinate pairing sends x^b_{i,j} to entry (bar i, bar j) of the block's
matrix.  With that pairing, evaluating a normal form agrees with evaluating
the web directly through [A ρ(path)]_{bar i, bar j} and Trace ρ(w).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import SkeinError, UnsupportedConfiguration
from .groups import GroupoidPath, MarkedManifoldSpec, Word, a_matrix, bar, d_sign
from .polyring import Poly
from .skein import (
    FramedKnot,
    SkeinRing,
    StatedArc,
    Web,
    build_ring,
    check_web,
    expand_all,
    normalize,
)

DET_TOL = 1e-12
DEFAULT_TOL = 1e-8
MAX_RETRIES = 100

SeedLike = Union[int, np.random.Generator]


def _rng(seed: SeedLike) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_sln(n: int, seed: SeedLike) -> np.ndarray:
    """Gaussian complex matrix rescaled by a principal n-th root of its determinant."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = _rng(seed)
    for _ in range(MAX_RETRIES):
        m = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        det = np.linalg.det(m)
        if abs(det) < 1e-8:
            continue
        m = m / np.exp(np.log(det) / n)
        if abs(np.linalg.det(m) - 1) <= DET_TOL:
            return m
    raise SkeinError("could not sample a well-conditioned SL_n matrix")


@dataclass
class Representation:
    """Per-block complex matrices keyed by block name (g1.., c1..)."""

    blocks: dict[str, np.ndarray]
    tolerance: float = DEFAULT_TOL
    scalars: dict[str, complex] = field(default_factory=dict)

    def matrix(self, name: str) -> np.ndarray:
        try:
            return self.blocks[name]
        except KeyError:
            raise SkeinError(f"representation has no block {name!r}") from None

    def det_residual(self) -> float:
        return max((abs(np.linalg.det(m) - 1) for m in self.blocks.values()), default=0.0)

    def to_json(self) -> str:
        data = {
            name: [[[float(z.real), float(z.imag)] for z in row] for row in m]
            for name, m in sorted(self.blocks.items())
        }
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, tolerance: float = DEFAULT_TOL) -> "Representation":
        raw = json.loads(text)
        if not isinstance(raw, dict):
            raise SkeinError("representation file must be a JSON object of blocks")
        blocks = {}
        for name, rows in raw.items():
            try:
                blocks[name] = np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
            except (TypeError, ValueError) as exc:
                raise SkeinError(f"block {name!r}: entries must be [re, im] pairs ({exc})") from None
        return cls(blocks, tolerance)


def constraint_residual(spec: MarkedManifoldSpec, rep: Representation) -> float:
    """Largest deviation from det = 1, relators = I, circles = d_n^h I."""
    worst = rep.det_residual()
    eye = np.eye(spec.n)
    for r in spec.group.relators:
        worst = max(worst, float(np.abs(word_matrix(rep, r, spec.n) - eye).max()))
    for c in spec.circles:
        target = eye * d_sign(spec.n) ** c.spin
        worst = max(worst, float(np.abs(word_matrix(rep, c.word, spec.n) - target).max()))
    return worst


def validate_representation(spec: MarkedManifoldSpec, rep: Representation) -> bool:
    names = spec.ring.blocks
    if any(name not in rep.blocks for name in names):
        return False
    return constraint_residual(spec, rep) <= rep.tolerance


def _root_of_unity_matrix(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    exps = [int(e) for e in rng.integers(0, p, size=n - 1)]
    exps.append((-sum(exps)) % p)
    diag = np.diag([np.exp(2j * np.pi * e / p) for e in exps])
    conj = sample_sln(n, rng)
    return conj @ diag @ np.linalg.inv(conj)


def sample_representation(spec: MarkedManifoldSpec, seed: SeedLike) -> Representation:
    """Random point satisfying the manifold's constraints.

    Supported constraints: circles whose word is a single letter (forcing that
    generator to ±I) and relators that are a power of a single generator
    (finite-order elements built from roots of unity).
    """
    rng = _rng(seed)
    n = spec.n
    forced: dict[int, np.ndarray] = {}
    for c in spec.circles:
        if len(c.word) != 1:
            raise UnsupportedConfiguration(f"no sampler for the circle word {c.word}")
        g, _ = c.word.letters[0]
        mat = np.eye(n, dtype=complex) * d_sign(n) ** c.spin
        if g in forced and not np.allclose(forced[g], mat):
            raise UnsupportedConfiguration("conflicting circle constraints")
        forced[g] = mat
    orders: dict[int, int] = {}
    for r in spec.group.relators:
        gens = {g for g, _ in r.letters}
        if len(gens) != 1:
            raise UnsupportedConfiguration(f"no sampler for the relator {r}")
        orders[gens.pop()] = len(r)
    blocks = {}
    for g in range(1, spec.m + 1):
        if g in forced:
            blocks[f"g{g}"] = forced[g]
        elif g in orders:
            blocks[f"g{g}"] = _root_of_unity_matrix(n, orders[g], rng)
        else:
            blocks[f"g{g}"] = sample_sln(n, rng)
    for t in range(1, spec.k):
        blocks[f"c{t}"] = sample_sln(n, rng)
    rep = Representation(blocks)
    if constraint_residual(spec, rep) > 1e-8:
        raise UnsupportedConfiguration("sampled point violates the constraints")
    return rep


# evaluation ------------------------------------------------------------------


def _values(p: Poly, rep: Representation, twisted: bool) -> list[complex]:
    ring = p.ring
    n = ring.n
    used = p.variables()
    vals: list[complex] = [0j] * ring.nvars
    names = ring.var_names
    for v in used:
        name = names[v]
        if "[" not in name:
            if name not in rep.scalars:
                raise SkeinError(f"no value for scratch variable {name!r}")
            vals[v] = rep.scalars[name]
            continue
        block, rest = name.split("[", 1)
        i, j = (int(x) for x in rest.rstrip("]").split("]["))
        mat = rep.matrix(block)
        if twisted:
            vals[v] = complex(mat[bar(i, n) - 1, bar(j, n) - 1])
        else:
            vals[v] = complex(mat[i - 1, j - 1])
    return vals


def evaluate(p: Poly, rep: Representation) -> complex:
    """Pair a normal form with a representation: x^b_{i,j} -> ρ(b)[bar i, bar j]."""
    return p.evaluate(_values(p, rep, twisted=True))


def substitute(p: Poly, rep: Representation) -> complex:
    """Plain substitution x^b_{i,j} -> ρ(b)[i, j]."""
    return p.evaluate(_values(p, rep, twisted=False))


def word_matrix(rep: Representation, w: Word, n: int) -> np.ndarray:
    out = np.eye(n, dtype=complex)
    for g, e in w.letters:
        m = rep.matrix(f"g{g}")
        out = out @ (m if e == 1 else np.linalg.inv(m))
    return out


def path_matrix(rep: Representation, path: GroupoidPath, n: int) -> np.ndarray:
    """ρ(α_dst) ρ(core) ρ(α_src)^-1 with α_0 the identity."""
    out = word_matrix(rep, path.core, n)
    if path.dst:
        out = rep.matrix(f"c{path.dst}") @ out
    if path.src:
        out = out @ np.linalg.inv(rep.matrix(f"c{path.src}"))
    return out


def _component_value(comp, rep: Representation, n: int, a: np.ndarray) -> complex:
    d = d_sign(n)
    if isinstance(comp, StatedArc):
        m = a @ path_matrix(rep, comp.path, n)
        return d**comp.spin * complex(m[bar(comp.state_end, n) - 1, bar(comp.state_start, n) - 1])
    if isinstance(comp, FramedKnot):
        return d**comp.spin * complex(np.trace(word_matrix(rep, comp.word, n)))
    raise TypeError(f"unexpected component {comp!r}")


def phi_direct(spec: MarkedManifoldSpec, web: Web, rep: Representation) -> complex:
    """Evaluate a web straight from matrices, without the symbolic normal form."""
    check_web(spec, web)
    n = spec.n
    a = a_matrix(n).astype(complex)
    total = 0j
    for coeff, flat in expand_all(spec, web):
        val = complex(coeff)
        for comp in flat.components:
            val *= _component_value(comp, rep, n, a)
        total += val
    return total


@dataclass
class Verdict:
    zero: bool
    max_abs: float
    witness: Representation | None = None

    def __str__(self) -> str:
        return f"{'zero' if self.zero else 'nonzero'} (max |value| = {self.max_abs:.3e})"


def probably_zero(p: Poly, spec: MarkedManifoldSpec, trials: int = 20, seed: int = 0, tol: float = DEFAULT_TOL) -> Verdict:
    worst = 0.0
    for t in range(trials):
        rep = sample_representation(spec, np.random.default_rng([seed, t]))
        val = abs(evaluate(p, rep))
        if val > worst:
            worst = val
        if val > tol:
            return Verdict(False, worst, rep)
    return Verdict(True, worst, None)


@dataclass
class TauReport:
    deviations: list[float]
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations, default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def route_deviation(sr: SkeinRing, web: Web, rep: Representation, normal_form: Poly | None = None) -> float:
    nf = normalize(sr, web) if normal_form is None else normal_form
    return abs(evaluate(nf, rep) - phi_direct(sr.spec, web, rep))


def tau_check(
    spec: MarkedManifoldSpec,
    webs: Sequence[Web],
    trials: int = 10,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    sr: SkeinRing | None = None,
) -> TauReport:
    """Compare evaluate(normalize(w)) with phi_direct(w) at sampled points."""
    sr = sr or build_ring(spec)
    forms = [normalize(sr, w) for w in webs]
    devs = []
    for t in range(trials):
        rep = sample_representation(spec, np.random.default_rng([seed, t]))
        for w, nf in zip(webs, forms):
            devs.append(route_deviation(sr, w, rep, nf))
    return TauReport(devs, tol)


def representation_from_mapping(mats: Mapping[str, Sequence[Sequence[complex]]]) -> Representation:
    return Representation({k: np.array(v, dtype=complex) for k, v in mats.items()})
