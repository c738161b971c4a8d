"""Free-group words, presentations, marked-manifold specs and their matrices.

Products follow the convention that ``u*v`` means "traverse v first, then u",
so the matrix of a word is the product of its letters' matrices in written
order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidWordError
from .polyring import PolyMatrix, PolyRing, adjugate, determinant, reduce_by_dets

Letter = tuple[int, int]


def bar(i: int, n: int) -> int:
    return n + 1 - i


def d_sign(n: int) -> int:
    """d_n = (-1)^(n-1)."""
    return -1 if n % 2 == 0 else 1


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, e in letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word; letters are (generator index >= 1, exponent ±1)."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = tuple((int(g), int(e)) for g, e in self.letters)
        for g, e in letters:
            if g < 1 or e not in (1, -1):
                raise InvalidWordError(f"invalid letter {(g, e)}")
        object.__setattr__(self, "letters", _free_reduce(letters))

    @classmethod
    def gen(cls, g: int, e: int = 1) -> "Word":
        return cls(((g, e),))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=0)

    def power(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        out = Word()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __str__(self) -> str:
        return "*".join(f"g{g}" if e == 1 else f"g{g}^-1" for g, e in self.letters)


def reduce_word(letters: Iterable[Letter]) -> Word:
    return Word(tuple(letters))


def word_mul(u: Word, v: Word) -> Word:
    return u * v


def word_inv(u: Word) -> Word:
    return u.inverse()


_LETTER_RE = re.compile(r"^g(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str) -> Word:
    """Parse ``g1*g2^-1*g1``; the empty string is the identity."""
    text = text.strip()
    if not text or text == "1":
        return Word()
    letters: list[Letter] = []
    for chunk in text.split("*"):
        m = _LETTER_RE.match(chunk.strip())
        if not m:
            raise InvalidWordError(f"bad letter {chunk.strip()!r}")
        g = int(m.group(1))
        p = int(m.group(2)) if m.group(2) is not None else 1
        if g < 1:
            raise InvalidWordError(f"generator index must be >= 1, got g{g}")
        letters.extend([(g, 1 if p > 0 else -1)] * abs(p))
    return Word(tuple(letters))


@dataclass(frozen=True)
class GroupPresentation:
    generator_count: int
    relators: tuple[Word, ...] = ()

    @property
    def is_free(self) -> bool:
        return not self.relators


@dataclass(frozen=True)
class Circle:
    word: Word
    spin: int = 0


@dataclass(frozen=True)
class MarkedManifoldSpec:
    """Group presentation, k interval markings (e_0 is the base), circles."""

    n: int
    group: GroupPresentation
    markings: int = 1
    circles: tuple[Circle, ...] = field(default=())

    @classmethod
    def free(cls, n: int, generators: int, markings: int = 1, circles: Sequence[Circle] = ()) -> "MarkedManifoldSpec":
        return cls(n, GroupPresentation(generators), markings, tuple(circles))

    @property
    def m(self) -> int:
        return self.group.generator_count

    @property
    def k(self) -> int:
        return self.markings

    @property
    def block_count(self) -> int:
        return self.m + max(self.k - 1, 0)

    @cached_property
    def ring(self) -> PolyRing:
        return PolyRing(self.n, self.m, max(self.k - 1, 0))

    @property
    def has_constraints(self) -> bool:
        return bool(self.group.relators or self.circles)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    errors: tuple[str, ...]
    n: int
    blocks: int
    constraint_polys: int

    def __str__(self) -> str:
        head = "valid" if self.ok else "invalid"
        lines = [f"{head}: n={self.n}, blocks={self.blocks}, constraint polynomials={self.constraint_polys}"]
        lines.extend(f"  error: {e}" for e in self.errors)
        return "\n".join(lines)


def validate_manifold(spec: MarkedManifoldSpec) -> ValidationReport:
    errors: list[str] = []
    if not isinstance(spec.n, int) or spec.n < 2:
        errors.append(f"n must be an integer >= 2 (got {spec.n!r})")
    m = spec.group.generator_count
    if m < 0:
        errors.append("generator count must be >= 0")
    if spec.markings < 0:
        errors.append("marking count must be >= 0")
    for idx, r in enumerate(spec.group.relators):
        if not r:
            errors.append(f"relator {idx} is empty after free reduction")
        if r.max_generator() > m:
            errors.append(f"relator {idx} uses g{r.max_generator()} but only {m} generators exist")
    for idx, c in enumerate(spec.circles):
        if c.spin not in (0, 1):
            errors.append(f"circle {idx} spin must be 0 or 1")
        if c.word.max_generator() > m:
            errors.append(f"circle {idx} uses g{c.word.max_generator()} but only {m} generators exist")
    n = spec.n if isinstance(spec.n, int) and spec.n >= 1 else 0
    count = n * n * (len(spec.group.relators) + len(spec.circles))
    return ValidationReport(not errors, tuple(errors), spec.n, spec.block_count, count)


# matrices ---------------------------------------------------------------


def a_matrix(n: int) -> np.ndarray:
    """Antidiagonal sign matrix A[i][j] = (-1)^(i+1) δ(bar i, j), 1-indexed."""
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n + 1):
        a[i - 1, bar(i, n) - 1] = (-1) ** (i + 1)
    return a


def a_poly_matrix(ring: PolyRing) -> PolyMatrix:
    return PolyMatrix.from_ints(ring, a_matrix(ring.n).tolist())


@lru_cache(maxsize=256)
def letter_matrix(ring: PolyRing, g: int, e: int) -> PolyMatrix:
    x = ring.block_matrix(f"g{g}")
    return x if e == 1 else adjugate(x)


@lru_cache(maxsize=256)
def connector_matrix(ring: PolyRing, t: int, inverse: bool = False) -> PolyMatrix:
    """C_t (identity for the base marking) or its adjugate."""
    if t == 0:
        return PolyMatrix.identity(ring)
    x = ring.block_matrix(f"c{t}")
    return adjugate(x) if inverse else x


def _check_word(spec: MarkedManifoldSpec, w: Word) -> None:
    if w.max_generator() > spec.m:
        raise InvalidWordError(f"word uses g{w.max_generator()} but the group has {spec.m} generators")


def holonomy(spec: MarkedManifoldSpec, w: Word, reduce: bool = False) -> PolyMatrix:
    """Q_w: product of X_g (or adj X_g for inverse letters) in written order."""
    _check_word(spec, w)
    ring = spec.ring
    out = PolyMatrix.identity(ring)
    for g, e in w.letters:
        out = out @ letter_matrix(ring, g, e)
        if reduce:
            out = out.map(reduce_by_dets)
    return out


@dataclass(frozen=True)
class GroupoidPath:
    """The morphism α_dst ∗ core ∗ α_src^-1 from marking src to marking dst."""

    src: int
    dst: int
    core: Word = Word()

    def compose(self, first: "GroupoidPath") -> "GroupoidPath":
        """self ∗ first: traverse ``first`` then ``self``."""
        if first.dst != self.src:
            raise ValueError(f"paths not composable: {first.dst} != {self.src}")
        return GroupoidPath(first.src, self.dst, self.core * first.core)

    def inverse(self) -> "GroupoidPath":
        return GroupoidPath(self.dst, self.src, self.core.inverse())


def check_path(spec: MarkedManifoldSpec, path: GroupoidPath) -> None:
    if spec.k < 1:
        raise InvalidWordError("groupoid paths need at least one marking")
    for idx in (path.src, path.dst):
        if not 0 <= idx < spec.k:
            raise InvalidWordError(f"marking e{idx} out of range 0..{spec.k - 1}")
    _check_word(spec, path.core)


def morphism_matrix(spec: MarkedManifoldSpec, path: GroupoidPath, reduce: bool = False) -> PolyMatrix:
    """AS-matrix C_dst · Q_core · adj(C_src)."""
    check_path(spec, path)
    ring = spec.ring
    out = connector_matrix(ring, path.dst) @ holonomy(spec, path.core)
    out = out @ connector_matrix(ring, path.src, inverse=True)
    return out.map(reduce_by_dets) if reduce else out


def det_is_one(spec: MarkedManifoldSpec, path: GroupoidPath) -> bool:
    return reduce_by_dets(determinant(morphism_matrix(spec, path))) == 1
