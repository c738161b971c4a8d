"""Permutations of {1..k} and integer Laurent polynomials in q."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import SizeLimitError

MAX_K = 8


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..k}, stored 1-indexed as its image sequence."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, t: int) -> int:
        return self.images[t - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """(self ∘ other)(t) = self(other(t))."""
        if other.size != self.size:
            raise ValueError("size mismatch")
        return Permutation(tuple(self(other(t)) for t in range(1, self.size + 1)))

    def sign(self) -> int:
        return -1 if inversion_length(self) % 2 else 1

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(1, k + 1)))


def _check_k(k: int) -> None:
    if not 1 <= k <= MAX_K:
        raise SizeLimitError(f"k={k} outside 1..{MAX_K}")


@lru_cache(maxsize=None)
def all_permutations(k: int) -> tuple[Permutation, ...]:
    """All k! permutations, lexicographic in their image sequences."""
    _check_k(k)
    return tuple(Permutation(p) for p in itertools.permutations(range(1, k + 1)))


def inversion_length(sigma: Permutation) -> int:
    im = sigma.images
    return sum(1 for a in range(len(im)) for b in range(a + 1, len(im)) if im[a] > im[b])


@lru_cache(maxsize=None)
def signed_permutations(k: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """(0-indexed images, sign) pairs; the hot path for determinant expansions."""
    return tuple((tuple(i - 1 for i in s.images), s.sign()) for s in all_permutations(k))


class LaurentQPoly:
    """Integer Laurent polynomial in q, stored as {exponent: coefficient}."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        clean = {int(e): int(c) for e, c in (coeffs or {}).items() if c != 0}
        self._coeffs = dict(sorted(clean.items()))

    @classmethod
    def q_power(cls, e: int, c: int = 1) -> "LaurentQPoly":
        return cls({e: c})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def __add__(self, other: "LaurentQPoly") -> "LaurentQPoly":
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentQPoly(out)

    def __mul__(self, other: "LaurentQPoly") -> "LaurentQPoly":
        out: dict[int, int] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentQPoly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentQPoly) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(tuple(self._coeffs.items()))

    def at_one(self) -> int:
        return sum(self._coeffs.values())

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for e, c in self._coeffs.items():
            if e == 0:
                parts.append(f"{c}")
            else:
                parts.append(f"{c}*q^{e}")
        return " + ".join(parts)


def q_integer(k: int) -> LaurentQPoly:
    """[k] = (q^k - q^-k)/(q - q^-1) = q^(k-1) + q^(k-3) + ... + q^(1-k)."""
    if k < 0:
        raise ValueError("negative quantum integer")
    return LaurentQPoly({k - 1 - 2 * t: 1 for t in range(k)})


def q_factorial(k: int) -> LaurentQPoly:
    out = LaurentQPoly({0: 1})
    for i in range(1, k + 1):
        out = out * q_integer(i)
    return out


@dataclass(frozen=True)
class QFactorialCheck:
    lhs: LaurentQPoly
    rhs: LaurentQPoly
    equal: bool


def q_factorial_identity(k: int) -> QFactorialCheck:
    """Compare the sum of (q^2)^length over S_k with [k]! q^(k(k-1)/2)."""
    _check_k(k)
    counts: dict[int, int] = {}
    for sigma in all_permutations(k):
        e = 2 * inversion_length(sigma)
        counts[e] = counts.get(e, 0) + 1
    lhs = LaurentQPoly(counts)
    rhs = q_factorial(k) * LaurentQPoly.q_power(k * (k - 1) // 2)
    return QFactorialCheck(lhs, rhs, lhs == rhs)
