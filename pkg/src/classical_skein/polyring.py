"""Exact sparse polynomials over Q with block-indexed matrix variables.

A ring has one n×n block of variables per group generator (``g1..gm``), one
per connector (``c1..c(k-1)``), and optionally a few named scratch variables.
Variables are ordered block-major then row-major; the monomial order is
graded reverse lexicographic.

Monomials are packed into a single Python int: variable ``v`` owns a
16-bit field starting at bit ``16*v`` (top bit of each field is a guard
bit), and the total degree sits above all variable fields.  Multiplying
monomials is integer addition, divisibility is one masked subtraction, and
the grevlex comparison key is ``m ^ VARMASK`` (equal degree: a smaller
exponent in the last variable makes the monomial larger, and the last
variable occupies the most significant field).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from heapq import heappop, heappush
from typing import Iterable, Sequence, Union

from .combinatorics import signed_permutations
from .errors import ParseError, RingMismatchError, SizeLimitError, TermLimitError

FIELD = 16
FIELD_MASK = (1 << FIELD) - 1
GUARD = 1 << (FIELD - 1)
DEFAULT_TERM_CAP = 10**6
MAX_DET_N = 5

Coeff = Union[int, Fraction]
_BLOCK_RE = re.compile(r"^([gc])(\d+)$")
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _clean(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


@dataclass(frozen=True)
class BlockVar:
    block: str
    row: int
    col: int

    def __str__(self) -> str:
        return f"{self.block}[{self.row}][{self.col}]"


@dataclass(frozen=True)
class PolyRing:
    """Ring descriptor: n, generator/connector block counts, scratch names."""

    n: int
    generators: int = 0
    connectors: int = 0
    extra: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.generators < 0 or self.connectors < 0:
            raise ValueError("negative block count")
        for name in self.extra:
            if not _NAME_RE.match(name) or _BLOCK_RE.match(name):
                raise ValueError(f"bad scratch variable name {name!r}")
        if len(set(self.extra)) != len(self.extra):
            raise ValueError("duplicate scratch variable")

    @classmethod
    def scratch(cls, *names: str) -> "PolyRing":
        return cls(n=1, extra=tuple(names))

    @cached_property
    def blocks(self) -> tuple[str, ...]:
        return tuple(f"g{i}" for i in range(1, self.generators + 1)) + tuple(
            f"c{i}" for i in range(1, self.connectors + 1)
        )

    @cached_property
    def var_names(self) -> tuple[str, ...]:
        n = self.n
        names = [f"{b}[{i}][{j}]" for b in self.blocks for i in range(1, n + 1) for j in range(1, n + 1)]
        return tuple(names) + self.extra

    @cached_property
    def var_index(self) -> dict[str, int]:
        return {name: v for v, name in enumerate(self.var_names)}

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    @cached_property
    def deg_shift(self) -> int:
        return FIELD * self.nvars

    @cached_property
    def var_mask(self) -> int:
        return (1 << self.deg_shift) - 1

    @cached_property
    def guard_mask(self) -> int:
        return sum(GUARD << (FIELD * v) for v in range(self.nvars))

    def with_extra(self, *names: str) -> "PolyRing":
        return PolyRing(self.n, self.generators, self.connectors, self.extra + tuple(names))

    # monomial helpers -------------------------------------------------
    def var_of(self, block: str, row: int, col: int) -> int:
        if not (1 <= row <= self.n and 1 <= col <= self.n):
            raise RingMismatchError(f"index ({row},{col}) outside 1..{self.n}")
        try:
            return self.var_index[f"{block}[{row}][{col}]"]
        except KeyError:
            raise RingMismatchError(f"block {block!r} not in ring") from None

    def pack(self, exps: dict[int, int]) -> int:
        m = 0
        deg = 0
        for v, e in exps.items():
            if e < 0 or e >= GUARD:
                raise SizeLimitError(f"exponent {e} outside packed range")
            m |= e << (FIELD * v)
            deg += e
        return m | (deg << self.deg_shift)

    def unpack(self, m: int) -> dict[int, int]:
        out = {}
        mm = m & self.var_mask
        v = 0
        while mm:
            e = mm & FIELD_MASK
            if e:
                out[v] = e
            mm >>= FIELD
            v += 1
        return out

    def degree(self, m: int) -> int:
        return m >> self.deg_shift

    def order_key(self, m: int) -> int:
        """Larger key means larger monomial in grevlex."""
        return m ^ self.var_mask

    def divides(self, a: int, b: int) -> bool:
        g = self.guard_mask
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.unpack(a), self.unpack(b)
        for v, e in eb.items():
            if e > ea.get(v, 0):
                ea[v] = e
        return self.pack(ea)

    def coprime(self, a: int, b: int) -> bool:
        ea = self.unpack(a)
        return not any(v in ea for v in self.unpack(b))

    def monomial_text(self, m: int) -> str:
        parts = []
        for v, e in sorted(self.unpack(m).items()):
            name = self.var_names[v]
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    # element constructors ---------------------------------------------
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {0: 1})

    def const(self, c: Coeff) -> "Poly":
        return Poly(self, {0: c})

    def var(self, block: str, row: int, col: int) -> "Poly":
        return Poly(self, {self.pack({self.var_of(block, row, col): 1}): 1})

    def named(self, name: str) -> "Poly":
        try:
            v = self.var_index[name]
        except KeyError:
            raise RingMismatchError(f"variable {name!r} not in ring") from None
        return Poly(self, {self.pack({v: 1}): 1})

    def block_matrix(self, block: str) -> "PolyMatrix":
        n = self.n
        return PolyMatrix(
            self, tuple(tuple(self.var(block, i, j) for j in range(1, n + 1)) for i in range(1, n + 1))
        )

    @cached_property
    def det_relations(self) -> tuple["Poly", ...]:
        return tuple(determinant(self.block_matrix(b)) - 1 for b in self.blocks)

    @cached_property
    def det_divisors(self) -> tuple[tuple[int, tuple[tuple[int, Coeff], ...]], ...]:
        # Leading monomials of det(X_b) - 1 sit in pairwise disjoint variable
        # blocks, so all S-pairs reduce to zero by the coprime criterion and
        # the set is already a Gröbner basis.
        return tuple(divisor(p) for p in self.det_relations)


class Poly:
    """Immutable element of a PolyRing: {packed monomial: nonzero rational}."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict[int, Coeff], *, clean: bool = True):
        self.ring = ring
        if clean:
            terms = {m: _clean(c) for m, c in terms.items() if c != 0}
        self.terms = terms
        self._hash = None

    # basic protocol ---------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly(self.ring, {0: other})
        return NotImplemented

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {m: -c for m, c in self.terms.items()}, clean=False)

    def __sub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return mul(self, o)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c: Coeff) -> "Poly":
        if c == 0:
            return self.ring.zero()
        return Poly(self.ring, {m: v * c for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.terms == {0: other}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # inspection --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {0}

    def constant_term(self) -> Coeff:
        return self.terms.get(0, 0)

    def sorted_terms(self) -> list[tuple[int, Coeff]]:
        """Terms in descending monomial order."""
        key = self.ring.var_mask
        return sorted(self.terms.items(), key=lambda mc: mc[0] ^ key, reverse=True)

    def leading(self) -> tuple[int, Coeff]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = self.ring.var_mask
        m = max(self.terms, key=lambda t: t ^ key)
        return m, self.terms[m]

    def total_degree(self) -> int:
        return max((self.ring.degree(m) for m in self.terms), default=0)

    def variables(self) -> set[int]:
        out: set[int] = set()
        for m in self.terms:
            out.update(self.ring.unpack(m))
        return out

    def blocks_used(self) -> set[str]:
        names = self.ring.var_names
        return {names[v].split("[", 1)[0] for v in self.variables()}

    def monic(self) -> "Poly":
        _, lc = self.leading()
        return self.scale(Fraction(1) / lc) if lc != 1 else self

    def evaluate(self, values: Sequence[complex]) -> complex:
        """Substitute values[v] for variable v (numeric, double precision)."""
        total = 0j
        var_mask = self.ring.var_mask
        for m, c in self.terms.items():
            t = complex(c)
            mm = m & var_mask
            v = 0
            while mm:
                e = mm & FIELD_MASK
                if e:
                    t *= values[v] ** e
                mm >>= FIELD
                v += 1
            total += t
        return total

    def substitute_vars(self, mapping: dict[int, int], target: PolyRing | None = None) -> "Poly":
        """Rename variables through an index map (a ring homomorphism)."""
        tgt = target or self.ring
        out: dict[int, Coeff] = {}
        for m, c in self.terms.items():
            nm = tgt.pack({mapping[v]: e for v, e in self.ring.unpack(m).items()})
            out[nm] = out.get(nm, 0) + c
        return Poly(tgt, out)

    def embed(self, target: PolyRing) -> "Poly":
        """Same polynomial viewed in a ring containing all of its variable names."""
        if target == self.ring:
            return self
        idx = target.var_index
        names = self.ring.var_names
        try:
            mapping = {v: idx[names[v]] for v in self.variables()}
        except KeyError as exc:
            raise RingMismatchError(f"variable {exc.args[0]} missing from target ring") from None
        return self.substitute_vars(mapping, target)

    # text --------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for idx, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            coef = f"{a.numerator}/{a.denominator}" if type(a) is Fraction else str(a)
            mono = self.ring.monomial_text(m)
            if not mono:
                body = coef
            elif a == 1:
                body = mono
            else:
                body = f"{coef}*{mono}"
            if idx == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"


def mul(a: Poly, b: Poly, max_terms: int = DEFAULT_TERM_CAP) -> Poly:
    if a.ring != b.ring:
        raise RingMismatchError("ring mismatch in product")
    if len(a.terms) > len(b.terms):
        a, b = b, a
    out: dict[int, Coeff] = {}
    get = out.get
    bt = list(b.terms.items())
    for m1, c1 in a.terms.items():
        for m2, c2 in bt:
            k = m1 + m2
            out[k] = get(k, 0) + c1 * c2
        if len(out) > max_terms:
            raise TermLimitError(f"product exceeds {max_terms} terms")
    return Poly(a.ring, out)


def poly_arith(kind: str, a: Poly, b=None) -> Poly:
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "neg":
        return -a
    if kind == "scale":
        return a.scale(b)
    raise ValueError(f"unknown kind {kind!r}")


# reduction ------------------------------------------------------------------

Divisor = tuple[int, tuple[tuple[int, Coeff], ...]]


def divisor(g: Poly) -> Divisor:
    """Rewrite rule lm -> tail for g made monic (lm ≡ -(g - lc*lm)/lc)."""
    lm, lc = g.leading()
    if lc in (1, -1):
        tail = tuple((m, -c * lc) for m, c in g.terms.items() if m != lm)
    else:
        tail = tuple((m, _clean(Fraction(-c) / lc)) for m, c in g.terms.items() if m != lm)
    return lm, tail


def reduce_terms(
    ring: PolyRing, terms: dict[int, Coeff], divisors: Sequence[Divisor], max_terms: int = DEFAULT_TERM_CAP
) -> dict[int, Coeff]:
    """Full multivariate division; returns the remainder's terms."""
    if not divisors or not terms:
        return dict(terms)
    vm = ring.var_mask
    g = ring.guard_mask
    work = dict(terms)
    heap = [-(m ^ vm) for m in work]
    heap.sort()
    rem: dict[int, Coeff] = {}
    while heap:
        m = (-heappop(heap)) ^ vm
        c = work.pop(m, 0)
        if c == 0:
            continue
        for lm, tail in divisors:
            if ((m | g) - lm) & g == g:
                q = m - lm
                for tm, tc in tail:
                    nm = q + tm
                    old = work.get(nm)
                    if old is None:
                        work[nm] = c * tc
                        heappush(heap, -(nm ^ vm))
                    else:
                        work[nm] = old + c * tc
                break
        else:
            rem[m] = c
        if len(work) > max_terms:
            raise TermLimitError(f"reduction exceeds {max_terms} terms")
    return rem


def reduce_by_dets(p: Poly, ring: PolyRing | None = None, max_terms: int = DEFAULT_TERM_CAP) -> Poly:
    """Normal form modulo {det(X_b) - 1} over every block of the ring."""
    ring = ring or p.ring
    if p.ring != ring:
        raise RingMismatchError("polynomial does not belong to this ring")
    return Poly(ring, reduce_terms(ring, p.terms, ring.det_divisors, max_terms))


# matrices -------------------------------------------------------------------


class PolyMatrix:
    """Square matrix of Poly entries over a common ring."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: PolyRing, rows: Sequence[Sequence[Poly]]):
        rows = tuple(tuple(r) for r in rows)
        size = len(rows)
        if any(len(r) != size for r in rows):
            raise ValueError("matrix must be square")
        for r in rows:
            for e in r:
                if e.ring != ring:
                    raise RingMismatchError("matrix entry from another ring")
        self.ring = ring
        self.rows = rows

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        """1-indexed entry access."""
        i, j = ij
        return self.rows[i - 1][j - 1]

    @classmethod
    def identity(cls, ring: PolyRing, size: int | None = None) -> "PolyMatrix":
        size = ring.n if size is None else size
        return cls(ring, [[ring.const(1 if i == j else 0) for j in range(size)] for i in range(size)])

    @classmethod
    def from_ints(cls, ring: PolyRing, rows: Sequence[Sequence[Coeff]]) -> "PolyMatrix":
        return cls(ring, [[ring.const(c) for c in r] for r in rows])

    def _check(self, other: "PolyMatrix") -> None:
        if other.ring != self.ring:
            raise RingMismatchError("matrix ring mismatch")
        if other.size != self.size:
            raise ValueError(f"dimension mismatch {self.size} vs {other.size}")

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        s = self.size
        z = self.ring.zero()
        out = []
        for i in range(s):
            row = []
            for j in range(s):
                acc: dict[int, Coeff] = {}
                for t in range(s):
                    a, b = self.rows[i][t], other.rows[t][j]
                    if a.terms and b.terms:
                        for m, c in mul(a, b).terms.items():
                            acc[m] = acc.get(m, 0) + c
                row.append(Poly(self.ring, acc) if acc else z)
            out.append(row)
        return PolyMatrix(self.ring, out)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        return PolyMatrix(self.ring, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        return PolyMatrix(self.ring, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[e * c for e in r] for r in self.rows])

    def trace(self) -> Poly:
        acc = self.ring.zero()
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[fn(e) for e in r] for r in self.rows])

    def entries(self) -> list[Poly]:
        return [e for r in self.rows for e in r]

    def minor(self, i: int, j: int) -> "PolyMatrix":
        """Delete 0-indexed row i and column j."""
        return PolyMatrix(
            self.ring, [[e for c, e in enumerate(r) if c != j] for rr, r in enumerate(self.rows) if rr != i]
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.ring == other.ring and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return "PolyMatrix([" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows) + "])"


def determinant(a: PolyMatrix, max_terms: int = DEFAULT_TERM_CAP) -> Poly:
    """Leibniz expansion; sizes up to 5."""
    s = a.size
    if s > MAX_DET_N:
        raise SizeLimitError(f"determinant of size {s} exceeds {MAX_DET_N}")
    ring = a.ring
    if s == 0:
        return ring.one()
    acc: dict[int, Coeff] = {}
    for perm, sign in signed_permutations(s):
        prod = None
        for i, j in enumerate(perm):
            e = a.rows[i][j]
            if not e.terms:
                prod = None
                break
            prod = e if prod is None else mul(prod, e, max_terms)
        else:
            for m, c in prod.terms.items():
                acc[m] = acc.get(m, 0) + sign * c
    return Poly(ring, acc)


def adjugate(a: PolyMatrix) -> PolyMatrix:
    s = a.size
    if s > MAX_DET_N:
        raise SizeLimitError(f"adjugate of size {s} exceeds {MAX_DET_N}")
    if s == 1:
        return PolyMatrix.identity(a.ring, 1)
    cof = [[determinant(a.minor(i, j)) * (-1 if (i + j) % 2 else 1) for j in range(s)] for i in range(s)]
    return PolyMatrix(a.ring, [[cof[j][i] for j in range(s)] for i in range(s)])


def mat_arith(kind: str, a: PolyMatrix, b=None):
    if kind == "mul":
        return a @ b
    if kind == "add":
        return a + b
    if kind == "trace":
        return a.trace()
    if kind == "scalar_mul":
        if isinstance(b, Poly):
            return a.map(lambda e: e * b)
        return a.scale(b)
    raise ValueError(f"unknown kind {kind!r}")


# parsing --------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>[gc]\d+\[\d+\]\[\d+\])|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


class _PolyParser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            mt = _TOKEN_RE.match(text, pos)
            if not mt or mt.end() == pos:
                self._fail(f"unexpected character {text[pos]!r}", pos)
            kind = mt.lastgroup
            self.tokens.append((kind, mt.group(kind), mt.start(kind)))
            pos = mt.end()
        self.i = 0

    def _fail(self, msg: str, pos: int):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        raise ParseError(msg, line, col)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text))

    def take(self, value: str | None = None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            self._fail(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.tokens:
            self._fail("empty polynomial", 0)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            self._fail(f"unexpected {tok[1]!r}", tok[2])
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            pos = self.peek()[2]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    self._fail("division only by a nonzero constant", pos)
                p = p.scale(Fraction(1) / Fraction(q.constant_term()))
        return p

    def unary(self) -> Poly:
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                self._fail("exponent must be a nonnegative integer", pos)
            return base ** int(val)
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "num":
            return self.ring.const(int(val))
        if kind in ("var", "name"):
            try:
                return self.ring.named(val)
            except RingMismatchError:
                self._fail(f"unknown variable {val!r}", pos)
        if val == "(":
            p = self.expr()
            self.take(")")
            return p
        self._fail(f"unexpected {val or 'end of input'!r}", pos)


def parse_poly(text: str, ring: PolyRing) -> Poly:
    """Parse canonical text (or any +,-,*,/,^ expression) into the ring."""
    return _PolyParser(text, ring).parse()


def polys_in(ring: PolyRing, items: Iterable[Poly]) -> list[Poly]:
    out = list(items)
    for p in out:
        if p.ring != ring:
            raise RingMismatchError("polynomial from another ring")
    return out
