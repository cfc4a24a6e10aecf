"""Finite semirings given by operation tables, and builders for the usual ones."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from semik import kernels
from semik.errors import InvalidTable

MAX_TABLE_ORDER = 64

_AXIOM_NAMES = {
    1: "operation table entry out of range",
    2: "addition is not commutative",
    3: "zero is not an additive identity",
    4: "one is not a multiplicative identity",
    5: "zero is not multiplicatively absorbing",
    6: "addition is not associative",
    7: "multiplication is not associative",
    8: "left distributivity fails: a(b+c) != ab+ac",
    9: "right distributivity fails: (a+b)c != ac+bc",
}


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    witness: tuple

    def __str__(self):
        return f"{self.axiom} at {self.witness}"


@dataclass(frozen=True, eq=False)
class FiniteSemiringTable:
    """A finite semiring on ``range(order)`` given by its Cayley tables.

    Construction only checks shapes; :func:`validate_table` checks axioms.
    """

    order: int
    add: tuple
    mul: tuple
    zero: int
    one: int
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.order
        if n < 1:
            raise InvalidTable("order must be positive")
        add = tuple(tuple(int(v) for v in row) for row in self.add)
        mul = tuple(tuple(int(v) for v in row) for row in self.mul)
        if len(add) != n or len(mul) != n or any(len(r) != n for r in add + mul):
            raise InvalidTable(f"tables must be {n}x{n}")
        if not (0 <= self.zero < n and 0 <= self.one < n):
            raise InvalidTable("zero/one index out of range")
        object.__setattr__(self, "add", add)
        object.__setattr__(self, "mul", mul)

    def __eq__(self, other):
        if not isinstance(other, FiniteSemiringTable):
            return NotImplemented
        return (self.order, self.add, self.mul, self.zero, self.one) == (
            other.order, other.add, other.mul, other.zero, other.one)

    def __hash__(self):
        return hash((self.order, self.add, self.mul, self.zero, self.one))

    @cached_property
    def add_array(self):
        return np.array(self.add, dtype=np.int64)

    @cached_property
    def mul_array(self):
        return np.array(self.mul, dtype=np.int64)

    @cached_property
    def idempotents(self):
        return tuple(e for e in range(self.order) if self.mul[e][e] == e)

    def opposite(self):
        """Same carrier with multiplication reversed."""
        mul = tuple(tuple(self.mul[b][a] for b in range(self.order)) for a in range(self.order))
        return FiniteSemiringTable(self.order, self.add, mul, self.zero, self.one, self.name + "^op")

    def to_json(self):
        return {"order": self.order, "add": [list(r) for r in self.add],
                "mul": [list(r) for r in self.mul], "zero": self.zero, "one": self.one}


def validate_table(t: FiniteSemiringTable) -> AxiomViolation | None:
    """Exhaustive axiom scan; ``None`` when every semiring axiom holds."""
    code, a, b, c = kernels.table_axiom_violation(t.add_array, t.mul_array, t.zero, t.one)
    if code == 0:
        return None
    return AxiomViolation(_AXIOM_NAMES[code], tuple(x for x in (a, b, c) if x >= 0))


def from_operations(elements: Sequence, add, mul, zero, one, name="") -> FiniteSemiringTable:
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    return FiniteSemiringTable(
        n,
        tuple(tuple(index[add(x, y)] for y in elements) for x in elements),
        tuple(tuple(index[mul(x, y)] for y in elements) for x in elements),
        index[zero], index[one], name,
    )


def boolean() -> FiniteSemiringTable:
    return from_operations((0, 1), max, min, 0, 1, "B")


def zmod(n: int) -> FiniteSemiringTable:
    return from_operations(tuple(range(n)), lambda a, b: (a + b) % n,
                           lambda a, b: (a * b) % n, 0, 1 % n, f"Z{n}")


def chain(k: int) -> FiniteSemiringTable:
    """The distributive lattice ``({0..k-1}, max, min)``."""
    return from_operations(tuple(range(k)), max, min, 0, k - 1, f"chain{k}")


def truncated_naturals(k: int) -> FiniteSemiringTable:
    """``{0..k-1}`` with addition and multiplication saturating at ``k-1``."""
    top = k - 1
    return from_operations(tuple(range(k)), lambda a, b: min(a + b, top),
                           lambda a, b: min(a * b, top), 0, 1, f"N{k}")


# irreducible polynomials, low degree coefficient first, leading 1 implied
_IRREDUCIBLE = {4: (2, (1, 1)), 8: (2, (1, 1, 0)), 9: (3, (1, 0)), 16: (2, (1, 1, 0, 0))}


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            return (p, k) if r == 1 else None
    return None


def gf(q: int) -> FiniteSemiringTable:
    """The finite field of order ``q`` (primes and 4, 8, 9, 16)."""
    pk = _prime_power(q)
    if pk is None:
        raise InvalidTable(f"no field of order {q}")
    p, k = pk
    if k == 1:
        t = zmod(p)
        return FiniteSemiringTable(t.order, t.add, t.mul, t.zero, t.one, f"GF{q}")
    if q not in _IRREDUCIBLE:
        raise InvalidTable(f"GF({q}) is not tabulated")
    _, low = _IRREDUCIBLE[q]

    def digits(x):
        return [(x // p ** i) % p for i in range(k)]

    def number(ds):
        return sum(d * p ** i for i, d in enumerate(ds))

    def add(x, y):
        return number([(a + b) % p for a, b in zip(digits(x), digits(y))])

    def mul(x, y):
        prod = [0] * (2 * k - 1)
        for i, a in enumerate(digits(x)):
            for j, b in enumerate(digits(y)):
                prod[i + j] = (prod[i + j] + a * b) % p
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                # x^k = -(low)
                for i, lo in enumerate(low):
                    prod[d - k + i] = (prod[d - k + i] - c * lo) % p
        return number(prod[:k])

    return from_operations(tuple(range(q)), add, mul, 0, 1, f"GF{q}")


def matrix_semiring(base: FiniteSemiringTable, n: int) -> FiniteSemiringTable:
    """``M_n`` over a finite semiring.

    Matrices are indexed by their row-major entries read as base-``order``
    digits, least significant first, so ``e_11`` precedes ``e_22``.
    """
    q = base.order
    size = q ** (n * n)
    if size > MAX_TABLE_ORDER:
        raise InvalidTable(f"M_{n} over an order-{q} semiring has {size} elements")
    by_index = [tuple((idx // q ** i) % q for i in range(n * n)) for idx in range(size)]
    A, M = base.add, base.mul

    def madd(x, y):
        return tuple(A[a][b] for a, b in zip(x, y))

    def mmul(x, y):
        out = []
        for i in range(n):
            for j in range(n):
                acc = base.zero
                for k in range(n):
                    acc = A[acc][M[x[i * n + k]][y[k * n + j]]]
                out.append(acc)
        return tuple(out)

    zero = tuple([base.zero] * (n * n))
    one = tuple(base.one if i == j else base.zero for i in range(n) for j in range(n))
    name = f"M{n}({base.name})" if base.name else f"M{n}"
    return from_operations(by_index, madd, mmul, zero, one, name)


def product(*factors: FiniteSemiringTable) -> FiniteSemiringTable:
    """Direct product; element tuples ordered lexicographically."""
    elements = list(itertools.product(*(range(f.order) for f in factors)))
    if len(elements) > MAX_TABLE_ORDER:
        raise InvalidTable(f"product has {len(elements)} elements")

    def add(x, y):
        return tuple(f.add[a][b] for f, a, b in zip(factors, x, y))

    def mul(x, y):
        return tuple(f.mul[a][b] for f, a, b in zip(factors, x, y))

    name = "x".join(f.name for f in factors)
    return from_operations(elements, add, mul, tuple(f.zero for f in factors),
                           tuple(f.one for f in factors), name)


_FACTOR = re.compile(r"^(?:M(\d+))?(B|Z\d+|GF\d+|chain\d+|N\d+)$")


def _base(token):
    if token == "B":
        return boolean()
    if token.startswith("GF"):
        return gf(int(token[2:]))
    if token.startswith("Z"):
        return zmod(int(token[1:]))
    if token.startswith("chain"):
        return chain(int(token[5:]))
    return truncated_naturals(int(token[1:]))


def named_table(name: str) -> FiniteSemiringTable:
    """Build a table from a name such as ``B``, ``Z4``, ``GF4``, ``M2B`` or ``BxGF2``.

    ``x`` separates direct factors; ``M<n>`` prefixes a matrix semiring;
    ``chain<k>`` is a max/min chain and ``N<k>`` saturating naturals.
    """
    factors = []
    for part in name.split("x"):
        m = _FACTOR.match(part)
        if not m:
            raise InvalidTable(f"unknown table name {name!r}")
        base = _base(m.group(2))
        factors.append(matrix_semiring(base, int(m.group(1))) if m.group(1) else base)
    t = factors[0] if len(factors) == 1 else product(*factors)
    return FiniteSemiringTable(t.order, t.add, t.mul, t.zero, t.one, name)
