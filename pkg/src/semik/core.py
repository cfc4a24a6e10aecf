"""Exact scalars and matrices over the Boolean, tropical, natural-number and
table semirings.

Scalars are plain Python values: ``0``/``1`` for BOOL, :class:`Fraction` or
:data:`NEG_INF` for TROP, non-negative ``int`` for NAT, table indices for
TABLE.  The kernel object carries the operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from semik.errors import (
    DimensionMismatch,
    InvalidElement,
    InvalidTable,
    KernelMismatch,
    NotIdempotent,
    NotSquare,
    SearchTooLarge,
)
from semik.tables import MAX_TABLE_ORDER, FiniteSemiringTable, named_table, validate_table

COMPLEMENT_SEARCH_BUDGET = 1_000_000


class _NegInf:
    """Tropical zero: below every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __str__(self):
        return "-inf"

    def __reduce__(self):
        return (_NegInf, ())

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __hash__(self):
        return hash("semik.NEG_INF")


NEG_INF = _NegInf()


def trop(x) -> Fraction | _NegInf:
    """Coerce ints, Fractions and strings like ``"-1/2"`` or ``"-inf"``."""
    if x is NEG_INF:
        return x
    if isinstance(x, bool):
        raise InvalidElement(f"not a tropical scalar: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if s == "-inf":
            return NEG_INF
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            pass
    raise InvalidElement(f"not a tropical scalar: {x!r}")


def trop_str(x) -> str:
    return "-inf" if x is NEG_INF else str(x)


@dataclass(frozen=True)
class KernelFlags:
    commutative: bool
    additively_idempotent: bool
    zerosumfree: bool
    entire: bool
    division: bool

    def as_dict(self):
        return dict(self.__dict__)


class SemiringKernel:
    """Operations of one supported semiring.  Instances are immutable."""

    tag: str
    zero: Any
    one: Any

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def coerce(self, x):
        raise NotImplementedError

    @property
    def finite_elements(self) -> tuple | None:
        """All elements when the carrier is finite."""
        return None

    def flags(self) -> KernelFlags:
        raise NotImplementedError

    def sum(self, xs: Iterable):
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    @property
    def label(self) -> str:
        return self.tag

    def __repr__(self):
        return f"<kernel {self.label}>"


class _Bool(SemiringKernel):
    tag = "BOOL"
    zero = 0
    one = 1

    def add(self, a, b):
        return a | b

    def mul(self, a, b):
        return a & b

    def coerce(self, x):
        if isinstance(x, bool):
            return int(x)
        if x in (0, 1) and isinstance(x, int):
            return x
        raise InvalidElement(f"not a Boolean scalar: {x!r}")

    @property
    def finite_elements(self):
        return (0, 1)

    def flags(self):
        return KernelFlags(True, True, True, True, True)


class _Trop(SemiringKernel):
    tag = "TROP"
    zero = NEG_INF
    one = Fraction(0)

    def add(self, a, b):
        if a is NEG_INF:
            return b
        if b is NEG_INF:
            return a
        return a if a >= b else b

    def mul(self, a, b):
        if a is NEG_INF or b is NEG_INF:
            return NEG_INF
        return a + b

    def coerce(self, x):
        return trop(x)

    def flags(self):
        return KernelFlags(True, True, True, True, True)


class _Nat(SemiringKernel):
    tag = "NAT"
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def coerce(self, x):
        if isinstance(x, int) and not isinstance(x, bool) and x >= 0:
            return x
        raise InvalidElement(f"not a non-negative integer: {x!r}")

    def flags(self):
        return KernelFlags(True, False, True, True, False)


class TableKernel(SemiringKernel):
    tag = "TABLE"

    def __init__(self, table: FiniteSemiringTable, name: str | None = None):
        if table.order > MAX_TABLE_ORDER:
            raise InvalidTable(f"table order {table.order} exceeds {MAX_TABLE_ORDER}")
        bad = validate_table(table)
        if bad is not None:
            raise InvalidTable(str(bad))
        self.table = table
        self.name = name or table.name or f"order{table.order}"
        self.zero = table.zero
        self.one = table.one

    def add(self, a, b):
        return self.table.add[a][b]

    def mul(self, a, b):
        return self.table.mul[a][b]

    def coerce(self, x):
        if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.table.order:
            return x
        raise InvalidElement(f"not an element of {self.name}: {x!r}")

    @property
    def finite_elements(self):
        return tuple(range(self.table.order))

    @property
    def label(self):
        return f"TABLE:{self.name}"

    def flags(self):
        return table_flags(self.table)

    def __eq__(self, other):
        return isinstance(other, TableKernel) and other.table == self.table

    def __hash__(self):
        return hash(self.table)


BOOL = _Bool()
TROP = _Trop()
NAT = _Nat()


def kernel_from_label(label: str) -> SemiringKernel:
    """``"BOOL"``, ``"TROP"``, ``"NAT"`` or ``"TABLE:<name>"`` (see :func:`named_table`)."""
    if label == "BOOL":
        return BOOL
    if label == "TROP":
        return TROP
    if label == "NAT":
        return NAT
    if label.startswith("TABLE:"):
        return TableKernel(named_table(label[6:]), label[6:])
    raise InvalidElement(f"unknown kernel {label!r}")


def table_flags(t: FiniteSemiringTable) -> KernelFlags:
    n, A, M, z, o = t.order, t.add, t.mul, t.zero, t.one
    commutative = all(M[a][b] == M[b][a] for a in range(n) for b in range(a + 1, n))
    idem = all(A[a][a] == a for a in range(n))
    zsf = not any(A[a][b] == z for a in range(n) if a != z for b in range(n))
    entire = not any(M[a][b] == z for a in range(n) if a != z for b in range(n) if b != z)
    division = z != o and all(
        any(M[a][b] == o and M[b][a] == o for b in range(n)) for a in range(n) if a != z
    )
    return KernelFlags(commutative, idem, zsf, entire, division)


def kernel_flags(k: SemiringKernel) -> KernelFlags:
    return k.flags()


def is_weakly_cancellative(k: SemiringKernel) -> tuple[bool, tuple | None]:
    """Whether ``a + a = a + b`` forces ``a = b``, with a counterexample if not."""
    if k is NAT:
        return True, None
    if k is TROP:
        # 1 + 1 = 1 + s for the rational s = -1
        return False, (Fraction(0), Fraction(-1))
    if k.finite_elements is None:
        raise InvalidElement(f"no weak-cancellativity rule for {k!r}")
    if k.flags().additively_idempotent and k.zero != k.one:
        return False, (k.one, k.zero)
    elems = k.finite_elements
    for a in elems:
        aa = k.add(a, a)
        for b in elems:
            if b != a and k.add(a, b) == aa:
                return False, (a, b)
    return True, None


@dataclass(frozen=True)
class SemiMatrix:
    kernel: SemiringKernel
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionMismatch("matrix dimensions must be positive")
        entries = tuple(self.kernel.coerce(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(entries)} entries for a {self.rows}x{self.cols} matrix")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, kernel: SemiringKernel, rows: Sequence[Sequence]) -> SemiMatrix:
        rows = [list(r) for r in rows]
        if not rows or len({len(r) for r in rows}) != 1:
            raise DimensionMismatch("rows must be non-empty and of equal length")
        return cls(kernel, len(rows), len(rows[0]), tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, kernel: SemiringKernel, n: int) -> SemiMatrix:
        return cls(kernel, n, n, tuple(kernel.one if i == j else kernel.zero
                                       for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, kernel: SemiringKernel, rows: int, cols: int) -> SemiMatrix:
        return cls(kernel, rows, cols, (kernel.zero,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self):
        return self.rows == self.cols

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"SemiMatrix[{self.kernel.label}]({body})"


def _same_kernel(A: SemiMatrix, B: SemiMatrix):
    if A.kernel is not B.kernel and A.kernel != B.kernel:
        raise KernelMismatch(f"{A.kernel.label} vs {B.kernel.label}")


def mat_add(A: SemiMatrix, B: SemiMatrix) -> SemiMatrix:
    _same_kernel(A, B)
    if (A.rows, A.cols) != (B.rows, B.cols):
        raise DimensionMismatch(f"{A.rows}x{A.cols} + {B.rows}x{B.cols}")
    k = A.kernel
    return SemiMatrix(k, A.rows, A.cols, tuple(k.add(a, b) for a, b in zip(A.entries, B.entries)))


def mat_mul(A: SemiMatrix, B: SemiMatrix) -> SemiMatrix:
    _same_kernel(A, B)
    if A.cols != B.rows:
        raise DimensionMismatch(f"{A.rows}x{A.cols} * {B.rows}x{B.cols}")
    k = A.kernel
    cols = [B.column(j) for j in range(B.cols)]
    out = []
    for i in range(A.rows):
        r = A.row(i)
        for c in cols:
            out.append(k.sum(k.mul(a, b) for a, b in zip(r, c)))
    return SemiMatrix(k, A.rows, B.cols, tuple(out))


def is_idempotent_matrix(A: SemiMatrix) -> bool:
    if not A.is_square:
        raise NotSquare(f"{A.rows}x{A.cols}")
    return mat_mul(A, A).entries == A.entries


def _complement_candidates(k: SemiringKernel, a, target):
    """Values f with a + f = target, restricted to the searched class."""
    if k is NAT:
        pool = range(target + 1)
    elif k.finite_elements is not None:
        pool = k.finite_elements
    else:
        # residuated class for the tropical kernel: the two extreme solutions
        pool = (k.zero, k.one)
    return [f for f in pool if k.add(a, f) == target]


def strong_idempotent_complement(A: SemiMatrix) -> SemiMatrix | None:
    """An idempotent F with A + F = I and AF = FA = 0, or ``None``.

    ``None`` is a certificate: some entry has no admissible value, or every
    combination of admissible values was checked.
    """
    if not A.is_square:
        raise NotSquare(f"{A.rows}x{A.cols}")
    if not is_idempotent_matrix(A):
        raise NotIdempotent(repr(A))
    k, n = A.kernel, A.rows
    ident = SemiMatrix.identity(k, n)
    zero = SemiMatrix.zeros(k, n, n)
    choices = []
    total = 1
    for a, t in zip(A.entries, ident.entries):
        c = _complement_candidates(k, a, t)
        if not c:
            return None
        choices.append(c)
        total *= len(c)
    if total > COMPLEMENT_SEARCH_BUDGET:
        raise SearchTooLarge(f"{total} complement candidates")
    for entries in itertools.product(*choices):
        F = SemiMatrix(k, n, n, entries)
        if (mat_mul(A, F) == zero and mat_mul(F, A) == zero
                and mat_add(A, F) == ident and is_idempotent_matrix(F)):
            return F
    return None
