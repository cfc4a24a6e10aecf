"""Finite Boolean semimodules as join-semilattices with bottom."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from semik import kernels
from semik.core import BOOL, SemiMatrix
from semik.errors import ArgumentTooSmall, CarrierTooLarge, KernelMismatch

MAX_ISO_ELEMENTS = 256

_JOIN_LAWS = {
    1: "join table entry out of range",
    2: "join is not commutative",
    3: "join is not idempotent",
    4: "bottom is not neutral",
    5: "join is not associative",
}


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple

    def __str__(self):
        return f"{self.law} at {self.witness}"


@dataclass(frozen=True, eq=False)
class BoolSemimodule:
    """A finite idempotent commutative monoid ``(range(n), join, bottom)``.

    ``coords`` optionally embeds each element as a 0/1 vector whose
    coordinatewise OR realizes ``join``.
    """

    n: int
    join: tuple
    bottom: int
    coords: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "join", tuple(tuple(int(v) for v in r) for r in self.join))
        if self.coords is not None:
            object.__setattr__(self, "coords", tuple(tuple(int(b) for b in c) for c in self.coords))

    @classmethod
    def from_coords(cls, vectors: Sequence[Sequence[int]]) -> BoolSemimodule:
        """Closure of ``vectors`` and the zero vector under coordinatewise OR.

        Elements are numbered in sorted order of their coordinate tuples.
        """
        vecs = [tuple(int(b) for b in v) for v in vectors]
        dims = {len(v) for v in vecs}
        if len(dims) > 1:
            raise ValueError("coordinate vectors of different lengths")
        dim = dims.pop() if dims else 0
        seen = {(0,) * dim}
        frontier = list(seen) + vecs
        seen.update(vecs)
        gens = sorted(set(vecs))
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = tuple(a | b for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        if len(seen) > 1 << 16:
            raise CarrierTooLarge(f"{len(seen)} elements")
        elems = sorted(seen)
        index = {v: i for i, v in enumerate(elems)}
        join = tuple(tuple(index[tuple(a | b for a, b in zip(x, y))] for y in elems) for x in elems)
        return cls(len(elems), join, index[(0,) * dim], tuple(elems))

    def __eq__(self, other):
        if not isinstance(other, BoolSemimodule):
            return NotImplemented
        return (self.n, self.join, self.bottom, self.coords) == (
            other.n, other.join, other.bottom, other.coords)

    def __hash__(self):
        return hash((self.n, self.join, self.bottom))

    @cached_property
    def join_array(self):
        return np.array(self.join, dtype=np.int64).reshape(self.n, self.n)

    @cached_property
    def leq(self) -> np.ndarray:
        """``leq[x, y]`` iff ``x <= y``, i.e. ``x v y == y``."""
        j = self.join_array
        return j == np.arange(self.n)[None, :]

    @cached_property
    def meet(self) -> tuple:
        """Meet table: the join of all common lower bounds."""
        L = self.leq
        down = L.sum(axis=0)
        out = []
        for x in range(self.n):
            common = L & L[:, x][:, None]  # common[z, y]: z <= x and z <= y
            score = np.where(common, down[:, None], -1)
            out.append(tuple(int(v) for v in score.argmax(axis=0)))
        return tuple(out)

    @cached_property
    def atoms(self) -> tuple:
        """Elements covering the bottom."""
        L = self.leq
        b = self.bottom
        above = [x for x in range(self.n) if x != b]
        return tuple(x for x in above if not any(L[z, x] and z != x for z in above))

    @cached_property
    def join_irreducibles(self) -> tuple:
        """Non-bottom elements that are not the join of the elements strictly below."""
        L = self.leq
        out = []
        for x in range(self.n):
            if x == self.bottom:
                continue
            acc = self.bottom
            for z in np.flatnonzero(L[:, x]):
                if z != x:
                    acc = self.join[acc][z]
            if acc != x:
                out.append(x)
        return tuple(out)

    def to_json(self):
        if self.coords is not None:
            return {"coords": [list(c) for c in self.coords]}
        return {"n": self.n, "join": [list(r) for r in self.join], "bottom": self.bottom}


def validate(M: BoolSemimodule) -> Violation | None:
    if len(M.join) != M.n or any(len(r) != M.n for r in M.join):
        return Violation("join table is not n x n", (M.n,))
    code, x, y, z = kernels.join_violation(M.join_array, M.bottom)
    if code:
        return Violation(_JOIN_LAWS[code], tuple(v for v in (x, y, z) if v >= 0))
    if M.coords is not None:
        if len(M.coords) != M.n:
            return Violation("coords length differs from n", (len(M.coords),))
        for a in range(M.n):
            for b in range(a, M.n):
                ored = tuple(p | q for p, q in zip(M.coords[a], M.coords[b]))
                if ored != M.coords[M.join[a][b]]:
                    return Violation("coords do not realize join", (a, b))
    return None


def direct_sum(M: BoolSemimodule, N: BoolSemimodule) -> BoolSemimodule:
    """Product carrier; element ``(i, j)`` has index ``i * N.n + j``."""
    m, n = M.n, N.n
    join = tuple(
        tuple(M.join[i][k] * n + N.join[j][l] for k in range(m) for l in range(n))
        for i in range(m) for j in range(n)
    )
    coords = None
    if M.coords is not None and N.coords is not None:
        coords = tuple(M.coords[i] + N.coords[j] for i in range(m) for j in range(n))
    return BoolSemimodule(m * n, join, M.bottom * n + N.bottom, coords)


def column_span_bool(A: SemiMatrix) -> BoolSemimodule:
    if A.kernel is not BOOL:
        raise KernelMismatch(f"expected a BOOL matrix, got {A.kernel.label}")
    return BoolSemimodule.from_coords([A.column(j) for j in range(A.cols)])


def q_chain(p: int) -> BoolSemimodule:
    """The chain ``0 < 1 < ... < p-1`` under max, embedded as threshold vectors."""
    if p < 2:
        raise ArgumentTooSmall(f"chain length {p} < 2")
    vecs = [tuple(1 if k < i else 0 for k in range(p - 1)) for i in range(p)]
    return BoolSemimodule.from_coords(vecs)


def free_bool(n: int) -> BoolSemimodule:
    """The free semimodule of rank ``n``, i.e. all 0/1 vectors of length ``n``."""
    return column_span_bool(SemiMatrix.identity(BOOL, n)) if n else BoolSemimodule(1, ((0,),), 0, ((),))


def is_projective(M: BoolSemimodule) -> bool:
    """Distributivity of the (finite, hence complete) lattice."""
    meet = np.array(M.meet, dtype=np.int64).reshape(M.n, M.n)
    return kernels.distributive_violation(M.join_array, meet)[0] < 0


def is_free_bool(M: BoolSemimodule) -> int | None:
    """Rank ``k`` when ``M`` is the powerset lattice on its ``k`` atoms."""
    atoms = M.atoms
    if M.n != 1 << len(atoms):
        return None
    L = M.leq
    for x in range(M.n):
        acc = M.bottom
        for a in atoms:
            if L[a, x]:
                acc = M.join[acc][a]
        if acc != x:
            return None
    return len(atoms)


def cardinality_class(M: BoolSemimodule) -> int:
    return M.n


def k0_distinct_by_cardinality(P: BoolSemimodule, Q: BoolSemimodule) -> str:
    """``"DISTINCT"`` when the element counts differ, else ``"INCONCLUSIVE"``.

    Cardinality is multiplicative on direct sums, so it separates stable
    classes; equal counts decide nothing.
    """
    return "DISTINCT" if cardinality_class(P) != cardinality_class(Q) else "INCONCLUSIVE"


def weak_dimension_bool(M: BoolSemimodule) -> int:
    """Size of the unique irredundant generating set (the join-irreducibles)."""
    return len(M.join_irreducibles)


def _signatures(M: BoolSemimodule) -> list:
    L = M.leq
    n = M.n
    down = L.sum(axis=0)
    up = L.sum(axis=1)
    indeg = np.zeros(n, dtype=np.int64)
    for row in M.join:
        for v in row:
            indeg[v] += 1
    # height: longest chain from bottom
    order = sorted(range(n), key=lambda x: down[x])
    height = [0] * n
    for x in order:
        below = [z for z in range(n) if L[z, x] and z != x]
        height[x] = 1 + max((height[z] for z in below), default=-1)
    sig = [(height[x], int(down[x]), int(indeg[x]), int(up[x])) for x in range(n)]
    covers_down = [[z for z in range(n) if L[z, x] and z != x and height[z] == height[x] - 1]
                   for x in range(n)]
    covers_up = [[z for z in range(n) if L[x, z] and z != x and height[z] == height[x] + 1]
                 for x in range(n)]
    return sig, covers_down, covers_up


def _refine(sig, covers_down, covers_up, rounds):
    colors = list(sig)
    for _ in range(rounds):
        new = [(colors[x], tuple(sorted(colors[z] for z in covers_down[x])),
                tuple(sorted(colors[z] for z in covers_up[x]))) for x in range(len(colors))]
        palette = {c: i for i, c in enumerate(sorted(set(new), key=repr))}
        nxt = [palette[c] for c in new]
        if len(set(nxt)) == len(set(colors)):
            return nxt
        colors = nxt
    return colors


def are_isomorphic(M: BoolSemimodule, N: BoolSemimodule) -> dict | None:
    """A join- and bottom-preserving bijection ``M -> N`` or ``None``.

    Colour refinement on order-theoretic signatures, then backtracking in
    a fixed order; the first bijection found is returned.
    """
    if M.n != N.n:
        return None
    if M.n > MAX_ISO_ELEMENTS:
        raise CarrierTooLarge(f"{M.n} elements exceeds {MAX_ISO_ELEMENTS}")
    n = M.n
    sm, dm, um = _signatures(M)
    sn, dn, un = _signatures(N)
    if sorted(sm) != sorted(sn):
        return None
    # refine both with a shared palette so colours are comparable
    joint_sig = sm + sn
    joint_down = dm + [[z + n for z in zs] for zs in dn]
    joint_up = um + [[z + n for z in zs] for zs in un]
    colors = _refine(joint_sig, joint_down, joint_up, 2 * n)
    cm, cn = colors[:n], colors[n:]
    if sorted(cm) != sorted(cn):
        return None
    by_color = {}
    for y in range(n):
        by_color.setdefault(cn[y], []).append(y)
    order = sorted(range(n), key=lambda x: (len(by_color[cm[x]]), x))
    img = [-1] * n
    used = [False] * n
    JM, JN = M.join, N.join
    preimages = [[] for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            preimages[JM[a][b]].append((a, b))

    def consistent(x, y):
        for a, b in preimages[x]:
            ia, ib = img[a], img[b]
            if ia >= 0 and ib >= 0 and JN[ia][ib] != y:
                return False
        for a in range(n):
            ia = img[a]
            if ia < 0:
                continue
            j = JM[x][a]
            ij = img[j]
            target = JN[y][ia]
            if ij >= 0 and ij != target:
                return False
            if j == x and target != y:
                return False
            if j == a and target != ia:
                return False
        return True

    def search(k):
        if k == n:
            return True
        x = order[k]
        for y in by_color[cm[x]]:
            if used[y]:
                continue
            img[x] = y
            if consistent(x, y):
                used[y] = True
                if search(k + 1):
                    return True
                used[y] = False
            img[x] = -1
        return False

    if not search(0):
        return None
    if img[M.bottom] != N.bottom:
        return None
    for a in range(n):
        for b in range(n):
            if img[JM[a][b]] != JN[img[a]][img[b]]:
                return None
    return {x: img[x] for x in range(n)}


# ---- arithmetic of the cardinality invariant

def prime_exponents(c: int) -> dict:
    """Factorization ``{p: e}`` of a positive integer by trial division."""
    if c < 1:
        raise ArgumentTooSmall(f"{c} is not positive")
    out = {}
    d = 2
    while d * d <= c:
        while c % d == 0:
            out[d] = out.get(d, 0) + 1
            c //= d
        d += 1
    if c > 1:
        out[c] = out.get(c, 0) + 1
    return out


def chain_sum_cardinality(chains: Sequence[int]) -> int:
    """``|Q_p1 + ... + Q_pk|``; for primes the multiset is recovered by factoring."""
    out = 1
    for p in chains:
        out *= p
    return out


def power_relation_solutions(a: int, b: int, bound: int) -> list:
    """Pairs ``(n, m)`` with ``a * b**n == b**m`` and ``n, m <= bound``."""
    return [(n, m) for n in range(bound + 1) for m in range(bound + 1) if a * b ** n == b ** m]


def prime_avoiding_powers(c: int, primes: Sequence[int], max_power: int) -> int | None:
    """Least prime in ``primes`` dividing none of ``c**1 .. c**max_power``."""
    for p in primes:
        if all(pow(c, m, p) != 0 for m in range(1, max_power + 1)):
            return p
    return None
