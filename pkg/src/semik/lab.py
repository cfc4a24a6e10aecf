"""Finite semirings by Cayley tables: congruences, simplicity, decompositions,
and recognition of products of matrix semirings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Sequence

from semik import kernels
from semik.core import table_flags
from semik.errors import CarrierTooLarge, InvalidElement, OrderTooLarge
from semik.tables import (
    FiniteSemiringTable,
    boolean,
    gf,
    matrix_semiring,
    product,
    validate_table,
)

__all__ = [
    "SemimoduleCarrier", "CongruencePartition", "Decomposition", "validate_table",
    "semimodule_congruences", "is_compatible", "is_congruence_simple",
    "congruence_semisimple_decompose", "classify_matrix_products", "primitive_orthogonal_units",
    "find_isomorphism", "CONGRUENCE_CAP", "ORDER_CAP",
]

CONGRUENCE_CAP = 8
SIMPLICITY_CAP = 16
ORDER_CAP = 16


@dataclass(frozen=True)
class SemimoduleCarrier:
    """A right semimodule over a table semiring, on ``range(size)``.

    ``add[x][y]`` is the addition, ``act[x][s]`` the action ``x . s`` and
    ``elements[x]`` the semiring element ``x`` stands for (for ideals).
    """

    size: int
    add: tuple
    act: tuple
    zero: int
    elements: tuple = ()

    @classmethod
    def regular(cls, t: FiniteSemiringTable) -> SemimoduleCarrier:
        return cls(t.order, t.add, t.mul, t.zero, tuple(range(t.order)))

    @classmethod
    def right_ideal(cls, t: FiniteSemiringTable, e: int) -> SemimoduleCarrier:
        """``eS`` as a right S-semimodule."""
        return cls.from_subset(t, sorted({t.mul[e][s] for s in range(t.order)}))

    @classmethod
    def from_subset(cls, t: FiniteSemiringTable, subset: Sequence[int]) -> SemimoduleCarrier:
        elems = tuple(subset)
        index = {x: i for i, x in enumerate(elems)}
        if t.zero not in index:
            raise InvalidElement("a subsemimodule must contain zero")
        try:
            add = tuple(tuple(index[t.add[x][y]] for y in elems) for x in elems)
            act = tuple(tuple(index[t.mul[x][s]] for s in range(t.order)) for x in elems)
        except KeyError as exc:
            raise InvalidElement(f"subset not closed: {exc.args[0]} escapes") from None
        return cls(len(elems), add, act, index[t.zero], elems)


@dataclass(frozen=True)
class CongruencePartition:
    labels: tuple  # least element of each element's block

    @property
    def blocks(self) -> tuple:
        out = {}
        for x, lab in enumerate(self.labels):
            out.setdefault(lab, []).append(x)
        return tuple(tuple(b) for b in out.values())

    @property
    def is_identity(self) -> bool:
        return len(set(self.labels)) == len(self.labels)

    @property
    def is_universal(self) -> bool:
        return len(set(self.labels)) <= 1

    def to_json(self):
        return [list(b) for b in self.blocks]


def _principal(M: SemimoduleCarrier, a: int, b: int) -> tuple:
    return tuple(kernels.congruence_closure(M.add, M.act, list(range(M.size)), [(a, b)]))


def is_compatible(M: SemimoduleCarrier, theta: CongruencePartition) -> bool:
    """Direct scan: related elements stay related under addition and action."""
    lab = theta.labels
    for x in range(M.size):
        for y in range(M.size):
            if lab[x] != lab[y]:
                continue
            if any(lab[M.add[x][z]] != lab[M.add[y][z]] for z in range(M.size)):
                return False
            if any(lab[M.act[x][s]] != lab[M.act[y][s]] for s in range(len(M.act[0]))):
                return False
    return True


def semimodule_congruences(M: SemimoduleCarrier, cap: int = CONGRUENCE_CAP) -> list:
    """Every congruence of ``M``, as joins of principal ones.

    Sorted by number of blocks (descending), then by labels.
    """
    if M.size > cap:
        raise CarrierTooLarge(f"{M.size} elements exceeds {cap}")
    found = {tuple(range(M.size))}
    principal = {_principal(M, a, b) for a in range(M.size) for b in range(a + 1, M.size)}
    found |= principal
    frontier = list(found)
    while frontier:
        nxt = []
        for theta in frontier:
            for p in principal:
                seeds = [(x, lab) for x, lab in enumerate(p) if x != lab]
                joined = tuple(kernels.congruence_closure(M.add, M.act, list(theta), seeds))
                if joined not in found:
                    found.add(joined)
                    nxt.append(joined)
        frontier = nxt
    return [CongruencePartition(t) for t in sorted(found, key=lambda t: (-len(set(t)), t))]


def is_congruence_simple(M: SemimoduleCarrier, cap: int = SIMPLICITY_CAP) -> bool:
    """Exactly two congruences: at least two elements and every principal
    congruence of a distinct pair is universal."""
    if M.size > cap:
        raise CarrierTooLarge(f"{M.size} elements exceeds {cap}")
    if M.size < 2:
        return False
    return all(len(set(_principal(M, a, b))) == 1
               for a in range(M.size) for b in range(a + 1, M.size))


def _check_order(t, max_order):
    if t.order > max_order:
        raise OrderTooLarge(f"order {t.order} exceeds {max_order}")


def _sum(t, xs):
    acc = t.zero
    for x in xs:
        acc = t.add[acc][x]
    return acc


@dataclass(frozen=True)
class Decomposition:
    idempotents: tuple
    ideals: tuple  # elements of each e_i S

    def to_json(self):
        return {"idempotents": list(self.idempotents), "ideals": [list(i) for i in self.ideals]}


def _is_direct(t, es, ideals):
    if prod(len(i) for i in ideals) != t.order:
        return False
    images = {tuple(t.mul[e][s] for e in es) for s in range(t.order)}
    return len(images) == t.order


def congruence_semisimple_decompose(t: FiniteSemiringTable, max_order: int = ORDER_CAP) -> Decomposition | None:
    """First decomposition ``S = e_1 S + ... + e_k S`` into congruence-simple
    right ideals, idempotents with ``sum e_i = 1`` taken in index order;
    ``None`` after the exhaustive search."""
    _check_order(t, max_order)
    idem = [e for e in t.idempotents if e != t.zero]
    ideals = {e: SemimoduleCarrier.right_ideal(t, e) for e in idem}
    simple = {e: is_congruence_simple(ideals[e]) for e in idem}
    k = 1
    while 1 << k <= t.order:
        for es in itertools.combinations(idem, k):
            if not all(simple[e] for e in es) or _sum(t, es) != t.one:
                continue
            carriers = [ideals[e].elements for e in es]
            if _is_direct(t, es, carriers):
                return Decomposition(es, tuple(carriers))
        k += 1
    return None


# ------------------------------------------------------------ isomorphism

def _closure(t, gens):
    seen = {t.zero, t.one, *gens}
    frontier = list(seen)
    while frontier:
        new = []
        cur = list(seen)
        for a in frontier:
            for b in cur:
                for c in (t.add[a][b], t.mul[a][b], t.mul[b][a]):
                    if c not in seen:
                        seen.add(c)
                        new.append(c)
        frontier = new
    return seen


def _generators(t):
    gens = []
    span = _closure(t, gens)
    while len(span) < t.order:
        x = min(set(range(t.order)) - span)
        gens.append(x)
        span = _closure(t, gens)
    return gens


def _profile(t, x):
    def orbit(op):
        seen, y = [], x
        while y not in seen:
            seen.append(y)
            y = op[y][x]
        return len(seen)

    return (t.mul[x][x] == x, t.add[x][x] == x, orbit(t.add), orbit(t.mul),
            sum(t.mul[x][y] == t.zero for y in range(t.order)))


def _invariants(t):
    f = table_flags(t).as_dict()
    return (t.order, tuple(sorted(f.items())), sorted(_profile(t, x) for x in range(t.order)))


def find_isomorphism(s: FiniteSemiringTable, t: FiniteSemiringTable) -> tuple | None:
    """A semiring isomorphism ``s -> t`` as an image list, or ``None``."""
    if _invariants(s) != _invariants(t):
        return None
    gens = _generators(s)
    prof_t = {}
    for y in range(t.order):
        prof_t.setdefault(_profile(t, y), []).append(y)
    cands = [prof_t.get(_profile(s, g), []) for g in gens]
    base = [-1] * s.order
    base[s.zero], base[s.one] = t.zero, t.one
    ok, img = kernels.extend_morphism(s.add, s.mul, t.add, t.mul, base)
    if not ok:
        return None

    def rec(k, img):
        if k == len(gens):
            return img if -1 not in img else None
        g = gens[k]
        if img[g] >= 0:
            return rec(k + 1, img)
        for y in cands[k]:
            trial = list(img)
            trial[g] = y
            ok, ext = kernels.extend_morphism(s.add, s.mul, t.add, t.mul, trial)
            if ok:
                found = rec(k + 1, ext)
                if found:
                    return found
        return None

    found = rec(0, img)
    return tuple(found) if found else None


_FIELD_ORDERS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)


def _catalogue(max_order):
    """Candidate simple factors ``(kind, q, n, order)`` of order <= max_order."""
    out = [("BOOL", None, 1, 2)]
    if 16 <= max_order:
        out.append(("BOOL", None, 2, 16))
    out += [("FIELD", q, 1, q) for q in _FIELD_ORDERS if q <= max_order]
    if 16 <= max_order:
        out.append(("FIELD", 2, 2, 16))
    return out


def _factor_table(kind, q, n):
    base = boolean() if kind == "BOOL" else gf(q)
    return base if n == 1 else matrix_semiring(base, n)


def _factor_multisets(cat, order):
    def rec(start, remaining):
        if remaining == 1:
            yield ()
            return
        for i in range(start, len(cat)):
            o = cat[i][3]
            if remaining % o == 0:
                for rest in rec(i, remaining // o):
                    yield (cat[i],) + rest
    yield from rec(0, order)


def classify_matrix_products(t: FiniteSemiringTable, max_order: int = ORDER_CAP) -> list | None:
    """Factor list ``[("BOOL", n), ("FIELD q", m), ...]`` of a product of
    matrix semirings over B and finite fields isomorphic to ``t``, or ``None``."""
    _check_order(t, max_order)
    if t.order == 1:
        return None
    for combo in _factor_multisets(_catalogue(max_order), t.order):
        tables = [_factor_table(kind, q, n) for kind, q, n, _ in combo]
        candidate = tables[0] if len(tables) == 1 else product(*tables)
        if find_isomorphism(t, candidate) is not None:
            return [(kind if kind == "BOOL" else f"FIELD {q}", n) for kind, q, n, _ in combo]
    return None


def _orthogonal(t, e, f):
    return t.mul[e][f] == t.zero and t.mul[f][e] == t.zero


def primitive_orthogonal_units(t: FiniteSemiringTable, max_order: int = ORDER_CAP) -> tuple | None:
    """Smallest set of pairwise orthogonal primitive idempotents summing to 1."""
    _check_order(t, max_order)
    idem = [e for e in t.idempotents if e != t.zero]
    primitive = [e for e in idem
                 if not any(t.add[f][g] == e and _orthogonal(t, f, g)
                            for f in idem for g in idem)]
    for k in range(1, len(primitive) + 1):
        for es in itertools.combinations(primitive, k):
            if _sum(t, es) == t.one and all(_orthogonal(t, a, b) for a, b in itertools.combinations(es, 2)):
                return es
    return None
