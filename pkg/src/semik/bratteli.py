"""Matricial and ultramatricial algebras through their Bratteli data.

A presentation lists size vectors ``levels[k]`` and multiplicity matrices
``steps[k]`` with ``levels[k+1] = steps[k] @ levels[k]``.  SK0 of a level is
``Z^r`` with the sizes as order unit; SK0 of the limit is the direct limit of
those groups along the step matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from semik.errors import NegativeEntry, NotUnital, SearchTooLarge, ShapeMismatch, UnitalityViolation
from semik.kflow import (
    DirectLimitSystem,
    SimplicialOrderedGroup,
    identity,
    mat_mul,
    mat_vec,
    rank,
)

FIELD_TAGS = ("BOOL", "TROP", "FIELD", "OTHER")
DEFAULT_ISO_DEPTH = 4
SOLUTION_BUDGET = 20_000
NODE_BUDGET = 200_000


@dataclass(frozen=True)
class MatricialAlgebra:
    """``M_{n_1}(F) x ... x M_{n_r}(F)``; the field tag is metadata only."""

    sizes: tuple
    field: str = "BOOL"

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        if not sizes or any(n < 1 for n in sizes):
            raise ShapeMismatch("sizes must be a non-empty vector of positive integers")
        object.__setattr__(self, "sizes", sizes)


@dataclass(frozen=True)
class BratteliPresentation:
    levels: tuple
    steps: tuple = ()
    period: int | None = None
    field: str = "BOOL"

    def __post_init__(self):
        levels = tuple(tuple(int(n) for n in lv) for lv in self.levels)
        steps = tuple(tuple(tuple(int(x) for x in r) for r in s) for s in self.steps)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "steps", steps)
        if not levels:
            raise ShapeMismatch("a presentation needs at least one level")
        if any(not lv or any(n < 1 for n in lv) for lv in levels):
            raise ShapeMismatch("levels must be non-empty vectors of positive sizes")
        if len(steps) != len(levels) - 1:
            raise ShapeMismatch(f"{len(levels)} levels need {len(levels) - 1} steps")
        for k, s in enumerate(steps):
            if any(x < 0 for r in s for x in r):
                raise NegativeEntry(f"step {k}")
            if len(s) != len(levels[k + 1]) or any(len(r) != len(levels[k]) for r in s):
                raise ShapeMismatch(f"step {k} has the wrong shape")
            if mat_vec(s, levels[k]) != levels[k + 1]:
                raise UnitalityViolation(k)
        if self.period is not None and not 1 <= self.period <= len(steps):
            raise ShapeMismatch(f"period {self.period} needs at least {self.period} steps")

    @classmethod
    def constant(cls, sizes: Sequence[int], field: str = "BOOL") -> BratteliPresentation:
        return cls((tuple(sizes),), (), None, field)

    @classmethod
    def stationary(cls, first: Sequence[int], step: Sequence[Sequence[int]], count: int = 2,
                   field: str = "BOOL") -> BratteliPresentation:
        """``count`` declared steps of the same matrix, repeating with period 1."""
        levels = [tuple(first)]
        for _ in range(count):
            levels.append(mat_vec(step, levels[-1]))
        return cls(tuple(levels), (tuple(map(tuple, step)),) * count, 1, field)

    def to_json(self):
        out = {"field": self.field, "levels": [list(lv) for lv in self.levels],
               "steps": [[list(r) for r in s] for s in self.steps]}
        if self.period is not None:
            out["period"] = self.period
        return out


@dataclass(frozen=True)
class EmbeddingPlan:
    """Block-diagonal embedding realizing a multiplicity matrix.

    ``blocks[i]`` lists ``(j, offset)``: a copy of source factor ``j``
    placed on the diagonal of target factor ``i`` starting at ``offset``.
    """

    matrix: tuple
    blocks: tuple
    description: str

    def to_json(self):
        return {"matrix": [list(r) for r in self.matrix],
                "blocks": [[list(b) for b in bl] for bl in self.blocks],
                "description": self.description}


def sk0_matricial(A: MatricialAlgebra | Sequence[int]) -> SimplicialOrderedGroup:
    sizes = A.sizes if isinstance(A, MatricialAlgebra) else MatricialAlgebra(tuple(A)).sizes
    return SimplicialOrderedGroup(len(sizes), sizes)


def sk0_ultramatricial(B: BratteliPresentation) -> DirectLimitSystem:
    """Direct system of stage groups; a lone level becomes a constant system."""
    if not B.steps:
        lv = B.levels[0]
        return DirectLimitSystem((lv, lv), (identity(len(lv)),), 1)
    groups = tuple(sk0_matricial(lv) for lv in B.levels)
    return DirectLimitSystem(groups, B.steps, B.period)


def realize_morphism(src: Sequence[int], dst: Sequence[int], M: Sequence[Sequence[int]]) -> EmbeddingPlan:
    src, dst = tuple(src), tuple(dst)
    M = tuple(tuple(int(x) for x in r) for r in M)
    if len(M) != len(dst) or any(len(r) != len(src) for r in M):
        raise ShapeMismatch(f"matrix must be {len(dst)}x{len(src)}")
    if any(x < 0 for r in M for x in r):
        raise NegativeEntry("multiplicities must be non-negative")
    if mat_vec(M, src) != dst:
        raise NotUnital(f"{[list(r) for r in M]} sends {list(src)} to {list(mat_vec(M, src))}, not {list(dst)}")
    blocks, parts = [], []
    for i, row in enumerate(M):
        offset, placed, terms = 0, [], []
        for j, m in enumerate(row):
            for _ in range(m):
                placed.append((j, offset))
                offset += src[j]
            if m:
                terms.append(f"{m}xM{src[j]}" if m > 1 else f"M{src[j]}")
        blocks.append(tuple(placed))
        parts.append(f"M{dst[i]} <- " + (" + ".join(terms) if terms else "0"))
    return EmbeddingPlan(M, tuple(blocks), "; ".join(parts))


def congsemisimple_invariant(sizes: Sequence[int]) -> tuple:
    return tuple(sorted(int(n) for n in sizes))


def congsemisimple_isomorphic(a: Sequence[int], b: Sequence[int]) -> bool:
    return congsemisimple_invariant(a) == congsemisimple_invariant(b)


# ---------------------------------------------------------------- invariants

def stable_rank(sys: DirectLimitSystem) -> int | None:
    """Rational rank of the limit group; ``None`` for finite prefixes."""
    if sys.period is None:
        return None
    t = sys.tail_start
    P = sys.transition(t, t + sys.period)
    M = identity(len(P))
    for _ in range(len(P)):
        M = mat_mul(P, M)
    return rank(M)


def _factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def supernatural(sys: DirectLimitSystem) -> dict | None:
    """Prime exponents of the unit sequence of a rank-one periodic tail.

    Infinite exponents are ``math.inf``.  ``None`` when the tail is not
    rank one or degenerates to zero.
    """
    if sys.period is None:
        return None
    t, p = sys.tail_start, sys.period
    if any(sys.rank_at(k) != 1 for k in range(t, t + p + 1)):
        return None
    mult = 1
    for k in range(t, t + p):
        mult *= sys.stage_map(k).matrix[0][0]
    (u,) = sys.unit_at(t)
    if mult == 0 or u == 0:
        return None
    out = {q: e for q, e in _factor(u).items()}
    for q in _factor(mult):
        out[q] = math.inf
    return out


def _permutation_tail(sys: DirectLimitSystem) -> bool:
    if sys.period is None:
        return False
    t = sys.tail_start
    for k in range(t, t + sys.period):
        M = sys.stage_map(k).matrix
        if len(M) != len(M[0]) or any(sorted(r) != [0] * (len(r) - 1) + [1] for r in M):
            return False
        if any(sum(c) != 1 for c in zip(*M)):
            return False
    return True


def _certificate(s1: DirectLimitSystem, s2: DirectLimitSystem) -> dict | None:
    r1, r2 = stable_rank(s1), stable_rank(s2)
    if r1 is not None and r2 is not None and r1 != r2:
        return {"kind": "stable_rank", "left": r1, "right": r2}
    n1, n2 = supernatural(s1), supernatural(s2)
    if n1 is not None and n2 is not None and n1 != n2:
        fmt = lambda d: {str(q): ("inf" if e == math.inf else e) for q, e in sorted(d.items())}
        return {"kind": "supernatural", "left": fmt(n1), "right": fmt(n2)}
    if _permutation_tail(s1) and _permutation_tail(s2):
        # the limit is the tail-start group itself; its unit up to permutation is complete
        u1 = sorted(s1.unit_at(s1.tail_start))
        u2 = sorted(s2.unit_at(s2.tail_start))
        if u1 != u2:
            return {"kind": "unit_multiset", "left": u1, "right": u2}
    return None


# ---------------------------------------------------------------- intertwining

def _row_solutions(cols: Sequence[Sequence[int]], target: Sequence[int]) -> Iterator[tuple]:
    """Non-negative integer ``x`` with ``sum_b x_b * cols[b] == target``, in
    lexicographically decreasing order."""
    nb = len(cols)
    target = list(target)
    x = [0] * nb

    def rec(b, residual):
        if b == nb:
            if not any(residual):
                yield tuple(x)
            return
        col = cols[b]
        bound = min((residual[q] // c for q, c in enumerate(col) if c > 0), default=None)
        if bound is None:
            # a zero column carries no weight; keep it at zero
            x[b] = 0
            yield from rec(b + 1, residual)
            return
        for v in range(bound, -1, -1):
            x[b] = v
            yield from rec(b + 1, [r - v * c for r, c in zip(residual, col)])
        x[b] = 0

    yield from rec(0, target)


def _solve_left(alpha, S, budget):
    """All non-negative integer ``beta`` with ``beta @ alpha == S``."""
    cols = [tuple(row) for row in alpha]  # beta row r: sum_b beta[r][b] * alpha[b] == S[r]
    per_row = []
    total = 1
    for target in S:
        sols = []
        for sol in _row_solutions(cols, target):
            sols.append(sol)
            if len(sols) > budget:
                raise SearchTooLarge("row solutions")
        if not sols:
            return []
        per_row.append(sols)
        total *= len(sols)
        if total > budget:
            raise SearchTooLarge("solution product")
    out = [()]
    for sols in per_row:
        out = [prev + (s,) for prev in out for s in sols]
    return out


def _unital_maps(src, dst, budget):
    """All non-negative integer matrices ``M`` with ``M @ src == dst``."""
    cols = [(n,) for n in src]
    return _solve_left(cols, [(n,) for n in dst], budget)


@dataclass(frozen=True)
class IsoResult:
    verdict: str  # ISO | NOT_ISO | UNKNOWN
    witness: dict | None = None
    certificate: dict | None = None
    reason: str | None = field(default=None, compare=False)

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.reason is not None:
            out["reason"] = self.reason
        return out


class _Budget(Exception):
    pass


def _search(s1, s2, depth, budget):
    p1, p2 = s1.period, s2.period
    t1, t2 = s1.tail_start, s2.tail_start
    nodes = [0]
    exhausted = [False]

    def closes(state, earlier):
        i, j, a = state
        im, jm, am = earlier
        return (a == am and im >= t1 and jm >= t2 and i > im and j > jm
                and (i - im) % p1 == 0 and (j - jm) % p2 == 0)

    def dfs(path, betas, limit):
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Budget
        i, j, alpha = path[-1]
        for i2 in range(i + 1, limit + 1):
            try:
                betas_next = _solve_left(alpha, s1.transition(i, i2), SOLUTION_BUDGET)
            except SearchTooLarge:
                exhausted[0] = True
                continue
            for beta in betas_next:
                for j2 in range(j + 1, limit + 1):
                    try:
                        alphas_next = _solve_left(beta, s2.transition(j, j2), SOLUTION_BUDGET)
                    except SearchTooLarge:
                        exhausted[0] = True
                        continue
                    for alpha2 in alphas_next:
                        state = (i2, j2, alpha2)
                        for m, earlier in enumerate(path):
                            if closes(state, earlier):
                                return path + [state], betas + [beta], m
                        found = dfs(path + [state], betas + [beta], limit)
                        if found:
                            return found
        return None

    try:
        for limit in range(1, depth + 1):
            for j0 in range(limit + 1):
                try:
                    starts = _unital_maps(s1.unit_at(0), s2.unit_at(j0), SOLUTION_BUDGET)
                except SearchTooLarge:
                    exhausted[0] = True
                    continue
                for alpha0 in starts:
                    found = dfs([(0, j0, alpha0)], [], limit)
                    if found:
                        return found, exhausted[0]
    except _Budget:
        exhausted[0] = True
    return None, exhausted[0]


def _as_system(B):
    return B if isinstance(B, DirectLimitSystem) else sk0_ultramatricial(B)


def iso_ultramatricial(B1, B2, depth: int = DEFAULT_ISO_DEPTH,
                       node_budget: int = NODE_BUDGET) -> IsoResult:
    """Decide isomorphism of the limits, three-valued.

    ISO comes with a periodic intertwining: unital maps ``alpha_k`` from
    level ``i_k`` of the first system to level ``j_k`` of the second and
    ``beta_k`` back, composing to the diagram maps, whose last state repeats
    an earlier one shifted by whole periods.  NOT_ISO carries an invariant
    that differs.  Levels up to ``depth`` are explored.
    """
    s1, s2 = _as_system(B1), _as_system(B2)
    cert = _certificate(s1, s2)
    if cert is not None:
        return IsoResult("NOT_ISO", certificate=cert)
    if s1.period is None or s2.period is None:
        return IsoResult("UNKNOWN", reason="finite prefix: no periodic tail to close an intertwining")
    found, exhausted = _search(s1, s2, depth, node_budget)
    if found is None:
        reason = "search budget exhausted" if exhausted else f"no intertwining up to level {depth}"
        return IsoResult("UNKNOWN", reason=reason)
    states, betas, m = found
    witness = {
        "levels": [[i, j] for i, j, _ in states],
        "alpha": [[list(r) for r in a] for _, _, a in states],
        "beta": [[list(r) for r in b] for b in betas],
        "cycle_from": m,
    }
    if not validate_witness(s1, s2, witness):
        return IsoResult("UNKNOWN", reason="candidate intertwining failed re-validation")
    return IsoResult("ISO", witness=witness)


def validate_witness(B1, B2, witness: dict) -> bool:
    """Independent re-check of an intertwining witness by integer arithmetic."""
    s1, s2 = _as_system(B1), _as_system(B2)
    levels = [tuple(x) for x in witness["levels"]]
    alphas = [tuple(tuple(r) for r in a) for a in witness["alpha"]]
    betas = [tuple(tuple(r) for r in b) for b in witness["beta"]]
    m = witness["cycle_from"]
    if len(alphas) != len(levels) or len(betas) != len(levels) - 1 or not 0 <= m < len(levels) - 1:
        return False
    if any(x < 0 for M in alphas + betas for r in M for x in r):
        return False
    for (i, j), a in zip(levels, alphas):
        if mat_vec(a, s1.unit_at(i)) != s2.unit_at(j):
            return False
    for k, b in enumerate(betas):
        (i, j), (i2, j2) = levels[k], levels[k + 1]
        if not (i2 > i and j2 > j):
            return False
        if mat_vec(b, s2.unit_at(j)) != s1.unit_at(i2):
            return False
        if mat_mul(b, alphas[k]) != s1.transition(i, i2):
            return False
        if mat_mul(alphas[k + 1], b) != s2.transition(j, j2):
            return False
    (im, jm), (iN, jN) = levels[m], levels[-1]
    if s1.period is None or s2.period is None:
        return False
    return (alphas[-1] == alphas[m] and im >= s1.tail_start and jm >= s2.tail_start
            and (iN - im) % s1.period == 0 and (jN - jm) % s2.period == 0)
