"""Finitely generated subsemimodules of the max-plus space T^n."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from semik import kernels
from semik.core import NEG_INF, TROP, SemiMatrix, trop, trop_str
from semik.errors import DimensionMismatch, KernelMismatch

DEFAULT_PROBE_DEPTH = 6
GRID_BUDGET = 2_000_000


def worker_count() -> int:
    """Worker cap from ``SEMIK_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("SEMIK_THREADS", "1")))
    except ValueError:
        return 1


def trop_vector(xs: Sequence) -> tuple:
    return tuple(trop(x) for x in xs)


def _is_zero(v) -> bool:
    return all(x is NEG_INF for x in v)


@dataclass(frozen=True)
class TropSpan:
    ambient_dim: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(trop_vector(g) for g in self.generators)
        if not gens:
            raise DimensionMismatch("a span needs at least one generator")
        for g in gens:
            if len(g) != self.ambient_dim:
                raise DimensionMismatch(f"generator of length {len(g)} in T^{self.ambient_dim}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_matrix(cls, A: SemiMatrix) -> TropSpan:
        if A.kernel is not TROP:
            raise KernelMismatch(f"expected a TROP matrix, got {A.kernel.label}")
        return cls(A.rows, tuple(A.column(j) for j in range(A.cols)))

    def to_json(self):
        return {"ambient": self.ambient_dim,
                "generators": [[trop_str(x) for x in g] for g in self.generators]}


def combine(generators: Sequence[tuple], coeffs: Sequence, dim: int | None = None) -> tuple:
    """``max_j (g_j + c_j)`` coordinatewise."""
    if dim is None:
        dim = len(generators[0])
    out = []
    for i in range(dim):
        acc = NEG_INF
        for g, c in zip(generators, coeffs):
            acc = TROP.add(acc, TROP.mul(g[i], c))
        out.append(acc)
    return tuple(out)


def _principal(x, generators):
    lam = []
    for g in generators:
        best = None
        for xi, gi in zip(x, g):
            if gi is NEG_INF:
                continue
            r = NEG_INF if xi is NEG_INF else xi - gi
            if best is None or r < best:
                best = r
        lam.append(NEG_INF if best is None else best)
    return lam


def trop_membership(x: Sequence, sp: TropSpan) -> list | None:
    """Coefficients ``lam`` with ``max_j (g_j + lam_j) = x``, or ``None``.

    Uses the residuated (greatest) solution; if any solution exists this one
    does, so ``None`` is exact.
    """
    x = trop_vector(x)
    if len(x) != sp.ambient_dim:
        raise DimensionMismatch(f"vector of length {len(x)} in T^{sp.ambient_dim}")
    lam = _principal(x, sp.generators)
    if combine(sp.generators, lam, sp.ambient_dim) != x:
        return None
    return lam


def _in_span_of(x, others, dim):
    if not others:
        return _is_zero(x)
    return trop_membership(x, TropSpan(dim, tuple(others))) is not None


def _proportional(u, v):
    if [a is NEG_INF for a in u] != [b is NEG_INF for b in v]:
        return False
    diffs = {a - b for a, b in zip(u, v) if a is not NEG_INF}
    return len(diffs) <= 1


def extremal_generators(sp: TropSpan) -> TropSpan | None:
    """The irredundant generating subfamily; ``None`` for the zero span.

    Zero generators and later scalar multiples of earlier ones are dropped
    first; the generators outside the span of the rest are then exactly the
    extremal ones.
    """
    kept = []
    for g in sp.generators:
        if _is_zero(g) or any(_proportional(g, h) for h in kept):
            continue
        kept.append(g)
    dim = sp.ambient_dim
    ext = [g for k, g in enumerate(kept) if not _in_span_of(g, kept[:k] + kept[k + 1:], dim)]
    return TropSpan(dim, tuple(ext)) if ext else None


def weak_dimension(sp: TropSpan) -> int:
    ext = extremal_generators(sp)
    return 0 if ext is None else len(ext.generators)


def is_weakly_independent(family: Sequence[Sequence]) -> bool:
    fam = [trop_vector(v) for v in family]
    if not fam:
        return True
    dim = len(fam[0])
    if any(len(v) != dim for v in fam):
        raise DimensionMismatch("family members of different lengths")
    return not any(_in_span_of(v, fam[:k] + fam[k + 1:], dim) for k, v in enumerate(fam))


def direct_sum(P: TropSpan, Q: TropSpan) -> TropSpan:
    """Block embedding of both generator families into T^(n+m)."""
    pad_p = (NEG_INF,) * Q.ambient_dim
    pad_q = (NEG_INF,) * P.ambient_dim
    gens = tuple(g + pad_p for g in P.generators) + tuple(pad_q + g for g in Q.generators)
    return TropSpan(P.ambient_dim + Q.ambient_dim, gens)


@dataclass(frozen=True)
class Freeness:
    verdict: str  # FREE | NOT_FREE | UNKNOWN
    rank: int | None = None
    witness: tuple | None = None
    extremals: TropSpan | None = field(default=None, compare=False)

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.rank is not None:
            out["rank"] = self.rank
        if self.witness is not None:
            out["witness"] = [[trop_str(c) for c in lam] for lam in self.witness]
        return out


def _private_rows(gens, dim):
    """Columns lacking a coordinate where they alone are finite."""
    lacking = []
    for k, g in enumerate(gens):
        private = any(
            g[i] is not NEG_INF and all(h[i] is NEG_INF for m, h in enumerate(gens) if m != k)
            for i in range(dim))
        if not private:
            lacking.append(k)
    return lacking


def probe_grid_witness(gens: Sequence[tuple], depth: int = DEFAULT_PROBE_DEPTH,
                       threads: int | None = None, backend=None) -> tuple | None:
    """First colliding pair of coefficient vectors on the probe grid.

    Grid values are ``0, -1, ..., -depth, -inf`` in that order, vectors
    enumerated in ``itertools.product`` order.  The witness is the earliest
    vector whose image repeats, paired with the earliest vector sharing that
    image, independent of how the grid is partitioned across threads.
    """
    kb = backend or kernels
    gens = list(gens)
    e = len(gens)
    dim = len(gens[0])
    values = [Fraction(-v) for v in range(depth + 1)] + [NEG_INF]
    g = len(values)
    total = g ** e
    if total > GRID_BUDGET:
        return None
    denom = 1
    for col in gens:
        for x in col:
            if x is not NEG_INF:
                denom = math.lcm(denom, x.denominator)
    mat = [[kernels.NEG if gens[j][i] is NEG_INF else int(gens[j][i] * denom) for j in range(e)]
           for i in range(dim)]
    scaled = [kernels.NEG if v is NEG_INF else int(v * denom) for v in values]

    workers = threads or worker_count()
    chunk = max(1, -(-total // workers))
    bounds = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: kb.maxplus_grid_images(mat, scaled, b[0], b[1]), bounds))
    else:
        parts = [kb.maxplus_grid_images(mat, scaled, s, t) for s, t in bounds]

    first = {}
    t = 0
    for part in parts:
        for img in part:
            prev = first.get(img)
            if prev is not None:
                return _grid_point(prev, values, e), _grid_point(t, values, e)
            first[img] = t
            t += 1
    return None


def _grid_point(t, values, e):
    g = len(values)
    digits = []
    for _ in range(e):
        digits.append(values[t % g])
        t //= g
    return tuple(reversed(digits))


def _constructive_witness(gens, k, dim):
    # others at 0; push coefficient k low enough that it never attains a max
    bound = None
    for i in range(dim):
        if gens[k][i] is NEG_INF:
            continue
        other = max(h[i] for m, h in enumerate(gens) if m != k and h[i] is not NEG_INF)
        gap = other - gens[k][i]
        bound = gap if bound is None or gap < bound else bound
    t1 = Fraction(0) if bound is None else min(Fraction(0), bound)
    lam = tuple(t1 if m == k else Fraction(0) for m in range(len(gens)))
    mu = tuple(t1 - 1 if m == k else Fraction(0) for m in range(len(gens)))
    return lam, mu


def verify_witness(gens: Sequence[tuple], witness) -> bool:
    lam, mu = witness
    return tuple(lam) != tuple(mu) and combine(gens, lam) == combine(gens, mu)


def is_free_trop(sp: TropSpan, depth: int = DEFAULT_PROBE_DEPTH,
                 threads: int | None = None) -> Freeness:
    """Three-valued freeness of a span.

    A free span has the extremal generators as its basis, so freeness is
    injectivity of their coefficient map.  FREE is certified when every
    extremal generator owns a coordinate where all others are -inf; NOT_FREE
    carries two distinct coefficient vectors with equal images, taken from
    the probe grid when it contains one.
    """
    ext = extremal_generators(sp)
    if ext is None:
        return Freeness("FREE", 0)
    gens = ext.generators
    dim = sp.ambient_dim
    lacking = _private_rows(gens, dim)
    if not lacking:
        return Freeness("FREE", len(gens), extremals=ext)
    witness = probe_grid_witness(gens, depth, threads)
    if witness is None:
        witness = _constructive_witness(gens, lacking[0], dim)
    if verify_witness(gens, witness):
        return Freeness("NOT_FREE", witness=witness, extremals=ext)
    return Freeness("UNKNOWN", extremals=ext)
