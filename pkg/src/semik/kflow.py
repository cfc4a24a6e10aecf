"""Simplicial ordered groups with order unit, positive maps, and direct limits."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from semik.errors import ShapeMismatch, StageOutOfRange, UnitalityViolation

DEFAULT_DEPTH = 32


def _mat(rows) -> tuple:
    return tuple(tuple(int(x) for x in r) for r in rows)


def mat_vec(M: Sequence[Sequence[int]], v: Sequence[int]) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def mat_mul(A, B) -> tuple:
    if A and B and len(A[0]) != len(B):
        raise ShapeMismatch(f"{len(A)}x{len(A[0])} * {len(B)}x{len(B[0])}")
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, c)) for c in cols) for row in A)


def identity(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def rank(M: Sequence[Sequence[int]]) -> int:
    """Exact rank over the rationals."""
    rows = [[Fraction(x) for x in r] for r in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c] / rows[r][c]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def is_injective(M) -> bool:
    return rank(M) == (len(M[0]) if M else 0)


@dataclass(frozen=True)
class SimplicialOrderedGroup:
    """``(Z^r, (Z+)^r, unit)``."""

    rank: int
    unit: tuple

    def __post_init__(self):
        unit = tuple(int(x) for x in self.unit)
        if self.rank < 1:
            raise ShapeMismatch("rank must be at least 1")
        if len(unit) != self.rank:
            raise ShapeMismatch(f"unit of length {len(unit)} for rank {self.rank}")
        if any(x < 0 for x in unit):
            raise ShapeMismatch("unit must be non-negative")
        object.__setattr__(self, "unit", unit)

    @classmethod
    def from_unit(cls, unit: Sequence[int]) -> SimplicialOrderedGroup:
        return cls(len(unit), tuple(unit))

    def is_positive(self, v: Sequence[int]) -> bool:
        return all(x >= 0 for x in v)

    def to_json(self):
        return {"rank": self.rank, "unit": list(self.unit)}


@dataclass(frozen=True)
class PositiveMorphism:
    """Non-negative integer matrix ``Z^r -> Z^s`` (``s`` rows, ``r`` columns)."""

    matrix: tuple
    src: SimplicialOrderedGroup | None = None
    dst: SimplicialOrderedGroup | None = None

    def __post_init__(self):
        M = _mat(self.matrix)
        if not M or not M[0] or len({len(r) for r in M}) != 1:
            raise ShapeMismatch("matrix must be non-empty and rectangular")
        if any(x < 0 for r in M for x in r):
            raise ShapeMismatch("positive morphisms have non-negative entries")
        if self.src is not None and self.src.rank != len(M[0]):
            raise ShapeMismatch(f"{len(M[0])} columns for source rank {self.src.rank}")
        if self.dst is not None and self.dst.rank != len(M):
            raise ShapeMismatch(f"{len(M)} rows for target rank {self.dst.rank}")
        object.__setattr__(self, "matrix", M)

    @property
    def shape(self):
        return len(self.matrix), len(self.matrix[0])

    def __call__(self, v):
        if len(v) != self.shape[1]:
            raise ShapeMismatch(f"vector of length {len(v)} for {self.shape[1]} columns")
        return mat_vec(self.matrix, v)


def morphism_compose(f: PositiveMorphism, g: PositiveMorphism) -> PositiveMorphism:
    """``f o g``: apply ``g`` first."""
    if f.shape[1] != g.shape[0]:
        raise ShapeMismatch(f"cannot compose {f.shape} after {g.shape}")
    return PositiveMorphism(mat_mul(f.matrix, g.matrix), g.src, f.dst)


def is_unital(M, u_src: Sequence[int], u_dst: Sequence[int]) -> bool:
    M = M.matrix if isinstance(M, PositiveMorphism) else _mat(M)
    if len(M[0]) != len(u_src) or len(M) != len(u_dst):
        raise ShapeMismatch(f"{len(M)}x{len(M[0])} matrix, units of length {len(u_src)}, {len(u_dst)}")
    return mat_vec(M, u_src) == tuple(u_dst)


@dataclass(frozen=True)
class LimitElement:
    stage: int
    vector: tuple

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(x) for x in self.vector))


@dataclass(frozen=True)
class LimitVerdict:
    verdict: str
    stage: int | None = None

    def __str__(self):
        return self.verdict if self.stage is None else f"{self.verdict}({self.stage})"

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.stage is not None:
            out["stage"] = self.stage
        return out


@dataclass(frozen=True)
class DirectLimitSystem:
    """Stages ``groups[k]`` joined by ``maps[k]: groups[k] -> groups[k+1]``.

    With ``period`` p the last p maps repeat forever; without it the system
    is a finite prefix and nothing is claimed beyond its last stage.
    """

    groups: tuple
    maps: tuple
    period: int | None = None

    def __post_init__(self):
        groups = tuple(g if isinstance(g, SimplicialOrderedGroup) else SimplicialOrderedGroup.from_unit(g)
                       for g in self.groups)
        maps = tuple(m if isinstance(m, PositiveMorphism) else PositiveMorphism(m) for m in self.maps)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "maps", maps)
        if not groups:
            raise ShapeMismatch("a system needs at least one stage")
        if len(maps) != len(groups) - 1:
            raise ShapeMismatch(f"{len(groups)} stages need {len(groups) - 1} maps, got {len(maps)}")
        for k, f in enumerate(maps):
            if f.shape != (groups[k + 1].rank, groups[k].rank):
                raise ShapeMismatch(f"map {k} has shape {f.shape}")
            if not is_unital(f, groups[k].unit, groups[k + 1].unit):
                raise UnitalityViolation(k)
        if self.period is not None:
            p = self.period
            if not 1 <= p <= len(maps):
                raise ShapeMismatch(f"period {p} needs at least {p} declared maps")
            if groups[-1].rank != groups[len(maps) - p].rank:
                raise ShapeMismatch("periodic block does not return to its starting rank")

    @property
    def tail_start(self) -> int | None:
        return None if self.period is None else len(self.maps) - self.period

    @property
    def last_declared(self) -> int:
        return len(self.groups) - 1

    def has_stage(self, k: int) -> bool:
        return k >= 0 and (self.period is not None or k <= self.last_declared)

    def stage_map(self, k: int) -> PositiveMorphism:
        """The map from stage ``k`` to ``k + 1``."""
        if k < 0 or not self.has_stage(k + 1):
            raise StageOutOfRange(f"no map out of stage {k}")
        if k < len(self.maps):
            return self.maps[k]
        return self.maps[self.tail_start + (k - len(self.maps)) % self.period]

    def rank_at(self, k: int) -> int:
        if not self.has_stage(k):
            raise StageOutOfRange(f"stage {k}")
        if k < len(self.groups):
            return self.groups[k].rank
        return self.stage_map(k - 1).shape[0]

    def unit_at(self, k: int) -> tuple:
        if not self.has_stage(k):
            raise StageOutOfRange(f"stage {k}")
        if k < len(self.groups):
            return self.groups[k].unit
        u = self.groups[-1].unit
        for j in range(len(self.groups) - 1, k):
            u = self.stage_map(j)(u)
        return u

    def push(self, v: Sequence[int], frm: int, to: int) -> tuple:
        if to < frm:
            raise StageOutOfRange(f"cannot push from stage {frm} back to {to}")
        v = tuple(v)
        for k in range(frm, to):
            v = self.stage_map(k)(v)
        return v

    def transition(self, frm: int, to: int) -> tuple:
        """Matrix of the composite map from stage ``frm`` to ``to``."""
        M = identity(self.rank_at(frm))
        for k in range(frm, to):
            M = mat_mul(self.stage_map(k).matrix, M)
        return M

    def injective_from(self, k: int) -> bool:
        """Every map out of stages ``>= k`` is injective (needs a period)."""
        if self.period is None:
            return False
        stop = max(k, self.tail_start) + self.period
        return all(is_injective(self.stage_map(j).matrix) for j in range(k, stop))

    def check(self, e: LimitElement):
        if not self.has_stage(e.stage):
            raise StageOutOfRange(f"stage {e.stage}")
        if len(e.vector) != self.rank_at(e.stage):
            raise ShapeMismatch(f"vector of length {len(e.vector)} at stage {e.stage}")

    def to_json(self):
        out = {"units": [list(g.unit) for g in self.groups],
               "maps": [[list(r) for r in f.matrix] for f in self.maps]}
        if self.period is not None:
            out["period"] = self.period
        return out


def limit_equal(sys: DirectLimitSystem, e1: LimitElement, e2: LimitElement,
                depth: int = DEFAULT_DEPTH) -> LimitVerdict:
    """EQUAL at the first stage where both images agree, DISTINCT once the
    remaining maps are all injective, UNKNOWN when neither is reached."""
    sys.check(e1)
    sys.check(e2)
    k = max(e1.stage, e2.stage)
    v1 = sys.push(e1.vector, e1.stage, k)
    v2 = sys.push(e2.vector, e2.stage, k)
    stop = k + depth
    while True:
        if v1 == v2:
            return LimitVerdict("EQUAL", k)
        if sys.injective_from(k):
            return LimitVerdict("DISTINCT")
        if k >= stop or not sys.has_stage(k + 1):
            return LimitVerdict("UNKNOWN")
        f = sys.stage_map(k)
        v1, v2 = f(v1), f(v2)
        k += 1


def limit_positive(sys: DirectLimitSystem, e: LimitElement,
                   depth: int = DEFAULT_DEPTH) -> LimitVerdict:
    """POSITIVE at the first stage where the image is in the cone.

    NOT_WITHIN_DEPTH when ``depth`` pushes found none and the tail is
    injective (the element never becomes zero); UNKNOWN otherwise.
    """
    sys.check(e)
    k = e.stage
    v = e.vector
    stop = k + depth
    while True:
        if all(x >= 0 for x in v):
            return LimitVerdict("POSITIVE", k)
        if k >= stop or not sys.has_stage(k + 1):
            break
        v = sys.stage_map(k)(v)
        k += 1
    if sys.has_stage(k + 1) and sys.injective_from(k):
        return LimitVerdict("NOT_WITHIN_DEPTH")
    return LimitVerdict("UNKNOWN")
