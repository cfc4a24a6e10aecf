import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semik.core import BOOL, SemiMatrix, is_idempotent_matrix
from semik.errors import ArgumentTooSmall
from semik.lattice import (
    BoolSemimodule, are_isomorphic, cardinality_class, column_span_bool, direct_sum,
    free_bool, is_free_bool, is_projective, k0_distinct_by_cardinality, power_relation_solutions,
    prime_avoiding_powers, prime_exponents, q_chain, validate, weak_dimension_bool,
)

from strategies import matrices

P = BoolSemimodule.from_coords([(0, 0), (0, 1), (1, 1)])
# bottom, three atoms, top
M3 = BoolSemimodule(5, (
    (0, 1, 2, 3, 4),
    (1, 1, 4, 4, 4),
    (2, 4, 2, 4, 4),
    (3, 4, 4, 3, 4),
    (4, 4, 4, 4, 4),
), 0)


def is_hom(M, N, f):
    return f[M.bottom] == N.bottom and all(
        f[M.join[a][b]] == N.join[f[a]][f[b]] for a in range(M.n) for b in range(M.n))


def test_validate():
    assert validate(q_chain(2)) is None
    assert validate(free_bool(2)) is None
    assert validate(M3) is None
    bad = BoolSemimodule(3, ((0, 1, 2), (1, 1, 2), (2, 1, 2)), 0)
    v = validate(bad)
    assert v is not None and "commutative" in v.law


def test_nonassociative_join_reported():
    join = [[0, 1, 2, 3], [1, 1, 3, 2], [2, 3, 2, 3], [3, 2, 3, 3]]
    v = validate(BoolSemimodule(4, join, 0))
    assert v is not None and "associative" in v.law


def test_direct_sums():
    triv = BoolSemimodule(1, ((0,),), 0)
    assert are_isomorphic(direct_sum(P, triv), P) is not None
    grid = direct_sum(q_chain(2), q_chain(3))
    assert grid.n == 6 and validate(grid) is None
    assert are_isomorphic(direct_sum(free_bool(1), free_bool(1)), free_bool(2)) is not None


def test_isomorphism_examples():
    assert are_isomorphic(q_chain(6), direct_sum(q_chain(2), q_chain(3))) is None
    f = are_isomorphic(P, P)
    assert f == {x: x for x in range(P.n)}
    g = are_isomorphic(column_span_bool(SemiMatrix.identity(BOOL, 2)), free_bool(2))
    assert g is not None


def test_projectivity():
    assert is_projective(P)
    assert not is_projective(M3)
    assert is_projective(free_bool(3))


def test_freeness():
    assert is_free_bool(free_bool(3)) == 3
    assert is_free_bool(P) is None
    assert is_free_bool(q_chain(3)) is None


def test_column_span_examples():
    A = SemiMatrix.from_rows(BOOL, [[1, 0], [1, 1]])
    assert is_idempotent_matrix(A)
    assert column_span_bool(A).coords == ((0, 0), (0, 1), (1, 1))
    assert column_span_bool(SemiMatrix.zeros(BOOL, 2, 2)).n == 1


def test_chains():
    assert are_isomorphic(q_chain(2), free_bool(1)) is not None
    q5 = q_chain(5)
    assert q5.n == 5 and is_projective(q5) and is_free_bool(q5) is None
    with pytest.raises(ArgumentTooSmall):
        q_chain(1)


def test_cardinality():
    assert [cardinality_class(q_chain(p)) for p in (2, 3, 7)] == [2, 3, 7]
    assert cardinality_class(free_bool(4)) == 16
    assert cardinality_class(P) == 3
    assert k0_distinct_by_cardinality(q_chain(2), q_chain(3)) == "DISTINCT"
    assert k0_distinct_by_cardinality(P, P) == "INCONCLUSIVE"
    assert k0_distinct_by_cardinality(free_bool(2), direct_sum(q_chain(2), q_chain(2))) == "INCONCLUSIVE"


MODULES = [P, M3, q_chain(3), q_chain(4), free_bool(2), direct_sum(P, q_chain(2))]


@pytest.mark.parametrize("M,N", list(itertools.product(MODULES, repeat=2)))
def test_cardinality_multiplicative(M, N):
    assert cardinality_class(direct_sum(M, N)) == cardinality_class(M) * cardinality_class(N)


@given(st.integers(1, 5).flatmap(lambda n: matrices("BOOL", n, n)))
def test_spans_of_idempotents_are_projective(A):
    if is_idempotent_matrix(A):
        assert is_projective(column_span_bool(A))


def _brute_dim(M):
    # smallest subset whose join-closure is everything
    elems = [x for x in range(M.n) if x != M.bottom]
    for k in range(len(elems) + 1):
        for sub in itertools.combinations(elems, k):
            reach = {M.bottom}
            for x in sub:
                reach |= {M.join[r][x] for r in reach}
            if len(reach) == M.n:
                return k


@pytest.mark.parametrize("M", MODULES)
def test_weak_dimension_matches_brute_force(M):
    assert weak_dimension_bool(M) == _brute_dim(M)


def test_free_iso_to_column_span():
    for n in range(4):
        M = free_bool(n)
        k = is_free_bool(M)
        assert k == n
        if n:
            assert are_isomorphic(M, column_span_bool(SemiMatrix.identity(BOOL, n))) is not None


def test_random_relabelling_is_found():
    rng = random.Random(3)
    for M in MODULES:
        perm = list(range(M.n))
        rng.shuffle(perm)
        inv = {p: i for i, p in enumerate(perm)}
        join = tuple(tuple(perm[M.join[inv[a]][inv[b]]] for b in range(M.n)) for a in range(M.n))
        N = BoolSemimodule(M.n, join, perm[M.bottom])
        f = are_isomorphic(M, N)
        assert f is not None and is_hom(M, N, f)


def test_arithmetic_helpers():
    assert prime_exponents(360) == {2: 3, 3: 2, 5: 1}
    assert power_relation_solutions(3, 2, 20) == []
    assert power_relation_solutions(4, 2, 5) == [(0, 2), (1, 3), (2, 4), (3, 5)]
    assert prime_avoiding_powers(30, [2, 3, 5, 7], 4) == 7
    assert prime_avoiding_powers(210, [2, 3, 5, 7], 4) is None
