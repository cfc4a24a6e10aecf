# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; ``_pykernels`` is the reference twin."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef long long i64

cdef i64 NEG_C = -(1LL << 62)
NEG = NEG_C


cdef inline Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef inline bint _union(Py_ssize_t* parent, Py_ssize_t* work, Py_ssize_t* top,
                        Py_ssize_t x, Py_ssize_t y) noexcept nogil:
    cdef Py_ssize_t rx = _find(parent, x)
    cdef Py_ssize_t ry = _find(parent, y)
    if rx == ry:
        return 0
    if rx < ry:
        parent[ry] = rx
    else:
        parent[rx] = ry
    work[2 * top[0]] = x
    work[2 * top[0] + 1] = y
    top[0] += 1
    return 1


def congruence_closure(const i64[:, ::1] add, const i64[:, ::1] act,
                       const i64[::1] labels, const i64[:, ::1] seeds):
    cdef Py_ssize_t m = add.shape[0]
    cdef Py_ssize_t nact = act.shape[1]
    cdef Py_ssize_t nseed = seeds.shape[0]
    cdef Py_ssize_t x, y, z, a, r
    # each successful union pushes one pair; at most m - 1 unions
    cdef Py_ssize_t* parent = <Py_ssize_t*>malloc(m * sizeof(Py_ssize_t) + 1)
    cdef Py_ssize_t* work = <Py_ssize_t*>malloc(2 * m * sizeof(Py_ssize_t) + 2)
    cdef Py_ssize_t top = 0
    out = np.empty(m, dtype=np.int64)
    cdef i64[::1] o = out
    try:
        for x in range(m):
            parent[x] = x
        first = {}
        for x in range(m):
            lab = labels[x]
            if lab in first:
                _union(parent, work, &top, first[lab], x)
            else:
                first[lab] = x
        for r in range(nseed):
            _union(parent, work, &top, seeds[r, 0], seeds[r, 1])
        with nogil:
            while top > 0:
                top -= 1
                x = work[2 * top]
                y = work[2 * top + 1]
                for z in range(m):
                    _union(parent, work, &top, add[x, z], add[y, z])
                for a in range(nact):
                    _union(parent, work, &top, act[x, a], act[y, a])
            # roots are class minima because unions always keep the smaller root
            for x in range(m):
                o[x] = _find(parent, x)
    finally:
        free(parent)
        free(work)
    return out.tolist()


def table_axiom_violation(const i64[:, ::1] add, const i64[:, ::1] mul, i64 zero, i64 one):
    cdef Py_ssize_t n = add.shape[0]
    cdef Py_ssize_t a, b, c
    with nogil:
        for a in range(n):
            for b in range(n):
                if not (0 <= add[a, b] < n and 0 <= mul[a, b] < n):
                    with gil:
                        return (1, a, b, -1)
        for a in range(n):
            for b in range(a + 1, n):
                if add[a, b] != add[b, a]:
                    with gil:
                        return (2, a, b, -1)
        for a in range(n):
            if add[zero, a] != a:
                with gil:
                    return (3, a, -1, -1)
        for a in range(n):
            if mul[one, a] != a or mul[a, one] != a:
                with gil:
                    return (4, a, -1, -1)
        for a in range(n):
            if mul[zero, a] != zero or mul[a, zero] != zero:
                with gil:
                    return (5, a, -1, -1)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if add[add[a, b], c] != add[a, add[b, c]]:
                        with gil:
                            return (6, a, b, c)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if mul[mul[a, b], c] != mul[a, mul[b, c]]:
                        with gil:
                            return (7, a, b, c)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if mul[a, add[b, c]] != add[mul[a, b], mul[a, c]]:
                        with gil:
                            return (8, a, b, c)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if mul[add[a, b], c] != add[mul[a, c], mul[b, c]]:
                        with gil:
                            return (9, a, b, c)
    return (0, -1, -1, -1)


def join_violation(const i64[:, ::1] join, i64 bottom):
    cdef Py_ssize_t n = join.shape[0]
    cdef Py_ssize_t x, y, z
    if not 0 <= bottom < n:
        return (1, bottom, -1, -1)
    with nogil:
        for x in range(n):
            for y in range(n):
                if not 0 <= join[x, y] < n:
                    with gil:
                        return (1, x, y, -1)
        for x in range(n):
            for y in range(x + 1, n):
                if join[x, y] != join[y, x]:
                    with gil:
                        return (2, x, y, -1)
        for x in range(n):
            if join[x, x] != x:
                with gil:
                    return (3, x, -1, -1)
        for x in range(n):
            if join[bottom, x] != x:
                with gil:
                    return (4, x, -1, -1)
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if join[join[x, y], z] != join[x, join[y, z]]:
                        with gil:
                            return (5, x, y, z)
    return (0, -1, -1, -1)


def distributive_violation(const i64[:, ::1] join, const i64[:, ::1] meet):
    cdef Py_ssize_t n = join.shape[0]
    cdef Py_ssize_t x, y, z
    with nogil:
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if meet[x, join[y, z]] != join[meet[x, y], meet[x, z]]:
                        with gil:
                            return (x, y, z)
    return (-1, -1, -1)


cdef inline int _assign(i64[::1] img, i64* inv, Py_ssize_t* known, Py_ssize_t* nknown,
                        i64 x, i64 y) noexcept nogil:
    cdef i64 cur = img[x]
    if cur >= 0:
        return cur == y
    if inv[y] >= 0:
        return 0
    img[x] = y
    inv[y] = x
    known[nknown[0]] = x
    nknown[0] += 1
    return 1


def extend_morphism(const i64[:, ::1] add1, const i64[:, ::1] mul1,
                    const i64[:, ::1] add2, const i64[:, ::1] mul2, i64[::1] img):
    cdef Py_ssize_t n1 = add1.shape[0]
    cdef Py_ssize_t n2 = add2.shape[0]
    cdef Py_ssize_t x, p, q, nknown = 0
    cdef i64 a, b, ia, ib, y
    cdef int ok = 1
    cdef i64* inv = <i64*>malloc(n2 * sizeof(i64) + 1)
    cdef Py_ssize_t* known = <Py_ssize_t*>malloc(n1 * sizeof(Py_ssize_t) + 1)
    try:
        with nogil:
            for x in range(n2):
                inv[x] = -1
            for x in range(n1):
                y = img[x]
                if y >= 0:
                    if inv[y] >= 0:
                        ok = 0
                        break
                    inv[y] = x
                    known[nknown] = x
                    nknown += 1
            p = 0
            while ok and p < nknown:
                a = known[p]
                ia = img[a]
                for q in range(p + 1):
                    b = known[q]
                    ib = img[b]
                    if not _assign(img, inv, known, &nknown, add1[a, b], add2[ia, ib]):
                        ok = 0
                        break
                    if not _assign(img, inv, known, &nknown, mul1[a, b], mul2[ia, ib]):
                        ok = 0
                        break
                    if not _assign(img, inv, known, &nknown, mul1[b, a], mul2[ib, ia]):
                        ok = 0
                        break
                p += 1
    finally:
        free(inv)
        free(known)
    return ok


def maxplus_grid_images(const i64[:, ::1] mat, const i64[::1] values, i64 start, i64 stop):
    cdef Py_ssize_t n = mat.shape[0]
    cdef Py_ssize_t e = mat.shape[1]
    cdef Py_ssize_t g = values.shape[0]
    cdef Py_ssize_t i, j
    cdef i64 t, r, best, av, v
    out = np.empty((max(stop - start, 0), n), dtype=np.int64)
    cdef i64[:, ::1] o = out
    cdef i64* lam = <i64*>malloc(e * sizeof(i64) + 1)
    try:
        with nogil:
            for t in range(start, stop):
                r = t
                for j in range(e - 1, -1, -1):
                    lam[j] = values[r % g]
                    r = r // g
                for i in range(n):
                    best = NEG_C
                    for j in range(e):
                        av = mat[i, j]
                        v = lam[j]
                        if av != NEG_C and v != NEG_C and av + v > best:
                            best = av + v
                    o[t - start, i] = best
    finally:
        free(lam)
    return [tuple(row) for row in out.tolist()]
