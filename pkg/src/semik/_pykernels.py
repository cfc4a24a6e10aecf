"""Pure-Python kernels.

Reference twin of ``_ckernels.pyx``: same signatures, same results, same
scan order.  Inputs are nested lists of ints (``kernels`` converts).
"""

NEG = -(1 << 62)


def congruence_closure(add, act, labels, seeds):
    """Smallest congruence containing the partition ``labels`` and ``seeds``.

    ``add[x][y]`` is the carrier addition, ``act[x][a]`` the action of
    scalar ``a``.  Returns, for each element, the least element of its class.
    """
    m = len(add)
    nact = len(act[0]) if m else 0
    parent = list(range(m))
    work = []

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return
        if rx < ry:
            parent[ry] = rx
        else:
            parent[rx] = ry
        work.append((x, y))

    first = {}
    for x in range(m):
        lab = labels[x]
        if lab in first:
            union(first[lab], x)
        else:
            first[lab] = x
    for x, y in seeds:
        union(x, y)

    while work:
        x, y = work.pop()
        ax, ay = add[x], add[y]
        for z in range(m):
            union(ax[z], ay[z])
        sx, sy = act[x], act[y]
        for a in range(nact):
            union(sx[a], sy[a])

    out = [0] * m
    least = {}
    for x in range(m):
        r = find(x)
        if r not in least:
            least[r] = x
        out[x] = least[r]
    return out


def table_axiom_violation(add, mul, zero, one):
    """First violated semiring axiom as ``(code, a, b, c)``; code 0 means none.

    Codes: 1 entry out of range, 2 addition not commutative, 3 zero not
    additive identity, 4 one not multiplicative identity, 5 zero not
    absorbing, 6 addition not associative, 7 multiplication not associative,
    8 left distributivity, 9 right distributivity.
    """
    n = len(add)
    for a in range(n):
        for b in range(n):
            if not (0 <= add[a][b] < n and 0 <= mul[a][b] < n):
                return (1, a, b, -1)
    for a in range(n):
        for b in range(a + 1, n):
            if add[a][b] != add[b][a]:
                return (2, a, b, -1)
    for a in range(n):
        if add[zero][a] != a:
            return (3, a, -1, -1)
    for a in range(n):
        if mul[one][a] != a or mul[a][one] != a:
            return (4, a, -1, -1)
    for a in range(n):
        if mul[zero][a] != zero or mul[a][zero] != zero:
            return (5, a, -1, -1)
    for a in range(n):
        ra = add[a]
        for b in range(n):
            rab = add[ra[b]]
            rb = add[b]
            for c in range(n):
                if rab[c] != ra[rb[c]]:
                    return (6, a, b, c)
    for a in range(n):
        ma = mul[a]
        for b in range(n):
            mab = mul[ma[b]]
            mb = mul[b]
            for c in range(n):
                if mab[c] != ma[mb[c]]:
                    return (7, a, b, c)
    for a in range(n):
        ma = mul[a]
        for b in range(n):
            rb = add[b]
            for c in range(n):
                if ma[rb[c]] != add[ma[b]][ma[c]]:
                    return (8, a, b, c)
    for a in range(n):
        for b in range(n):
            sab = mul[add[a][b]]
            for c in range(n):
                if sab[c] != add[mul[a][c]][mul[b][c]]:
                    return (9, a, b, c)
    return (0, -1, -1, -1)


def join_violation(join, bottom):
    """First violated join-semilattice law as ``(code, x, y, z)``.

    Codes: 1 out of range, 2 not commutative, 3 not idempotent, 4 bottom
    not neutral, 5 not associative.
    """
    n = len(join)
    if not 0 <= bottom < n:
        return (1, bottom, -1, -1)
    for x in range(n):
        for y in range(n):
            if not 0 <= join[x][y] < n:
                return (1, x, y, -1)
    for x in range(n):
        for y in range(x + 1, n):
            if join[x][y] != join[y][x]:
                return (2, x, y, -1)
    for x in range(n):
        if join[x][x] != x:
            return (3, x, -1, -1)
    for x in range(n):
        if join[bottom][x] != x:
            return (4, x, -1, -1)
    for x in range(n):
        jx = join[x]
        for y in range(n):
            jxy = join[jx[y]]
            jy = join[y]
            for z in range(n):
                if jxy[z] != jx[jy[z]]:
                    return (5, x, y, z)
    return (0, -1, -1, -1)


def distributive_violation(join, meet):
    """First triple with ``x ^ (y v z) != (x ^ y) v (x ^ z)``, else ``(-1, -1, -1)``."""
    n = len(join)
    for x in range(n):
        mx = meet[x]
        for y in range(n):
            jy = join[y]
            jxy = join[mx[y]]
            for z in range(n):
                if mx[jy[z]] != jxy[mx[z]]:
                    return (x, y, z)
    return (-1, -1, -1)


def extend_morphism(add1, mul1, add2, mul2, img):
    """Propagate a partial map along both operations, in place.

    Returns 1 if the closure is a well-defined injective partial
    homomorphism, else 0.  Unassigned entries of ``img`` are -1.
    """
    n1 = len(add1)
    n2 = len(add2)
    inv = [-1] * n2
    known = []
    for x in range(n1):
        y = img[x]
        if y >= 0:
            if inv[y] >= 0:
                return 0
            inv[y] = x
            known.append(x)

    def assign(x, y):
        cur = img[x]
        if cur >= 0:
            return cur == y
        if inv[y] >= 0:
            return False
        img[x] = y
        inv[y] = x
        known.append(x)
        return True

    p = 0
    while p < len(known):
        a = known[p]
        ia = img[a]
        for q in range(p + 1):
            b = known[q]
            ib = img[b]
            if not assign(add1[a][b], add2[ia][ib]):
                return 0
            if not assign(mul1[a][b], mul2[ia][ib]):
                return 0
            if not assign(mul1[b][a], mul2[ib][ia]):
                return 0
        p += 1
    return 1


def maxplus_grid_images(mat, values, start, stop):
    """Images ``mat (x) lam`` for grid points ``start <= t < stop``.

    Grid point ``t`` has coefficient ``j`` equal to ``values[d_j]`` where
    ``d_0 d_1 ...`` are the base-``len(values)`` digits of ``t``, most
    significant first (``itertools.product`` order).  ``NEG`` encodes -inf.
    """
    n = len(mat)
    e = len(mat[0]) if n else 0
    g = len(values)
    out = []
    lam = [0] * e
    for t in range(start, stop):
        r = t
        for j in range(e - 1, -1, -1):
            lam[j] = values[r % g]
            r //= g
        row = []
        for i in range(n):
            best = NEG
            mi = mat[i]
            for j in range(e):
                a = mi[j]
                v = lam[j]
                if a != NEG and v != NEG and a + v > best:
                    best = a + v
            row.append(best)
        out.append(tuple(row))
    return out
