"""Deliberately simple reference implementations used only by the tests.

None of these share code paths with the package beyond reading the
multiplication table.
"""
from __future__ import annotations

import itertools
from math import gcd

import numpy as np


def naive_homs(X, G) -> list[tuple[int, ...]]:
    """All homomorphisms X -> G as full element maps, by trying every tuple
    of generator images and checking the whole multiplication table."""
    tx, tg = X.table, G.table
    gens = list(X.generators)
    out = []
    for imgs in itertools.product(range(G.order), repeat=len(gens)):
        phi = {0: 0}
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, u in zip(gens, imgs):
                    y = int(tx[x, g])
                    v = int(tg[phi[x], u])
                    if y in phi:
                        if phi[y] != v:
                            ok = False
                            break
                    else:
                        phi[y] = v
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok or len(phi) != X.order:
            continue
        m = np.array([phi[i] for i in range(X.order)])
        if np.array_equal(tg[m[:, None], m[None, :]], m[tx]):
            out.append(tuple(m.tolist()))
    return sorted(set(out))


def rank_mod_p(M: np.ndarray, p: int) -> int:
    A = np.array(M, dtype=np.int64) % p
    r = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
        if r == rows:
            break
    return r


def bar_h2_dim(G, p: int) -> int:
    """dim over F_p of H^2(G, F_p) from the inhomogeneous bar complex."""
    n = G.order
    t = G.table
    # d1: C^1 -> C^2, (df)(g,h) = f(h) - f(gh) + f(g)
    d1 = np.zeros((n * n, n), dtype=np.int64)
    for g in range(n):
        for h in range(n):
            r = g * n + h
            d1[r, h] += 1
            d1[r, t[g, h]] -= 1
            d1[r, g] += 1
    # d2: C^2 -> C^3, (df)(g,h,k) = f(h,k) - f(gh,k) + f(g,hk) - f(g,h)
    d2 = np.zeros((n**3, n * n), dtype=np.int64)
    for g in range(n):
        for h in range(n):
            for k in range(n):
                r = (g * n + h) * n + k
                d2[r, h * n + k] += 1
                d2[r, t[g, h] * n + k] -= 1
                d2[r, g * n + t[h, k]] += 1
                d2[r, g * n + h] -= 1
    z2 = n * n - rank_mod_p(d2, p)
    b2 = rank_mod_p(d1, p)
    return z2 - b2


def p_rank(invariants, p: int) -> int:
    return sum(1 for d in invariants if d % p == 0)


def determinantal_diagonal(M) -> list[int]:
    """Smith invariants as ratios of gcds of k x k minors."""
    M = [list(map(int, r)) for r in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0

    def det(A):
        if len(A) == 1:
            return A[0][0]
        return sum((-1) ** j * A[0][j] * det([r[:j] + r[j + 1 :] for r in A[1:]]) for j in range(len(A)))

    D = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = gcd(g, det([[M[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        D.append(g)
    diag = [D[i] // D[i - 1] for i in range(1, len(D))]
    return diag + [0] * (min(rows, cols) - len(diag))
