"""Every group of small order, up to isomorphism.

A group of order n at most 32 is solvable, so it has a normal subgroup N of
prime index p. Writing ``G = N<t>`` with ``t n t^-1 = α(n)`` and
``t^p = z`` shows that G is determined by (N, α, z) where α is an
automorphism of N with ``α(z) = z`` and ``α^p`` equal to conjugation by z.
Running α over conjugacy class representatives in Aut(N) and z over the
admissible elements gives every group; isomorphic duplicates are removed
with invariants and an explicit isomorphism search.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .grpcore import FiniteGroup, center, commutator_subgroup
from .homlab import automorphisms, find_isomorphism, order_histogram
from .modlin import factorize

# number of groups of each order 1..32
KNOWN_COUNTS = {
    1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1, 12: 5,
    13: 1, 14: 2, 15: 1, 16: 14, 17: 1, 18: 5, 19: 1, 20: 5, 21: 2, 22: 2,
    23: 1, 24: 15, 25: 2, 26: 2, 27: 5, 28: 4, 29: 1, 30: 4, 31: 1, 32: 51,
}
MAX_ORDER = 32


def fingerprint(G: FiniteGroup) -> tuple:
    """Isomorphism invariant used to bucket candidates."""
    t = G.table
    orders = G.element_orders
    cls = G.class_of
    sizes = np.bincount(cls)
    class_data = sorted(zip(sizes[cls].tolist(), orders.tolist()))
    sq = t[np.arange(G.order), np.arange(G.order)]
    roots = np.bincount(sq, minlength=G.order)
    root_data = sorted(zip(orders.tolist(), roots.tolist()))
    cent = (t == t.T).sum(axis=1)
    cent_data = sorted(zip(orders.tolist(), cent.tolist()))
    return (
        G.order,
        order_histogram(G),
        center(G).order,
        commutator_subgroup(G).order,
        tuple(class_data),
        tuple(root_data),
        tuple(cent_data),
    )


def _cyclic_extension(N: FiniteGroup, alpha: np.ndarray, z: int, p: int) -> FiniteGroup:
    """Elements ``n t^i`` at index ``i*|N| + n``."""
    m = N.order
    pows = [np.arange(m)]
    for _ in range(p - 1):
        pows.append(alpha[pows[-1]])
    A = np.array(pows)  # A[i, b] = α^i(b)
    tab = np.empty((p * m, p * m), dtype=np.int64)
    a = np.arange(m)
    for i in range(p):
        for j in range(p):
            prod = N.table[a[:, None], A[i][None, :]]  # a α^i(b)
            k = i + j
            if k >= p:
                prod = N.table[prod, z]
                k -= p
            tab[i * m : (i + 1) * m, j * m : (j + 1) * m] = k * m + prod
    gens = list(N.generators) + [m]
    return FiniteGroup(tab, generators=gens, validate=True)


def _extension_candidates(N: FiniteGroup, p: int):
    auts = automorphisms(N)
    maps = auts.maps
    if N.order == 1:
        yield np.zeros(1, dtype=np.int64), 0
        return
    index = {r.tobytes(): i for i, r in enumerate(maps)}
    inv_maps = np.empty_like(maps)
    for i, r in enumerate(maps):
        inv_maps[i][r] = np.arange(N.order)
    conj_rows = {}
    for z in range(N.order):
        # x -> z x z^-1
        conj_rows.setdefault(N.conj[N.inv[z]].astype(np.int64).tobytes(), []).append(z)
    done = np.zeros(len(maps), dtype=bool)
    for i in range(len(maps)):
        if done[i]:
            continue
        alpha = maps[i]
        # conjugacy class of alpha in Aut(N): beta alpha beta^-1
        orbit = np.take_along_axis(maps, alpha[inv_maps], axis=1)
        for row in np.unique(orbit, axis=0):
            done[index[row.tobytes()]] = True
        ap = np.arange(N.order)
        for _ in range(p):
            ap = alpha[ap]
        zs = conj_rows.get(ap.astype(np.int64).tobytes(), [])
        for z in zs:
            if alpha[z] == z:
                yield alpha, z


@lru_cache(maxsize=None)
def groups_of_order(n: int) -> tuple[FiniteGroup, ...]:
    """All groups of order n (n <= 32), one per isomorphism class."""
    if n < 1 or n > MAX_ORDER:
        raise ValueError(f"order must lie in 1..{MAX_ORDER}")
    if n == 1:
        return (FiniteGroup([[0]], name="G1_1"),)
    buckets: dict[tuple, list[FiniteGroup]] = {}
    found: list[FiniteGroup] = []
    primes = [p for p, _ in factorize(n)]
    for p in primes:
        for N in groups_of_order(n // p):
            for alpha, z in _extension_candidates(N, p):
                G = _cyclic_extension(N, alpha, z, p)
                fp = fingerprint(G)
                bucket = buckets.setdefault(fp, [])
                if any(find_isomorphism(G, H) is not None for H in bucket):
                    continue
                bucket.append(G)
                found.append(G)
    found.sort(key=_sort_key)
    for i, G in enumerate(found, 1):
        G.name = f"G{n}_{i}"
    return tuple(found)


def _sort_key(G: FiniteGroup):
    return (not G.is_abelian, fingerprint(G))


def groups_up_to(n: int) -> list[FiniteGroup]:
    out = []
    for k in range(1, n + 1):
        out.extend(groups_of_order(k))
    return out


def nilpotent_groups_up_to(n: int) -> list[FiniteGroup]:
    from .grpcore import is_nilpotent

    return [G for G in groups_up_to(n) if is_nilpotent(G)]


def abelian_groups_of_order(n: int) -> list[tuple[int, ...]]:
    """Invariant-factor tuples of the abelian groups of order n."""
    from itertools import product

    from .abelian import abelian_group

    per_prime = []
    for p, e in factorize(n):
        per_prime.append([[p**k for k in part] for part in _partitions(e)])
    out = set()
    for combo in product(*per_prime):
        out.add(abelian_group(*[d for part in combo for d in part]).invariant_factors)
    return sorted(out, key=lambda t: (len(t), t))


def _partitions(e: int, maxpart: int | None = None) -> list[list[int]]:
    if maxpart is None:
        maxpart = e
    if e == 0:
        return [[]]
    out = []
    for k in range(min(e, maxpart), 0, -1):
        for rest in _partitions(e - k, k):
            out.append([k] + rest)
    return out
