"""Constructors for standard groups."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .grpcore import DEFAULT_ORDER_CAP, CapExceeded, FiniteGroup, GroupError, direct_product


def cyclic(n: int) -> FiniteGroup:
    ar = np.arange(n)
    tab = (ar[:, None] + ar[None, :]) % n
    return FiniteGroup(tab, generators=[1] if n > 1 else [], name=f"C{n}", validate=False)


def abelian_from_orders(orders: Sequence[int]) -> FiniteGroup:
    G = cyclic(1)
    for d in orders:
        G = direct_product(G, cyclic(d))
    G.name = "x".join(f"C{d}" for d in orders) or "C1"
    return G


def _prefix_codes(perms: np.ndarray, degree: int) -> tuple[np.ndarray, int]:
    """Integer codes from the images of the first L points, with L the
    shortest prefix that separates all permutations."""
    n = perms.shape[0]
    for L in range(1, degree + 1):
        if L * np.log2(max(degree, 2)) > 62:
            break
        w = degree ** np.arange(L - 1, -1, -1, dtype=np.int64)
        codes = perms[:, :L] @ w
        if np.unique(codes).size == n:
            return codes, L
    raise GroupError("permutation group too large for prefix encoding")


def permutation_group(
    generators: Sequence[Sequence[int]], degree: int, name: str | None = None, cap: int = DEFAULT_ORDER_CAP
) -> FiniteGroup:
    """Group generated by permutations given as image lists on ``0..degree-1``.

    The product ``p*q`` applies p first. Elements are numbered in
    breadth-first order from the identity.
    """
    gens = [np.asarray(g, dtype=np.int64) for g in generators]
    for g in gens:
        if g.shape != (degree,) or sorted(g.tolist()) != list(range(degree)):
            raise GroupError("generator is not a permutation of the given degree")
    ident = np.arange(degree, dtype=np.int64)
    elems = [ident]
    index = {ident.tobytes(): 0}
    gen_idx = []
    for g in gens:
        k = g.tobytes()
        if k not in index:
            index[k] = len(elems)
            elems.append(g)
    i = 0
    while i < len(elems):
        e = elems[i]
        for g in gens:
            p = g[e]  # e first, then g
            k = p.tobytes()
            if k not in index:
                index[k] = len(elems)
                elems.append(p)
                if len(elems) > cap:
                    raise CapExceeded(f"permutation group order exceeds cap {cap}")
        i += 1
    P = np.array(elems, dtype=np.int64)
    n = P.shape[0]
    codes, _ = _prefix_codes(P, degree)
    order = np.argsort(codes)
    sorted_codes = codes[order]
    L = _prefix_codes(P, degree)[1]
    w = degree ** np.arange(L - 1, -1, -1, dtype=np.int64)
    tab = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        prods = P[:, P[a]][:, :L]  # row b: b applied after a
        c = prods @ w
        tab[a] = order[np.searchsorted(sorted_codes, c)]
    for g in gens:
        gen_idx.append(index[g.tobytes()])
    G = FiniteGroup(tab, generators=gen_idx, name=name, validate=False)
    G.perms = P  # type: ignore[attr-defined]
    return G


def cycles_to_perm(cycles: Sequence[Sequence[int]], degree: int) -> list[int]:
    p = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            p[a] = b
    return p


def symmetric(n: int) -> FiniteGroup:
    if n <= 1:
        return FiniteGroup([[0]], name=f"S{n}")
    if n == 2:
        return permutation_group([[1, 0]], 2, name="S2")
    return permutation_group(
        [cycles_to_perm([[0, 1]], n), cycles_to_perm([list(range(n))], n)], n, name=f"S{n}"
    )


def alternating(n: int) -> FiniteGroup:
    if n <= 2:
        return FiniteGroup([[0]], name=f"A{n}")
    gens = [cycles_to_perm([[0, 1, 2]], n)]
    if n > 3:
        if n % 2:
            gens.append(cycles_to_perm([list(range(n))], n))
        else:
            gens.append(cycles_to_perm([list(range(1, n))], n))
    return permutation_group(gens, n, name=f"A{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n."""
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return permutation_group([rot, ref], n, name=f"D{2 * n}")


def _matrix_gens(q: int) -> list[tuple[int, int, int, int]]:
    return [(1, 1, 0, 1), (0, q - 1, 1, 0)]


def psl2(q: int) -> FiniteGroup:
    """PSL(2, q) for a prime q, acting on the projective line."""
    _require_prime(q)
    # points: (x, 1) for x in 0..q-1 as x, and (1, 0) as q
    def point(v):
        x, y = v[0] % q, v[1] % q
        if y:
            return x * pow(y, -1, q) % q
        return q

    def vec(i):
        return (i, 1) if i < q else (1, 0)

    gens = []
    for a, b, c, d in _matrix_gens(q):
        perm = []
        for i in range(q + 1):
            x, y = vec(i)
            perm.append(point((a * x + b * y, c * x + d * y)))
        gens.append(perm)
    return permutation_group(gens, q + 1, name=f"PSL(2,{q})")


def sl2(q: int) -> FiniteGroup:
    """SL(2, q) for a prime q, acting on the nonzero vectors of F_q^2."""
    _require_prime(q)
    vecs = [(x, y) for x in range(q) for y in range(q) if (x, y) != (0, 0)]
    pos = {v: i for i, v in enumerate(vecs)}
    gens = []
    for a, b, c, d in _matrix_gens(q):
        gens.append([pos[((a * x + b * y) % q, (c * x + d * y) % q)] for x, y in vecs])
    return permutation_group(gens, len(vecs), name=f"SL(2,{q})")


def _require_prime(q: int) -> None:
    if q < 2 or any(q % d == 0 for d in range(2, int(q**0.5) + 1)):
        raise GroupError("only prime fields are supported")


def quaternion8() -> FiniteGroup:
    # Q8 inside SL(2,3)
    G = sl2(3)
    orders = G.element_orders
    # the unique Sylow 2-subgroup is generated by the order-4 elements
    return G.generated(np.flatnonzero(orders == 4)).as_group()
