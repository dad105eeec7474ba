"""Abelianization, Schur multipliers and central extensions.

Normalized 2-cocycles are determined by their values ``l(g, s) = f(g, s)``
on the edges of the Cayley graph for a generating set S. A labelling comes
from a cocycle exactly when, for every closed walk c and generator t, the
label sum over the translate ``t.c`` equals the one over c. It is enough to
impose this on the fundamental cycles of a spanning tree, which gives a
homogeneous integer system M l = 0 with about ``|S|^2 |G|`` rows and
``(|G|-1)|S|`` unknowns. The number of its solutions over Z/m yields

    |H^2(G, Z/m)| = |Z(Z/m)| |Hom(G, Z/m)| / m^(|G|-1),

and stripping the Ext term leaves |Hom(H_2(G), Z/m)| for every m, from
which the invariant factors of H_2(G) are read off prime by prime.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import prod

import numpy as np

from . import cache as cache_mod
from .abelian import AbelianGroup, QuotClass, abelian_invariants, hom_count_abelian, primes_of, s_localize
from .grpcore import (
    DEFAULT_ORDER_CAP,
    _closure_mask,
    CapExceeded,
    FiniteGroup,
    GroupError,
    GroupHom,
    commutator_subgroup,
    quotient,
)
from .modlin import crt_combine, factorize, howell_form, local_smith

DEFAULT_H2_CAP = 360


class CocycleError(GroupError):
    pass


class InconsistentCounts(RuntimeError):
    """Solution counts that no finite abelian group could produce."""


def abelianization(G: FiniteGroup) -> tuple[AbelianGroup, np.ndarray]:
    """``H_1(G)`` and the projection as an array of element indices of H_1."""
    Q, proj = quotient(G, commutator_subgroup(G))
    if Q.order == 1:
        return AbelianGroup(()), np.zeros(G.order, dtype=np.int64)
    iso = abelian_invariants(Q)
    return iso.abstract, iso.from_group[proj.map]


# -- Cayley-graph labellings ------------------------------------------------------


class Labelling:
    """Spanning tree and relator-translation system for a group."""

    def __init__(self, G: FiniteGroup):
        self.group = G
        n = G.order
        gens = np.asarray(G.generators, dtype=np.int64)
        k = gens.size
        self.gens = gens
        self.k = k
        col = np.full((n, k), -1, dtype=np.int64)
        col[1:, :] = np.arange((n - 1) * k).reshape(n - 1, k)
        self.col = col
        self.ncols = (n - 1) * k
        t = G.table
        parent = np.full(n, -1, dtype=np.int64)
        pgen = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = [0]
        layers = []
        paths: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        tree = np.zeros((n, k), dtype=bool)
        while frontier:
            ch, pa, gi_l = [], [], []
            nxt = []
            for v in frontier:
                for gi in range(k):
                    w = int(t[v, gens[gi]])
                    if not seen[w]:
                        seen[w] = True
                        parent[w] = v
                        pgen[w] = gi
                        tree[v, gi] = True
                        paths[w] = paths[v] + [(v, gi)]
                        ch.append(w)
                        pa.append(v)
                        gi_l.append(gi)
                        nxt.append(w)
            if ch:
                layers.append((np.array(ch), np.array(pa), np.array(gi_l)))
            frontier = nxt
        self.layers = layers
        self.tree = tree
        # fundamental cycles, as (vertex, generator, coefficient) triples
        cyc_v, cyc_g, cyc_c, cyc_r = [], [], [], []
        r = 0
        for v in range(n):
            for gi in range(k):
                if tree[v, gi]:
                    continue
                w = int(t[v, gens[gi]])
                terms = [(a, b, 1) for a, b in paths[v]] + [(v, gi, 1)] + [(a, b, -1) for a, b in paths[w]]
                for a, b, c in terms:
                    cyc_v.append(a)
                    cyc_g.append(b)
                    cyc_c.append(c)
                    cyc_r.append(r)
                r += 1
        self.ncycles = r
        self.cyc = (np.array(cyc_v, dtype=np.int64), np.array(cyc_g, dtype=np.int64),
                    np.array(cyc_c, dtype=np.int64), np.array(cyc_r, dtype=np.int64))

    @cached_property
    def matrix(self) -> np.ndarray:
        """Rows ``l(t.c) - l(c)`` for each generator t and fundamental cycle c."""
        v, g, c, r = self.cyc
        R = self.k * self.ncycles
        M = np.zeros((R, self.ncols), dtype=np.int64)
        t = self.group.table
        for ti in range(self.k):
            rows = r + ti * self.ncycles
            moved = self.col[t[self.gens[ti], v], g]
            keep = moved >= 0
            np.add.at(M, (rows[keep], moved[keep]), c[keep])
            orig = self.col[v, g]
            keep = orig >= 0
            np.add.at(M, (rows[keep], orig[keep]), -c[keep])
        M = M[M.any(axis=1)]
        return M

    def smith(self, p: int, k: int, track: bool = False):
        """Local Smith elimination of the system over Z/p^k, memoized.

        A run at higher precision serves lower ones for counting.
        """
        memo = self.__dict__.setdefault("_smith", {})
        for (pp, kk, tr), ls in memo.items():
            if pp == p and (kk == k if track else kk >= k) and (tr or not track):
                return ls
        ls = local_smith(self.matrix, p, k, track=track)
        memo[(p, k, track)] = ls
        return ls

    def kernel(self, m: int) -> np.ndarray:
        """Generators of the solutions over Z/m."""
        if m == 1:
            return np.zeros((0, self.ncols), dtype=np.int64)
        parts = [(self.smith(p, e, track=True).kernel_generators(), p**e) for p, e in factorize(m)]
        return crt_combine(parts, m)

    def coboundary_rows(self, m: int) -> np.ndarray:
        """Labels of the coboundaries of the indicator functions of g != 1."""
        n = self.group.order
        t = self.group.table
        B = np.zeros((n - 1, self.ncols), dtype=np.int64)
        verts = np.repeat(np.arange(1, n), self.k)
        gidx = np.tile(np.arange(self.k), n - 1)
        cols = self.col[verts, gidx]
        s = self.gens[gidx]
        prods = t[verts, s]
        for x_arr, sign in ((verts, 1), (s, 1), (prods, -1)):
            keep = x_arr != 0
            np.add.at(B, (x_arr[keep] - 1, cols[keep]), sign)
        return B % m

    def full_cocycle(self, labels: np.ndarray, m: int) -> np.ndarray:
        """Expand edge labels to the table ``f[h, g]`` (values mod m)."""
        n = self.group.order
        L = np.zeros((n, self.k), dtype=np.int64)
        L[1:, :] = labels.reshape(n - 1, self.k)
        f = np.zeros((n, n), dtype=np.int64)
        t = self.group.table
        for ch, pa, gi in self.layers:
            hg = t[:, pa]
            f[:, ch] = (f[:, pa] + L[hg, gi] - L[pa, gi]) % m
        return f

    def restrict(self, f: np.ndarray) -> np.ndarray:
        """Edge labels of a full cocycle table."""
        n = self.group.order
        return f[np.arange(1, n)[:, None], self.gens[None, :]].reshape(-1)


_LABELLINGS: dict[str, Labelling] = {}


def labelling(G: FiniteGroup) -> Labelling:
    key = G.key + str(G.generators)
    lab = _LABELLINGS.get(key)
    if lab is None:
        if len(_LABELLINGS) > 32:
            _LABELLINGS.clear()
        lab = Labelling(G)
        _LABELLINGS[key] = lab
    return lab


def _log_hom_counts(G: FiniteGroup, p: int, k: int) -> list[int]:
    """``log_p |Hom(H_2(G), Z/p^e)|`` for e = 0..k."""
    n = G.order
    lab = labelling(G)
    ls = lab.smith(p, k)
    h1, _ = abelianization(G)
    out = [0]
    for e in range(1, k + 1):
        log_z = ls.log_kernel_size(e)
        log_hom_g = _log_p(hom_count_abelian(h1, AbelianGroup((p**e,))), p)
        log_h2coh = log_z + log_hom_g - e * (n - 1)
        log_ext = log_hom_g  # |Ext(H_1, Z/p^e)| = |H_1 / p^e H_1| = |Hom(H_1, Z/p^e)|
        out.append(log_h2coh - log_ext)
    return out


def _log_p(x: int, p: int) -> int:
    e = 0
    while x % p == 0 and x > 1:
        x //= p
        e += 1
    if x != 1:
        raise InconsistentCounts(f"{x} is not a power of {p}")
    return e


def cohomology_order(G: FiniteGroup, m: int) -> int:
    """|H^2(G, Z/m)| from the solution count of the labelling system."""
    if G.order == 1 or m == 1:
        return 1
    n = G.order
    lab = labelling(G)
    h1, _ = abelianization(G)
    total = 1
    for p, e in factorize(m):
        ls = lab.smith(p, e)
        log_z = ls.log_kernel_size(e)
        log_hom_g = _log_p(hom_count_abelian(h1, AbelianGroup((p**e,))), p)
        total *= p ** (log_z + log_hom_g - e * (n - 1))
    return total


def schur_multiplier(G: FiniteGroup, *, cap: int = DEFAULT_H2_CAP, cache=None) -> AbelianGroup:
    """``H_2(G; Z)`` in invariant-factor form."""
    if G.order > cap:
        raise CapExceeded(f"H2 computation capped at order {cap}, group has order {G.order}")
    store = cache if cache is not None else cache_mod.active_cache()
    ckey = cache_mod.make_key("h2", G.key)
    if store is not None:
        hit = store.get_json("h2", ckey)
        if hit is not None:
            return AbelianGroup(tuple(hit))
    factors: list[int] = []
    if G.order > 1:
        for p, v in factorize(G.order):
            k = v + 1
            L = _log_hom_counts(G, p, k)
            a = [L[e] - L[e - 1] for e in range(1, k + 1)]
            if any(x < 0 for x in a) or any(a[i] < a[i + 1] for i in range(len(a) - 1)) or a[-1] != 0:
                raise InconsistentCounts(f"Hom counts {L} at p={p} do not come from an abelian group")
            for e in range(1, k):
                factors += [p**e] * (a[e - 1] - a[e])
    from .abelian import abelian_group

    H2 = abelian_group(*factors) if factors else AbelianGroup(())
    if store is not None:
        store.put_json("h2", ckey, list(H2.invariant_factors))
    return H2


def h2_loc(G: FiniteGroup, **kw) -> tuple[AbelianGroup, QuotClass]:
    """``H_2(G)`` modulo its S-torsion, S the primes dividing |H_1(G)|."""
    H2 = schur_multiplier(G, **kw)
    h1, _ = abelianization(G)
    S = primes_of(h1.order) if h1.order > 1 else []
    q = s_localize(H2, S)
    return q.quotient, q


# -- explicit cocycles ------------------------------------------------------------


@dataclass(eq=False)
class Cocycle:
    """A normalized 2-cocycle ``G x G -> K``.

    ``table[g, h]`` holds coordinates in K; ``labels`` are the edge labels it
    restricts to (one column per invariant factor of K).
    """

    group: FiniteGroup
    kernel: AbelianGroup
    table: np.ndarray
    labels: np.ndarray | None = None

    def check(self) -> None:
        G = self.group
        n = G.order
        f = self.table
        if f.shape != (n, n, self.kernel.rank):
            raise CocycleError("cocycle table has the wrong shape")
        if f[0].any() or f[:, 0].any():
            raise CocycleError("cocycle is not normalized")
        mods = np.array(self.kernel.invariant_factors, dtype=np.int64)
        t = G.table
        for g in range(n):
            lhs = f[g][:, None, :] + f[t[g]]  # f(g,h) + f(gh,k)
            rhs = f + f[g][t]  # f(h,k) + f(g,hk)
            if ((lhs - rhs) % mods).any():
                raise CocycleError("cocycle identity fails")


def _classes_mod(G: FiniteGroup, d: int) -> np.ndarray:
    """Canonical label vectors of H^2(G, Z/d), sorted lexicographically."""
    lab = labelling(G)
    N = lab.ncols
    if d == 1 or G.order == 1:
        return np.zeros((1, N), dtype=np.int64)
    store = cache_mod.active_cache()
    ckey = cache_mod.make_key("cocycles", G.key, G.generators, d)
    if store is not None:
        hit = store.get_array("cocycles", ckey)
        if hit is not None and hit.shape[1] == N:
            return hit
    Z = lab.kernel(d)
    H = howell_form(lab.coboundary_rows(d), d, ncols=N)
    Zr = H.reduce(Z) if Z.shape[0] else Z
    Zr = np.unique(Zr[Zr.any(axis=1)], axis=0) if Zr.shape[0] else Zr
    reps = {bytes(np.zeros(N, dtype=np.int64).tobytes()): np.zeros(N, dtype=np.int64)}
    frontier = np.zeros((1, N), dtype=np.int64)
    while frontier.shape[0] and Zr.shape[0]:
        cand = (frontier[:, None, :] + Zr[None, :, :]).reshape(-1, N) % d
        cand = np.unique(H.reduce(cand), axis=0)
        fresh = [row for row in cand if row.tobytes() not in reps]
        for row in fresh:
            reps[row.tobytes()] = row
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, N)
    out = np.array(list(reps.values()), dtype=np.int64)
    out = out[np.lexsort(out.T[::-1])]
    expected = cohomology_order(G, d)
    if out.shape[0] != expected:
        raise InconsistentCounts(f"found {out.shape[0]} classes in H^2(G, Z/{d}), counting gives {expected}")
    if store is not None:
        store.put_array("cocycles", ckey, out)
    return out


def two_cocycle_classes(G: FiniteGroup, K: AbelianGroup) -> list[Cocycle]:
    """One canonical cocycle per class of ``H^2(G, K)``.

    The representative of a class is the cocycle whose edge labels are
    lexicographically least in their coboundary coset, one coordinate of K at
    a time.
    """
    lab = labelling(G)
    per = [_classes_mod(G, d) for d in K.invariant_factors]
    out = []
    for combo in product(*[range(p.shape[0]) for p in per]):
        cols = [per[i][j] for i, j in enumerate(combo)]
        labels = np.stack(cols, axis=1) if cols else np.zeros((lab.ncols, 0), dtype=np.int64)
        tabs = [lab.full_cocycle(per[i][j], d) for i, (j, d) in enumerate(zip(combo, K.invariant_factors))]
        table = np.stack(tabs, axis=2) if tabs else np.zeros((G.order, G.order, 0), dtype=np.int64)
        out.append(Cocycle(G, K, table, labels))
    return out


@dataclass(eq=False)
class CentralExtension:
    """``1 -> K -> group -> base -> 1`` with kernel central.

    Element ``(a, g)`` sits at index ``g*|K| + index(a)``.
    """

    base: FiniteGroup
    kernel: AbelianGroup
    group: FiniteGroup
    projection: GroupHom
    embedding: np.ndarray
    cocycle: Cocycle

    def kernel_subgroup(self):
        return self.group.subgroup(self.embedding)


def build_central_extension(
    G: FiniteGroup, K: AbelianGroup, cocycle: Cocycle, *, check: bool = True, cap: int = DEFAULT_ORDER_CAP
) -> CentralExtension:
    n, m = G.order, K.order
    if n * m > cap:
        raise CapExceeded(f"extension of order {n * m} exceeds cap {cap}")
    # associativity of the table (Light's test in FiniteGroup) is equivalent
    # to the cocycle identity; the exhaustive check is kept for small groups
    if check and n <= 64:
        cocycle.check()
    fidx = K.index(cocycle.table.reshape(n * n, K.rank)).reshape(n, n) if K.rank else np.zeros((n, n), np.int64)
    kadd = K.add_table
    tab = G.table.astype(np.int64)[:, None, :, None] * m + kadd[
        kadd[np.arange(m)[None, :, None, None], np.arange(m)[None, None, None, :]], fidx[:, None, :, None]
    ]
    tab = tab.reshape(n * m, n * m)
    gens = [g * m for g in G.generators]

    mask = _closure_mask(tab, gens) if gens else np.zeros(n * m, bool)
    if gens and not mask.all():
        # add kernel basis elements until the lifts generate
        for i in range(K.rank):
            e = np.zeros(K.rank, dtype=np.int64)
            e[i] = 1
            gens.append(int(K.index(e)))
            mask = _closure_mask(tab, gens)
            if mask.all():
                break
    elif not gens:
        gens = None
    X = FiniteGroup(tab, generators=gens, validate=check, cap=cap)
    proj = GroupHom(X, G, np.arange(n * m) // m)
    return CentralExtension(G, K, X, proj, np.arange(m), cocycle)


def is_stem(ext: CentralExtension) -> bool:
    D = commutator_subgroup(ext.group)
    return bool(D.mask[ext.embedding].all())
