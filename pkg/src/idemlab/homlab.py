"""Homomorphism enumeration and the Hom-based predicates.

A homomorphism ``X -> G`` is determined by the images of the generators of
X. Candidate image tuples are pruned by element orders and by the orders of
a few short words, then each survivor is extended along a breadth-first
spanning tree of the Cayley graph of X and checked on the remaining edges.
The image of the first generator only runs over conjugacy class
representatives of G; the rest of Hom(X, G) is recovered by conjugation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from . import cache as cache_mod
from .grpcore import FiniteGroup, GroupError, GroupHom, center

DEFAULT_BUDGET = 10**8
_TUPLE_LIMIT = 3 * 10**7


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass
class _Plan:
    gens: tuple[int, ...]
    layers: list[tuple[np.ndarray, np.ndarray, np.ndarray]]
    nt_src: np.ndarray
    nt_gen: np.ndarray
    nt_dst: np.ndarray
    words: list[list[tuple[tuple[tuple[int, int], ...], int]]]


_PLANS: dict[str, _Plan] = {}


def _plan(X: FiniteGroup) -> _Plan:
    p = _PLANS.get(X.key + str(X.generators))
    if p is not None:
        return p
    gens = X.generators
    n = X.order
    t = X.table
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int64)
    layers = []
    tree = np.zeros((n, len(gens)), dtype=bool)
    while frontier.size:
        ch_l, pa_l, gi_l = [], [], []
        for gi, g in enumerate(gens):
            img = t[frontier, g].astype(np.int64)
            fresh = ~seen[img]
            img_f = img[fresh]
            img_u, first = np.unique(img_f, return_index=True)
            par = frontier[fresh][first]
            seen[img_u] = True
            tree[par, gi] = True
            ch_l.append(img_u)
            pa_l.append(par)
            gi_l.append(np.full(img_u.size, gi, dtype=np.int64))
        ch = np.concatenate(ch_l) if ch_l else np.zeros(0, np.int64)
        if ch.size == 0:
            break
        layers.append((ch, np.concatenate(pa_l), np.concatenate(gi_l)))
        frontier = np.sort(ch)
    if not seen.all():
        raise GroupError("generators do not generate the group")
    src, gsel = np.nonzero(~tree)
    dst = t[src, np.asarray(gens, dtype=np.int64)[gsel]].astype(np.int64) if gens else np.zeros(0, np.int64)
    # short test words for pairs (i, j), i < j; evaluated in X once
    words: list[list] = [[] for _ in gens]
    for j in range(len(gens)):
        for i in range(j):
            for w in (
                ((i, 1), (j, 1)),
                ((i, 1), (j, -1)),
                ((i, 1), (i, 1), (j, 1)),
                ((i, 1), (j, 1), (j, 1)),
                ((i, -1), (j, -1), (i, 1), (j, 1)),
            ):
                x = 0
                for gi, s in w:
                    g = gens[gi]
                    x = int(t[x, g if s > 0 else X.inv[g]])
                words[j].append((w, int(X.element_orders[x])))
    p = _Plan(tuple(gens), layers, src.astype(np.int64), gsel.astype(np.int64), dst, words)
    if len(_PLANS) > 256:
        _PLANS.clear()
    _PLANS[X.key + str(X.generators)] = p
    return p


def _eval_pair_word(G: FiniteGroup, a: np.ndarray, b: np.ndarray, word, i: int) -> np.ndarray:
    """Evaluate a word in generators i (from ``a``) and j (from ``b``) on the grid a x b."""
    x = np.zeros((a.size, b.size), dtype=np.int64)
    A = np.broadcast_to(a[:, None], x.shape)
    B = np.broadcast_to(b[None, :], x.shape)
    for gi, s in word:
        u = A if gi == i else B
        if s < 0:
            u = G.inv[u]
        x = G.table[x, u]
    return x


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def spend(self, k: int) -> None:
        self.used += k
        if self.used > self.budget:
            raise SearchBudgetExceeded(f"search budget of {self.budget} partial-map extensions exceeded")


def _candidate_tuples(X, G, plan, cand_lists, iso: bool, counter: _Counter) -> np.ndarray:
    """Generator-image tuples passing the order tests on every pair.

    Each test word involves two generators only, so compatibility is a
    boolean table per pair of positions, computed once.
    """
    ordG = G.element_orders
    cands = [np.asarray(c, dtype=np.int64) for c in cand_lists]
    k = len(cands)
    compat = {}
    for j in range(1, k):
        for i in range(j):
            ok = np.ones((cands[i].size, cands[j].size), dtype=bool)
            for w, target in plan.words[j]:
                if not any(gi == i for gi, _ in w):
                    continue
                o = ordG[_eval_pair_word(G, cands[i], cands[j], w, i)]
                ok &= (o == target) if iso else (target % o == 0)
            compat[i, j] = ok
    T = np.arange(cands[0].size, dtype=np.int64)[:, None]
    for j in range(1, k):
        rows = []
        step = max(1, _TUPLE_LIMIT // max(cands[j].size, 1))
        for s in range(0, T.shape[0], step):
            Ts = T[s : s + step]
            allowed = np.ones((Ts.shape[0], cands[j].size), dtype=bool)
            for i in range(j):
                allowed &= compat[i, j][Ts[:, i]]
            r, c = np.nonzero(allowed)
            rows.append(np.hstack([Ts[r], c[:, None]]))
        T = np.vstack(rows)
        if T.shape[0] > _TUPLE_LIMIT:
            raise SearchBudgetExceeded(f"{T.shape[0]} candidate generator tuples exceed the search limit")
        if T.shape[0] == 0:
            break
    if T.shape[1] < k:
        return np.zeros((0, k), dtype=np.int64)
    return np.stack([cands[i][T[:, i]] for i in range(k)], axis=1) if T.size else np.zeros((0, k), np.int64)


def _extend_maps(X, G, plan, U: np.ndarray) -> np.ndarray:
    n = X.order
    phi = np.zeros((U.shape[0], n), dtype=np.int64)
    tab = G.table
    for ch, pa, gi in plan.layers:
        phi[:, ch] = tab[phi[:, pa], U[:, gi]]
    if plan.nt_src.size:
        ok = (tab[phi[:, plan.nt_src], U[:, plan.nt_gen]] == phi[:, plan.nt_dst]).all(axis=1)
        phi = phi[ok]
    return phi


def _search(
    X: FiniteGroup,
    G: FiniteGroup,
    *,
    iso: bool = False,
    cand_lists: Sequence[np.ndarray] | None = None,
    first_reps: bool = True,
    first_only: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> np.ndarray:
    """Rows are full element maps. With ``first_reps`` the result covers only
    maps whose first generator image is a class representative."""
    if X.order == 1:
        return np.zeros((1, 1), dtype=np.int64)
    plan = _plan(X)
    ordX = X.element_orders
    ordG = G.element_orders
    if cand_lists is None:
        cand_lists = []
        for g in plan.gens:
            o = int(ordX[g])
            ok = (ordG == o) if iso else (o % ordG == 0)
            cand_lists.append(np.flatnonzero(ok))
        if first_reps:
            cand_lists[0] = np.intersect1d(cand_lists[0], G.class_reps)
    counter = _Counter(budget)
    T = _candidate_tuples(X, G, plan, cand_lists, iso, counter)
    if T.shape[0] == 0:
        return np.zeros((0, X.order), dtype=np.int64)
    n = X.order
    chunk = max(1, (1 << 22) // max(n * max(len(plan.gens), 1), 1))
    found = []
    for s in range(0, T.shape[0], chunk):
        U = T[s : s + chunk]
        counter.spend(U.shape[0] * n)
        phi = _extend_maps(X, G, plan, U)
        if iso and phi.shape[0]:
            srt = np.sort(phi, axis=1)
            phi = phi[(srt == np.arange(n)).all(axis=1)]
        if phi.shape[0]:
            found.append(phi)
            if first_only:
                break
    if not found:
        return np.zeros((0, n), dtype=np.int64)
    return np.vstack(found)


def _expand_conjugates(G: FiniteGroup, found: np.ndarray, g0: int) -> np.ndarray:
    if found.shape[0] == 0:
        return found
    out = []
    for r in np.unique(found[:, g0]):
        sub = found[found[:, g0] == r]
        members = np.flatnonzero(G.class_of == G.class_of[r])
        conjs = G.conjugator[members]
        out.append(G.conj[conjs][:, sub].reshape(-1, found.shape[1]).astype(np.int64))
    return np.vstack(out)


def _sort_rows(M: np.ndarray) -> np.ndarray:
    if M.shape[0] <= 1:
        return M
    order = np.lexsort(M.T[::-1])
    return M[order]


class HomSet:
    """All homomorphisms X -> G, one row of ``maps`` per homomorphism, rows
    sorted lexicographically."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, maps: np.ndarray):
        self.domain = domain
        self.codomain = codomain
        maps = np.asarray(maps, dtype=np.int64)
        maps.setflags(write=False)
        self.maps = maps

    def __len__(self) -> int:
        return int(self.maps.shape[0])

    @property
    def count(self) -> int:
        return len(self)

    def __iter__(self) -> Iterator[GroupHom]:
        for row in self.maps:
            yield GroupHom(self.domain, self.codomain, row)

    def __getitem__(self, i: int) -> GroupHom:
        return GroupHom(self.domain, self.codomain, self.maps[i])

    @cached_property
    def _rowset(self) -> set[bytes]:
        return {r.tobytes() for r in self.maps}

    def __contains__(self, h) -> bool:
        m = h.map if isinstance(h, GroupHom) else np.asarray(h, dtype=np.int64)
        return m.astype(np.int64).tobytes() in self._rowset


def _cache_for(cache):
    return cache if cache is not None else cache_mod.active_cache()


_HOM_MEMO: dict[tuple[str, str], np.ndarray] = {}
_COUNT_MEMO: dict[tuple[str, str], int] = {}


def enumerate_homs(X: FiniteGroup, G: FiniteGroup, *, budget: int = DEFAULT_BUDGET, cache=None) -> HomSet:
    """Complete, duplicate-free Hom(X, G)."""
    k = (X.key, G.key)
    maps = _HOM_MEMO.get(k)
    store = _cache_for(cache)
    ckey = cache_mod.make_key("homs", X.key, G.key)
    if maps is None and store is not None:
        maps = store.get_array("homs", ckey)
        if maps is not None and maps.shape[1] != X.order:
            maps = None
    if maps is None:
        found = _search(X, G, budget=budget)
        g0 = X.generators[0] if X.generators else 0
        maps = _sort_rows(_expand_conjugates(G, found, g0) if X.order > 1 else found)
        if store is not None:
            store.put_array("homs", ckey, maps)
    if len(_HOM_MEMO) > 64:
        _HOM_MEMO.clear()
    _HOM_MEMO[k] = maps
    return HomSet(X, G, maps)


def _count_abelian_domain(X: FiniteGroup, G: FiniteGroup) -> int:
    from .abelian import abelian_invariants

    iso = abelian_invariants(X)
    ds = iso.abstract.invariant_factors
    ordG = G.element_orders
    tab = G.table
    memo: dict[tuple[int, bytes], int] = {}

    def rec(i: int, mask: np.ndarray) -> int:
        if i == len(ds):
            return 1
        key = (i, np.packbits(mask).tobytes())
        if key in memo:
            return memo[key]
        total = 0
        cand = np.flatnonzero(mask & (ds[i] % ordG == 0))
        if i == len(ds) - 1:
            total = int(cand.size)
        else:
            for u in cand:
                total += rec(i + 1, mask & (tab[u, :] == tab[:, u]))
        memo[key] = total
        return total

    return rec(0, np.ones(G.order, dtype=bool))


def count_homs(X: FiniteGroup, G: FiniteGroup, *, budget: int = DEFAULT_BUDGET, cache=None) -> int:
    """|Hom(X, G)| without necessarily materializing the maps."""
    k = (X.key, G.key)
    if k in _COUNT_MEMO:
        return _COUNT_MEMO[k]
    if k in _HOM_MEMO:
        return int(_HOM_MEMO[k].shape[0])
    store = _cache_for(cache)
    ckey = cache_mod.make_key("homcount", X.key, G.key)
    val = store.get_json("homcount", ckey) if store is not None else None
    if val is None:
        if X.order == 1:
            val = 1
        elif gcd(X.order, G.order) == 1:
            val = 1
        elif X.is_abelian:
            val = _count_abelian_domain(X, G)
        else:
            found = _search(X, G, budget=budget)
            g0 = X.generators[0]
            sizes = np.bincount(G.class_of)
            val = int(sum(int(sizes[G.class_of[r]]) for r in found[:, g0])) if found.shape[0] else 0
        if store is not None:
            store.put_json("homcount", ckey, int(val))
    _COUNT_MEMO[k] = int(val)
    if len(_COUNT_MEMO) > 100000:
        _COUNT_MEMO.clear()
    return int(val)


def is_hom_trivial_set(X: FiniteGroup, G: FiniteGroup, **kw) -> bool:
    """True when the only homomorphism X -> G is the trivial one."""
    return count_homs(X, G, **kw) == 1


def is_generalized_subgroup(a: GroupHom, method: str = "brute", **kw) -> bool:
    """Whether postcomposition with ``a`` is injective on Hom(X, X).

    ``brute`` compares ``a∘f`` over all endomorphisms f; ``structural`` tests
    that the kernel is central and admits no nontrivial map from X.
    """
    X = a.domain
    if method == "structural":
        K = a.kernel()
        if not K.is_subset(center(X)):
            return False
        return is_hom_trivial_set(X, K.as_group(), **kw)
    if method != "brute":
        raise ValueError(f"unknown method {method!r}")
    if a.is_injective():
        return True
    endos = enumerate_homs(X, X, **kw)
    composed = a.map[endos.maps]
    return np.unique(composed, axis=0).shape[0] == len(endos)


def is_cellular_cover(c: GroupHom, **kw) -> bool:
    """Generalized subgroup with |Hom(X, X)| = |Hom(X, G)| (brute force)."""
    if not is_generalized_subgroup(c, "brute", **kw):
        return False
    return count_homs(c.domain, c.domain, **kw) == count_homs(c.domain, c.codomain, **kw)


def order_histogram(G: FiniteGroup) -> tuple[tuple[int, int], ...]:
    vals, counts = np.unique(G.element_orders, return_counts=True)
    return tuple(zip(vals.tolist(), counts.tolist()))


def find_isomorphism(X: FiniteGroup, Y: FiniteGroup, *, budget: int = DEFAULT_BUDGET) -> GroupHom | None:
    if X.order != Y.order or order_histogram(X) != order_histogram(Y):
        return None
    if X.is_abelian != Y.is_abelian:
        return None
    maps = _search(X, Y, iso=True, first_only=True, budget=budget)
    if maps.shape[0] == 0:
        return None
    return GroupHom(X, Y, maps[0])


def are_isomorphic(X: FiniteGroup, Y: FiniteGroup, **kw) -> bool:
    return find_isomorphism(X, Y, **kw) is not None


def covers_equivalent(c: GroupHom, d: GroupHom, *, budget: int = DEFAULT_BUDGET) -> bool:
    """Is there an isomorphism h with ``d∘h = c``?

    Generator images of h are restricted to the fibres of d over the images
    under c.
    """
    if c.codomain.key != d.codomain.key:
        raise GroupError("covers have different codomains")
    X, Y = c.domain, d.domain
    if X.order != Y.order or order_histogram(X) != order_histogram(Y):
        return False
    if X.order == 1:
        return True
    ordX, ordY = X.element_orders, Y.element_orders
    cands = []
    for g in X.generators:
        fib = np.flatnonzero((d.map == c.map[g]) & (ordY == ordX[g]))
        if fib.size == 0:
            return False
        cands.append(fib)
    maps = _search(X, Y, iso=True, cand_lists=cands, first_only=True, budget=budget)
    return maps.shape[0] > 0


@dataclass
class Automorphisms:
    group: FiniteGroup
    maps: np.ndarray
    inner: np.ndarray  # bool per row

    def __len__(self) -> int:
        return int(self.maps.shape[0])

    def __iter__(self):
        for row in self.maps:
            yield GroupHom(self.group, self.group, row)

    def outer_representatives(self) -> list[GroupHom]:
        """One automorphism per coset of Inn(G), the first in sorted order."""
        G = self.group
        index = {r.tobytes(): i for i, r in enumerate(self.maps)}
        assigned = np.zeros(len(self), dtype=bool)
        reps = []
        for i in range(len(self)):
            if assigned[i]:
                continue
            reps.append(GroupHom(G, G, self.maps[i]))
            coset = self.maps[i][G.conj]  # alpha ∘ inn_g for every g
            for row in np.unique(coset, axis=0):
                assigned[index[row.astype(np.int64).tobytes()]] = True
        return reps


def automorphisms(G: FiniteGroup, *, budget: int = DEFAULT_BUDGET) -> Automorphisms:
    if G.order == 1:
        return Automorphisms(G, np.zeros((1, 1), dtype=np.int64), np.array([True]))
    found = _search(G, G, iso=True, budget=budget)
    maps = _sort_rows(_expand_conjugates(G, found, G.generators[0]))
    inner_rows = {r.astype(np.int64).tobytes() for r in np.unique(G.conj, axis=0)}
    inner = np.array([r.tobytes() in inner_rows for r in maps], dtype=bool)
    return Automorphisms(G, maps, inner)
