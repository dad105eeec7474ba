"""Finite abelian groups in invariant-factor form.

An :class:`AbelianGroup` is ``Z/d_1 + ... + Z/d_r`` with ``d_1 | ... | d_r``
and every ``d_i >= 2``. Elements are coordinate tuples; they are indexed in
mixed radix with the last coordinate varying fastest.

>>> A = abelian_group(2, 6)
>>> A.invariant_factors
(2, 6)
>>> abelian_group(4, 6).invariant_factors
(2, 12)
>>> len(all_subgroups(abelian_group(12)))
6
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, prod
from typing import Iterable, Sequence

import numpy as np

from .grpcore import FiniteGroup, GroupHom
from .modlin import HowellForm, factorize, howell_form


class AbelianError(ValueError):
    pass


def smith_normal_form(M, with_inverse: bool = False):
    """Smith normal form over Z.

    Returns ``(diag, U, V)`` with ``U M V`` diagonal, the diagonal
    nonnegative and each entry dividing the next. Pivots are chosen as the
    entry of least absolute value, rows before columns on ties.

    >>> smith_normal_form([[2, 0], [0, 3]])[0]
    [1, 6]

    With ``with_inverse`` the inverse of V is returned as a fourth item.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        if f:
            A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        if f:
            for row in A:
                row[dst] += f * row[src]
            for row in V:
                row[dst] += f * row[src]
            Vi[src] = [a - f * b for a, b in zip(Vi[src], Vi[dst])]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, "r")
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    while len(diag) < min(m, n):
        diag.append(0)
    if with_inverse:
        return diag, U, V, Vi
    return diag, U, V


def _normalize_orders(orders: Iterable[int]) -> tuple[int, ...]:
    orders = [int(d) for d in orders]
    if any(d < 1 for d in orders):
        raise AbelianError("cyclic orders must be positive")
    if not orders:
        return ()
    k = len(orders)
    diag = smith_normal_form([[orders[i] if i == j else 0 for j in range(k)] for i in range(k)])[0]
    return tuple(d for d in diag if d != 1)


@dataclass(frozen=True)
class AbelianGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in inv):
            raise AbelianError("invariant factors must be at least 2")
        if any(inv[i + 1] % inv[i] for i in range(len(inv) - 1)):
            raise AbelianError("invariant factors must form a divisibility chain")
        object.__setattr__(self, "invariant_factors", inv)

    def __repr__(self) -> str:
        return f"AbelianGroup{self.invariant_factors}"

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @cached_property
    def _strides(self) -> np.ndarray:
        d = self.invariant_factors
        s = [1] * len(d)
        for i in range(len(d) - 2, -1, -1):
            s[i] = s[i + 1] * d[i + 1]
        return np.array(s, dtype=np.int64)

    @cached_property
    def elements(self) -> np.ndarray:
        """All elements as an (order, rank) array, in index order."""
        if not self.invariant_factors:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(d) for d in self.invariant_factors], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def reduce(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return x % np.array(self.invariant_factors, dtype=np.int64) if self.rank else x

    def index(self, x) -> np.ndarray | int:
        x = self.reduce(x)
        if x.ndim == 1:
            return int((x * self._strides).sum()) if self.rank else 0
        return (x * self._strides).sum(axis=-1) if self.rank else np.zeros(x.shape[0], dtype=np.int64)

    def element(self, i: int) -> np.ndarray:
        return self.elements[i]

    def add(self, a, b) -> np.ndarray:
        return self.reduce(np.asarray(a) + np.asarray(b))

    def neg(self, a) -> np.ndarray:
        return self.reduce(-np.asarray(a))

    def element_order(self, a) -> int:
        a = self.reduce(a)
        o = 1
        for x, d in zip(a.tolist(), self.invariant_factors):
            o = o * (d // gcd(x, d)) // gcd(o, d // gcd(x, d))
        return o

    @cached_property
    def add_table(self) -> np.ndarray:
        E = self.elements
        n = self.order
        sums = self.reduce(E[:, None, :] + E[None, :, :])
        return self.index(sums.reshape(n * n, self.rank)).reshape(n, n) if self.rank else np.zeros((1, 1), np.int64)

    def as_finite_group(self) -> FiniteGroup:
        gens = [int(self._strides[i]) for i in range(self.rank)]
        return FiniteGroup(self.add_table, generators=gens or None, name=str(self), validate=False)

    def basis(self) -> list[np.ndarray]:
        return [np.eye(self.rank, dtype=np.int64)[i] for i in range(self.rank)]


def abelian_group(*orders: int) -> AbelianGroup:
    """Normalize a direct sum of cyclic groups to invariant-factor form."""
    if len(orders) == 1 and not isinstance(orders[0], int):
        orders = tuple(orders[0])
    return AbelianGroup(_normalize_orders(orders))


def hom_count_abelian(A: AbelianGroup, B: AbelianGroup) -> int:
    return prod(gcd(a, b) for a in A.invariant_factors for b in B.invariant_factors)


@dataclass
class AbelianIso:
    """Explicit isomorphism between a finite abelian group and its
    invariant-factor form: ``to_group[i]`` is the element with index i,
    ``from_group[g]`` its inverse."""

    abstract: AbelianGroup
    group: FiniteGroup
    to_group: np.ndarray
    from_group: np.ndarray
    basis: list[int]


def abelian_invariants(G: FiniteGroup) -> AbelianIso:
    """Invariant factors of an abelian table group with an explicit isomorphism.

    Relations among the generators are collected by enumerating exponent
    vectors, then diagonalized by the Smith normal form.
    """
    if not G.is_abelian:
        raise AbelianError("group is not abelian")
    gens = list(G.generators)
    k = len(gens)
    if k == 0:
        A = AbelianGroup(())
        return AbelianIso(A, G, np.array([0]), np.zeros(1, dtype=np.int64), [])
    ords = [int(G.element_orders[g]) for g in gens]
    relations = []
    for i, o in enumerate(ords):
        r = [0] * k
        r[i] = o
        relations.append(r)
    # enumerate the box of exponent vectors; collisions give relations
    first: dict[int, tuple[int, ...]] = {}
    powers = []
    for g, o in zip(gens, ords):
        pw = [0]
        for _ in range(o - 1):
            pw.append(G.mul(pw[-1], g))
        powers.append(pw)
    for vec in product(*[range(o) for o in ords]):
        x = 0
        for g_pw, e in zip(powers, vec):
            x = G.mul(x, g_pw[e])
        if x in first:
            relations.append([a - b for a, b in zip(vec, first[x])])
        else:
            first[x] = vec
    relations = _hnf_rows(relations, k)
    diag, U, V, Vi = smith_normal_form(relations, with_inverse=True)
    # exponent vectors x become y = x V, so h_j = prod_i g_i^{Vi[j][i]}
    factors = []
    basis = []
    for j in range(k):
        d = diag[j] if j < len(diag) else 0
        if d == 1:
            continue
        h = 0
        for i in range(k):
            h = G.mul(h, G.power(gens[i], Vi[j][i] % ords[i]))
        factors.append(d)
        basis.append(h)
    A = AbelianGroup(tuple(factors))
    to_group = np.zeros(A.order, dtype=np.int64)
    E = A.elements
    for idx in range(A.order):
        x = 0
        for b, e in zip(basis, E[idx].tolist()):
            x = G.mul(x, G.power(b, e))
        to_group[idx] = x
    from_group = np.empty(G.order, dtype=np.int64)
    from_group[to_group] = np.arange(A.order)
    if np.unique(to_group).size != G.order:
        raise AbelianError("abelian decomposition failed")
    return AbelianIso(A, G, to_group, from_group, basis)


def _hnf_rows(rows: list[list[int]], k: int) -> list[list[int]]:
    """Reduce a relation list to at most k rows spanning the same lattice."""
    basis: list[list[int] | None] = [None] * k
    for r in rows:
        r = list(r)
        for c in range(k):
            if r[c] == 0:
                continue
            b = basis[c]
            if b is None:
                if r[c] < 0:
                    r = [-x for x in r]
                basis[c] = r
                r = None
                break
            # gcd-combine b and r in column c
            while r[c]:
                q = b[c] // r[c]
                b = [x - q * y for x, y in zip(b, r)]
                b, r = r, b
            if b[c] < 0:
                b = [-x for x in b]
            basis[c] = b
        if r is None:
            continue
    return [b for b in basis if b is not None] or [[0] * k]


# -- subgroups ------------------------------------------------------------------


class AbelianSubgroup:
    """Subgroup of an :class:`AbelianGroup` in canonical form.

    Coordinates are embedded into ``(Z/N)^r``, N the exponent, by scaling
    coordinate i by ``N/d_i``; the canonical form is the Howell form of the
    embedded generators.
    """

    def __init__(self, parent: AbelianGroup, generators: Sequence[Sequence[int]] | np.ndarray):
        self.parent = parent
        N = parent.exponent
        r = parent.rank
        gens = np.array(generators, dtype=np.int64).reshape(-1, r) if r else np.zeros((0, 0), np.int64)
        scale = np.array([N // d for d in parent.invariant_factors], dtype=np.int64)
        emb = parent.reduce(gens) * scale if r else gens
        self.howell: HowellForm = howell_form(emb, N, ncols=r)
        self._scale = scale

    @property
    def generators(self) -> np.ndarray:
        """Canonical generators in the parent's coordinates."""
        if self.parent.rank == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return self.howell.rows // self._scale

    def key(self) -> bytes:
        return self.howell.key()

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbelianSubgroup):
            return NotImplemented
        return self.parent == other.parent and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.parent, self.key()))

    def __repr__(self) -> str:
        return f"<AbelianSubgroup order={self.order} of {self.parent}>"

    @property
    def order(self) -> int:
        return self.howell.order() if self.parent.rank else 1

    def contains(self, x) -> bool:
        if self.parent.rank == 0:
            return True
        x = self.parent.reduce(x) * self._scale
        return self.howell.contains(x)

    @cached_property
    def element_indices(self) -> np.ndarray:
        """Sorted indices of the elements in the parent."""
        A = self.parent
        if A.rank == 0:
            return np.array([0], dtype=np.int64)
        emb = A.elements * self._scale
        red = self.howell.reduce(emb)
        return np.flatnonzero(~red.any(axis=1))

    def is_subgroup_of(self, other: "AbelianSubgroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def as_abelian_group(self) -> AbelianGroup:
        fg = self.parent.as_finite_group()
        sub = fg.subgroup(self.element_indices).as_group()
        return abelian_invariants(sub).abstract if sub.order > 1 else AbelianGroup(())


@dataclass
class QuotClass:
    """A quotient ``A -> A/K`` in invariant-factor form.

    ``matrix`` maps a row vector of A-coordinates to quotient coordinates:
    ``x -> (x @ matrix) mod quotient``.
    """

    kernel: AbelianSubgroup
    quotient: AbelianGroup
    matrix: np.ndarray

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.quotient.rank == 0:
            return np.zeros(x.shape[:-1] + (0,), dtype=np.int64)
        return self.quotient.reduce(x @ self.matrix)


def quotient_map(A: AbelianGroup, K: AbelianSubgroup) -> QuotClass:
    r = A.rank
    if r == 0:
        return QuotClass(K, AbelianGroup(()), np.zeros((0, 0), dtype=np.int64))
    rels = [[d if i == j else 0 for j in range(r)] for i, d in enumerate(A.invariant_factors)]
    rels += [list(map(int, g)) for g in K.generators]
    diag, U, V = smith_normal_form(rels)
    keep = [j for j in range(r) if diag[j] != 1]
    Vm = np.array(V, dtype=np.int64)
    return QuotClass(K, AbelianGroup(tuple(diag[j] for j in keep)), Vm[:, keep])


def all_subgroups(A: AbelianGroup) -> list[AbelianSubgroup]:
    """Every subgroup, each once, ordered by (order, canonical form)."""
    if A.rank == 0:
        return [AbelianSubgroup(A, [])]
    found: dict[bytes, AbelianSubgroup] = {}
    triv = AbelianSubgroup(A, np.zeros((0, A.rank), dtype=np.int64))
    found[triv.key()] = triv
    # one generator per cyclic subgroup
    cyc = []
    seen = set()
    for x in A.elements[1:]:
        C = AbelianSubgroup(A, [x])
        if C.key() not in seen:
            seen.add(C.key())
            cyc.append(x)
    frontier = [triv]
    while frontier:
        nxt = []
        for H in frontier:
            for x in cyc:
                if H.contains(x):
                    continue
                J = AbelianSubgroup(A, np.vstack([H.generators.reshape(-1, A.rank), x[None, :]]))
                if J.key() not in found:
                    found[J.key()] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda H: (H.order, H.howell.rows.tolist()))


def quot_classes(A: AbelianGroup) -> list[QuotClass]:
    """Quotients of A, one per subgroup (the bijection K -> A/K)."""
    return [quotient_map(A, K) for K in all_subgroups(A)]


def k_torsion(A: AbelianGroup, k: int) -> AbelianSubgroup:
    if A.rank == 0:
        return AbelianSubgroup(A, [])
    gens = []
    for i, d in enumerate(A.invariant_factors):
        g = np.zeros(A.rank, dtype=np.int64)
        g[i] = d // gcd(d, k)
        gens.append(g)
    return AbelianSubgroup(A, np.array(gens, dtype=np.int64).reshape(-1, A.rank))


def primes_of(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def s_torsion(A: AbelianGroup, S: Iterable[int]) -> AbelianSubgroup:
    S = set(S)
    k = 1
    for p, e in factorize(A.exponent):
        if p in S:
            k *= p**e
    return k_torsion(A, k)


def s_localize(A: AbelianGroup, S: Iterable[int]) -> QuotClass:
    """``A`` modulo its S-torsion subgroup."""
    return quotient_map(A, s_torsion(A, S))


def number_of_divisors(n: int) -> int:
    return prod(e + 1 for _, e in factorize(n)) if n > 1 else 1


def apply_endomorphism(A: AbelianGroup, M: np.ndarray, x) -> np.ndarray:
    """Image of x under the endomorphism sending basis vector i to row i of M."""
    return A.reduce(np.asarray(x, dtype=np.int64) @ np.asarray(M, dtype=np.int64))


def invariant_subgroups(A: AbelianGroup, automorphisms: Sequence[np.ndarray]) -> list[AbelianSubgroup]:
    """Subgroups L with ψ(L) = L for every given ψ (matrices on coordinates)."""
    out = []
    for L in all_subgroups(A):
        ok = True
        for M in automorphisms:
            gens = L.generators
            if gens.size == 0:
                continue
            img = AbelianSubgroup(A, apply_endomorphism(A, M, gens))
            if img != L:
                ok = False
                break
        if ok:
            out.append(L)
    return out


def abelian_hom(A: AbelianGroup, B: AbelianGroup, M: np.ndarray) -> GroupHom:
    """The table homomorphism of ``A -> B`` given by a coordinate matrix."""
    img = B.index(B.reduce(A.elements @ np.asarray(M, dtype=np.int64)))
    return GroupHom(A.as_finite_group(), B.as_finite_group(), np.atleast_1d(img))
