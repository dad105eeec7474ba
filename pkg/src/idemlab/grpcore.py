"""Finite groups stored as dense multiplication tables.

Elements are the integers ``0..n-1`` and the identity is always ``0``.
Tables are read-only numpy arrays so groups can be shared freely and
hashed by content.
"""
from __future__ import annotations

import hashlib
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 2160
DEFAULT_SUBGROUP_CAP = 360


class GroupError(ValueError):
    """Raised for malformed tables or invalid group data."""


class CapExceeded(GroupError):
    """Raised when an order exceeds a configured cap."""


def _closure_mask(table: np.ndarray, seeds: Iterable[int]) -> np.ndarray:
    n = table.shape[0]
    gens = np.unique(np.asarray(list(seeds), dtype=np.int64))
    gens = gens[gens != 0]
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    if gens.size == 0:
        return mask
    mask[gens] = True
    frontier = np.flatnonzero(mask)
    while frontier.size:
        prod = table[np.ix_(frontier, gens)].ravel()
        new = np.unique(prod[~mask[prod]])
        mask[new] = True
        frontier = new
    return mask


class FiniteGroup:
    """A finite group given by its Cayley table.

    ``table[a, b]`` is the index of ``a*b``. Construction validates the
    table unless ``validate=False``: identity at 0, every row and column a
    permutation, and associativity via Light's test on a generating set.
    """

    def __init__(
        self,
        table,
        *,
        generators: Sequence[int] | None = None,
        name: str | None = None,
        labels: Sequence[str] | None = None,
        validate: bool = True,
        cap: int = DEFAULT_ORDER_CAP,
    ):
        table = np.array(table, dtype=np.int32, copy=True)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        n = table.shape[0]
        if n > cap:
            raise CapExceeded(f"group order {n} exceeds cap {cap}")
        table.setflags(write=False)
        self.table = table
        self.order = n
        self.name = name
        self.labels = tuple(labels) if labels is not None else None
        if validate:
            self._check_latin()
        inv = np.argmin(table, axis=1).astype(np.int32)  # position of 0 in each row
        if validate and not np.all(table[inv, np.arange(n)] == 0):
            raise GroupError("left and right inverses differ")
        inv.setflags(write=False)
        self.inv = inv
        if generators is None:
            gens = greedy_generators(self)
        else:
            gens = tuple(int(g) for g in generators if int(g) != 0)
            if any(g < 0 or g >= n for g in gens):
                raise GroupError("generator index out of range")
            if validate and not _closure_mask(table, gens).all():
                raise GroupError("given generators do not generate the group")
        self.generators: tuple[int, ...] = gens
        if validate:
            self._check_associative()

    # -- validation -------------------------------------------------------
    def _check_latin(self) -> None:
        t = self.table
        n = self.order
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entry out of range")
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise GroupError("index 0 is not a two-sided identity")
        srt = np.sort(t, axis=1)
        if not (srt == ar).all():
            raise GroupError("a row of the table is not a permutation")
        srt = np.sort(t, axis=0)
        if not (srt == ar[:, None]).all():
            raise GroupError("a column of the table is not a permutation")

    def _check_associative(self) -> None:
        # Light's test: the elements a with (xa)y = x(ay) for all x, y form a
        # closed set, so checking a generating set suffices.
        if not _closure_mask(self.table, self.generators).all():
            raise GroupError("generators do not generate the table")
        t = self.table
        for a in self.generators:
            lhs = t[t[:, a], :]
            rhs = t[:, t[a, :]]
            if not np.array_equal(lhs, rhs):
                raise GroupError("multiplication is not associative")

    # -- basic data -------------------------------------------------------
    def __repr__(self) -> str:
        nm = f" {self.name}" if self.name else ""
        return f"<FiniteGroup{nm} order={self.order}>"

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def power(self, a: int, k: int) -> int:
        k %= int(self.element_orders[a])
        x, base = 0, int(a)
        while k:
            if k & 1:
                x = int(self.table[x, base])
            base = int(self.table[base, base])
            k >>= 1
        return x

    @cached_property
    def key(self) -> str:
        """Content hash of the table."""
        return hashlib.sha256(self.table.tobytes() + str(self.order).encode()).hexdigest()

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        ar = np.arange(n)
        out = np.zeros(n, dtype=np.int64)
        cur = ar.copy()
        k = 1
        while (out == 0).any():
            hit = (cur == 0) & (out == 0)
            out[hit] = k
            cur = self.table[cur, ar]
            k += 1
        out.setflags(write=False)
        return out

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, x] = g^-1 x g``."""
        t = self.table
        left = t[self.inv, :]
        out = t[left, np.arange(self.order)[:, None]].astype(np.int32)
        out.setflags(write=False)
        return out

    @cached_property
    def _class_data(self):
        n = self.order
        class_of = np.full(n, -1, dtype=np.int64)
        conjugator = np.zeros(n, dtype=np.int64)
        reps = []
        conj = self.conj
        for x in range(n):
            if class_of[x] >= 0:
                continue
            orbit, first = np.unique(conj[:, x], return_index=True)
            class_of[orbit] = len(reps)
            conjugator[orbit] = first
            reps.append(x)
        return np.array(reps, dtype=np.int64), class_of, conjugator

    @property
    def class_reps(self) -> np.ndarray:
        return self._class_data[0]

    @property
    def class_of(self) -> np.ndarray:
        return self._class_data[1]

    @property
    def conjugator(self) -> np.ndarray:
        """``conjugator[y]`` is some g with ``rep^g = y`` for the class rep of y."""
        return self._class_data[2]

    def conjugacy_classes(self) -> list[np.ndarray]:
        cls = self.class_of
        return [np.flatnonzero(cls == i) for i in range(len(self.class_reps))]

    def centralizer_mask(self, x: int) -> np.ndarray:
        return self.table[x, :] == self.table[:, x]

    # -- subgroups ----------------------------------------------------------
    def closure(self, seeds: Iterable[int]) -> np.ndarray:
        """Sorted elements of the subgroup generated by ``seeds``."""
        return np.flatnonzero(_closure_mask(self.table, seeds))

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        return Subgroup(self, elements)

    def generated(self, seeds: Iterable[int]) -> "Subgroup":
        return Subgroup(self, self.closure(seeds), check=False)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order), check=False)

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, [0], check=False)


def greedy_generators(G: FiniteGroup) -> tuple[int, ...]:
    """Small generating set: repeatedly add the element whose closure with
    the current subgroup is largest, smallest index on ties."""
    n = G.order
    if n == 1:
        return ()
    orders = G.element_orders
    first = int(np.argmax(orders))
    gens = [first]
    mask = _closure_mask(G.table, gens)
    while not mask.all():
        best, best_size = -1, -1
        seen = mask.copy()
        for x in range(n):
            if seen[x]:
                continue
            m = _closure_mask(G.table, gens + [x])
            size = int(m.sum())
            # every element of <gens, x> outside the old subgroup gives at most
            # this subgroup, so skip re-testing them
            seen |= m
            if size > best_size:
                best, best_size = x, size
                if size == n:
                    break
        gens.append(best)
        mask = _closure_mask(G.table, gens)
    return tuple(gens)


class Subgroup:
    """A subgroup of a parent group, stored as a sorted index array."""

    __slots__ = ("parent", "elements", "_mask", "_group", "__weakref__")

    def __init__(self, parent: FiniteGroup, elements: Iterable[int], *, check: bool = True):
        els = np.unique(np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements, dtype=np.int64))
        if check:
            if els.size == 0 or els[0] != 0:
                raise GroupError("subgroup must contain the identity")
            if els[-1] >= parent.order:
                raise GroupError("subgroup element out of range")
            prods = parent.table[np.ix_(els, els)]
            mask = np.zeros(parent.order, dtype=bool)
            mask[els] = True
            if not mask[prods].all():
                raise GroupError("element set is not closed under multiplication")
        els.setflags(write=False)
        self.parent = parent
        self.elements = els
        self._mask = None
        self._group = None

    @property
    def order(self) -> int:
        return int(self.elements.size)

    def __len__(self) -> int:
        return self.order

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.parent.order, dtype=bool)
            m[self.elements] = True
            self._mask = m
        return self._mask

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return (self.parent is other.parent or self.parent.key == other.parent.key) and np.array_equal(
            self.elements, other.elements
        )

    def __hash__(self) -> int:
        return hash((self.parent.order, self.elements.tobytes()))

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.parent!r}>"

    def is_subset(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.elements].all())

    def is_normal(self, within: "Subgroup | None" = None) -> bool:
        G = self.parent
        conj_by = G.generators if within is None else within_generators(within)
        if not conj_by:
            return True
        images = G.conj[np.ix_(np.asarray(conj_by), self.elements)]
        return bool(self.mask[images].all())

    def conjugate(self, g: int) -> "Subgroup":
        return Subgroup(self.parent, self.parent.conj[g, self.elements], check=False)

    def as_group(self) -> FiniteGroup:
        """The subgroup as a standalone group, elements relabelled in sorted order."""
        if self._group is None:
            els = self.elements
            pos = np.full(self.parent.order, -1, dtype=np.int64)
            pos[els] = np.arange(els.size)
            tab = pos[self.parent.table[np.ix_(els, els)]]
            name = None
            self._group = FiniteGroup(tab, validate=False, name=name)
        return self._group

    def embedding(self):
        """Inclusion of ``as_group()`` into the parent."""
        return GroupHom(self.as_group(), self.parent, self.elements)


def within_generators(H: Subgroup) -> list[int]:
    g = H.as_group()
    return [int(H.elements[x]) for x in g.generators]


class GroupHom:
    """A homomorphism given by its full element map."""

    __slots__ = ("domain", "codomain", "map")

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, mapping, *, check: bool = False):
        m = np.array(mapping, dtype=np.int64, copy=True)
        if m.shape != (domain.order,):
            raise GroupError("map length does not match domain order")
        m.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.map = m
        if check and not self.is_homomorphism():
            raise GroupError("map is not a homomorphism")

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def __repr__(self) -> str:
        return f"<GroupHom {self.domain!r} -> {self.codomain!r}>"

    def is_homomorphism(self) -> bool:
        m = self.map
        if m.min() < 0 or m.max() >= self.codomain.order:
            return False
        lhs = m[self.domain.table]
        rhs = self.codomain.table[m[:, None], m[None, :]]
        return bool(np.array_equal(lhs, rhs))

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, np.flatnonzero(self.map == 0), check=False)

    def image(self) -> Subgroup:
        return Subgroup(self.codomain, np.unique(self.map), check=False)

    def is_injective(self) -> bool:
        return int(np.count_nonzero(self.map == 0)) == 1

    def is_surjective(self) -> bool:
        return np.unique(self.map).size == self.codomain.order

    def is_trivial(self) -> bool:
        return not self.map.any()

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self ∘ inner``."""
        if inner.codomain is not self.domain and inner.codomain.key != self.domain.key:
            raise GroupError("maps are not composable")
        return GroupHom(inner.domain, self.codomain, self.map[inner.map])

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (
            self.domain.key == other.domain.key
            and self.codomain.key == other.codomain.key
            and np.array_equal(self.map, other.map)
        )

    def __hash__(self) -> int:
        return hash(self.map.tobytes())


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order))


def trivial_group(name: str = "1") -> FiniteGroup:
    return FiniteGroup([[0]], name=name)


# -- structure ----------------------------------------------------------------


def center(G: FiniteGroup) -> Subgroup:
    mask = (G.table == G.table.T).all(axis=1)
    return Subgroup(G, np.flatnonzero(mask), check=False)


def normal_closure(G: FiniteGroup, seeds: Iterable[int], within: Subgroup | None = None) -> Subgroup:
    conj_by = np.asarray(G.generators if within is None else within_generators(within), dtype=np.int64)
    mask = _closure_mask(G.table, seeds)
    while True:
        els = np.flatnonzero(mask)
        if conj_by.size == 0:
            break
        imgs = np.unique(G.conj[np.ix_(conj_by, els)])
        new = imgs[~mask[imgs]]
        if new.size == 0:
            break
        mask = _closure_mask(G.table, np.concatenate([_generators_of_mask(G, mask), new]))
    return Subgroup(G, np.flatnonzero(mask), check=False)


def _generators_of_mask(G: FiniteGroup, mask: np.ndarray) -> np.ndarray:
    # a cheap generating set: greedily keep elements not yet generated
    gens: list[int] = []
    cur = np.zeros(G.order, dtype=bool)
    cur[0] = True
    for x in np.flatnonzero(mask):
        if not cur[x]:
            gens.append(int(x))
            cur = _closure_mask(G.table, gens)
    return np.asarray(gens, dtype=np.int64)


def commutator_subgroup(G: FiniteGroup, A: Subgroup | None = None, B: Subgroup | None = None) -> Subgroup:
    """``[A, B]``, generated by all ``a^-1 b^-1 a b``; defaults to ``[G, G]``."""
    A = G.whole if A is None else A
    B = G.whole if B is None else B
    t, inv = G.table, G.inv
    a = A.elements[:, None]
    b = B.elements[None, :]
    comm = t[t[t[inv[a], inv[b]], a], b]
    seeds = np.unique(comm)
    joined = np.union1d(A.elements, B.elements)
    H = G.generated(seeds)
    within = G.generated(joined)
    return normal_closure(G, _generators_of_mask(G, H.mask), within=within)


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    """``Γ_0 = G``, ``Γ_{i+1} = [G, Γ_i]``, listed until it stabilizes."""
    series = [G.whole]
    while True:
        nxt = commutator_subgroup(G, G.whole, series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    series = [G.whole]
    while True:
        H = series[-1]
        nxt = commutator_subgroup(G, H, H)
        if nxt == H:
            return series
        series.append(nxt)


def is_nilpotent(G: FiniteGroup) -> bool:
    return lower_central_series(G)[-1].order == 1


def is_solvable(G: FiniteGroup) -> bool:
    return derived_series(G)[-1].order == 1


def is_perfect(G: FiniteGroup) -> bool:
    return commutator_subgroup(G).order == G.order


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """``G/N`` with cosets ordered by their smallest element, and the projection."""
    if not N.is_normal():
        raise GroupError("quotient by a non-normal subgroup")
    t = G.table
    rep_of = t[:, N.elements].min(axis=1)
    reps = np.unique(rep_of)
    idx = np.full(G.order, -1, dtype=np.int64)
    idx[reps] = np.arange(reps.size)
    proj = idx[rep_of]
    qt = proj[t[np.ix_(reps, reps)]]
    Q = FiniteGroup(qt, validate=False)
    return Q, GroupHom(G, Q, proj)


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups, as joins of normal closures of conjugacy classes."""
    closures = []
    seen_cl = set()
    for r in G.class_reps:
        N = normal_closure(G, [int(r)])
        k = N.elements.tobytes()
        if k not in seen_cl:
            seen_cl.add(k)
            closures.append(N)
    found = {G.trivial.elements.tobytes(): G.trivial}
    frontier = [G.trivial]
    while frontier:
        nxt = []
        for N in frontier:
            for C in closures:
                if C.is_subset(N):
                    continue
                J = G.generated(np.concatenate([_generators_of_mask(G, N.mask), _generators_of_mask(G, C.mask)]))
                k = J.elements.tobytes()
                if k not in found:
                    found[k] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda H: (H.order, H.elements.tolist()))


def is_simple(G: FiniteGroup) -> bool:
    return G.order > 1 and len(normal_subgroups(G)) == 2


def composition_length(G: FiniteGroup) -> int:
    """Length of a composition series, by repeated extraction of a maximal
    normal subgroup (smallest element set among the largest on ties)."""
    length = 0
    H = G
    while H.order > 1:
        normals = [N for N in normal_subgroups(H) if N.order < H.order]
        maximal = [N for N in normals if not any(N.order < M.order and N.is_subset(M) for M in normals)]
        best = max(maximal, key=lambda N: (N.order, [-int(x) for x in N.elements]))
        H = best.as_group()
        length += 1
    return length


def subgroup_classes(G: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> list[list[Subgroup]]:
    """Conjugacy classes of subgroups, each class sorted, classes sorted by
    (order, first member)."""
    if G.order > cap:
        raise CapExceeded(f"subgroup enumeration capped at order {cap}, group has order {G.order}")
    n = G.order
    # one generator per cyclic subgroup
    cyc_seen = set()
    cyc_gens = []
    for x in range(1, n):
        c = G.closure([x])
        k = c.tobytes()
        if k not in cyc_seen:
            cyc_seen.add(k)
            cyc_gens.append(x)
    known: dict[bytes, int] = {}
    classes: list[list[Subgroup]] = []
    rep_gens: list[list[int]] = []

    def register(els: np.ndarray, gens: list[int]) -> bool:
        k = els.tobytes()
        if k in known:
            return False
        conjs = np.sort(G.conj[:, els].astype(np.int64), axis=1)
        uniq = np.unique(conjs, axis=0)
        cid = len(classes)
        members = []
        for row in uniq:
            known[row.tobytes()] = cid
            members.append(Subgroup(G, row, check=False))
        members.sort(key=lambda H: H.elements.tolist())
        classes.append(members)
        rep_gens.append(gens)
        return True

    register(np.array([0], dtype=np.int64), [])
    queue = [0]
    while queue:
        cid = queue.pop()
        H = classes[cid][0]
        # generators of the chosen representative: recompute cheaply
        hg = list(_generators_of_mask(G, H.mask))
        for x in cyc_gens:
            if H.mask[x]:
                continue
            els = G.closure(hg + [x])
            if register(els, hg + [x]):
                queue.append(len(classes) - 1)
    classes.sort(key=lambda cl: (cl[0].order, cl[0].elements.tolist()))
    return classes


def subgroups(G: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> list[Subgroup]:
    out = [H for cl in subgroup_classes(G, cap) for H in cl]
    out.sort(key=lambda H: (H.order, H.elements.tolist()))
    return out


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    imgs = G.conj[:, H.elements]
    ok = H.mask[imgs].all(axis=1)
    return Subgroup(G, np.flatnonzero(ok), check=False)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """``G x H`` with element ``(g, h)`` at index ``g*|H| + h``."""
    m = H.order
    tab = (G.table[:, None, :, None] * m + H.table[None, :, None, :]).reshape(G.order * m, G.order * m)
    gens = [g * m for g in G.generators] + list(H.generators)
    return FiniteGroup(tab, generators=gens or None, name=name, validate=False)
