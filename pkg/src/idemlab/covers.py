"""Generalized subgroups, cellular covers and the sets Idem(G).

A surjective generalized subgroup ``X ->> I`` is a central extension whose
kernel K admits no nonzero map from X. These are classified by the quotients
of ``H2loc(I)`` (the Schur multiplier modulo the torsion at primes dividing
|H1(I)|): the class attached to a subgroup L of ``H2loc(I)`` is the quotient
``E / L`` of the initial extension E of I by ``H2loc(I)``.

Here the classes are found by brute enumeration of central extensions and
then matched against the ``E / L`` models; the count is asserted against the
number of subgroups of ``H2loc(I)``. Cellular covers are always decided by
the Hom-bijection oracle in homlab.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .abelian import AbelianGroup, AbelianSubgroup, all_subgroups, quotient_map
from .grpcore import (
    CapExceeded,
    DEFAULT_SUBGROUP_CAP,
    FiniteGroup,
    GroupError,
    GroupHom,
    Subgroup,
    composition_length,
    identity_hom,
    is_simple,
    quotient,
    subgroup_classes,
    trivial_group,
)
from .homlab import (
    DEFAULT_BUDGET,
    automorphisms,
    count_homs,
    covers_equivalent,
    find_isomorphism,
    is_cellular_cover,
    is_generalized_subgroup,
    is_hom_trivial_set,
    order_histogram,
)
from .homology import build_central_extension, h2_loc, two_cocycle_classes


class ClassificationError(RuntimeError):
    """A count or matching predicted by the classification failed."""


@dataclass(eq=False)
class CoverClass:
    """One equivalence class of maps ``X -> G``.

    ``kernel_subgroup`` is the kernel of the differential, a subgroup of
    ``H2loc(image)``; ``h2loc`` is that group.
    """

    representative: GroupHom
    image: Subgroup
    h2loc: AbelianGroup
    kernel_subgroup: AbelianSubgroup
    is_surjective: bool
    is_generalized_subgroup: bool = True
    is_cellular_cover: bool | None = None

    @property
    def domain(self) -> FiniteGroup:
        return self.representative.domain

    @property
    def kernel_order(self) -> int:
        return self.domain.order // self.image.order

    def describe(self) -> str:
        X = self.domain
        if X.order == 1:
            return "1"
        if self.kernel_order == 1:
            return X.name or f"subgroup of order {X.order}"
        K = AbelianGroup(self.h2loc.invariant_factors)
        k = quotient_map(K, self.kernel_subgroup).quotient
        base = self.image.as_group().name or f"order {self.image.order}"
        return f"central extension of {base} by {k}"


@dataclass
class InG:
    """Pairs (I, L): a subgroup I of G and a subgroup L of ``H2loc(I)``,
    one per generalized-subgroup class, with the class itself."""

    group: FiniteGroup
    entries: list[tuple[Subgroup, AbelianSubgroup]] = field(default_factory=list)
    classes: list[CoverClass] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)


# -- surjective generalized subgroups ---------------------------------------------


@dataclass
class _Models:
    """The initial extension of I and its quotients ``E / L``."""

    I: FiniteGroup
    H: AbelianGroup
    subgroups: list[AbelianSubgroup]
    covers: list[GroupHom]


_MODELS: dict[str, _Models] = {}
_SUR: dict[str, list[CoverClass]] = {}


def _quotient_cover(E_proj: GroupHom, N: Subgroup) -> GroupHom:
    """``E/N -> I`` induced by ``E -> I`` for N inside the kernel."""
    Q, proj = quotient(E_proj.domain, N)
    _, first = np.unique(proj.map, return_index=True)
    return GroupHom(Q, E_proj.codomain, E_proj.map[first])


def _is_sur_gensub(c: GroupHom, K: AbelianGroup, budget: int) -> bool:
    # the kernel is central by construction
    return is_hom_trivial_set(c.domain, K.as_finite_group(), budget=budget)


_EXT: dict[tuple[str, tuple[int, ...]], list[GroupHom]] = {}


def _extension_classes(I: FiniteGroup, K: AbelianGroup, budget: int) -> list[GroupHom]:
    """Surjective generalized subgroups onto I with kernel K, up to equivalence."""
    if K.order == 1:
        return [identity_hom(I)]
    mk = (I.key, K.invariant_factors)
    if mk in _EXT:
        return _EXT[mk]
    kept: list[GroupHom] = []
    for f in two_cocycle_classes(I, K):
        ext = build_central_extension(I, K, f)
        c = ext.projection
        if not _is_sur_gensub(c, K, budget):
            continue
        if any(covers_equivalent(c, d, budget=budget) for d in kept):
            continue
        kept.append(c)
    _EXT[mk] = kept
    return kept


def _models(I: FiniteGroup, budget: int) -> _Models:
    m = _MODELS.get(I.key)
    if m is not None:
        return m
    H, _ = h2_loc(I)
    subs = all_subgroups(H)
    if H.order == 1:
        covers = [identity_hom(I)]
    else:
        initial = _extension_classes(I, H, budget)
        if len(initial) != 1:
            raise ClassificationError(f"expected one initial extension, found {len(initial)}")
        E = initial[0]
        covers = [_quotient_cover(E, E.domain.subgroup(L.element_indices)) for L in subs]
    m = _Models(I, H, subs, covers)
    _MODELS[I.key] = m
    return m


def sur_gensub_classes(I: FiniteGroup, *, budget: int = DEFAULT_BUDGET) -> list[CoverClass]:
    """Surjective generalized subgroups ``X ->> I`` up to equivalence.

    Extensions of I by every quotient K of ``H2loc(I)`` are enumerated, those
    with ``Hom(X, K) = 0`` kept and deduplicated. Each class is matched to
    exactly one model ``E / L``, which gives its differential kernel L.
    """
    hit = _SUR.get(I.key)
    if hit is not None:
        return hit
    M = _models(I, budget)
    H = M.H
    by_type: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for i, L in enumerate(M.subgroups):
        by_type[quotient_map(H, L).quotient.invariant_factors].append(i)
    whole = I.whole
    out: list[CoverClass] = []
    for K_type in sorted(by_type, key=lambda t: (int(np.prod(t)) if t else 1, t)):
        idxs = by_type[K_type]
        found = _extension_classes(I, AbelianGroup(K_type), budget)
        if len(found) != len(idxs):
            raise ClassificationError(
                f"{len(found)} generalized subgroups with kernel {list(K_type)}, "
                f"but H2loc has {len(idxs)} such quotients"
            )
        for c in found:
            matches = [i for i in idxs if _equivalent(c, M.covers[i], budget)]
            if len(matches) != 1:
                raise ClassificationError(f"cover matched {len(matches)} quotient models")
            out.append(CoverClass(c, whole, H, M.subgroups[matches[0]], True, True))
    # order by the differential kernel, largest first, so the identity comes first
    pos = {L.key(): i for i, L in enumerate(M.subgroups)}
    out.sort(key=lambda cc: -pos[cc.kernel_subgroup.key()])
    _SUR[I.key] = out
    return out


def _equivalent(c: GroupHom, d: GroupHom, budget: int) -> bool:
    if c.domain.order != d.domain.order:
        return False
    if c.domain.key == d.domain.key and np.array_equal(c.map, d.map):
        return True
    return covers_equivalent(c, d, budget=budget)


def differential_kernel(c: CoverClass | GroupHom, *, budget: int = DEFAULT_BUDGET) -> AbelianSubgroup:
    """Kernel of the differential of a surjective generalized subgroup.

    Found by matching against the models ``E / L``; exactly one matches.
    """
    if isinstance(c, CoverClass):
        hom = c.representative
        if not c.is_surjective:
            raise GroupError("differential kernel needs a surjective cover")
    else:
        hom = c
        if not hom.is_surjective():
            raise GroupError("differential kernel needs a surjective cover")
    M = _models(hom.codomain, budget)
    matches = [i for i, d in enumerate(M.covers) if _equivalent(hom, d, budget)]
    if len(matches) != 1:
        raise ClassificationError(f"cover matched {len(matches)} quotient models")
    return M.subgroups[matches[0]]


def initial_cover(G: FiniteGroup, *, budget: int = DEFAULT_BUDGET) -> CoverClass:
    """The surjective generalized subgroup with trivial differential kernel."""
    cands = [c for c in sur_gensub_classes(G, budget=budget) if c.kernel_subgroup.order == 1]
    if len(cands) != 1:
        raise ClassificationError(f"{len(cands)} candidates for the initial cover")
    c = cands[0]
    if not is_cellular_cover(c.representative, budget=budget):
        raise ClassificationError("initial extension is not a cellular cover")
    c.is_cellular_cover = True
    return c


# -- all generalized subgroups ----------------------------------------------------


def _conjugation(G: FiniteGroup, g: int) -> np.ndarray:
    # x -> g x g^-1
    return G.conj[G.inv[g]].astype(np.int64)


def _conjugators(G: FiniteGroup, cls: list[Subgroup]) -> list[int]:
    """For each member of a subgroup class, some g with ``g I0 g^-1`` equal to it."""
    first = cls[0]
    want = {H.elements.tobytes(): i for i, H in enumerate(cls)}
    out = [-1] * len(cls)
    for g in range(G.order):
        els = np.sort(_conjugation(G, g)[first.elements])
        i = want.get(els.tobytes())
        if i is not None and out[i] < 0:
            out[i] = g
            if min(out) >= 0:
                break
    return out


def _push(cc: CoverClass, G: FiniteGroup, H: Subgroup, conj: np.ndarray | None) -> CoverClass:
    """Compose a class onto H with the inclusion into G (after conjugation)."""
    emb = H.elements[cc.representative.map]
    if conj is not None:
        emb = conj[emb]
    image = H if conj is None else Subgroup(G, np.sort(conj[H.elements]), check=False)
    rep = GroupHom(cc.domain, G, emb)
    return CoverClass(rep, image, cc.h2loc, cc.kernel_subgroup, image.order == G.order, True, None)


def gensub_classes(G: FiniteGroup, *, cap: int = DEFAULT_SUBGROUP_CAP, budget: int = DEFAULT_BUDGET) -> InG:
    """Every generalized subgroup of G up to equivalence.

    Each factors as a surjective one onto its image followed by the
    inclusion, so the classes are indexed by pairs (I, L).
    """
    out = InG(G)
    for cls in subgroup_classes(G, cap):
        I0 = cls[0]
        sur = sur_gensub_classes(I0.as_group(), budget=budget)
        gs = _conjugators(G, cls)
        for H, g in zip(cls, gs):
            conj = None if g == 0 else _conjugation(G, g)
            for cc in sur:
                pc = _push(cc, G, I0, conj)
                out.entries.append((pc.image, pc.kernel_subgroup))
                out.classes.append(pc)
    return out


# -- cellular covers --------------------------------------------------------------


def sur_cov_classes(G: FiniteGroup, *, budget: int = DEFAULT_BUDGET) -> list[CoverClass]:
    """Surjective classes that pass the brute-force cellular-cover test."""
    out = []
    for cc in sur_gensub_classes(G, budget=budget):
        if cc.is_cellular_cover is None:
            cc.is_cellular_cover = is_cellular_cover(cc.representative, budget=budget)
        if cc.is_cellular_cover:
            out.append(cc)
    return out


@dataclass
class OutAction:
    """Permutations of the surjective classes, one per outer automorphism."""

    group: FiniteGroup
    classes: list[CoverClass]
    representatives: list[GroupHom]
    permutations: list[tuple[int, ...]]

    def fixed(self) -> list[int]:
        n = len(self.classes)
        return [i for i in range(n) if all(p[i] == i for p in self.permutations)]

    def is_trivial(self) -> bool:
        return len(self.fixed()) == len(self.classes)


def _act(alpha: np.ndarray, c: CoverClass, classes: list[CoverClass], budget: int) -> int:
    moved = GroupHom(c.domain, c.representative.codomain, alpha[c.representative.map])
    hits = [
        j
        for j, d in enumerate(classes)
        if d.domain.order == c.domain.order and _equivalent(moved, d.representative, budget)
    ]
    if len(hits) != 1:
        raise ClassificationError(f"automorphism sent a class to {len(hits)} classes")
    return hits[0]


def out_action_on_classes(G: FiniteGroup, *, budget: int = DEFAULT_BUDGET) -> OutAction:
    """The action ``[c] -> [h∘c]`` of Out(G) on surjective generalized subgroups.

    Conjugation by each generator of G is checked to act trivially.
    """
    classes = sur_gensub_classes(G, budget=budget)
    for g in G.generators:
        alpha = _conjugation(G, g)
        for i, c in enumerate(classes):
            if _act(alpha, c, classes, budget) != i:
                raise ClassificationError("an inner automorphism moved a class")
    reps = [h for h in automorphisms(G, budget=budget).outer_representatives()]
    perms = [tuple(_act(h.map, c, classes, budget) for c in classes) for h in reps]
    return OutAction(G, classes, reps, perms)


_IDEM: dict[str, list[CoverClass]] = {}


def idem_set(
    G: FiniteGroup,
    *,
    cap: int = DEFAULT_SUBGROUP_CAP,
    budget: int = DEFAULT_BUDGET,
    cross_check: bool = True,
) -> list[CoverClass]:
    """All cellular covers of G up to equivalence (the trivial class included).

    For simple G the count is checked against one plus the number of
    surjective classes fixed by Out(G).
    """
    hit = _IDEM.get(G.key)
    if hit is not None:
        return hit
    if G.order > cap:
        raise CapExceeded(f"Idem(G) capped at order {cap}, group has order {G.order}")
    out: list[CoverClass] = []
    for cls in subgroup_classes(G, cap):
        I0 = cls[0]
        for cc in sur_gensub_classes(I0.as_group(), budget=budget):
            pc = _push(cc, G, I0, None)
            if not is_cellular_cover(pc.representative, budget=budget):
                continue
            pc.is_cellular_cover = True
            if I0.order == G.order:
                cc.is_cellular_cover = True
            out.append(pc)
            # covers onto other members of the class are conjugates
            for H, g in zip(cls[1:], _conjugators(G, cls)[1:]):
                out.append(_push(cc, G, I0, _conjugation(G, g)))
                out[-1].is_cellular_cover = True
    if cross_check and is_simple(G):
        act = out_action_on_classes(G, budget=budget)
        want = 1 + len(act.fixed())
        if len(out) != want:
            raise ClassificationError(f"|Idem(G)| = {len(out)} but the out-action predicts {want}")
    _IDEM[G.key] = out
    return out


# -- iteration --------------------------------------------------------------------


def _iso_classes(groups: list[FiniteGroup]) -> list[FiniteGroup]:
    """One group per isomorphism class, in first-seen order."""
    kept: list[FiniteGroup] = []
    for X in groups:
        if any(
            Y.order == X.order and order_histogram(Y) == order_histogram(X) and find_isomorphism(X, Y) is not None
            for Y in kept
        ):
            continue
        kept.append(X)
    return kept


def _sorted_members(groups: list[FiniteGroup]) -> list[FiniteGroup]:
    return sorted(groups, key=lambda X: (X.order, order_histogram(X)))


def _idem_domains(G: FiniteGroup, cap: int, budget: int) -> list[FiniteGroup]:
    return _iso_classes([c.domain for c in idem_set(G, cap=cap, budget=budget)])


def idem_iter(
    G: FiniteGroup, n: int, *, cap: int = DEFAULT_SUBGROUP_CAP, budget: int = DEFAULT_BUDGET
) -> list[FiniteGroup]:
    """``Idem^n(G)`` as a list of groups, one per isomorphism class."""
    if n < 1:
        raise ValueError("n must be positive")
    levels = _iterate(G, n, cap, budget, stop_at_fixpoint=False)
    return levels[-1]


def _iterate(G, n_max, cap, budget, stop_at_fixpoint):
    current = _sorted_members(_idem_domains(G, cap, budget))
    levels = [current]
    expanded: set[str] = set()
    while len(levels) < n_max or (stop_at_fixpoint and n_max <= 0):
        pool = list(current)
        for X in current:
            if X.key in expanded:
                continue
            expanded.add(X.key)
            pool.extend(_idem_domains(X, cap, budget))
        nxt = _sorted_members(_iso_classes(pool))
        levels.append(nxt)
        if stop_at_fixpoint and len(nxt) == len(current):
            break
        current = nxt
    return levels


def idem_inf(G: FiniteGroup, *, cap: int = DEFAULT_SUBGROUP_CAP, budget: int = DEFAULT_BUDGET):
    """``Idem^∞(G)`` by iteration to a fixpoint.

    Returns ``(members, depth)``, depth being the least n with
    ``Idem^n(G) = Idem^∞(G)``. For simple G the depth is asserted to be at
    most 2.
    """
    levels = _iterate(G, 0, cap, budget, stop_at_fixpoint=True)
    members = levels[-1]
    depth = len(levels) - 1 if len(levels) > 1 else 1
    if G.order > 1 and is_simple(G) and depth > 2:
        raise ClassificationError(f"Idem iteration of a simple group stabilized only at depth {depth}")
    return members, depth


# -- iterated generalized subgroups ----------------------------------------------


@dataclass
class DepthReport:
    group: str
    composition_length: int
    depths: list[int]
    stabilized_at: int
    composites_checked: int
    ok: bool


def _gensub_domains(G: FiniteGroup, cap: int, budget: int) -> list[FiniteGroup]:
    return _iso_classes([c.domain for c in gensub_classes(G, cap=cap, budget=budget).classes])


def iterated_gensub_depth_check(
    G: FiniteGroup, *, cap: int = DEFAULT_SUBGROUP_CAP, budget: int = DEFAULT_BUDGET
) -> DepthReport:
    """Check that composites of surjective generalized subgroups are
    generalized subgroups, and that iterated domain sets stop growing by
    depth ``l + 1`` (l the composition length)."""
    ell = composition_length(G)
    checked = 0
    ok = True
    for a in sur_gensub_classes(G, budget=budget):
        for b in sur_gensub_classes(a.domain, budget=budget):
            comp = a.representative.compose(b.representative)
            checked += 1
            if not is_generalized_subgroup(comp, "brute", budget=budget):
                ok = False
    sizes = []
    current = _sorted_members(_gensub_domains(G, cap, budget))
    sizes.append(len(current))
    expanded: set[str] = set()
    stabilized = None
    depth = 1
    while stabilized is None and depth <= ell + 2:
        pool = list(current)
        for X in current:
            if X.key not in expanded:
                expanded.add(X.key)
                pool.extend(_gensub_domains(X, cap, budget))
        nxt = _sorted_members(_iso_classes(pool))
        depth += 1
        sizes.append(len(nxt))
        if len(nxt) == len(current):
            stabilized = depth - 1
        current = nxt
    if stabilized is None or stabilized > ell + 1:
        ok = False
    return DepthReport(G.name or f"order {G.order}", ell, sizes, stabilized or -1, checked, ok)


def trivial_cover(G: FiniteGroup) -> CoverClass:
    """The class of ``1 -> G``."""
    one = trivial_group()
    rep = GroupHom(one, G, np.zeros(1, dtype=np.int64))
    return CoverClass(rep, G.trivial, AbelianGroup(()), AbelianSubgroup(AbelianGroup(()), []), G.order == 1, True, True)


def hom_counts(c: GroupHom, *, budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """``(|Hom(X, X)|, |Hom(X, G)|)`` for a map ``X -> G``."""
    return count_homs(c.domain, c.domain, budget=budget), count_homs(c.domain, c.codomain, budget=budget)
