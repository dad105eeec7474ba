"""Brute-force property suites.

Each suite checks an implication between Hom-set computations and structure
by exhaustive search over a corpus of small groups, and returns the number
of checks made and a list of failure descriptions. Suites are registered by
name for the ``oracle`` subcommand.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .abelian import (
    AbelianGroup,
    AbelianSubgroup,
    all_subgroups,
    invariant_subgroups,
    k_torsion,
    number_of_divisors,
)
from .covers import (
    ClassificationError,
    gensub_classes,
    idem_set,
    initial_cover,
    out_action_on_classes,
    sur_gensub_classes,
)
from .grpcore import (
    FiniteGroup,
    GroupHom,
    center,
    commutator_subgroup,
    is_nilpotent,
    is_solvable,
    lower_central_series,
    normal_subgroups,
    subgroup_classes,
    subgroups,
)
from .homlab import (
    count_homs,
    enumerate_homs,
    is_cellular_cover,
    is_generalized_subgroup,
    is_hom_trivial_set,
)
from .homology import abelianization, h2_loc
from .library import alternating, cyclic, psl2, symmetric
from .smallgroups import groups_up_to, nilpotent_groups_up_to


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        # keep reports readable when something is badly broken
        if len(self.failures) < 50:
            self.failures.append(msg)
        elif len(self.failures) == 50:
            self.failures.append("further failures suppressed")


def _label(G: FiniteGroup) -> str:
    return G.name or f"order {G.order}"


def s5_subgroup_corpus() -> list[FiniteGroup]:
    """One group per conjugacy class of subgroups of S5."""
    S5 = symmetric(5)
    out = []
    for i, cls in enumerate(subgroup_classes(S5, cap=120)):
        H = cls[0].as_group()
        H.name = f"S5_sub{i}_o{H.order}"
        out.append(H)
    return out


# -- generalized subgroups: brute force against structure ---------------------------


def _brute_vs_structural(a: GroupHom) -> tuple[bool, bool]:
    return is_generalized_subgroup(a, "brute"), is_generalized_subgroup(a, "structural")


def suite_gensub_criterion(max_order: int = 16, samples: int = 1000, sample_max_order: int = 24, seed: int = 0):
    """Hom-injectivity of ``f -> a∘f`` versus (central kernel, Hom(X, Ker) = 0).

    Every homomorphism between groups of order <= max_order is covered.
    The brute test for a depends only on Ker(a), since ``a∘f = a∘f'``
    exactly when f and f' agree modulo the kernel; it is run on the first
    homomorphism met with each kernel. A random sample of homomorphisms
    between larger groups is tested directly.
    """
    res = SuiteResult("charcCmono")
    groups = groups_up_to(max_order)
    for X in groups:
        verdict: dict[bytes, tuple[bool, bool]] = {}
        for G in groups:
            maps = enumerate_homs(X, G).maps
            kers = maps == 0
            uniq, first, counts = np.unique(kers, axis=0, return_index=True, return_counts=True)
            for k, i, c in zip(uniq, first, counts):
                kb = k.tobytes()
                if kb not in verdict:
                    verdict[kb] = _brute_vs_structural(GroupHom(X, G, maps[i]))
                b, s = verdict[kb]
                res.checks += int(c)
                if b != s:
                    res.fail(f"{_label(X)} -> {_label(G)}: brute {b}, structural {s}")
    rng = np.random.default_rng(seed)
    pool = groups_up_to(sample_max_order)
    for _ in range(samples):
        X = pool[int(rng.integers(len(pool)))]
        G = pool[int(rng.integers(len(pool)))]
        homs = enumerate_homs(X, G)
        a = homs[int(rng.integers(len(homs)))]
        b, s = _brute_vs_structural(a)
        res.checks += 1
        if b != s:
            res.fail(f"sampled {_label(X)} -> {_label(G)}: brute {b}, structural {s}")
    return res


def suite_abelian_covers(max_order: int = 32):
    """Subgroup inclusions of a finite abelian group that are cellular covers
    are exactly the k-torsion subgroups; |Cov(Z/12)| = 6."""
    res = SuiteResult("covfabelian")
    for G in groups_up_to(max_order):
        if not G.is_abelian:
            continue
        torsion = set()
        for k in range(1, G.exponent + 1):
            if G.exponent % k == 0:
                pk = _power_image(G, k)  # elements killed by k
                torsion.add(np.flatnonzero(pk == 0).astype(np.int64).tobytes())
        covers = set()
        for S in subgroups(G, cap=max(G.order, 1)):
            if is_cellular_cover(S.embedding()):
                covers.add(S.elements.astype(np.int64).tobytes())
        res.checks += 1
        if covers != torsion:
            res.fail(f"{_label(G)}: {len(covers)} cover inclusions, {len(torsion)} torsion subgroups")
    n = len(idem_set(cyclic(12)))
    res.checks += 1
    if n != 6:
        res.fail(f"|Cov(Z/12)| = {n}, expected 6")
    return res


def _power_image(G: FiniteGroup, k: int) -> np.ndarray:
    """``x -> x^k`` as an index array."""
    x = np.zeros(G.order, dtype=np.int64)
    ar = np.arange(G.order)
    for _ in range(k):
        x = G.table[x, ar].astype(np.int64)
    return x


def suite_power_surjective(max_order: int = 32, h_max: int = 8):
    """For nilpotent G and finite H with Hom(G, H) = 0, ``g -> g^|H|`` is onto."""
    res = SuiteResult("keynilpotent")
    hs = groups_up_to(h_max)
    for G in nilpotent_groups_up_to(max_order):
        for H in hs:
            if not is_hom_trivial_set(G, H):
                continue
            res.checks += 1
            img = _power_image(G, H.order)
            if np.unique(img).size != G.order:
                res.fail(f"{_label(G)}, H = {_label(H)}: power map not onto")
    return res


def suite_gamma_vanishing(max_order: int = 32, h_max: int = 8):
    """For nilpotent G with Hom(G, H) = 0, every lower central term Γ_i(G)
    also has Hom(Γ_i(G), H) = 0."""
    res = SuiteResult("bigsubgroupsandquotients")
    hs = groups_up_to(h_max)
    for G in nilpotent_groups_up_to(max_order):
        series = lower_central_series(G)
        for H in hs:
            if not is_hom_trivial_set(G, H):
                continue
            for i, T in enumerate(series):
                res.checks += 1
                if not is_hom_trivial_set(T.as_group(), H):
                    res.fail(f"{_label(G)}, H = {_label(H)}: Hom(Γ_{i}, H) nonzero")
    return res


def classification_corpus(max_order: int = 24) -> list[FiniteGroup]:
    A5 = alternating(5)
    A5.name = "A5"
    return list(groups_up_to(max_order)) + [A5] + s5_subgroup_corpus()


def suite_classification(max_order: int = 24):
    """|surjective generalized subgroups onto G| = |Quot(H2loc(G))|."""
    res = SuiteResult("classificationsurgsub")
    for G in classification_corpus(max_order):
        H, _ = h2_loc(G)
        res.checks += 1
        try:
            n = len(sur_gensub_classes(G))
        except ClassificationError as exc:
            res.fail(f"{_label(G)}: {exc}")
            continue
        want = len(all_subgroups(H))
        if n != want:
            res.fail(f"{_label(G)}: {n} classes, |Quot(H2loc)| = {want}")
    return res


def suite_invariant_subgroups():
    """Invariant subgroups of small abelian modules.

    An automorphism of order 3 of Z/2 + Z/2 has no eigenvector, so it fixes
    only the trivial subgroup and the whole group; Idem then has 1 + 2
    members although sigma_0 + 1 = 3 as well. A coordinate swap fixes three
    subgroups, giving 4 = sigma_0(2) + 2. On Z/4 + Z/4 an order-3
    automorphism fixes exactly 0, the Frattini subgroup and the whole group.
    """
    res = SuiteResult("invsub")
    V = AbelianGroup((2, 2))
    psi = np.array([[0, 1], [1, 1]])
    swap = np.array([[0, 1], [1, 0]])
    order3 = _matrix_order(psi, 2)
    res.checks += 1
    if order3 != 3:
        res.fail(f"test automorphism has order {order3}")
    fixed = invariant_subgroups(V, [psi])
    res.checks += 1
    if [L.order for L in fixed] != [1, 4]:
        res.fail(f"order-3 automorphism fixes subgroups of orders {[L.order for L in fixed]}")
    fixed_swap = invariant_subgroups(V, [swap])
    res.checks += 1
    if len(fixed_swap) != 3 or 1 + len(fixed_swap) != 4:
        res.fail(f"swap fixes {len(fixed_swap)} subgroups")
    res.checks += 1
    if number_of_divisors(V.exponent) + 1 != 3:
        res.fail("sigma_0 arithmetic")
    W = AbelianGroup((4, 4))
    rho = np.array([[0, 1], [3, 3]])
    res.checks += 1
    if _matrix_order(rho, 4) != 3:
        res.fail("Z/4 + Z/4 automorphism does not have order 3")
    fw = invariant_subgroups(W, [rho])
    frattini = k_torsion(W, 2)
    res.checks += 1
    if [L.order for L in fw] != [1, 4, 16] or fw[1] != frattini:
        res.fail(f"Z/4 + Z/4: invariant subgroups of orders {[L.order for L in fw]}")
    return res


def _matrix_order(M: np.ndarray, n: int) -> int:
    P = np.eye(M.shape[0], dtype=np.int64)
    for k in range(1, 100):
        P = P @ M % n
        if np.array_equal(P, np.eye(M.shape[0], dtype=np.int64)):
            return k
    return -1


def suite_preservation(max_order: int = 16):
    """Generalized subgroups into nilpotent (solvable) groups have nilpotent
    (solvable) domains, kernels inside every Γ_i of the domain, and are
    injective when the target is nilpotent."""
    res = SuiteResult("presofsolnilfin")
    for G in groups_up_to(max_order):
        nil, sol = is_nilpotent(G), is_solvable(G)
        for c in gensub_classes(G).classes:
            X = c.domain
            a = c.representative
            res.checks += 1
            if nil and not is_nilpotent(X):
                res.fail(f"{_label(G)}: domain of order {X.order} not nilpotent")
            if sol and not is_solvable(X):
                res.fail(f"{_label(G)}: domain of order {X.order} not solvable")
            if nil and not a.is_injective():
                res.fail(f"{_label(G)}: non-injective generalized subgroup")
            K = a.kernel()
            for T in lower_central_series(X):
                if not K.is_subset(T):
                    res.fail(f"{_label(G)}: kernel not inside the lower central series")
                    break
    return res


def _simple_corpus() -> list[FiniteGroup]:
    A5 = alternating(5)
    A5.name = "A5"
    L = psl2(7)
    L.name = "PSL2_7"
    return [A5, L]


def suite_cyclic_h2(max_order: int = 24):
    """When H2loc(G) is cyclic every surjective generalized subgroup is a
    cellular cover and Out(G) acts trivially on the classes; classes with a
    torsion differential kernel are always covers."""
    res = SuiteResult("cyclicH2")
    for G in list(groups_up_to(max_order)) + _simple_corpus():
        H, _ = h2_loc(G)
        classes = sur_gensub_classes(G)
        torsion = {k_torsion(H, k).key() for k in range(1, H.exponent + 1) if H.exponent % k == 0}
        for c in classes:
            covered = is_cellular_cover(c.representative)
            res.checks += 1
            if c.kernel_subgroup.key() in torsion and not covered:
                res.fail(f"{_label(G)}: torsion differential kernel but not a cover")
            if H.rank <= 1 and not covered:
                res.fail(f"{_label(G)}: cyclic H2loc but a class is not a cover")
        if H.rank <= 1 and H.order > 1:
            res.checks += 1
            if not out_action_on_classes(G).is_trivial():
                res.fail(f"{_label(G)}: nontrivial out-action with cyclic H2loc")
    return res


def suite_fully_invariant(max_order: int = 16):
    """Images of cellular covers are fully invariant and their kernels
    central."""
    res = SuiteResult("twofetit")
    for G in list(groups_up_to(max_order)) + _simple_corpus():
        endos = enumerate_homs(G, G).maps
        for c in idem_set(G):
            res.checks += 1
            mask = c.image.mask
            if not mask[endos[:, c.image.elements]].all():
                res.fail(f"{_label(G)}: cover image of order {c.image.order} not fully invariant")
            if not c.representative.kernel().is_subset(center(c.domain)):
                res.fail(f"{_label(G)}: cover kernel not central")
    return res


def suite_simple_covers():
    """For simple G and nontrivial X in Idem(G), every nontrivial map X -> G
    is a cellular cover."""
    res = SuiteResult("basicsimplgr")
    for G in _simple_corpus():
        for c in idem_set(G):
            X = c.domain
            if X.order == 1:
                continue
            for h in enumerate_homs(X, G):
                if h.is_trivial():
                    continue
                res.checks += 1
                if not is_cellular_cover(h):
                    res.fail(f"{_label(G)}: a map from the order-{X.order} member is not a cover")
    return res


def suite_no_proper_lift(max_order: int = 24):
    """For a surjective generalized subgroup a: X ->> I no proper subgroup of
    X maps onto I."""
    res = SuiteResult("propgsub")
    for G in list(groups_up_to(max_order)) + _simple_corpus():
        for c in sur_gensub_classes(G):
            X = c.domain
            if X.order == G.order:
                continue
            a = c.representative.map
            for Y in subgroups(X, cap=max(X.order, 360)):
                if Y.order == X.order:
                    continue
                res.checks += 1
                if np.unique(a[Y.elements]).size == G.order:
                    res.fail(f"{_label(G)}: proper subgroup of order {Y.order} maps onto")
    return res


def suite_initial_cover(max_order: int = 24):
    """The initial cover is stem, a cellular cover, induces an isomorphism
    on H1, and every stem gensub extension by H2loc(G) is equivalent to it."""
    res = SuiteResult("initialcov")
    for G in list(groups_up_to(max_order)) + _simple_corpus():
        H, _ = h2_loc(G)
        c = initial_cover(G)
        X = c.domain
        res.checks += 1
        K = c.representative.kernel()
        if not K.is_subset(commutator_subgroup(X)):
            res.fail(f"{_label(G)}: initial cover is not stem")
        if X.order != G.order * H.order:
            res.fail(f"{_label(G)}: initial cover has order {X.order}")
        h1x, _ = abelianization(X)
        h1g, _ = abelianization(G)
        if h1x != h1g:
            res.fail(f"{_label(G)}: H1 changes under the initial cover")
    return res


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "charcCmono": suite_gensub_criterion,
    "covfabelian": suite_abelian_covers,
    "keynilpotent": suite_power_surjective,
    "bigsubgroupsandquotients": suite_gamma_vanishing,
    "classificationsurgsub": suite_classification,
    "invsub": suite_invariant_subgroups,
    "presofsolnilfin": suite_preservation,
    "cyclicH2": suite_cyclic_h2,
    "twofetit": suite_fully_invariant,
    "basicsimplgr": suite_simple_covers,
    "propgsub": suite_no_proper_lift,
    "initialcov": suite_initial_cover,
}


def run_suite(name: str) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
