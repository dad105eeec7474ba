import itertools

import numpy as np
import pytest

from idemlab.abelian import AbelianGroup
from idemlab.grpcore import center, quotient
from idemlab.homlab import are_isomorphic
from idemlab.homology import (
    abelianization,
    build_central_extension,
    cohomology_order,
    h2_loc,
    is_stem,
    schur_multiplier,
    two_cocycle_classes,
)
from idemlab.library import (
    abelian_from_orders,
    alternating,
    cyclic,
    dihedral,
    psl2,
    quaternion8,
    sl2,
    symmetric,
)
from idemlab.smallgroups import groups_up_to
from oracles_naive import bar_h2_dim, p_rank

# classical Schur multipliers
KNOWN_H2 = [
    (lambda: cyclic(7), ()),
    (lambda: abelian_from_orders([2, 2]), (2,)),
    (lambda: abelian_from_orders([2, 2, 2]), (2, 2, 2)),
    (lambda: abelian_from_orders([2, 4]), (2,)),
    (lambda: abelian_from_orders([3, 3]), (3,)),
    (lambda: symmetric(3), ()),
    (lambda: dihedral(4), (2,)),
    (lambda: quaternion8(), ()),
    (lambda: alternating(4), (2,)),
    (lambda: symmetric(4), (2,)),
    (lambda: sl2(3), ()),
    (lambda: alternating(5), (2,)),
    (lambda: sl2(5), ()),
    (lambda: psl2(7), (2,)),
]


@pytest.mark.parametrize("make,inv", KNOWN_H2)
def test_schur_multiplier_known(make, inv):
    assert schur_multiplier(make()).invariant_factors == inv


def test_abelianization():
    h1, proj = abelianization(symmetric(4))
    assert h1.invariant_factors == (2,)
    assert abelianization(alternating(5))[0].invariant_factors == ()
    h1, proj = abelianization(dihedral(4))
    assert h1.invariant_factors == (2, 2)
    assert len(proj) == 8


@pytest.mark.parametrize("G", groups_up_to(12), ids=lambda G: f"order{G.order}")
def test_h2_against_bar_complex(G):
    """dim H^2(G, F_p) = p-rank(H1) + p-rank(H2) by universal coefficients."""
    h1 = abelianization(G)[0].invariant_factors
    h2 = schur_multiplier(G).invariant_factors
    for p in (2, 3):
        d = bar_h2_dim(G, p)
        assert d == p_rank(h1, p) + p_rank(h2, p)
        assert cohomology_order(G, p) == p**d


def test_h2_loc_drops_h1_primes():
    H, q = h2_loc(abelian_from_orders([2, 2]))
    assert H.invariant_factors == ()
    H, _ = h2_loc(alternating(5))
    assert H.invariant_factors == (2,)
    H, _ = h2_loc(alternating(4))
    # H1(A4) = Z/3 does not touch the 2-part
    assert H.invariant_factors == (2,)


def _normalized_cocycles_v4():
    V = abelian_from_orders([2, 2])
    t = V.table
    cells = [(g, h) for g in range(1, 4) for h in range(1, 4)]
    out = []
    for bits in itertools.product((0, 1), repeat=len(cells)):
        f = np.zeros((4, 4), dtype=np.int64)
        for (g, h), b in zip(cells, bits):
            f[g, h] = b
        ok = all(
            (f[g, h] + f[t[g, h], k] - f[h, k] - f[g, t[h, k]]) % 2 == 0
            for g in range(4)
            for h in range(4)
            for k in range(4)
        )
        if ok:
            out.append(f)
    return V, out


def test_v4_cocycle_classes_brute():
    V, Z = _normalized_cocycles_v4()
    t = V.table
    B = set()
    for c in itertools.product((0, 1), repeat=3):
        u = np.array((0,) + c)
        B.add(((u[:, None] + u[None, :] - u[t]) % 2).tobytes())
    classes = {frozenset(((z + np.frombuffer(b, dtype=np.int64).reshape(4, 4)) % 2).tobytes() for b in B) for z in Z}
    assert len(Z) == 16 and len(B) == 2 and len(classes) == 8
    reps = two_cocycle_classes(V, AbelianGroup((2,)))
    assert len(reps) == 8
    seen = set()
    for r in reps:
        r.check()
        f = np.ascontiguousarray(r.table[:, :, 0] % 2, dtype=np.int64)
        cls = next(c for c in classes if f.tobytes() in c)
        seen.add(cls)
    assert len(seen) == 8


def test_extensions_of_c2_by_c2():
    K = AbelianGroup((2,))
    reps = two_cocycle_classes(cyclic(2), K)
    assert len(reps) == 2
    groups = [build_central_extension(cyclic(2), K, r).group for r in reps]
    assert sorted(int(G.element_orders.max()) for G in groups) == [2, 4]


def test_double_cover_of_a5():
    A5 = alternating(5)
    K = AbelianGroup((2,))
    exts = [build_central_extension(A5, K, r) for r in two_cocycle_classes(A5, K)]
    assert len(exts) == 2
    split = [e for e in exts if not is_stem(e)]
    stem = [e for e in exts if is_stem(e)]
    assert len(split) == 1 and len(stem) == 1
    E = stem[0]
    assert abelianization(E.group)[0].order == 1
    assert are_isomorphic(E.group, sl2(5))
    assert E.projection.is_surjective() and E.projection.is_homomorphism()
    assert center(E.group).order == 2
    Q, _ = quotient(E.group, E.kernel_subgroup())
    assert are_isomorphic(Q, A5)
    # the split extension is A5 x Z/2
    assert abelianization(split[0].group)[0].invariant_factors == (2,)
