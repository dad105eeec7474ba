import itertools

import numpy as np
import pytest

from idemlab.grpcore import (
    CapExceeded,
    FiniteGroup,
    GroupError,
    GroupHom,
    center,
    commutator_subgroup,
    composition_length,
    derived_series,
    direct_product,
    is_nilpotent,
    is_perfect,
    is_simple,
    is_solvable,
    lower_central_series,
    normal_subgroups,
    quotient,
    subgroup_classes,
    subgroups,
)
from idemlab.homlab import are_isomorphic
from idemlab.library import alternating, cyclic, dihedral, permutation_group, sl2, symmetric


def brute_subgroup_count(G):
    """Subsets closed under the product, by closure of every pair of elements."""
    found = set()
    for a, b in itertools.combinations_with_replacement(range(G.order), 2):
        found.add(G.closure([a, b]).tobytes())
    # every subgroup of these small groups is 2-generated
    return len(found)


def test_a5_from_permutations():
    G = permutation_group([[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]], 5)
    assert G.order == 60
    assert G.table[0].tolist() == list(range(60))


def test_trivial_table():
    G = FiniteGroup([[0]])
    assert G.order == 1
    assert len(subgroups(G)) == 1
    assert composition_length(G) == 0


def test_cyclic_closure():
    G = cyclic(12)
    assert sorted(G.closure([1]).tolist()) == list(range(12))
    assert G.element_orders.max() == 12


def test_rejects_non_associative_table():
    # a Latin square with identity 0 that is not associative (order 5 loop)
    tab = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupError):
        FiniteGroup(tab)


def test_rejects_non_latin_table():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]])


def test_cap():
    with pytest.raises(CapExceeded):
        permutation_group([[1, 2, 3, 4, 5, 0], [1, 0, 2, 3, 4, 5]], 6, cap=100)


def test_center_matches_exhaustive_check():
    for G in (alternating(5), dihedral(4), sl2(5), cyclic(6)):
        t = G.table
        brute = [x for x in range(G.order) if np.array_equal(t[x], t[:, x])]
        assert center(G).elements.tolist() == brute
    assert center(alternating(5)).order == 1
    assert center(sl2(5)).order == 2


def test_commutator_subgroups():
    assert commutator_subgroup(alternating(5)).order == 60
    assert commutator_subgroup(cyclic(8)).order == 1
    S3 = symmetric(3)
    D = commutator_subgroup(S3)
    assert D.order == 3
    # exhaustive: closure of all commutators
    t, inv = S3.table, S3.inv
    comms = {int(t[t[inv[a], inv[b]], t[a, b]]) for a in range(6) for b in range(6)}
    assert sorted(S3.closure(comms).tolist()) == D.elements.tolist()


def test_lower_central_series():
    assert [H.order for H in lower_central_series(cyclic(6))] == [6, 1]
    d8 = [H.order for H in lower_central_series(dihedral(4))]
    assert d8 == [8, 2, 1]
    assert [H.order for H in lower_central_series(alternating(5))] == [60]


def test_series_predicates():
    A5 = alternating(5)
    assert is_simple(A5) and is_perfect(A5) and not is_nilpotent(A5) and not is_solvable(A5)
    C = cyclic(12)
    assert is_nilpotent(C) and is_solvable(C) and not is_perfect(C)
    S3 = symmetric(3)
    assert is_solvable(S3) and not is_nilpotent(S3)
    assert [H.order for H in derived_series(symmetric(4))] == [24, 12, 4, 1]


def test_quotient():
    G = sl2(5)
    Q, proj = quotient(G, center(G))
    assert Q.order == 60
    assert are_isomorphic(Q, alternating(5))
    assert proj.is_surjective()
    assert proj.kernel() == center(G)
    T, p = quotient(G, G.whole)
    assert T.order == 1
    I, p1 = quotient(G, G.trivial)
    assert I.order == G.order and p1.is_injective()


def test_quotient_needs_normal():
    S3 = symmetric(3)
    H = S3.generated([next(x for x in range(6) if S3.element_orders[x] == 2)])
    with pytest.raises(GroupError):
        quotient(S3, H)


def test_subgroup_counts():
    assert len(subgroups(cyclic(12))) == 6
    assert len(subgroups(alternating(5))) == 59
    assert len(subgroup_classes(alternating(5))) == 9
    for G in (symmetric(3), dihedral(4), symmetric(4)):
        assert len(subgroups(G)) == brute_subgroup_count(G)


def test_normal_subgroups():
    assert len(normal_subgroups(symmetric(4))) == 4
    assert len(normal_subgroups(alternating(5))) == 2
    assert len(normal_subgroups(cyclic(12))) == 6


def test_composition_length():
    assert composition_length(alternating(5)) == 1
    assert composition_length(cyclic(8)) == 3
    assert composition_length(symmetric(4)) == 4


def test_group_hom_checks():
    C4, C2 = cyclic(4), cyclic(2)
    h = GroupHom(C4, C2, [0, 1, 0, 1], check=True)
    assert h.kernel().order == 2
    with pytest.raises(GroupError):
        GroupHom(C4, C2, [0, 1, 1, 1], check=True)


def test_direct_product():
    P = direct_product(cyclic(2), cyclic(3))
    assert P.order == 6 and P.is_abelian and P.element_orders.max() == 6
