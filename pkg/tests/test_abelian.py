import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idemlab.abelian import (
    AbelianError,
    AbelianGroup,
    abelian_group,
    abelian_invariants,
    all_subgroups,
    hom_count_abelian,
    k_torsion,
    quot_classes,
    s_localize,
    smith_normal_form,
)
from idemlab.library import abelian_from_orders, cyclic
from oracles_naive import determinantal_diagonal, naive_homs


def subset_closure_subgroups(A: AbelianGroup) -> set[bytes]:
    """Every subgroup of A as a sorted index set, by closing all triples.

    All test inputs have rank at most 3, so triples suffice.
    """
    G = A.as_finite_group()
    out = set()
    for trip in itertools.combinations_with_replacement(range(G.order), 3):
        out.add(np.sort(np.asarray(G.closure(list(trip)), dtype=np.int64)).tobytes())
    return out


def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]])[0] == [1, 6]
    assert smith_normal_form([[0, 0], [0, 0]])[0] == [0, 0]
    assert smith_normal_form(np.eye(3, dtype=int))[0] == [1, 1, 1]


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda r: st.integers(1, 3).flatmap(
            lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )
)
def test_snf_matches_determinantal_divisors(M):
    diag, U, V = smith_normal_form(M)
    assert [abs(d) for d in diag] == determinantal_diagonal(M)
    D = np.array(U) @ np.array(M) @ np.array(V)
    k = len(diag)
    assert np.array_equal(np.diag(D)[:k], np.array(diag))
    assert abs(round(np.linalg.det(np.array(U, dtype=float)))) == 1
    assert abs(round(np.linalg.det(np.array(V, dtype=float)))) == 1


def test_normal_form():
    assert abelian_group(2, 6).invariant_factors == (2, 6)
    assert abelian_group(4, 6).invariant_factors == (2, 12)
    assert abelian_group(1).invariant_factors == ()
    with pytest.raises(AbelianError):
        AbelianGroup((4, 2))


def test_invariants_of_tables():
    assert abelian_invariants(abelian_from_orders([2, 2])).abstract.invariant_factors == (2, 2)
    assert abelian_invariants(cyclic(12)).abstract.invariant_factors == (12,)
    assert abelian_invariants(abelian_from_orders([4, 2])).abstract.invariant_factors == (2, 4)
    assert abelian_invariants(abelian_from_orders([3, 4, 2])).abstract.invariant_factors == (2, 12)


def test_invariants_give_isomorphism():
    G = abelian_from_orders([2, 6, 4])
    iso = abelian_invariants(G)
    A = iso.abstract
    # to_group is a bijection respecting addition
    assert sorted(iso.to_group.tolist()) == list(range(G.order))
    add = A.add_table
    lhs = G.table[iso.to_group[:, None], iso.to_group[None, :]]
    assert np.array_equal(lhs, iso.to_group[add])


def test_subgroup_counts():
    assert len(all_subgroups(AbelianGroup((12,)))) == 6
    assert len(all_subgroups(AbelianGroup(()))) == 1
    assert len(all_subgroups(AbelianGroup((2, 2)))) == 5


@pytest.mark.parametrize("inv", [(2, 2), (2, 4), (4, 4), (2, 2, 2), (3, 9), (2, 6)])
def test_subgroups_match_subset_closure(inv):
    A = AbelianGroup(inv)
    found = {np.sort(H.element_indices).astype(np.int64).tobytes() for H in all_subgroups(A)}
    want = subset_closure_subgroups(A)
    assert found == want


def test_quot_classes():
    for n in (1, 6, 12, 30):
        A = abelian_group(n)
        qs = quot_classes(A)
        divisors = [d for d in range(1, n + 1) if n % d == 0]
        assert sorted(q.quotient.order for q in qs) == divisors
    assert len(quot_classes(AbelianGroup((2, 2)))) == 5


def test_quot_map_kills_kernel():
    A = AbelianGroup((2, 4, 12))
    for q in quot_classes(A)[:: max(1, len(quot_classes(A)) // 15)]:
        els = A.elements
        img = q.apply(els)
        zero = ~img.any(axis=1)
        assert np.array_equal(np.flatnonzero(zero), np.sort(q.kernel.element_indices))
        assert q.quotient.order * q.kernel.order == A.order


def test_k_torsion():
    A = AbelianGroup((2, 4))
    assert k_torsion(A, 1).order == 1
    assert k_torsion(A, A.exponent).order == A.order
    T = k_torsion(A, 2)
    assert T.order == 4
    assert T.as_abelian_group().invariant_factors == (2, 2)
    # elementwise oracle
    want = [i for i, x in enumerate(A.elements) if not A.reduce(2 * x).any()]
    assert sorted(T.element_indices.tolist()) == want


def test_k_torsion_monotone():
    A = AbelianGroup((2, 4, 24))
    for k in (1, 2, 3, 4, 6, 8, 12, 24):
        for m in (k, 2 * k, 3 * k):
            if 24 % m == 0:
                assert k_torsion(A, k).is_subgroup_of(k_torsion(A, m))


def test_s_localize():
    A = AbelianGroup((6,))
    assert s_localize(A, []).quotient == A
    assert s_localize(A, [2]).quotient.invariant_factors == (3,)
    B = abelian_group(2, 4, 3)
    q = s_localize(B, [2])
    assert q.quotient.invariant_factors == (3,)
    # kernel is exactly the 2-torsion
    want = [i for i, x in enumerate(B.elements) if not B.reduce(4 * x).any()]
    assert sorted(q.kernel.element_indices.tolist()) == want


def test_exponent_and_hom_count():
    assert AbelianGroup((2, 4)).exponent == 4
    assert AbelianGroup(()).exponent == 1
    assert hom_count_abelian(AbelianGroup((4,)), AbelianGroup((6,))) == 2
    V = AbelianGroup((2, 2))
    assert hom_count_abelian(V, AbelianGroup((2,))) == 4
    assert len(naive_homs(V.as_finite_group(), cyclic(2))) == 4


@pytest.mark.parametrize("a,b", [((2,), (4,)), ((2, 2), (6,)), ((3,), (2, 2)), ((4,), (2, 4)), ((6,), (2, 6))])
def test_hom_count_symmetric_and_brute(a, b):
    A, B = AbelianGroup(a), AbelianGroup(b)
    assert hom_count_abelian(A, B) == hom_count_abelian(B, A)
    assert hom_count_abelian(A, B) == len(naive_homs(A.as_finite_group(), B.as_finite_group()))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 6, 8, 9]), min_size=0, max_size=3))
def test_random_abelian_properties(orders):
    A = abelian_group(*orders) if orders else AbelianGroup(())
    assert A.order == int(np.prod(orders)) if orders else A.order == 1
    if A.order <= 200:
        assert len(quot_classes(A)) == len(all_subgroups(A))
    for S in ([2], [3], [2, 3]):
        q = s_localize(A, S)
        assert all(q.quotient.order % p for p in S)
