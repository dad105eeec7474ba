import itertools

import pytest

from idemlab.grpcore import FiniteGroup
from idemlab.homlab import are_isomorphic
from idemlab.smallgroups import (
    KNOWN_COUNTS,
    MAX_ORDER,
    abelian_groups_of_order,
    fingerprint,
    groups_of_order,
    groups_up_to,
    nilpotent_groups_up_to,
)

# number of groups of order n, n = 1..32 (OEIS A000001)
A000001 = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15, 2, 2, 5, 4, 1, 4, 1, 51]


def test_known_counts_table():
    assert [KNOWN_COUNTS[n] for n in range(1, 33)] == A000001
    assert MAX_ORDER == 32


@pytest.mark.parametrize("n", range(1, 33))
def test_enumeration_counts(n):
    gs = groups_of_order(n)
    assert len(gs) == A000001[n - 1]
    assert all(G.order == n for G in gs)


@pytest.mark.parametrize("n", [4, 8, 12, 16, 18, 24])
def test_enumerated_groups_pairwise_nonisomorphic(n):
    gs = groups_of_order(n)
    for G, H in itertools.combinations(gs, 2):
        assert not are_isomorphic(G, H)


def test_tables_are_groups():
    for G in groups_up_to(16):
        # revalidate from scratch
        FiniteGroup(G.table.copy())


def test_fingerprint_invariant_under_relabelling():
    import numpy as np

    rng = np.random.default_rng(0)
    for G in groups_of_order(16)[:6]:
        n = G.order
        perm = np.concatenate([[0], 1 + rng.permutation(n - 1)])
        inv = np.argsort(perm)
        T = perm[G.table[inv[:, None], inv[None, :]]]
        H = FiniteGroup(T)
        assert fingerprint(H) == fingerprint(G)
        assert are_isomorphic(G, H)


def test_abelian_and_nilpotent_lists():
    assert len(abelian_groups_of_order(16)) == 5
    assert len(abelian_groups_of_order(72)) == 6
    assert abelian_groups_of_order(1) == [()]
    nil = nilpotent_groups_up_to(8)
    # every group of order at most 8 is nilpotent except S3
    assert len(nil) == sum(A000001[:8]) - 1
    assert sum(1 for G in groups_up_to(16) if G.is_abelian) == 1 + 1 + 1 + 2 + 1 + 1 + 1 + 3 + 2 + 1 + 1 + 2 + 1 + 1 + 1 + 5
