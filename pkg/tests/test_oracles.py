import pytest

from idemlab.oracles import SUITES, SuiteResult, classification_corpus, run_suite, s5_subgroup_corpus

# the heavier suites run in the acceptance tests
FAST = ["presofsolnilfin", "cyclicH2", "twofetit", "basicsimplgr", "propgsub", "initialcov"]


@pytest.mark.parametrize("name", FAST)
def test_fast_suites_pass(name):
    res = run_suite(name)
    assert res.checks > 0
    assert res.ok, res.failures[:5]


def test_suite_names():
    assert set(FAST) < set(SUITES)
    assert len(SUITES) == 12
    with pytest.raises(KeyError):
        run_suite("nosuch")


def test_failure_list_is_bounded():
    r = SuiteResult("x")
    for i in range(80):
        r.fail(str(i))
    assert len(r.failures) == 51 and not r.ok


def test_corpora():
    s5 = s5_subgroup_corpus()
    # one representative per conjugacy class of subgroups of S5
    assert len(s5) == 19
    assert all(120 % G.order == 0 for G in s5)
    corpus = classification_corpus()
    assert any(G.order == 60 for G in corpus)
    assert max(G.order for G in corpus) == 120
