import itertools

import pytest
from hypothesis import given, settings, strategies as st

from raagstab.errors import InputError
from raagstab.geometry import is_quasigeodesic_star, l2g_constants, stability_probe
from raagstab.graph import cycle_graph
from oracles import tree_local_to_global

C5 = cycle_graph(5)


def test_l2g_tree_case():
    c = l2g_constants(0, 1, 0)
    assert c.K >= 1 and c.lam_out >= 1 and c.eps_out >= 0
    assert (c.K, c.lam_out, c.eps_out) == (2, 1.0, 0.0)


def test_l2g_monotone_in_delta():
    assert l2g_constants(1, 2, 1).K <= l2g_constants(2, 2, 1).K


def test_l2g_invariants_and_monotonicity():
    grid = list(itertools.product([0, 0.5, 1, 2, 4], [1, 1.5, 2, 3], [0, 0.5, 1, 2]))
    for d, l, e in grid:
        c = l2g_constants(d, l, e)
        assert c.K >= 1 and c.lam_out >= l and c.eps_out >= e
        assert c == l2g_constants(d, l, e)
        for dd, ll, ee in ((d + 1, l, e), (d, l + 1, e), (d, l, e + 1)):
            assert l2g_constants(dd, ll, ee).K >= c.K


@pytest.mark.parametrize("args", [(-1, 1, 0), (0, 0.5, 0), (0, 1, -1), (float("nan"), 1, 0), (0, float("inf"), 0)])
def test_l2g_domain_errors(args):
    with pytest.raises(InputError):
        l2g_constants(*args)


def test_tree_contract_small():
    for lam, eps in ((1, 0), (1, 1), (2, 0)):
        c = l2g_constants(0, lam, eps)
        _, bad = tree_local_to_global(c.K, lam, eps, c.lam_out, c.eps_out, 2 * c.K)
        assert bad is None


def test_tree_oracle_finds_counterexamples():
    # claiming that 2-local (2,1)-quasigeodesics are geodesics is false
    count, bad = tree_local_to_global(2, 2, 1, 1, 0, 6)
    assert bad is not None


def test_quasigeodesic_examples():
    assert is_quasigeodesic_star(C5, ["1", "a"], 1, 0)
    assert is_quasigeodesic_star(C5, ["1"], 1, 0)
    res = is_quasigeodesic_star(C5, ["1", "a", "a b", "a b c", "a b c d"], 2, 0)
    assert not res and res.violation == (0, 3, 1)
    assert is_quasigeodesic_star(C5, ["1", "a", "a b", "a b c", "a b c d"], 3, 0)
    with pytest.raises(InputError):
        is_quasigeodesic_star(C5, ["1", "a b"], 1, 0)


paths = st.lists(st.integers(0, 9), max_size=7)


@given(paths, st.integers(1, 3), st.integers(0, 2))
@settings(max_examples=60, deadline=None)
def test_quasigeodesic_monotone(steps, lam, eps):
    pts, cur = [()], ()
    for x in steps:
        cur = cur + (x,)
        pts.append(cur)
    if is_quasigeodesic_star(C5, pts, lam, eps):
        assert is_quasigeodesic_star(C5, pts, lam + 1, eps)
        assert is_quasigeodesic_star(C5, pts, lam, eps + 1)


def test_probe_elliptic_fails_everywhere():
    rep = stability_probe(C5, ["a"], 3, 2, 1)
    assert rep.label == "HEURISTIC"
    assert rep.first_pass is None and len(rep.entries) == 9
    assert all(e.status == "fail" for e in rep.entries)


def test_probe_empty_caps():
    assert stability_probe(C5, ["a"], 0, 0, 1).entries == []


def test_probe_structure():
    rep = stability_probe(C5, ["a b c d"], 4, 4, 2)
    d = rep.as_dict()
    assert d["label"] == "HEURISTIC" and d["pairs"]
    assert all(p["status"] in ("pass", "fail", "inconclusive") for p in d["pairs"])


@pytest.mark.parametrize("gens", [["a"], ["a c"], ["a", "b", "c", "d", "e"]])
def test_probe_never_passes_non_stable(gens):
    for delta in (1, 2, 4, 8):
        assert stability_probe(C5, gens, 4, 4, delta).first_pass is None
