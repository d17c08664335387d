import random

import pytest

from raagstab import complexes as cx
from raagstab.errors import InputError
from raagstab.graph import cycle_graph, path_graph
from raagstab.words import are_equal, inverse, normalize, parse_word

C5 = cycle_graph(5)
P4 = path_graph(list("pqrs"))


def w(text, g=C5):
    return parse_word(g, text)


def test_rose_and_fold_basics():
    c = cx.fold(cx.rose(C5, [w("a b"), w("a c")]))
    assert cx.is_folded(c)
    assert len(c.vertices) == 2 and len(c.edges) == 3


def test_fold_order_independent():
    rng = random.Random(7)
    for _ in range(20):
        gens = [tuple(rng.randrange(10) for _ in range(rng.randint(1, 6))) for _ in range(rng.randint(1, 4))]
        gens = [normalize(C5, x) for x in gens]
        gens = [x for x in gens if x] or [w("a")]
        base = cx.canonical_form(cx.fold(cx.rose(C5, gens)))
        for seed in range(3):
            assert cx.canonical_form(cx.fold(cx.rose(C5, gens), random.Random(seed))) == base


def test_bare_cycle_missing_corners():
    c = cx.fold(cx.rose(C5, [w("a b c d")]))
    rep = cx.check_local_isometry(C5, c)
    assert rep.folded and not rep.passes
    pairs = {(C5.vertices[a[0]], C5.vertices[b[0]]) for _, a, b in rep.missing_squares}
    assert pairs == {("a", "b"), ("b", "c"), ("c", "d")}


def test_saturation_of_abcd():
    c, status = cx.saturate(C5, cx.fold(cx.rose(C5, [w("a b c d")])), 100)
    assert status == "complete"
    assert (len(c.vertices), len(c.edges), len(c.squares)) == (8, 12, 4)
    assert cx.check_local_isometry(C5, c).passes
    assert cx.purely_loxodromic_scan(C5, c).pure
    t = cx.loop_trace(C5, c, w("a b c d"))
    assert t is not None and are_equal(C5, t, w("a b c d"))


def test_saturation_budget():
    c, status = cx.saturate(C5, cx.fold(cx.rose(C5, [w("a b c d")])), 1)
    assert status == "budget_exhausted"


def test_scan_flags_elliptic_loop():
    c = cx.fold(cx.rose(C5, [w("a c")]))
    scan = cx.purely_loxodromic_scan(C5, c)
    assert not scan.pure and scan.witness_word is not None


def test_deleted_square_is_missing_corner():
    c, _ = cx.saturate(C5, cx.fold(cx.rose(C5, [w("a b c d")])), 100)
    c = c.copy()
    c.squares.pop()
    assert cx.check_local_isometry(C5, c).missing_squares


def test_duplicate_and_invalid_squares():
    c, _ = cx.saturate(C5, cx.fold(cx.rose(C5, [w("a b c d")])), 100)
    sq = sorted(c.squares)[0]
    bad = c.copy()
    bad.squares.add((sq[1], sq[0], sq[3], sq[2]))
    rep = cx.check_local_isometry(C5, bad)
    assert rep.invalid_squares or rep.duplicate_squares


def test_serialization_roundtrip():
    c, _ = cx.saturate(P4, cx.fold(cx.rose(P4, [w("p q r s", P4)])), 100)
    text = cx.to_text(P4, c)
    back = cx.parse_complex(P4, text)
    assert cx.canonical_form(back) == cx.canonical_form(c)
    assert cx.to_text(P4, cx.canonical_relabel(back)) == cx.to_text(P4, cx.canonical_relabel(c))


@pytest.mark.parametrize("text", [
    "vertex 0\n",
    "basepoint 0\nvertex 0\ndedge 0 1 a\n",
    "basepoint 0\nvertex 0\nvertex 1\n",
    "basepoint 0\nvertex 0\ndedge 0 0 z\n",
    "basepoint 0\nvertex 0\nsquare 0 1 2 3\n",
])
def test_malformed_complexes(text):
    with pytest.raises(InputError):
        cx.parse_complex(C5, text)


def test_basis_loops_generate():
    c, _ = cx.saturate(C5, cx.fold(cx.rose(C5, [w("a b c d")])), 100)
    loops = cx.basis_loops(c)
    assert len(loops) == len(c.edges) - len(c.vertices) + 1
    for _, word in loops:
        assert cx.trace_word(c, word).is_loop


def test_enumeration_fallback_finds_small_complex():
    found = list(cx.enumerate_complexes(P4, 1))
    assert found and all(cx.check_local_isometry(P4, c).passes for c in found)
