import random

import pytest

from raagstab.cosets import (
    CosetTable, compact, enumerate_cosets, in_subgroup, table_csv, validate_table,
)
from raagstab.errors import InputError
from raagstab.graph import complete_graph, cycle_graph, parse_graph
from raagstab.words import parse_word
from oracles import lattice_index

EDGE = parse_graph("vertex x\nvertex y\nedge x y\n")


@pytest.mark.parametrize("gens,index", [(["x^2", "y"], 2), (["x^2", "y^3"], 6), (["x", "y"], 1)])
def test_hand_cases(gens, index):
    words = [parse_word(EDGE, g) for g in gens]
    res = enumerate_cosets(EDGE, words, 10**5)
    assert res.status == "complete" and res.index == index
    rows = compact(res.table)
    assert validate_table(EDGE, rows, words)
    for word in words:
        assert in_subgroup(rows, word)


def test_csv_is_one_based():
    res = enumerate_cosets(EDGE, [parse_word(EDGE, "x^2"), parse_word(EDGE, "y")], 100)
    lines = table_csv(EDGE, compact(res.table)).splitlines()
    assert lines[0] == "coset,generator,image"
    assert all(int(l.split(",")[0]) >= 1 for l in lines[1:])


def test_infinite_index_exhausts_budget():
    g = cycle_graph(5)
    res = enumerate_cosets(g, [parse_word(g, "a")], 2000)
    assert res.status == "budget_exhausted" and res.index is None


def test_resume_matches_fresh_run():
    words = [parse_word(EDGE, "x^2"), parse_word(EDGE, "y^3")]
    part = enumerate_cosets(EDGE, words, 3)
    assert part.status == "budget_exhausted"
    again = enumerate_cosets(EDGE, words, 10**4, CosetTable.from_json(part.table.to_json()))
    fresh = enumerate_cosets(EDGE, words, 10**4)
    assert again.index == fresh.index == 6
    assert compact(again.table) == compact(fresh.table)


def test_bad_checkpoint():
    with pytest.raises(InputError):
        CosetTable.from_json("{}")
    with pytest.raises(InputError):
        enumerate_cosets(EDGE, [], 10, CosetTable(ncols=6))


def test_validate_rejects_broken_tables():
    words = [parse_word(EDGE, "x^2"), parse_word(EDGE, "y")]
    rows = compact(enumerate_cosets(EDGE, words, 100).table)
    broken = [list(r) for r in rows]
    broken[0][0] = 0
    assert not validate_table(EDGE, broken, words)
    assert not validate_table(EDGE, [], words)


def test_free_abelian_random_against_smith_form():
    rng = random.Random(11)
    g = complete_graph(["x", "y", "z"])
    for _ in range(5):
        vecs = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        idx = lattice_index(vecs, 3)
        if not idx:
            continue
        words = [" ".join(f"{n}^{e}" for n, e in zip("xyz", v) if e) or "1" for v in vecs]
        res = enumerate_cosets(g, [parse_word(g, t) for t in words], 10**6)
        assert res.index == idx
