"""Powers-of-two words, the binary digit lemma and the inclusion-number pipeline."""

from __future__ import annotations

import math
from itertools import permutations

import numpy as np
import pytest

from planecode.builders import build_pattern, pg2_system
from planecode.errors import MalformedInput
from planecode.incidence import IncidenceSystem, build_plane
from planecode.iso import count_copies
from planecode.linear import code_from_system, contains
from planecode.reconstruction import (
    binary_solutions,
    corollary43_compare,
    lemma38_check,
    lemma39_verify,
    line_subset_classes,
    ordered_tuples_of_type,
    powers_word,
    reconstruct_lines,
    theorem42_count,
)


@pytest.mark.parametrize("p, k", [(5, 2), (7, 2), (11, 3)])
def test_powers_word_round_trip(pg, p, k):
    plane = pg(p)
    rng = np.random.default_rng(p)
    code = code_from_system(plane.system, p)
    for _ in range(20):
        idx = rng.choice(len(plane.lines), size=k, replace=False)
        lines = [plane.lines[i] for i in idx]
        pw = powers_word(lines, plane.num_points, p)
        assert contains(code, pw.word)
        assert reconstruct_lines(pw.word, k) == lines
        assert sum(pw.type) == plane.num_points


def test_powers_word_guards():
    with pytest.raises(MalformedInput):
        powers_word([(0, 1), (1, 2), (0, 2)], 3, 5)
    with pytest.raises(MalformedInput):
        reconstruct_lines(np.array([0, 4]), 2)


def test_binary_solutions_small():
    assert sorted(binary_solutions(2)) == [(1, 1), (3, 0)]
    assert len(list(binary_solutions(3))) == 6
    for k in range(1, 6):
        assert all(sum(x << i for i, x in enumerate(s)) == 2**k - 1 for s in binary_solutions(k))


@pytest.mark.parametrize("k", range(1, 13))
def test_digit_sums_need_k_parts(k):
    r = lemma38_check(k)
    assert r["min_parts"] == k
    assert r["tight"] == [(1,) * k]


def test_digit_dp_agrees_with_listing():
    for k in range(1, 7):
        ex = lemma38_check(k)
        dp = lemma38_check(k, exhaustive_limit=0)
        sols = list(binary_solutions(k))
        by_parts = {}
        for s in sols:
            if sum(s) <= k:
                by_parts[sum(s)] = by_parts.get(sum(s), 0) + 1
        assert dp["parts_le_k"] == by_parts
        assert dp["min_parts"] == ex["min_parts"]


def test_line_subset_classes_pg5(pg):
    cls = line_subset_classes(pg(5), 3)
    counts = sorted(n for _, n in cls.values())
    # concurrent triples and triangles
    assert counts == sorted([31 * math.comb(6, 3), math.comb(31, 3) - 31 * math.comb(6, 3)])


def test_ordered_tuples_of_type(pg):
    plane = pg(5)
    assert ordered_tuples_of_type(plane, 2, (20, 5, 5, 1, 0)) == 930


def test_inclusion_two_full_lines(pg):
    rep = theorem42_count(build_pattern("two_full_lines", p=5), pg(5))
    assert rep.total == rep.direct == 465 and rep.match


def test_inclusion_single_line(pg):
    rep = theorem42_count(build_pattern("single_line", size=6), pg(5))
    assert rep.total == rep.direct == 31


def test_inclusion_point_pairs(pg):
    # pairs of points of PG(2,5); no division issues for a single small line
    rep = theorem42_count(build_pattern("single_line", size=2), pg(5), direct=False)
    assert rep.total == math.comb(31, 2)


def test_inclusion_guards(pg):
    with pytest.raises(MalformedInput):
        theorem42_count(build_pattern("triangle"), pg(5))
    with pytest.raises(MalformedInput):
        theorem42_count(IncidenceSystem(3, []), pg(5))


def test_json_report(pg):
    import json

    rep = theorem42_count(build_pattern("single_line", size=6), pg(5))
    data = json.loads(rep.to_json())
    assert data["total"] == 31 and data["rows"]


def test_relabelled_plane_gives_same_counts(pg):
    plane = pg(5)
    perm = np.random.default_rng(0).permutation(plane.num_points).tolist()
    other = build_plane(plane.system.relabel(perm))
    cmp = corollary43_compare(plane, other, build_pattern("two_full_lines", p=5), direct=False)
    assert cmp["totals_agree"] and cmp["type_counts_agree"]
    assert cmp["total_a"] == 465


def test_reconstruction_small_planes(pg):
    (rep,) = lemma39_verify(pg(2), 1)
    assert rep.ok and rep.words == 7
    (rep,) = lemma39_verify(pg(3), 1)
    assert rep.ok and rep.words == 13
    with pytest.raises(MalformedInput):
        lemma39_verify(pg(3), 2)
