"""Exact per-type codeword counts by constraint search, against enumeration."""

from __future__ import annotations

import pytest

from planecode.builders import build_pg2
from planecode.census import COMPLETE, full_census
from planecode.errors import MalformedInput
from planecode.linear import code_from_system
from planecode.typesearch import brute_force_type_count, count_type_words


def test_all_pg3_types_match_full_census(pg):
    plane = pg(3)
    table = full_census(code_from_system(plane.system, 3), COMPLETE)
    for j, n in table.entries.items():
        assert count_type_words(plane, 3, j).count == n


def test_absent_type_is_zero(pg):
    assert count_type_words(pg(3), 3, (12, 1, 0)).count == 0


def test_brute_force_oracle_on_fano(pg):
    plane = pg(2)
    rows = code_from_system(plane.system, 2).rows
    for j in [(4, 3), (3, 4), (0, 7), (7, 0), (5, 2)]:
        assert count_type_words(plane, 2, j).count == brute_force_type_count(rows, 2, j)


def test_pg5_low_weight_types(pg, pg5_lowweight):
    plane = pg(5)
    for j, n in pg5_lowweight.complete.items():
        if 31 - j[0] <= 11:
            assert count_type_words(plane, 5, j).count == n, j


@pytest.mark.parametrize("pin_depth", [0, 1, 3])
def test_pinning_depth_does_not_change_count(pg, pin_depth):
    j = (20, 5, 5, 1, 0)
    assert count_type_words(pg(5), 5, j, pin_depth=pin_depth).count == 930


def test_p11_powers_types(pg):
    plane = pg(11)
    # ordered triangles and ordered concurrent triples of lines
    tri = count_type_words(plane, 11, (100, 10, 10, 1, 10, 1, 1, 0, 0, 0, 0))
    assert tri.count == 133 * 132 * 121
    conc = count_type_words(plane, 11, (99, 11, 11, 0, 11, 0, 0, 1, 0, 0, 0))
    assert conc.count == 133 * 132 * 10


def test_bad_arguments(pg):
    with pytest.raises(MalformedInput):
        count_type_words(pg(3), 5, (13, 0, 0, 0, 0))
    with pytest.raises(MalformedInput):
        count_type_words(pg(3), 3, (10, 1, 1))
