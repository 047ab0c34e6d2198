"""Row-reduced F_p codes: spans, duals, hulls and membership."""

from __future__ import annotations

import math

import numpy as np
import pytest

from planecode.builders import build_pg2, build_hall9, pg2_system
from planecode.errors import MalformedInput
from planecode.linear import (
    LinearCode,
    code_from_system,
    contains,
    dual_code,
    hull,
    is_subcode,
    line_vector,
    plane_membership,
    rref,
    span,
    type_of,
    types_of_rows,
    weight_of,
)


def test_rref_basic():
    m = np.array([[1, 1, 0], [1, 1, 0], [0, 1, 1]])
    rows, piv = rref(m, 2)
    assert piv == (0, 1)
    assert rows.tolist() == [[1, 0, 1], [0, 1, 1]]


def test_rank_over_different_primes():
    # the all-ones 3x3 minus identity has rank 3 over F_3 but 2 over F_2
    m = np.ones((3, 3), dtype=np.int64) - np.eye(3, dtype=np.int64)
    assert LinearCode.from_generators(m, 2).dim == 2
    assert LinearCode.from_generators(m, 3).dim == 3


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_plane_code_dimensions(p):
    c = code_from_system(pg2_system(p), p)
    d = dual_code(c)
    assert c.dim == math.comb(p + 1, 2) + 1
    assert c.dim + d.dim == c.length
    assert hull(c) == d
    assert is_subcode(d, c)
    assert not (d.rows @ c.rows.T % p).any()


def test_hull_is_span_of_line_differences():
    plane = build_pg2(5)
    v = plane.num_points
    diffs = [line_vector(plane.lines[0], v) - line_vector(l, v) for l in plane.lines[1:]]
    assert LinearCode.from_generators(np.array(diffs), 5, v) == hull(code_from_system(plane.system, 5))


def test_non_prime_rejected():
    with pytest.raises(MalformedInput):
        LinearCode.from_generators(np.eye(2, dtype=np.int64), 4)


def test_pg4_binary_dimension():
    assert code_from_system(pg2_system(4), 2).dim == 10


def test_hall9_ternary_code():
    c = code_from_system(build_hall9().system, 3)
    assert c.dim + dual_code(c).dim == 91


def test_membership():
    plane = build_pg2(3)
    c = code_from_system(plane.system, 3)
    w = (2 * line_vector(plane.lines[0], 13) + line_vector(plane.lines[5], 13)) % 3
    assert contains(c, w) and plane_membership(plane, 3, w)
    w[0] = (w[0] + 1) % 3
    assert not contains(c, w) and not plane_membership(plane, 3, w)
    with pytest.raises(MalformedInput):
        contains(c, np.zeros(5))
    with pytest.raises(MalformedInput):
        plane_membership(plane, 5, w)


def test_span_and_equality():
    plane = build_pg2(2)
    c = code_from_system(plane.system, 2)
    assert span(c, dual_code(c)) == c
    assert c != dual_code(c)
    assert hash(c) == hash(code_from_system(plane.system.relabel(list(range(7))), 2))


def test_types_and_weights():
    w = np.array([0, 1, 2, 2, 0, 4])
    assert type_of(w, 5) == (2, 1, 2, 0, 1)
    assert weight_of(w) == 4
    assert types_of_rows(np.array([w, np.zeros(6, dtype=np.int64)]), 5).tolist() == [[2, 1, 2, 0, 1], [6, 0, 0, 0, 0]]


def test_csv_round_trip(tmp_path):
    c = code_from_system(pg2_system(3), 3)
    path = tmp_path / "c.csv"
    c.write_csv(path, source="pg3")
    text = path.read_text().splitlines()
    assert text[0].startswith("# source=pg3 p=3")
    rows = np.array([[int(x) for x in r.split(",")] for r in text[1:]])
    assert LinearCode.from_generators(rows, 3) == c
