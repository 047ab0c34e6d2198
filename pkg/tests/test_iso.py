"""Canonical forms, automorphism groups and monomorphism counting against brute force."""

from __future__ import annotations

import numpy as np
import pytest

from planecode.builders import build_desargues_config, build_pappus_config, build_pattern, pg2_system
from planecode.errors import BudgetExceeded, MalformedInput
from planecode.incidence import IncidenceSystem
from planecode.iso import (
    are_isomorphic,
    automorphism_count,
    automorphism_generators,
    brute_force_automorphisms,
    brute_force_isomorphic,
    canonical_form,
    count_copies,
    count_copies_direct,
    count_monomorphisms,
    count_monomorphisms_pointwise,
    is_automorphism,
    point_orbits,
)
from planecode.properties import random_partial_linear_space


@pytest.mark.parametrize(
    "q, order",
    [(2, 168), (3, 5616), (4, 120960), (5, 372000), (7, 5630688)],
)
def test_collineation_group_orders(q, order):
    assert automorphism_count(pg2_system(q)) == order


def test_hall_plane_is_not_desarguesian(hall9):
    assert automorphism_count(hall9.system) == 311040
    assert not are_isomorphic(hall9.system, pg2_system(9))


def test_relabelled_systems_share_canonical_form():
    rng = np.random.default_rng(1)
    base = pg2_system(3)
    digest = canonical_form(base).digest
    for _ in range(100):
        perm = rng.permutation(base.num_points).tolist()
        assert canonical_form(base.relabel(perm)).digest == digest


def test_canonical_form_distinguishes():
    a = canonical_form(build_pappus_config())
    b = canonical_form(build_desargues_config())
    assert a.digest != b.digest
    assert sorted(a.point_order) == list(range(9))


def test_small_systems_agree_with_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(40):
        a = random_partial_linear_space(rng, max_points=7)
        assert automorphism_count(a) == brute_force_automorphisms(a)
        perm = rng.permutation(a.num_points).tolist()
        b = a.relabel(perm)
        assert are_isomorphic(a, b) and brute_force_isomorphic(a, b)
        c = random_partial_linear_space(rng, max_points=7)
        assert are_isomorphic(a, c) == brute_force_isomorphic(a, c)


def test_generators_are_automorphisms_and_orbits():
    sys = pg2_system(3)
    gens = automorphism_generators(sys)
    assert gens and all(is_automorphism(sys, g) for g in gens)
    assert point_orbits(sys.num_points, gens) == [list(range(13))]
    # colouring a point leaves it fixed
    colors = [1] + [0] * 12
    stab = automorphism_generators(sys, point_colors=colors)
    assert all(g[0] == 0 for g in stab)


def test_twin_points_counted():
    # a single line: every permutation is an automorphism
    assert automorphism_count(build_pattern("single_line", size=6)) == 720
    assert automorphism_count(build_pattern("two_full_lines", p=3)) == 2 * 6 * 6 * 720  # 6 isolated points


def test_single_line_monomorphisms_in_fano():
    assert count_monomorphisms(build_pattern("single_line", size=3), pg2_system(2)) == 42


@pytest.mark.parametrize("q", [2, 3])
def test_direct_oracle_agrees(q):
    x = pg2_system(q)
    for y in (build_pattern("triangle"), build_pattern("single_line", size=3),
              IncidenceSystem(4, [(0, 1, 2), (0, 3)])):
        assert count_copies(y, x) == count_copies_direct(y, x)


def test_pointwise_and_linewise_agree():
    patterns = [build_desargues_config(), build_pappus_config(), build_pattern("triangle"),
                build_pattern("single_line", size=3), build_pattern("k_lines", k=2, p=2),
                build_pattern("k_lines", k=3, p=3)]
    for q in (2, 3, 4):
        x = pg2_system(q)
        for y in patterns:
            if y.num_points > x.num_points or (q == 4 and y.num_points >= 9):
                continue  # line-major search on 9-10 point configurations in PG(2,4) takes minutes
            assert count_monomorphisms(y, x) == count_monomorphisms_pointwise(y, x)


def test_copy_division_exact_random():
    rng = np.random.default_rng(3)
    for _ in range(25):
        y = random_partial_linear_space(rng, max_points=6)
        for q in (2, 3):
            assert count_monomorphisms(y, pg2_system(q)) % automorphism_count(y) == 0


def test_known_copy_counts():
    assert count_copies(build_pappus_config(), pg2_system(3)) == 52
    assert count_copies(build_pattern("triangle"), pg2_system(2)) == 28
    assert count_copies(build_desargues_config(), pg2_system(3)) == 0


def test_budget_and_oracle_limits():
    with pytest.raises(BudgetExceeded):
        count_monomorphisms(build_pappus_config(), pg2_system(4), node_budget=10)
    with pytest.raises(MalformedInput):
        count_copies_direct(pg2_system(3), pg2_system(3))
