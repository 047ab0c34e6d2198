"""Randomised property suites used by ``verify``."""

from __future__ import annotations

import numpy as np

from planecode import properties
from planecode.incidence import dual, validate_partial_linear
from planecode.iso import are_isomorphic


def test_random_systems_are_dualisable():
    rng = np.random.default_rng(0)
    for _ in range(50):
        sys = properties.random_partial_linear_space(rng, max_points=9)
        assert validate_partial_linear(sys).ok
        assert are_isomorphic(dual(dual(sys)), sys)


def test_rank_duality():
    rep = properties.lemma32_check(40, seed=2)
    assert rep.ok and rep.trials == 120


def test_union_bounds(pg):
    rep = properties.lemma36_check(pg(7), trials=50, seed=1)
    assert rep.ok and rep.trials == 400


def test_membership_suite_exercises_both_outcomes(pg):
    rep = properties.lemma31_check(pg(5), trials=400, seed=4)
    assert rep.ok
    assert 0 < rep.details["members"] < 400


def test_digit_lemma_suite():
    rep = properties.lemma38_suite(10)
    assert rep.ok and rep.trials == 10


def test_minimum_weights(pg):
    rep = properties.minweights_check(pg(3))
    assert rep.ok, rep.to_record()
    assert rep.details["expected"] == [4, 6, 7]
    rep5 = properties.minweights_check(pg(5))
    assert rep5.ok, rep5.to_record()
    assert rep5.details["min_weight_words"] == 4 * 31
