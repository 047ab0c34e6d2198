"""Randomised property checks shared by the CLI ``verify`` commands and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .census import PROVEN, bounded_weight_census
from .errors import MalformedInput
from .incidence import IncidenceSystem, Plane, dual, validate_partial_linear
from .linear import code_from_system, contains, dual_code, line_vector, plane_membership
from .reconstruction import lemma38_check


@dataclass
class PropertyReport:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_record(self) -> dict:
        return {"name": self.name, "trials": self.trials, "failures": self.failures[:10],
                "ok": self.ok, "details": self.details}


def random_partial_linear_space(rng: np.random.Generator, max_points: int = 12) -> IncidenceSystem:
    """A random partial linear space whose dual is defined (no bare points, distinct pencils)."""
    while True:
        v = int(rng.integers(3, max_points + 1))
        covered: set = set()
        lines = []
        for _ in range(int(rng.integers(2, 3 * v))):
            size = int(rng.integers(2, min(5, v) + 1))
            cand = sorted(rng.choice(v, size=size, replace=False).tolist())
            pairs = {(a, b) for i, a in enumerate(cand) for b in cand[i + 1 :]}
            if pairs & covered:
                continue
            covered |= pairs
            lines.append(cand)
        used = sorted({x for line in lines for x in line})
        if len(lines) < 2 or len(used) < 2:
            continue
        index = {x: i for i, x in enumerate(used)}
        sys = IncidenceSystem(len(used), [[index[x] for x in line] for line in lines])
        if len(set(sys.pencils)) == sys.num_points:
            return sys


def lemma32_check(trials: int = 100, primes=(2, 3, 5), seed: int = 0) -> PropertyReport:
    """Rank of a system's code equals the rank of its dual's code."""
    rng = np.random.default_rng(seed)
    rep = PropertyReport("rank duality")
    for t in range(trials):
        sys = random_partial_linear_space(rng)
        assert validate_partial_linear(sys).ok
        d = dual(sys)
        for p in primes:
            rep.trials += 1
            a, b = code_from_system(sys, p).dim, code_from_system(d, p).dim
            if a != b:
                rep.failures.append({"trial": t, "p": p, "dim": a, "dual_dim": b, "system": sys.to_inc()})
    return rep


def lemma36_check(plane: Plane, trials: int = 200, k_max: int = 8, seed: int = 0) -> PropertyReport:
    """Union of k distinct lines: ``(p+1)k - C(k,2) <= #S <= pk + 1``."""
    rng = np.random.default_rng(seed)
    n = plane.order
    b = len(plane.lines)
    masks = plane.system.line_masks
    rep = PropertyReport(f"union bounds n={n}")
    for _ in range(trials):
        for k in range(1, min(k_max, b) + 1):
            rep.trials += 1
            pick = rng.choice(b, size=k, replace=False)
            union = 0
            for i in pick.tolist():
                union |= masks[i]
            size = union.bit_count()
            lo, hi = (n + 1) * k - math.comb(k, 2), n * k + 1
            if not lo <= size <= hi:
                rep.failures.append({"k": k, "lines": pick.tolist(), "size": size, "bounds": [lo, hi]})
    return rep


def lemma31_check(plane: Plane, trials: int = 10_000, seed: int = 0) -> PropertyReport:
    """Line-sum membership agrees with Gaussian elimination on random words.

    Half of the trials are random codewords, the rest uniform vectors, so
    both outcomes are exercised.
    """
    p = plane.order
    rng = np.random.default_rng(seed)
    code = code_from_system(plane.system, p)
    rep = PropertyReport(f"membership p={p}")
    members = 0
    for t in range(trials):
        if t % 2:
            w = rng.integers(0, p, size=plane.num_points)
        else:
            w = code.encode(rng.integers(0, p, size=code.dim))
            if t % 4 == 2:  # perturb one coordinate
                i = int(rng.integers(plane.num_points))
                w[i] = (w[i] + 1 + int(rng.integers(p - 1))) % p
        a, b = plane_membership(plane, p, w), contains(code, w)
        members += int(b)
        rep.trials += 1
        if a != b:
            rep.failures.append({"trial": t, "line_sums": a, "solve": b})
    rep.details["members"] = members
    return rep


def lemma38_suite(k_max: int = 12) -> PropertyReport:
    rep = PropertyReport("binary digit lemma")
    for k in range(1, k_max + 1):
        rep.trials += 1
        r = lemma38_check(k)
        if r["min_parts"] != k or r["tight"] != [(1,) * k]:
            rep.failures.append(r)
        rep.details[k] = {x: r[x] for x in r if x in ("solutions", "parts_le_k", "method")}
    return rep


def minweights_check(plane: Plane, seed: int = 0) -> PropertyReport:
    """Lowest weights of the plane code; weight-(p+1) words are line multiples."""
    p = plane.order
    code = code_from_system(plane.system, p)
    w_max = max(3 * p - 3, 2 * p + 1)
    bc = bounded_weight_census(code, w_max, want_words=True, seed=seed)
    rep = PropertyReport(f"minimum weights p={p}")
    rep.trials = 1
    weights = sorted(w for w in bc.hamming if w)
    expected = sorted({p + 1, 2 * p, 2 * p + 1, 3 * p - 3} - {0})
    rep.details = {"status": bc.status, "weights": weights, "expected": expected,
                   "counts": {str(w): n for w, n in bc.hamming.items()}}
    if bc.status != PROVEN:
        rep.failures.append("census not proven complete")
    if [w for w in weights if w <= w_max][: len(expected)] != expected:
        rep.failures.append({"weights": weights, "expected": expected})
    lines = {tuple(np.nonzero(line_vector(l, plane.num_points))[0]) for l in plane.lines}
    minimal = bc.words[np.count_nonzero(bc.words, axis=1) == p + 1]
    bad = 0
    for w in minimal:
        supp = tuple(np.nonzero(w)[0])
        if supp not in lines or len(set(w[list(supp)].tolist())) != 1:
            bad += 1
    rep.details["min_weight_words"] = len(minimal)
    if bad or len(minimal) != (p - 1) * len(plane.lines):
        rep.failures.append({"non_line_minimum_words": bad, "found": len(minimal)})
    return rep
