"""Exact count of plane-code words of one prescribed type by constraint search.

For a plane of prime order ``p`` a word ``w`` lies in the code iff every
line sum ``<w, L>`` is congruent to ``<w, 1>`` mod ``p``.  Treating values
as integers ``0..p-1`` gives more: with ``S = sum(w)`` and ``t = S mod p``,
the lines through a point ``y`` have integer sums adding up to
``S + p*w(y)``, each at least ``t``, so every line through ``y`` sums to at
most ``S + p*(w(y) - t)``.  Those bounds, the residue condition and the
value budget of the type drive a depth-first search with unit
propagation (a line with one open point fixes that point's value).

Symmetry is used before searching: a rare value is pinned on one point per
orbit of the (colour-preserving) automorphism group, and the orbit counts
are recombined with exact rationals.
"""

from __future__ import annotations

import sys as _sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, MalformedInput, VerificationError
from .incidence import Plane
from .iso import automorphism_generators, point_orbits
from .linear import code_from_system, dual_code


@dataclass
class TypeSearchResult:
    type: tuple
    count: int
    nodes: int
    leaves: int
    pinned: list = field(default_factory=list)


class _Solver:
    def __init__(self, plane: Plane, p: int, j: tuple, parity: np.ndarray, node_budget: int):
        self.p = p
        self.v = plane.num_points
        self.lines = [list(line) for line in plane.lines]
        self.pencils = plane.system.pencils
        self.S = sum(a * c for a, c in enumerate(j))
        self.t = self.S % p
        self.parity = parity
        self.node_budget = node_budget
        self.nodes = 0
        self.leaves = 0

    def count(self, fixed: dict, remaining: list) -> int:
        p, v = self.p, self.v
        b = len(self.lines)
        self.val = [-1] * v
        self.rem = list(remaining)
        self.lsum = [0] * b
        self.lopen = [len(line) for line in self.lines]
        self.lmin = [p] * b
        self.trail: list = []
        for x, a in fixed.items():
            if not self._assign(x, a, count_budget=False):
                return 0
        if not self._propagate():
            return 0
        return self._dfs()

    def _ub(self, minval):
        return self.S + self.p * (minval - self.t)

    def _assign(self, x, a, count_budget=True):
        if count_budget:
            if self.rem[a] == 0:
                return False
            self.rem[a] -= 1
            self.trail.append(("r", a))
        self.val[x] = a
        self.trail.append(("v", x))
        p, t = self.p, self.t
        ok = True
        for li in self.pencils[x]:
            self.trail.append(("l", li, self.lsum[li], self.lopen[li], self.lmin[li]))
            s = self.lsum[li] + a
            self.lsum[li] = s
            self.lopen[li] -= 1
            if a < self.lmin[li]:
                self.lmin[li] = a
            ub = self._ub(self.lmin[li])
            if s > ub:
                ok = False
            elif self.lopen[li] == 0:
                if s % p != t:
                    ok = False
            elif (t - s) % p > ub - s:
                ok = False
        return ok

    def _undo(self, mark):
        trail = self.trail
        while len(trail) > mark:
            item = trail.pop()
            if item[0] == "l":
                _, li, s, o, m = item
                self.lsum[li], self.lopen[li], self.lmin[li] = s, o, m
            elif item[0] == "v":
                self.val[item[1]] = -1
            else:
                self.rem[item[1]] += 1

    def _propagate(self):
        p, t = self.p, self.t
        changed = True
        while changed:
            changed = False
            for li, line in enumerate(self.lines):
                if self.lopen[li] != 1:
                    continue
                x = next(y for y in line if self.val[y] < 0)
                a = (t - self.lsum[li]) % p
                if not self._assign(x, a):
                    return False
                changed = True
        return True

    def _dfs(self):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise BudgetExceeded("type search node budget exceeded", required=self.nodes)
        best, best_open = -1, None
        for li, o in enumerate(self.lopen):
            if o and (best_open is None or o < best_open or (o == best_open and self.lmin[li] < self.lmin[best])):
                best, best_open = li, o
        if best < 0:
            return self._leaf()
        x = next(y for y in self.lines[best] if self.val[y] < 0)
        total = 0
        for a in range(self.p):
            if self.rem[a] == 0:
                continue
            mark = len(self.trail)
            if self._assign(x, a) and self._propagate():
                total += self._dfs()
            self._undo(mark)
        return total

    def _leaf(self):
        w = np.array(self.val, dtype=np.int64)
        if any(self.rem):
            return 0
        if self.parity.size and np.any((self.parity @ w) % self.p):
            raise VerificationError("type search leaf fails the parity check")
        self.leaves += 1
        return 1


def count_type_words(
    plane: Plane,
    p: int,
    j,
    pin_depth: int = 3,
    node_budget: int = 20_000_000,
) -> TypeSearchResult:
    """Number of words of type ``j`` in the F_p code of ``plane`` (order ``p``)."""
    j = tuple(int(x) for x in j)
    v = plane.num_points
    if plane.order != p:
        raise MalformedInput(f"plane order {plane.order} differs from p={p}")
    if len(j) != p or sum(j) != v or min(j) < 0:
        raise MalformedInput(f"type {j} does not fit p={p}, v={v}")
    if j[0] == v:
        return TypeSearchResult(j, 1, 0, 1)
    parity = dual_code(code_from_system(plane.system, p)).rows
    solver = _Solver(plane, p, j, parity, node_budget)
    s, t = solver.S, solver.t
    if j[0] and (s < (p + 1) * t):
        return TypeSearchResult(j, 0, 0, 0)
    old = _sys.getrecursionlimit()
    _sys.setrecursionlimit(max(old, 10 * v + 1000))
    pinned: list = []

    def rec(fixed: dict, remaining: list, depth: int) -> Fraction:
        choices = [(remaining[a], a) for a in range(1, p) if remaining[a]]
        if depth >= pin_depth or not choices:
            return Fraction(solver.count(fixed, remaining))
        c, a = min(choices)
        colors = tuple(fixed[x] + 1 if x in fixed else 0 for x in range(v))
        gens = automorphism_generators(plane.system, colors)
        total = Fraction(0)
        for orbit in point_orbits(v, gens):
            rep = orbit[0]
            if rep in fixed:
                continue
            rem = list(remaining)
            rem[a] -= 1
            sub = rec({**fixed, rep: a}, rem, depth + 1)
            if depth == 0:
                pinned.append((rep, a, len(orbit), sub))
            total += len(orbit) * sub
        return total / c

    try:
        result = rec({}, list(j), 0)
    finally:
        _sys.setrecursionlimit(old)
    if result.denominator != 1:
        raise VerificationError(f"orbit recombination gave a non-integer count {result}")
    return TypeSearchResult(j, int(result), solver.nodes, solver.leaves, pinned)


def brute_force_type_count(code_rows: np.ndarray, p: int, j) -> int:
    """Oracle for tiny codes: enumerate every message."""
    from itertools import product

    j = tuple(j)
    k = code_rows.shape[0]
    total = 0
    for msg in product(range(p), repeat=k):
        w = (np.array(msg, dtype=np.int64) @ code_rows) % p
        if tuple(np.bincount(w, minlength=p)) == j:
            total += 1
    return total
