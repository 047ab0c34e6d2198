"""Counting Pappus configurations in a finite plane.

A witness is an ordered pair of lines ``(l1, l2)`` meeting in ``m``, a
3-set ``alpha`` on ``l1 - m``, a 3-set ``beta`` on ``l2 - m`` and a
bijection ``f: alpha -> beta``.  It closes when the three cross points
``z1 = (x2 y3) ^ (x3 y2)``, ``z2 = (x1 y3) ^ (x3 y1)``, ``z3 = (x1 y2) ^
(x2 y1)`` are collinear.  Every copy of the Pappus configuration accounts
for exactly 18 closing witnesses.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from .errors import BudgetExceeded, MalformedInput, VerificationError
from .incidence import IncidenceSystem, Plane

WITNESSES_PER_COPY = 18
# closing Desargues witnesses per copy: PG(2,5) has 31000 of them and 3100
# copies by the independent copy count (PG(2,3), PG(2,4) contain none)
DESARGUES_WITNESSES_PER_COPY = 10


def pappus_bound(n: int) -> int:
    """``(2/3) * C(n^2+n+1, 2) * C(n, 3)^2``, exactly."""
    if n < 2:
        raise MalformedInput("order must be >= 2")
    num = 2 * math.comb(n * n + n + 1, 2) * math.comb(n, 3) ** 2
    q, r = divmod(num, 3)
    if r:
        raise VerificationError(f"bound for n={n} is not an integer")
    return q


@dataclass
class PappusCount:
    order: int
    witnesses: int
    witnesses_closing: int
    copies: int
    bound: int
    is_pappian: bool
    runtime_seconds: float = 0.0
    spot_checked: int = 0
    spot_exceptions: list = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "order": self.order,
            "witnesses": self.witnesses,
            "witnesses_closing": self.witnesses_closing,
            "copies": self.copies,
            "bound": self.bound,
            "is_pappian": self.is_pappian,
            "runtime_seconds": round(self.runtime_seconds, 3),
            "spot_checked": self.spot_checked,
            "spot_exceptions": self.spot_exceptions,
        }


def _index_arrays(n):
    tri = np.array(list(combinations(range(n), 3)), dtype=np.int64).reshape(-1, 3)
    ordered = np.array(list(permutations(range(n), 3)), dtype=np.int64).reshape(-1, 3)
    return tri, ordered


def _pair_closing(plane: Plane, l1: int, l2: int, tri, ordered, collect: int = 0, seed: int = 0):
    meet, join, inc = plane.meet, plane.join, plane.incidence
    m = meet[l1, l2]
    xs = np.array([x for x in plane.lines[l1] if x != m])
    ys = np.array([y for y in plane.lines[l2] if y != m])
    jt = join[np.ix_(xs, ys)]  # jt[a, b] = line x_a y_b
    a1, a2, a3 = (tri[:, i][:, None] for i in range(3))
    b1, b2, b3 = (ordered[:, i][None, :] for i in range(3))
    z1 = meet[jt[a2, b3], jt[a3, b2]]
    z2 = meet[jt[a1, b3], jt[a3, b1]]
    z3 = meet[jt[a1, b2], jt[a2, b1]]
    if np.any((z1 == z2) | (z1 == z3) | (z2 == z3)) or np.any((z1 < 0) | (z2 < 0) | (z3 < 0)):
        raise VerificationError(f"coincident cross points on line pair ({l1}, {l2})")
    closes = inc[join[z1, z2], z3]
    count = int(closes.sum())
    samples = []
    if collect:
        ti, oi = np.nonzero(closes)
        rng = np.random.default_rng([seed, l1, l2])
        picks = rng.choice(len(ti), size=min(collect, len(ti)), replace=False) if len(ti) else []
        for t, o in zip(ti[picks].tolist(), oi[picks].tolist()):
            alpha = [int(xs[i]) for i in tri[t]]
            beta = [int(ys[i]) for i in ordered[o]]
            zs = [int(z1[t, o]), int(z2[t, o]), int(z3[t, o])]
            samples.append((l1, l2, alpha, beta, zs))
    return count, samples


def pappus_subsystem(plane: Plane, l1: int, l2: int, alpha, beta, zs) -> IncidenceSystem:
    """The 9 points of a witness with the traces of its 9 lines."""
    pts = list(alpha) + list(beta) + list(zs)
    index = {x: i for i, x in enumerate(pts)}
    join = plane.join
    line_ids = {l1, l2, int(join[zs[0], zs[1]])}
    for i in range(3):
        for j in range(3):
            if i != j:
                line_ids.add(int(join[alpha[i], beta[j]]))
    lines = []
    for li in sorted(line_ids):
        trace = [index[x] for x in plane.lines[li] if x in index]
        lines.append(trace)
    return IncidenceSystem(9, lines)


def count_pappus(
    plane: Plane,
    threads: int = 1,
    spot_checks: int = 0,
    seed: int = 0,
    max_witnesses: int = 2 * 10**9,
) -> PappusCount:
    """Closing witnesses over all ordered line pairs; copies = closing / 18."""
    start = time.perf_counter()
    n = plane.order
    b = len(plane.lines)
    per_pair = math.comb(n, 3) * math.comb(n, 3) * 6
    witnesses = b * (b - 1) * per_pair
    if witnesses > max_witnesses:
        raise BudgetExceeded(f"{witnesses} witnesses exceed the guard {max_witnesses}", required=witnesses)
    bound = pappus_bound(n)
    if n < 3:
        return PappusCount(n, witnesses, 0, 0, bound, bound == 0, time.perf_counter() - start)
    tri, ordered = _index_arrays(n)
    rng = np.random.default_rng(seed)
    # spot checks: a few random closing witnesses from every line pair, then a uniform draw
    take = -(-spot_checks // (b * (b - 1))) if spot_checks else 0

    def shard(l1):
        total = 0
        samples = []
        for l2 in range(b):
            if l2 == l1:
                continue
            c, s = _pair_closing(plane, l1, l2, tri, ordered, collect=take, seed=seed)
            total += c
            samples.extend(s)
        return total, samples

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(shard, range(b)))
    else:
        results = [shard(l1) for l1 in range(b)]
    closing = sum(r[0] for r in results)
    if closing % WITNESSES_PER_COPY:
        raise VerificationError(f"closing witnesses {closing} not divisible by {WITNESSES_PER_COPY}")
    copies = closing // WITNESSES_PER_COPY
    if copies > bound:
        raise VerificationError(f"{copies} copies exceed the bound {bound}")
    checked, exceptions = 0, []
    if spot_checks:
        from .builders import build_pappus_config
        from .iso import are_isomorphic

        ref = build_pappus_config()
        pool = [s for r in results for s in r[1]]
        if pool:
            picks = rng.choice(len(pool), size=min(spot_checks, len(pool)), replace=False)
            for i in picks.tolist():
                sub = pappus_subsystem(plane, *pool[i])
                checked += 1
                if not are_isomorphic(sub, ref):
                    exceptions.append(pool[i])
    return PappusCount(n, witnesses, closing, copies, bound, copies == bound,
                       time.perf_counter() - start, checked, exceptions)


# --------------------------------------------------------------------------
# Desargues (optional)


@dataclass
class DesarguesCount:
    order: int
    witnesses: int
    witnesses_closing: int
    per_copy: int | None = None
    copies: int | None = None


def count_desargues_witnesses(plane: Plane, max_order: int = 9) -> DesarguesCount:
    """Desargues witnesses that close axially and form a copy of the configuration.

    A witness is a centre ``c``, three distinct lines through ``c`` (as a
    set), a pair of points other than ``c`` on each, and a split of the
    pairs into two triangles (4 splits, the two triangles unordered).
    Both triangles must be non-degenerate and the 10 points distinct; a
    closing witness counts only if each of its 10 lines meets the 10 points
    in exactly 3 of them (so it spans a copy, not a degenerate image).
    """
    n = plane.order
    if n > max_order:
        raise BudgetExceeded(f"Desargues witnesses limited to order <= {max_order}")
    meet, join, inc = plane.meet, plane.join, plane.incidence
    total = closing = 0
    for c in range(plane.num_points):
        pencil = plane.lines_through[c]
        for lines3 in combinations(pencil, 3):
            pairs = [[(a, b) for a, b in combinations([x for x in plane.lines[li] if x != c], 2)] for li in lines3]
            for (p1, p2, p3) in ((u, v, w) for u in pairs[0] for v in pairs[1] for w in pairs[2]):
                for s2, s3 in ((0, 0), (0, 1), (1, 0), (1, 1)):
                    a = (p1[0], p2[s2], p3[s3])
                    bb = (p1[1], p2[1 - s2], p3[1 - s3])
                    if inc[join[a[0], a[1]], a[2]] or inc[join[bb[0], bb[1]], bb[2]]:
                        continue
                    q = [meet[join[a[i], a[j]], join[bb[i], bb[j]]] for i, j in ((0, 1), (0, 2), (1, 2))]
                    pts = {c, *a, *bb, *q}
                    if len(pts) != 10:
                        continue
                    total += 1
                    if not inc[join[q[0], q[1]], q[2]]:
                        continue
                    # every configuration line must meet the 10 points in exactly 3
                    cfg = list(lines3) + [join[q[0], q[1]]]
                    cfg += [join[a[i], a[j]] for i, j in ((0, 1), (0, 2), (1, 2))]
                    cfg += [join[bb[i], bb[j]] for i, j in ((0, 1), (0, 2), (1, 2))]
                    idx = list(pts)
                    if all(int(inc[li, idx].sum()) == 3 for li in cfg):
                        closing += 1
    per = DESARGUES_WITNESSES_PER_COPY
    if closing % per:
        raise VerificationError(f"{closing} closing Desargues witnesses not divisible by {per}")
    return DesarguesCount(n, total, closing, per, closing // per)


def calibrate_desargues(reference: Plane, copies: int) -> int:
    """Witnesses per copy of the Desargues configuration on a reference plane."""
    res = count_desargues_witnesses(reference)
    if copies == 0 or res.witnesses_closing % copies:
        raise VerificationError(f"cannot calibrate: {res.witnesses_closing} closing witnesses vs {copies} copies")
    return res.witnesses_closing // copies
