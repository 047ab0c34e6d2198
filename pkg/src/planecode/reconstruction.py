"""Powers-of-two words, line reconstruction and inclusion numbers from type counts.

For an ordered tuple of ``k`` lines and ``p >= 2**k`` the word
``w = sum 2**i * line_i`` never wraps mod ``p``, so the lines come back as
the binary digits of ``w``.  Counting the words of one type therefore
counts ordered line tuples of one incidence pattern, and the number of
copies of a small system ``X`` in a plane becomes a rational combination
of type counts.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Optional, Sequence

import numpy as np

from .census import PROVEN, BoundedCensus, bounded_weight_census, type_census
from .errors import Infeasible, MalformedInput, VerificationError
from .incidence import IncidenceSystem, Plane
from .iso import automorphism_count, canonical_form, count_copies
from .linear import LinearCode, code_from_system, type_of


@dataclass(frozen=True, eq=False)
class PowersWord:
    word: np.ndarray
    lines: tuple
    k: int
    p: int

    @property
    def type(self) -> tuple:
        return type_of(self.word, self.p)


def powers_word(lines: Sequence[Sequence[int]], v: int, p: int) -> PowersWord:
    k = len(lines)
    if p < 2**k:
        raise MalformedInput(f"p={p} < 2^{k}; digits would wrap")
    sets = [tuple(sorted(set(line))) for line in lines]
    if len(set(sets)) != k:
        raise MalformedInput("lines must be pairwise distinct")
    w = np.zeros(v, dtype=np.int64)
    for i, line in enumerate(sets):
        if line and (line[0] < 0 or line[-1] >= v):
            raise MalformedInput(f"line {i} leaves [0, {v})")
        w[list(line)] += 2**i
    return PowersWord(w, tuple(sets), k, p)


def reconstruct_lines(w, k: int) -> list[tuple[int, ...]]:
    """Binary digits of ``w``: line ``i`` is ``{x : bit i of w(x) is 1}``."""
    w = np.asarray(w, dtype=np.int64)
    if np.any(w < 0) or np.any(w >= 2**k):
        bad = int(np.argmax((w < 0) | (w >= 2**k)))
        raise MalformedInput(f"coordinate {bad} has value {int(w[bad])} >= 2^{k}")
    return [tuple(int(x) for x in np.nonzero((w >> i) & 1)[0]) for i in range(k)]


# --------------------------------------------------------------------------
# digit lemma


def binary_solutions(k: int):
    """All non-negative ``(x_0..x_{k-1})`` with ``sum 2^i x_i = 2^k - 1`` (small k only)."""
    target = 2**k - 1

    def rec(i, rest):
        if i < 0:
            if rest == 0:
                yield ()
            return
        for xi in range(rest // 2**i + 1):
            for tail in rec(i - 1, rest - xi * 2**i):
                yield tail + (xi,)

    for sol in rec(k - 1, target):
        yield sol


def lemma38_check(k: int, exhaustive_limit: int = 7) -> dict:
    """Every solution has ``sum x_i >= k``; ``sum x_i = k`` only for all ones.

    Up to ``exhaustive_limit`` every solution is listed; beyond that an
    exact DP counts solutions by number of parts (capped at ``k``).
    """
    target = 2**k - 1
    if k <= exhaustive_limit:
        sols = list(binary_solutions(k))
        min_parts = min(sum(s) for s in sols)
        tight = [s for s in sols if sum(s) == k]
        return {"k": k, "solutions": len(sols), "min_parts": min_parts, "tight": tight, "method": "exhaustive"}
    # ways[r][c]: solutions using digits processed so far summing to r with c parts (c <= k)
    ways = {0: {0: 1}}
    for i in range(k):
        step = 2**i
        nxt: dict = {}
        for r, byc in ways.items():
            for c, n in byc.items():
                xi = 0
                while r + xi * step <= target and c + xi <= k:
                    d = nxt.setdefault(r + xi * step, {})
                    d[c + xi] = d.get(c + xi, 0) + n
                    xi += 1
        ways = nxt
    counts = ways.get(target, {})
    min_parts = min(counts) if counts else None
    return {"k": k, "parts_le_k": dict(sorted(counts.items())), "min_parts": min_parts,
            "tight": [(1,) * k] if counts.get(k) == 1 else counts.get(k), "method": "dp"}


# --------------------------------------------------------------------------
# classes of k-line subsystems


def _pattern_signature(masks, all_points, perms_masks):
    k = len(masks)
    counts = [0] * (1 << k)
    union = 0
    for m in masks:
        union |= m
    counts[0] = (all_points & ~union).bit_count()
    for sub in range(1, 1 << k):
        inter = all_points
        outside = 0
        for i in range(k):
            if sub >> i & 1:
                inter &= masks[i]
            else:
                outside |= masks[i]
        counts[sub] = (inter & ~outside).bit_count()
    return min(tuple(counts[pm[s]] for s in range(1 << k)) for pm in perms_masks)


def _perm_masks(k):
    out = []
    for perm in permutations(range(k)):
        table = []
        for s in range(1 << k):
            t = 0
            for i in range(k):
                if s >> i & 1:
                    t |= 1 << perm[i]
            table.append(t)
        out.append(table)
    return out


def line_subset_classes(plane: Plane, k: int):
    """Group the k-subsets of plane lines by isomorphism type of (all points, chosen lines).

    Returns ``{signature: (representative line indices, number of subsets)}``.
    Two such systems are isomorphic iff their point-membership pattern
    counts agree up to relabelling the ``k`` lines, which the signature
    captures exactly.
    """
    masks = plane.system.line_masks
    all_points = (1 << plane.num_points) - 1
    pm = _perm_masks(k)
    out: dict = {}
    for sub in combinations(range(len(masks)), k):
        sig = _pattern_signature([masks[i] for i in sub], all_points, pm)
        if sig in out:
            rep, n = out[sig]
            out[sig] = (rep, n + 1)
        else:
            out[sig] = (sub, 1)
    return out


# --------------------------------------------------------------------------
# inclusion numbers


@dataclass
class ClassRow:
    canonical: str
    lines: list
    i_x_y: int
    type: list
    aut: int
    a_j: int
    alpha: str
    contribution: int
    subsets: int
    i_y_plane: int


@dataclass
class InclusionReport:
    pattern: str
    plane: str
    p: int
    k: int
    rows: list = field(default_factory=list)
    total: int = 0
    direct: Optional[int] = None
    match: Optional[bool] = None
    note: str = "classes not realised in this plane are omitted; their type counts vanish"

    def to_json(self) -> str:
        doc = asdict(self)
        return json.dumps(doc, indent=2)


def _multinomial_denominator(j) -> int:
    out = 1
    for x in j:
        out *= math.factorial(x)
    return out


def theorem42_count(
    x: IncidenceSystem,
    plane: Plane,
    type_counter: Optional[Callable[[tuple], int]] = None,
    code: Optional[LinearCode] = None,
    direct: bool = True,
    pattern_name: str = "",
    plane_name: str = "",
) -> InclusionReport:
    """``i(X, plane)`` as ``sum_j i(X, Y_j) * j! * a_j / #Aut(Y_j)`` over line-subset classes."""
    p = plane.order
    k = x.num_lines
    if k == 0:
        raise MalformedInput("pattern has no lines")
    if p < 2**k:
        raise MalformedInput(f"pattern has {k} lines; needs p >= 2^{k}")
    if code is None:
        code = code_from_system(plane.system, p)
    if type_counter is None:
        def type_counter(j):
            return type_census(code, j, "auto", plane=plane)
    v = plane.num_points
    report = InclusionReport(pattern_name or repr(x), plane_name or plane.system.fingerprint, p, k)
    total = Fraction(0)
    for sig, (rep, nsub) in sorted(line_subset_classes(plane, k).items()):
        y = IncidenceSystem(v, [plane.lines[i] for i in rep])
        cf = canonical_form(y)
        ordered = [y.lines[i] for i in cf.line_order]
        j = powers_word(ordered, v, p).type
        aut = automorphism_count(y)
        ixy = count_copies(x, y)
        a_j = int(type_counter(j))
        fact = _multinomial_denominator(j)
        i_y, r = divmod(fact * a_j, aut)
        if r:
            raise VerificationError(f"j! a_j = {fact * a_j} not divisible by #Aut(Y) = {aut}")
        if i_y != nsub:
            raise VerificationError(f"class {cf.digest}: j! a_j / #Aut = {i_y}, but {nsub} line subsets")
        alpha = Fraction(ixy * fact, aut)
        contrib = alpha * a_j
        if contrib.denominator != 1:
            raise VerificationError("non-integral class contribution")
        total += contrib
        report.rows.append(ClassRow(cf.digest, [list(l) for l in ordered], ixy, list(j), aut, a_j,
                                    f"{alpha.numerator}/{alpha.denominator}", int(contrib), nsub, i_y))
    report.total = int(total)
    if direct:
        report.direct = count_copies(x, plane.system)
        report.match = report.direct == report.total
    return report


def corollary43_compare(plane_a: Plane, plane_b: Plane, x: IncidenceSystem, **kw) -> dict:
    if plane_a.order != plane_b.order:
        raise MalformedInput("planes of different orders")
    ra = theorem42_count(x, plane_a, **kw)
    rb = theorem42_count(x, plane_b, **kw)
    ta = {tuple(r.type): r.a_j for r in ra.rows}
    tb = {tuple(r.type): r.a_j for r in rb.rows}
    return {"total_a": ra.total, "total_b": rb.total, "totals_agree": ra.total == rb.total,
            "type_counts_agree": ta == tb, "reports": (ra, rb)}


# --------------------------------------------------------------------------
# reconstruction check


def ordered_tuples_of_type(plane: Plane, k: int, j) -> int:
    """Ordered k-tuples of distinct plane lines whose powers word has type ``j``."""
    j = tuple(j)
    p, v = plane.order, plane.num_points
    masks = plane.system.line_masks
    all_points = (1 << v) - 1
    total = 0
    for tup in permutations(range(len(masks)), k):
        counts = [0] * p
        union = 0
        for i in tup:
            union |= masks[i]
        counts[0] = (all_points & ~union).bit_count()
        for sub in range(1, 1 << k):
            inter = all_points
            outside = 0
            for i in range(k):
                if sub >> i & 1:
                    inter &= masks[tup[i]]
                else:
                    outside |= masks[tup[i]]
            counts[sub] += (inter & ~outside).bit_count()
        if tuple(counts) == j:
            total += 1
    return total


def words_of_type(code: LinearCode, j, census: Optional[BoundedCensus] = None, seed: int = 0) -> np.ndarray:
    """Every codeword of type ``j`` (full enumeration when small, else bounded census)."""
    from itertools import product

    j = tuple(j)
    p = code.p
    if p**code.dim <= 2_000_000:
        msgs = np.array(list(product(range(p), repeat=code.dim)), dtype=np.int64)
        words = (msgs @ code.rows) % p
        counts = np.stack([(words == a).sum(axis=1) for a in range(p)], axis=1)
        return words[np.all(counts == np.asarray(j), axis=1)]
    weight = code.length - j[0]
    if census is None or census.words is None or census.w_max < weight:
        census = bounded_weight_census(code, weight, want_words=True, seed=seed)
    if census.status != PROVEN:
        raise Infeasible("bounded census is not proven complete")
    return census.words_of_type(j).astype(np.int64)


@dataclass
class Lemma39Report:
    p: int
    k: int
    type: list
    words: int
    reconstructed: int
    ordered_tuples: int
    ok: bool


def lemma39_verify(plane: Plane, k: int, census: Optional[BoundedCensus] = None, seed: int = 0) -> list[Lemma39Report]:
    """For each class of k plane lines: every word of its powers type reconstructs
    to k genuine lines, and the number of such words equals the number of
    ordered line tuples with that type."""
    p = plane.order
    if p < 2**k:
        raise MalformedInput(f"p={p} < 2^{k}")
    code = code_from_system(plane.system, p)
    line_set = set(plane.lines)
    out = []
    for sig, (rep, _) in sorted(line_subset_classes(plane, k).items()):
        j = powers_word([plane.lines[i] for i in rep], plane.num_points, p).type
        words = words_of_type(code, j, census, seed)
        good = 0
        for w in words:
            rec = reconstruct_lines(w, k)
            if all(line in line_set for line in rec) and len(set(rec)) == k:
                good += 1
        tuples = ordered_tuples_of_type(plane, k, j)
        out.append(Lemma39Report(p, k, list(j), len(words), good, tuples, good == len(words) == tuples))
    return out
