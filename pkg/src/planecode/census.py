"""Exact weight and type censuses of linear codes.

``full_census`` walks every codeword of a (shard of a) code.  The message
space is split into leading digits (the shard prefix), a reflected base-p
Gray walk over the middle digits, and a block of trailing digits expanded
as one matrix, so each Gray step is a single row update of ``v`` residues
followed by a vectorised tally of the block.

``bounded_weight_census`` finds every codeword up to a weight bound using
several information sets with the usual coverage lower bound, and says
whether the bound proves completeness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from .errors import Infeasible, MalformedInput
from .linear import LinearCode, rref, types_of_rows

DEFAULT_BUDGET = 10**9
HAMMING = "hamming"
COMPLETE = "complete"
PROVEN = "PROVEN"
HEURISTIC = "HEURISTIC"


def code_fingerprint(c: LinearCode) -> str:
    import hashlib

    h = hashlib.sha256(f"{c.p}:{c.length}:".encode() + c.rows.astype(np.int8).tobytes())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class ShardSpec:
    index: int = 0
    count: int = 1

    def __post_init__(self):
        if self.count < 1 or not 0 <= self.index < self.count:
            raise MalformedInput(f"shard {self.index}/{self.count} out of range")


@dataclass
class CensusTable:
    kind: str
    p: int
    length: int
    dim: int
    fingerprint: str
    entries: dict = field(default_factory=dict)
    shards: tuple = ()

    def total(self) -> int:
        return sum(self.entries.values())

    def get(self, key, default=0):
        return self.entries.get(key, default)

    def to_hamming(self) -> "CensusTable":
        if self.kind == HAMMING:
            return self
        out: dict[int, int] = {}
        for t, n in self.entries.items():
            w = self.length - t[0]
            out[w] = out.get(w, 0) + n
        return CensusTable(HAMMING, self.p, self.length, self.dim, self.fingerprint, out, self.shards)

    def to_cwe(self) -> str:
        head = f"cwe p={self.p} v={self.length} k={self.dim} kind={self.kind} fingerprint={self.fingerprint}"
        rows = [head]
        for key in sorted(self.entries):
            if self.kind == COMPLETE:
                rows.append(",".join(map(str, key)) + f",{self.entries[key]}")
            else:
                rows.append(f"{key},{self.entries[key]}")
        return "\n".join(rows) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_cwe())


def parse_cwe(text: str) -> CensusTable:
    lines = text.strip().splitlines()
    if not lines or not lines[0].startswith("cwe "):
        raise MalformedInput("missing cwe header")
    meta = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    try:
        p, v, k = int(meta["p"]), int(meta["v"]), int(meta["k"])
        kind, fp = meta["kind"], meta["fingerprint"]
    except (KeyError, ValueError) as exc:
        raise MalformedInput(f"bad cwe header: {lines[0]}") from exc
    if kind not in (HAMMING, COMPLETE):
        raise MalformedInput(f"unknown census kind {kind!r}")
    entries = {}
    for row in lines[1:]:
        nums = [int(x) for x in row.split(",")]
        if kind == COMPLETE:
            if len(nums) != p + 1:
                raise MalformedInput(f"complete row needs {p + 1} fields: {row}")
            entries[tuple(nums[:-1])] = nums[-1]
        else:
            entries[nums[0]] = nums[1]
    return CensusTable(kind, p, v, k, fp, entries)


def read_cwe(path) -> CensusTable:
    return parse_cwe(Path(path).read_text())


def merge(*tables: CensusTable) -> CensusTable:
    if not tables:
        raise MalformedInput("nothing to merge")
    first = tables[0]
    out: dict = {}
    shards = []
    for t in tables:
        if (t.kind, t.p, t.length, t.dim, t.fingerprint) != (first.kind, first.p, first.length, first.dim, first.fingerprint):
            raise MalformedInput("cannot merge censuses of different codes or kinds")
        for key, n in t.entries.items():
            out[key] = out.get(key, 0) + n
        shards.extend(t.shards)
    return CensusTable(first.kind, first.p, first.length, first.dim, first.fingerprint, out, tuple(sorted(shards)))


# --------------------------------------------------------------------------
# full census


def reflected_gray_steps(p: int, m: int) -> Iterator[tuple[int, int]]:
    """Loopless reflected base-``p`` Gray walk over ``m`` digits.

    Yields ``(digit, delta)`` with ``delta = +-1``; starting from all zeros
    the walk visits each of the ``p**m`` tuples exactly once.
    """
    a = [0] * m
    focus = list(range(m + 1))
    direction = [1] * m
    while True:
        j = focus[0]
        focus[0] = 0
        if j == m:
            return
        a[j] += direction[j]
        yield j, direction[j]
        if a[j] == 0 or a[j] == p - 1:
            direction[j] = -direction[j]
            focus[j] = focus[j + 1]
            focus[j + 1] = j + 1


def _prefix_digits(p, count):
    d = 0
    while p**d < count:
        d += 1
    return d


def _tally(words, p, kind, acc):
    if kind == HAMMING:
        w = np.count_nonzero(words, axis=1)
        vals, cnt = np.unique(w, return_counts=True)
        for a, n in zip(vals.tolist(), cnt.tolist()):
            acc[a] = acc.get(a, 0) + n
        return
    counts = types_of_rows(words, p)
    base = words.shape[1] + 1
    keys = counts @ (base ** np.arange(p - 1, -1, -1, dtype=np.int64)) if base**p < 2**62 else None
    if keys is None:
        rows, cnt = np.unique(counts, axis=0, return_counts=True)
        for r, n in zip(rows.tolist(), cnt.tolist()):
            t = tuple(r)
            acc[t] = acc.get(t, 0) + n
        return
    vals, idx, cnt = np.unique(keys, return_index=True, return_counts=True)
    for i, n in zip(idx.tolist(), cnt.tolist()):
        t = tuple(int(x) for x in counts[i])
        acc[t] = acc.get(t, 0) + n


def full_census(
    c: LinearCode,
    kind: str = COMPLETE,
    shard: ShardSpec = ShardSpec(),
    budget: int = DEFAULT_BUDGET,
    block_words: int = 1 << 14,
) -> CensusTable:
    """Exact Hamming or complete weight table over the shard's messages."""
    if kind not in (HAMMING, COMPLETE):
        raise MalformedInput(f"unknown census kind {kind!r}")
    p, k, v = c.p, c.dim, c.length
    total = p**k
    if total > budget * shard.count:
        raise Infeasible(
            f"full census of p^k = {p}^{k} words exceeds budget {budget} x {shard.count} shards",
            required=-(-total // shard.count),
        )
    g = c.rows
    d = min(_prefix_digits(p, shard.count), k)
    rest = k - d
    b = 0
    while b < rest and p ** (b + 1) <= block_words:
        b += 1
    mid = rest - b
    # trailing block: every combination of the last b message digits
    if b:
        msgs = np.array(list(product(range(p), repeat=b)), dtype=np.int64)
        block = (msgs @ g[k - b :]) % p
    else:
        block = np.zeros((1, v), dtype=np.int64)
    acc: dict = {}
    for prefix in range(p**d):
        if prefix % shard.count != shard.index:
            continue
        digits = [(prefix // p ** (d - 1 - i)) % p for i in range(d)]
        offset = (np.array(digits, dtype=np.int64) @ g[:d]) % p if d else np.zeros(v, dtype=np.int64)
        _tally((block + offset) % p, p, kind, acc)
        for j, delta in reflected_gray_steps(p, mid):
            offset = (offset + delta * g[d + j]) % p
            _tally((block + offset) % p, p, kind, acc)
    return CensusTable(kind, p, v, k, code_fingerprint(c), acc, ((shard.index, shard.count),))


def brute_force_census(c: LinearCode, kind: str = COMPLETE) -> CensusTable:
    """Reference oracle: enumerate messages in plain lexicographic order."""
    acc: dict = {}
    for msg in product(range(c.p), repeat=c.dim):
        w = c.encode(msg)
        if kind == HAMMING:
            key = int(np.count_nonzero(w))
        else:
            key = tuple(int(x) for x in np.bincount(w, minlength=c.p))
        acc[key] = acc.get(key, 0) + 1
    return CensusTable(kind, c.p, c.length, c.dim, code_fingerprint(c), acc, ((0, 1),))


# --------------------------------------------------------------------------
# bounded-weight census


@dataclass
class BoundedCensus:
    """All codewords of weight <= ``w_max`` (up to the completeness status)."""

    p: int
    length: int
    dim: int
    fingerprint: str
    w_max: int
    status: str
    hamming: dict
    complete: dict
    info_sets: list
    thresholds: list
    volume: int
    words: Optional[np.ndarray] = None

    def hamming_table(self) -> CensusTable:
        return CensusTable(HAMMING, self.p, self.length, self.dim, self.fingerprint, dict(self.hamming))

    def complete_table(self) -> CensusTable:
        return CensusTable(COMPLETE, self.p, self.length, self.dim, self.fingerprint, dict(self.complete))

    def words_of_type(self, j) -> np.ndarray:
        if self.words is None:
            raise MalformedInput("census was run without want_words")
        t = types_of_rows(self.words, self.p)
        return self.words[np.all(t == np.asarray(j), axis=1)]


def _pattern_volume(k, t, p):
    """Projective message patterns of weight 1..t on an information set of size k."""
    return sum(math.comb(k, i) * (p - 1) ** (i - 1) for i in range(1, t + 1))


def _choose_info_sets(c: LinearCode, count: int, rng) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """Greedy information sets preferring the least-used columns; returns (set, systematic generator)."""
    v = c.length
    usage = np.zeros(v, dtype=np.int64)
    out = []
    for _ in range(count):
        noise = rng.random(v)
        order = sorted(range(v), key=lambda j: (usage[j], noise[j]))
        red, piv = rref(c.rows[:, order], c.p)
        cols = tuple(sorted(order[i] for i in piv))
        sysg = np.zeros_like(red)
        sysg[:, order] = red
        # rows ordered by their pivot column so message digit i lives at cols-order
        piv_cols = [order[i] for i in piv]
        perm = np.argsort(piv_cols)
        sysg = sysg[perm]
        usage[list(cols)] += 1
        out.append((cols, sysg))
    return out


def _coverage_bound(mult: np.ndarray, w_max: int) -> int:
    """Largest ``sum_i wt(w|I_i)`` a word of weight <= w_max can have."""
    top = np.sort(mult)[::-1]
    return int(top[:w_max].sum())


def _plan(c: LinearCode, w_max: int, rng_seed: int, max_sets: int):
    k, p, v = c.dim, c.p, c.length
    best = None
    for m in range(1, max_sets + 1):
        rng = np.random.default_rng(rng_seed)
        sets = _choose_info_sets(c, m, rng)
        mult = np.zeros(v, dtype=np.int64)
        for cols, _ in sets:
            mult[list(cols)] += 1
        need = _coverage_bound(mult, w_max)
        thresholds = [0] * m
        while sum(t + 1 for t in thresholds) <= need:
            options = [
                (_pattern_volume(k, t + 1, p) - _pattern_volume(k, t, p), i)
                for i, t in enumerate(thresholds)
                if t < k
            ]
            if not options:
                break
            _, i = min(options)
            thresholds[i] += 1
        proven = sum(t + 1 for t in thresholds) > need
        volume = sum(_pattern_volume(k, t, p) for t in thresholds)
        cand = (not proven, volume, m, sets, thresholds)
        if best is None or cand[:2] < best[:2]:
            best = cand
    return best


def bounded_weight_census(
    c: LinearCode,
    w_max: int,
    want_words: bool = False,
    seed: int = 0,
    max_volume: int = 3 * 10**8,
    max_sets: int = 10,
    chunk_rows: int = 1 << 18,
) -> BoundedCensus:
    """Every codeword of Hamming weight at most ``w_max``.

    Words are generated as ``m @ G_I`` for low-weight messages ``m`` on
    information sets ``I_1..I_s`` (systematic generators ``G_I``), with
    threshold ``t_i`` on set ``i``.  A codeword missed by every set has
    weight > t_i on every ``I_i``, so ``sum(t_i + 1) > max_{|S|<=w_max}
    sum_{x in S} mult(x)`` proves nothing of weight <= w_max was missed.
    """
    p, k, v = c.p, c.dim, c.length
    if not 0 <= w_max <= v:
        raise MalformedInput(f"w_max={w_max} outside [0, {v}]")
    fp = code_fingerprint(c)
    if k == 0:
        return BoundedCensus(p, v, 0, fp, w_max, PROVEN, {0: 1}, {(v,) + (0,) * (p - 1): 1}, [], [], 0,
                             np.zeros((1, v), dtype=np.int8) if want_words else None)
    not_proven, volume, _, sets, thresholds = _plan(c, w_max, seed, max_sets)
    if volume > max_volume:
        worst = max(range(len(thresholds)), key=lambda i: thresholds[i])
        raise Infeasible(
            f"bounded census volume {volume} exceeds {max_volume}; blocking term "
            f"C({k},{thresholds[worst]})*{p - 1}^{thresholds[worst] - 1}",
            required=volume,
        )
    inv = [0] + [pow(a, -1, p) for a in range(1, p)]
    inv = np.array(inv, dtype=np.int64)
    found: set[bytes] = set()
    reps = []
    for (cols, g), t in zip(sets, thresholds):
        gf = g.astype(np.float64)
        for i in range(1, t + 1):
            coef = np.array([(1,) + tail for tail in product(range(1, p), repeat=i - 1)], dtype=np.float64)
            subsets = np.array(list(combinations(range(k), i)), dtype=np.int64)
            per = max(1, chunk_rows // len(coef))
            for start in range(0, len(subsets), per):
                sub = subsets[start : start + per]
                words = np.einsum("ri,sic->src", coef, gf[sub]).reshape(-1, v)
                words = np.mod(words, p).astype(np.int64)
                wt = np.count_nonzero(words, axis=1)
                sel = words[wt <= w_max]
                if not len(sel):
                    continue
                first = sel[np.arange(len(sel)), np.argmax(sel != 0, axis=1)]
                sel = (sel * inv[first][:, None]) % p
                for row in sel.astype(np.int8):
                    key = row.tobytes()
                    if key not in found:
                        found.add(key)
                        reps.append(row)
    reps_arr = np.array(reps, dtype=np.int64).reshape(-1, v)
    hamming: dict[int, int] = {0: 1}
    complete: dict[tuple, int] = {(v,) + (0,) * (p - 1): 1}
    all_words = [np.zeros((1, v), dtype=np.int64)]
    for a in range(1, p):
        scaled = (reps_arr * a) % p
        all_words.append(scaled)
    words = np.vstack(all_words)
    for w, n in zip(*np.unique(np.count_nonzero(words[1:], axis=1), return_counts=True)):
        hamming[int(w)] = hamming.get(int(w), 0) + int(n)
    rows, cnt = np.unique(types_of_rows(words[1:], p), axis=0, return_counts=True) if len(words) > 1 else ([], [])
    for r, n in zip(rows, cnt):
        complete[tuple(int(x) for x in r)] = int(n)
    return BoundedCensus(
        p, v, k, fp, w_max,
        HEURISTIC if not_proven else PROVEN,
        dict(sorted(hamming.items())),
        dict(sorted(complete.items())),
        [s for s, _ in sets],
        list(thresholds),
        volume,
        words.astype(np.int8) if want_words else None,
    )


# --------------------------------------------------------------------------
# single-type counts


def type_census(c: LinearCode, j, strategy: str = "auto", plane=None, **kw) -> int:
    """``a_j``: the number of codewords of type ``j``.

    Strategies: ``full`` (complete census), ``bounded`` (bounded-weight
    census to weight ``v - j_0``), ``search`` (exact constraint search over
    point values; needs the plane whose code this is) and ``auto``.
    """
    j = tuple(int(x) for x in j)
    if len(j) != c.p or sum(j) != c.length:
        raise MalformedInput(f"type {j} does not fit p={c.p}, length={c.length}")
    weight = c.length - j[0]
    if strategy == "auto":
        if c.p**c.dim <= kw.get("budget", DEFAULT_BUDGET) // 100:
            strategy = "full"
        elif plane is not None and weight > 2 * c.p + 2:
            strategy = "search"
        else:
            strategy = "bounded"
    if strategy == "full":
        return full_census(c, COMPLETE, budget=kw.get("budget", DEFAULT_BUDGET)).get(j)
    if strategy == "bounded":
        bc = kw.get("census") or bounded_weight_census(c, weight, seed=kw.get("seed", 0))
        if bc.w_max < weight:
            raise MalformedInput(f"census to weight {bc.w_max} cannot count weight {weight}")
        if bc.status != PROVEN:
            raise Infeasible("bounded census did not reach proven completeness")
        return bc.complete.get(j, 0)
    if strategy == "search":
        from .typesearch import count_type_words

        if plane is None:
            raise MalformedInput("search strategy needs the plane")
        return count_type_words(plane, c.p, j).count
    raise MalformedInput(f"unknown strategy {strategy!r}")
