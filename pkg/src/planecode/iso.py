"""Isomorphism, canonical forms, automorphism counts and monomorphism counts.

Canonical labelling works on the point/line incidence graph with the usual
individualization-refinement scheme: colour refinement to an equitable
partition, branching on the first largest non-singleton cell, pruning by
node invariants and by orbits of automorphisms discovered along the way.

Points with identical pencils ("twins") are interchangeable, so every
search runs on the quotient where each twin class becomes one weighted
vertex; the twin classes contribute ``prod(size!)`` to the group order.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional

from .errors import BudgetExceeded, MalformedInput, VerificationError
from .incidence import IncidenceSystem

MAX_POINTS = 200


# --------------------------------------------------------------------------
# partitions


class _Partition:
    """Ordered partition of ``0..n-1`` stored as contiguous cells of ``order``."""

    __slots__ = ("order", "pos", "cstart", "clen")

    def __init__(self, order, pos, cstart, clen):
        self.order = order
        self.pos = pos
        self.cstart = cstart
        self.clen = clen

    def copy(self):
        return _Partition(self.order[:], self.pos[:], self.cstart[:], dict(self.clen))

    @property
    def discrete(self):
        return len(self.clen) == len(self.order)

    def target_cell(self):
        best_s, best_len = -1, 1
        for s in sorted(self.clen):
            if self.clen[s] > best_len:
                best_s, best_len = s, self.clen[s]
        return best_s

    def _split(self, s, groups):
        """Replace the cell at ``s`` by consecutive fragments; returns their starts."""
        order, pos, cstart, clen = self.order, self.pos, self.cstart, self.clen
        starts = []
        at = s
        for grp in groups:
            starts.append(at)
            clen[at] = len(grp)
            for u in grp:
                order[at] = u
                pos[u] = at
                at += 1
        for st in starts:
            for i in range(st, st + clen[st]):
                cstart[order[i]] = st
        return starts

    def individualize(self, w):
        s = self.cstart[w]
        members = self.order[s : s + self.clen[s]]
        rest = [u for u in members if u != w]
        return self._split(s, [[w], rest])[0]


def _refine(part: _Partition, adj, queue_starts, trace):
    queue = deque(queue_starts)
    inq = set(queue_starts)
    clen, order, cstart = part.clen, part.order, part.cstart
    n = len(order)
    while queue and len(clen) < n:
        ws = queue.popleft()
        inq.discard(ws)
        cnt: dict[int, int] = {}
        for w in order[ws : ws + clen[ws]]:
            for u in adj[w]:
                cnt[u] = cnt.get(u, 0) + 1
        touched = sorted({cstart[u] for u in cnt})
        for s in touched:
            length = clen[s]
            if length == 1:
                continue
            members = order[s : s + length]
            buckets: dict[int, list] = {}
            for u in members:
                buckets.setdefault(cnt.get(u, 0), []).append(u)
            if len(buckets) == 1:
                continue
            keys = sorted(buckets)
            groups = [buckets[k] for k in keys]
            trace.append((s, tuple((k, len(buckets[k])) for k in keys)))
            starts = part._split(s, groups)
            if s in inq:
                for st in starts[1:]:
                    queue.append(st)
                    inq.add(st)
            else:
                big = max(range(len(starts)), key=lambda i: (len(groups[i]), -i))
                for i, st in enumerate(starts):
                    if i != big:
                        queue.append(st)
                        inq.add(st)
    return part


# --------------------------------------------------------------------------
# search


@dataclass
class _SearchOutcome:
    best_order: list
    best_key: tuple
    group_order: int
    generators: list


class _Search:
    def __init__(self, adj, colors, node_budget=2_000_000):
        self.adj = adj
        self.n = len(adj)
        self.colors = colors
        self.node_budget = node_budget
        self.nodes = 0
        self.generators: list[tuple] = []
        self.first = None  # (seq, traces, cert, order)
        self.best = None
        self.orbit_sizes: dict[int, int] = {}

    def run(self) -> _SearchOutcome:
        n = self.n
        keys = sorted(set(self.colors))
        groups = [[v for v in range(n) if self.colors[v] == k] for k in keys]
        order, pos, cstart, clen = [0] * n, [0] * n, [0] * n, {}
        part = _Partition(order, pos, cstart, clen)
        if n:
            starts = part._split(0, groups)
        else:
            starts = []
        trace: list = []
        _refine(part, self.adj, starts, trace)
        self._dfs(part, [], [tuple(trace)], True, 0)
        group_order = 1
        for size in self.orbit_sizes.values():
            group_order *= size
        return _SearchOutcome(self.best[3], (self.best[1], self.best[2]), group_order, self.generators)

    # certificate of a discrete partition: per line-vertex position, sorted neighbour positions
    def _cert(self, part):
        pos = part.pos
        return tuple(tuple(sorted(pos[u] for u in self.adj[v])) for v in part.order)

    def _gens_fixing(self, seq):
        if not seq:
            return self.generators
        return [g for g in self.generators if all(g[x] == x for x in seq)]

    def _orbit(self, w, gens):
        seen = {w}
        stack = [w]
        while stack:
            x = stack.pop()
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def _add_generator(self, src_order, dst_order):
        g = [0] * self.n
        for a, b in zip(src_order, dst_order):
            g[a] = b
        g = tuple(g)
        if any(g[i] != i for i in range(self.n)):
            self.generators.append(g)

    def _dfs(self, part, seq, traces, eq_first, cmp_best):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise BudgetExceeded("canonical search node budget exceeded", required=self.nodes)
        level = len(seq)
        if part.discrete:
            return self._leaf(part, seq, traces, eq_first, cmp_best)
        s = part.target_cell()
        candidates = sorted(part.order[s : s + part.clen[s]])
        explored: list[int] = []
        for w in candidates:
            if explored:
                orb = self._orbit(w, self._gens_fixing(seq))
                if any(e in orb for e in explored):
                    continue
            explored.append(w)
            child = part.copy()
            st = child.individualize(w)
            tr: list = []
            _refine(child, self.adj, [st], tr)
            tr = tuple(tr)
            child_traces = traces + [tr]
            child_eq = eq_first and (self.first is None or (level + 1 < len(self.first[1]) and self.first[1][level + 1] == tr))
            child_cmp = cmp_best
            if self.best is not None and child_cmp == 0:
                bt = self.best[1]
                if level + 1 >= len(bt):
                    child_cmp = 1
                elif tr != bt[level + 1]:
                    child_cmp = -1 if tr < bt[level + 1] else 1
            if self.first is not None and not child_eq and child_cmp > 0:
                continue
            r = self._dfs(child, seq + [w], child_traces, child_eq, child_cmp)
            if r < level:
                return r
        if self.first is not None and self.first[0][:level] == seq:
            target = self.first[0][level]
            self.orbit_sizes[level] = len(self._orbit(target, self._gens_fixing(seq)))
        return level - 1

    def _leaf(self, part, seq, traces, eq_first, cmp_best):
        level = len(seq)
        cert = self._cert(part)
        if self.first is None:
            self.first = (list(seq), traces, cert, part.order[:])
            self.best = self.first
            return level - 1
        if eq_first and cert == self.first[2]:
            self._add_generator(self.first[3], part.order)
            return _common_prefix(seq, self.first[0])
        if cmp_best == 0 and cert == self.best[2]:
            self._add_generator(self.best[3], part.order)
            return _common_prefix(seq, self.best[0])
        if cmp_best < 0 or (cmp_best == 0 and cert < self.best[2]):
            self.best = (list(seq), traces, cert, part.order[:])
        return level - 1


def _common_prefix(a, b):
    c = 0
    for x, y in zip(a, b):
        if x != y:
            break
        c += 1
    return c


# --------------------------------------------------------------------------
# quotient by twin points


@dataclass(frozen=True)
class _Quotient:
    classes: tuple  # tuple of point tuples, ordered by smallest member
    adj: tuple  # vertices: classes then lines
    colors: tuple


def _quotient(sys: IncidenceSystem, point_colors=None) -> _Quotient:
    if sys.num_points > MAX_POINTS:
        raise BudgetExceeded(f"system has {sys.num_points} points; iso-search guard is {MAX_POINTS}")
    if point_colors is None:
        point_colors = (0,) * sys.num_points
    by_pencil: dict[tuple, list] = {}
    for x, pen in enumerate(sys.pencils):
        by_pencil.setdefault((pen, point_colors[x]), []).append(x)
    classes = sorted((tuple(v) for v in by_pencil.values()), key=lambda c: c[0])
    nc = len(classes)
    b = sys.num_lines
    adj: list[list[int]] = [[] for _ in range(nc + b)]
    for ci, cls in enumerate(classes):
        for li in sys.pencils[cls[0]]:
            adj[ci].append(nc + li)
            adj[nc + li].append(ci)
    colors = tuple([(0, point_colors[c[0]], len(c)) for c in classes] + [(1, 0, 0)] * b)
    return _Quotient(tuple(classes), tuple(tuple(a) for a in adj), colors)


@lru_cache(maxsize=256)
def _analyse(sys: IncidenceSystem, point_colors=None):
    q = _quotient(sys, point_colors)
    outcome = _Search(q.adj, q.colors).run()
    return q, outcome


# --------------------------------------------------------------------------
# public API


@dataclass(frozen=True)
class CanonicalForm:
    point_order: tuple
    line_order: tuple
    data: bytes

    @property
    def digest(self) -> str:
        import hashlib

        return hashlib.sha256(self.data).hexdigest()[:16]


def canonical_form(sys: IncidenceSystem) -> CanonicalForm:
    """Relabelling-invariant form: equal for two systems iff they are isomorphic."""
    q, out = _analyse(sys)
    nc = len(q.classes)
    point_order = []
    line_order = []
    for v in out.best_order:
        if v < nc:
            point_order.extend(q.classes[v])
        else:
            line_order.append(v - nc)
    rank = {x: i for i, x in enumerate(point_order)}
    rows = []
    for li in line_order:
        rows.append(",".join(str(rank[x]) for x in sorted(sys.lines[li], key=rank.get)))
    header = f"{sys.num_points};{sys.num_lines};"
    key = repr(out.best_key).encode()
    data = header.encode() + ";".join(rows).encode() + b"|" + key
    return CanonicalForm(tuple(point_order), tuple(line_order), data)


def are_isomorphic(a: IncidenceSystem, b: IncidenceSystem) -> bool:
    if a.num_points != b.num_points or a.num_lines != b.num_lines:
        return False
    if sorted(map(len, a.lines)) != sorted(map(len, b.lines)):
        return False
    return canonical_form(a).data == canonical_form(b).data


def automorphism_count(sys: IncidenceSystem) -> int:
    """Exact order of Aut(sys) (point permutations mapping lines onto lines)."""
    q, out = _analyse(sys)
    total = out.group_order
    for cls in q.classes:
        total *= math.factorial(len(cls))
    return total


def automorphism_generators(sys: IncidenceSystem, point_colors=None) -> list[tuple]:
    """Point permutations generating Aut(sys), or the subgroup preserving
    ``point_colors`` when given (twin transpositions included)."""
    q, out = _analyse(sys, None if point_colors is None else tuple(point_colors))
    nc = len(q.classes)
    gens = []
    for g in out.generators:
        perm = list(range(sys.num_points))
        for ci in range(nc):
            src, dst = q.classes[ci], q.classes[g[ci]]
            for a, b in zip(src, dst):
                perm[a] = b
        gens.append(tuple(perm))
    for cls in q.classes:
        for a, b in zip(cls, cls[1:]):
            perm = list(range(sys.num_points))
            perm[a], perm[b] = b, a
            gens.append(tuple(perm))
    return gens


def is_automorphism(sys: IncidenceSystem, perm) -> bool:
    lines = set(sys.lines)
    return all(tuple(sorted(perm[x] for x in line)) in lines for line in sys.lines)


def point_orbits(num_points: int, generators) -> list[list[int]]:
    parent = list(range(num_points))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in generators:
        for x in range(num_points):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    orbits: dict[int, list] = {}
    for x in range(num_points):
        orbits.setdefault(find(x), []).append(x)
    return sorted(orbits.values())


# --------------------------------------------------------------------------
# monomorphisms


def _falling(n, k):
    if k > n:
        return 0
    r = 1
    for i in range(k):
        r *= n - i
    return r


def count_monomorphisms(y: IncidenceSystem, x: IncidenceSystem, node_budget: int = 50_000_000) -> int:
    """``I(Y, X)``: injective point maps sending every line of Y onto the
    full trace ``L & f(P_Y)`` of some line ``L`` of X.

    Line-major backtracking: lines of Y are mapped first (injectively), then
    the points are counted class by class, a class being the Y-points with a
    given set of Y-lines through them.
    """
    k = y.num_lines
    if k == 0:
        return _falling(x.num_points, y.num_points)
    # order Y lines so that later lines meet earlier ones when possible
    remaining = list(range(k))
    ordering = [remaining.pop(0)]
    while remaining:
        nxt = max(remaining, key=lambda j: (sum(bool(y.line_sets[j] & y.line_sets[i]) for i in ordering), -j))
        remaining.remove(nxt)
        ordering.append(nxt)
    slot = {li: s for s, li in enumerate(ordering)}
    classes: dict[int, int] = {}
    for pt in range(y.num_points):
        m = 0
        for li in y.pencils[pt]:
            m |= 1 << slot[li]
        classes[m] = classes.get(m, 0) + 1
    class_items = sorted(classes.items())
    xmasks = x.line_masks
    all_points = (1 << x.num_points) - 1
    nodes = 0

    def feasible(assigned):
        s = len(assigned)
        prefix = (1 << s) - 1
        for m, need in class_items:
            mm = m & prefix
            if mm == 0:
                continue
            inter = all_points
            outside = 0
            for i in range(s):
                if mm >> i & 1:
                    inter &= assigned[i]
                else:
                    outside |= assigned[i]
            if (inter & ~outside).bit_count() < need:
                return False
        return True

    def leaf_count(assigned):
        total = 1
        union = 0
        for a in assigned:
            union |= a
        for m, need in class_items:
            if m == 0:
                avail = (all_points & ~union).bit_count()
            else:
                inter = all_points
                outside = 0
                for i in range(k):
                    if m >> i & 1:
                        inter &= assigned[i]
                    else:
                        outside |= assigned[i]
                avail = (inter & ~outside).bit_count()
            total *= _falling(avail, need)
            if not total:
                return 0
        return total

    def rec(assigned, used):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded("monomorphism search node budget exceeded", required=nodes)
        if len(assigned) == k:
            return leaf_count(assigned)
        total = 0
        for li, mask in enumerate(xmasks):
            if li in used:
                continue
            assigned.append(mask)
            if feasible(assigned):
                used.add(li)
                total += rec(assigned, used)
                used.discard(li)
            assigned.pop()
        return total

    return rec([], set())


def count_monomorphisms_pointwise(y: IncidenceSystem, x: IncidenceSystem, node_budget: int = 50_000_000) -> int:
    """Same count as :func:`count_monomorphisms`, mapping points one at a time.

    Once two points of a Y-line are placed its image line is fixed, so for
    patterns with many small lines the candidates collapse to a line (or a
    single meet point).  Points on no Y-line are counted at the end.
    """
    pair_line: dict[tuple[int, int], int] = {}
    for li, line in enumerate(x.lines):
        for a, b in combinations(line, 2):
            pair_line[(a, b)] = li
    xmasks = x.line_masks
    all_points = (1 << x.num_points) - 1
    isolated = [pt for pt in range(y.num_points) if not y.pencils[pt]]
    placed_order: list[int] = []
    remaining = [pt for pt in range(y.num_points) if y.pencils[pt]]
    while remaining:
        # next point: most Y-lines shared with already ordered points
        def score(pt):
            return (sum(1 for li in y.pencils[pt] if any(q in y.line_sets[li] for q in placed_order)), len(y.pencils[pt]), -pt)

        nxt = max(remaining, key=score)
        remaining.remove(nxt)
        placed_order.append(nxt)
    k = y.num_lines
    image_line = [-1] * k
    mapped_on = [[] for _ in range(k)]  # images of already-placed points of each Y-line
    nodes = 0

    def rec(depth, used, covered):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded("monomorphism search node budget exceeded", required=nodes)
        if depth == len(placed_order):
            free = (all_points & ~used & ~covered).bit_count()
            return _falling(free, len(isolated))
        pt = placed_order[depth]
        mine = y.pencils[pt]
        mine_set = set(mine)
        cand = all_points & ~used
        for li in mine:
            if image_line[li] >= 0:
                cand &= xmasks[image_line[li]]
        for li in range(k):
            if li not in mine_set and image_line[li] >= 0:
                cand &= ~xmasks[image_line[li]]
        total = 0
        used_lines = {image_line[li] for li in range(k) if image_line[li] >= 0}
        while cand:
            low = cand & -cand
            xp = low.bit_length() - 1
            cand ^= low
            newly = []
            ok = True
            for li in mine:
                if image_line[li] >= 0 or not mapped_on[li]:
                    continue
                u = mapped_on[li][0]
                L = pair_line.get((u, xp) if u < xp else (xp, u))
                if L is None or L in used_lines or any(L == nl for _, nl in newly):
                    ok = False
                    break
                # the new image line may hold no other placed image
                if (xmasks[L] & used) != (1 << u):
                    ok = False
                    break
                newly.append((li, L))
            if not ok:
                continue
            for li, L in newly:
                image_line[li] = L
            for li in mine:
                mapped_on[li].append(xp)
            add_cov = 0
            for _, L in newly:
                add_cov |= xmasks[L]
            total += rec(depth + 1, used | low, covered | add_cov)
            for li in mine:
                mapped_on[li].pop()
            for li, _ in newly:
                image_line[li] = -1
        return total

    return rec(0, 0, 0)


def _prefer_pointwise(y: IncidenceSystem) -> bool:
    """Point-major search suits patterns without interchangeable points and with several lines."""
    pens = [pen for pen in y.pencils if pen]
    return y.num_lines >= 4 and len(set(pens)) == len(pens)


def count_copies(y: IncidenceSystem, x: IncidenceSystem, node_budget: int = 50_000_000, method: str = "auto") -> int:
    """``i(Y, X) = I(Y, X) / #Aut(Y)``, checking the division is exact."""
    if method == "auto":
        method = "points" if _prefer_pointwise(y) else "lines"
    if method == "points":
        mono = count_monomorphisms_pointwise(y, x, node_budget)
    else:
        mono = count_monomorphisms(y, x, node_budget)
    aut = automorphism_count(y)
    q, r = divmod(mono, aut)
    if r:
        raise VerificationError(f"I(Y,X)={mono} not divisible by #Aut(Y)={aut}")
    return q


def count_copies_direct(y: IncidenceSystem, x: IncidenceSystem) -> int:
    """Debug oracle: enumerate point subsets of X and their line selections."""
    if y.num_points > 12:
        raise MalformedInput("direct copy enumeration is limited to 12-point patterns")
    target = canonical_form(y).data
    sizes = sorted(map(len, y.lines))
    total = 0
    for subset in combinations(range(x.num_points), y.num_points):
        sub = set(subset)
        index = {pt: i for i, pt in enumerate(subset)}
        traces = []
        for line in x.lines:
            t = sub.intersection(line)
            if len(t) >= 2:
                traces.append(tuple(sorted(index[pt] for pt in t)))
        for chosen in combinations(traces, y.num_lines):
            if sorted(map(len, chosen)) != sizes:
                continue
            cand = IncidenceSystem(y.num_points, chosen)
            if canonical_form(cand).data == target:
                total += 1
    return total


def brute_force_isomorphic(a: IncidenceSystem, b: IncidenceSystem) -> bool:
    """Exhaustive bijection search; only for tiny systems."""
    from itertools import permutations

    if a.num_points != b.num_points or a.num_lines != b.num_lines:
        return False
    target = set(b.lines)
    for perm in permutations(range(a.num_points)):
        if all(tuple(sorted(perm[x] for x in line)) in target for line in a.lines):
            return True
    return False


def brute_force_automorphisms(sys: IncidenceSystem) -> int:
    from itertools import permutations

    lines = set(sys.lines)
    return sum(
        1
        for perm in permutations(range(sys.num_points))
        if all(tuple(sorted(perm[x] for x in line)) in lines for line in sys.lines)
    )
