"""Constructors for planes, configurations and small test patterns."""

from __future__ import annotations

from itertools import combinations, product

from .errors import BudgetExceeded, MalformedInput
from .fields import finite_field, near_field9
from .incidence import IncidenceSystem, Plane, build_plane


def _normalized_points(fld):
    """Homogeneous triples over GF(q) whose leftmost nonzero coordinate is 1, in lex order."""
    pts = []
    for t in product(range(fld.q), repeat=3):
        nz = next((c for c in t if c), None)
        if nz == 1:
            pts.append(t)
    return pts


def pg2_system(q: int) -> IncidenceSystem:
    fld = finite_field(q)
    pts = _normalized_points(fld)
    add, mul = fld.add, fld.mul
    lines = []
    for a, b, c in pts:  # dual coordinates use the same normalization
        line = [
            i
            for i, (x, y, z) in enumerate(pts)
            if add[add[mul[a, x], mul[b, y]], mul[c, z]] == 0
        ]
        lines.append(line)
    return IncidenceSystem(len(pts), lines)


def build_pg2(q: int) -> Plane:
    """PG(2, q) over GF(q), q in {2,3,4,5,7,8,9,11}."""
    return build_plane(pg2_system(q))


def hall9_system() -> IncidenceSystem:
    nf = near_field9()
    add = nf.base.add
    mul = nf.mul

    def pid(x, y):
        return 9 * x + y

    ideal = {m: 81 + m for m in range(9)}  # slope classes
    vertical = 90
    lines = []
    for m in range(9):
        for b in range(9):
            line = [pid(x, int(add[mul[x, m], b])) for x in range(9)]
            lines.append(line + [ideal[m]])
    for c in range(9):
        lines.append([pid(c, y) for y in range(9)] + [vertical])
    lines.append(list(ideal.values()) + [vertical])
    return IncidenceSystem(91, lines)


def build_hall9() -> Plane:
    """Projective completion of the translation plane over the order-9 near-field."""
    return build_plane(hall9_system())


def free_plane_stage(n: int, point_budget: int = 100_000) -> IncidenceSystem:
    """Stage ``X_n`` of the free-plane completion of the 4-cycle.

    Old points and lines keep their indices; each step appends the new
    points first (one per pair of lines with no common point) and then the
    new two-point lines (one per pair of points on no common line).
    """
    if n < 1:
        raise MalformedInput("stage index must be >= 1")
    num_points = 4
    lines = [{0, 1}, {1, 2}, {2, 3}, {0, 3}]
    for _ in range(n - 1):
        covered = set()
        for line in lines:
            covered.update(combinations(sorted(line), 2))
        new_points = [
            (i, j)
            for i, j in combinations(range(len(lines)), 2)
            if not (lines[i] & lines[j])
        ]
        new_lines = [pair for pair in combinations(range(num_points), 2) if pair not in covered]
        if num_points + len(new_points) > point_budget:
            raise BudgetExceeded(
                f"free plane stage needs {num_points + len(new_points)} points, budget {point_budget}",
                required=num_points + len(new_points),
            )
        lines = [set(line) for line in lines]
        for k, (i, j) in enumerate(new_points):
            x = num_points + k
            lines[i].add(x)
            lines[j].add(x)
        lines.extend(set(pair) for pair in new_lines)
        num_points += len(new_points)
    return IncidenceSystem(num_points, lines)


def free_plane_counts(n_max: int, point_budget: int = 100_000) -> list[int]:
    return [free_plane_stage(n, point_budget).num_points for n in range(1, n_max + 1)]


def is_subsystem(small: IncidenceSystem, big: IncidenceSystem) -> bool:
    """Points ``0..v_small-1`` of ``big`` carry ``small``: each small line is a trace of a big line."""
    if small.num_points > big.num_points:
        return False
    keep = set(range(small.num_points))
    traces = {tuple(sorted(keep.intersection(line))) for line in big.lines}
    return all(line in traces for line in small.lines)


def pappus_config(flag=None) -> IncidenceSystem:
    """Delete a flag ``(x, l)`` from PG(2,3): points off ``l``, lines not through ``x``."""
    pg3 = pg2_system(3)
    if flag is None:
        line_idx = 0
        x = pg3.lines[0][0]
    else:
        x, line_idx = flag
    ell = set(pg3.lines[line_idx])
    if x not in ell:
        raise MalformedInput(f"({x}, {line_idx}) is not a flag")
    keep = [y for y in range(pg3.num_points) if y not in ell]
    index = {y: i for i, y in enumerate(keep)}
    lines = [[index[y] for y in line if y in index] for line in pg3.lines if x not in line]
    return IncidenceSystem(len(keep), lines)


def build_pappus_config() -> IncidenceSystem:
    return pappus_config()


def build_desargues_config() -> IncidenceSystem:
    """Points and lines indexed by 2-subsets of a 5-set; incidence is disjointness."""
    verts = list(combinations(range(5), 2))
    lines = [[j for j, y in enumerate(verts) if not set(x) & set(y)] for x in verts]
    return IncidenceSystem(len(verts), lines)


def build_pattern(name: str, *, size: int | None = None, p: int | None = None, k: int | None = None) -> IncidenceSystem:
    """Small inputs for inclusion-number experiments.

    ``single_line`` (``size`` points, one line), ``two_full_lines`` (two
    lines of ``p+1`` points through point 0 in a ``p^2+p+1`` point set),
    ``triangle`` and ``k_lines`` (``k`` lines of size ``p+1`` in general
    position on ``p^2+p+1`` points).
    """
    name = name.lower().replace("-", "_")
    if name == "triangle":
        return IncidenceSystem(3, [(0, 1), (1, 2), (0, 2)])
    if name == "single_line":
        if size is None or size < 1:
            raise MalformedInput("single_line needs size >= 1")
        return IncidenceSystem(size, [range(size)])
    if name == "two_full_lines":
        if p is None:
            raise MalformedInput("two_full_lines needs p")
        v = p * p + p + 1
        return IncidenceSystem(v, [range(0, p + 1), [0] + list(range(p + 1, 2 * p + 1))])
    if name == "k_lines":
        if p is None or k is None:
            raise MalformedInput("k_lines needs k and p")
        return _k_lines_generic(k, p)
    raise MalformedInput(f"unknown pattern {name!r}")


def _k_lines_generic(k: int, p: int) -> IncidenceSystem:
    v = p * p + p + 1
    if k - 1 > p + 1:
        raise MalformedInput("too many lines for lines of size p+1")
    lines = [[] for _ in range(k)]
    nxt = 0
    for i, j in combinations(range(k), 2):
        lines[i].append(nxt)
        lines[j].append(nxt)
        nxt += 1
    for line in lines:
        while len(line) < p + 1:
            line.append(nxt)
            nxt += 1
    if nxt > v:
        raise MalformedInput(f"{k} generic lines need {nxt} > {v} points")
    return IncidenceSystem(v, lines)
