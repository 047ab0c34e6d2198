"""Incidence systems, validation predicates, duality and projective planes.

Points are dense integer indices ``0..v-1``.  Lines are stored as sorted
tuples and the line list itself is kept in lexicographic order, so two
equal systems compare equal field by field.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import MalformedInput, NotAPlane

INC_MAGIC = "planecode v1"


@dataclass(frozen=True)
class IncidenceSystem:
    """A finite incidence system ``(P, L)`` with ``P = {0, ..., num_points-1}``."""

    num_points: int
    lines: tuple[tuple[int, ...], ...]

    def __init__(self, num_points: int, lines: Iterable[Iterable[int]]):
        if num_points < 0:
            raise MalformedInput("num_points must be non-negative")
        normalized = []
        for line in lines:
            pts = tuple(sorted(int(x) for x in line))
            if len(set(pts)) != len(pts):
                raise MalformedInput(f"line {pts} repeats a point")
            if pts and (pts[0] < 0 or pts[-1] >= num_points):
                raise MalformedInput(f"line {pts} has a point outside [0, {num_points})")
            normalized.append(pts)
        normalized.sort()
        for a, b in zip(normalized, normalized[1:]):
            if a == b:
                raise MalformedInput(f"repeated line {a}")
        object.__setattr__(self, "num_points", int(num_points))
        object.__setattr__(self, "lines", tuple(normalized))

    @property
    def num_lines(self) -> int:
        return len(self.lines)

    @cached_property
    def line_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(line) for line in self.lines)

    @cached_property
    def line_masks(self) -> tuple[int, ...]:
        """Each line as a Python int bitmask over the points."""
        masks = []
        for line in self.lines:
            m = 0
            for x in line:
                m |= 1 << x
            masks.append(m)
        return tuple(masks)

    @cached_property
    def pencils(self) -> tuple[tuple[int, ...], ...]:
        """For each point, the ascending indices of the lines through it."""
        through: list[list[int]] = [[] for _ in range(self.num_points)]
        for i, line in enumerate(self.lines):
            for x in line:
                through[x].append(i)
        return tuple(tuple(t) for t in through)

    def incidence_matrix(self) -> np.ndarray:
        """Line-by-point 0/1 matrix (rows are line indicators)."""
        n = np.zeros((self.num_lines, self.num_points), dtype=np.uint8)
        for i, line in enumerate(self.lines):
            n[i, list(line)] = 1
        return n

    def relabel(self, point_perm: Sequence[int]) -> "IncidenceSystem":
        """Image of the system under ``x -> point_perm[x]``."""
        return IncidenceSystem(self.num_points, ([point_perm[x] for x in line] for line in self.lines))

    def to_inc(self) -> str:
        out = [INC_MAGIC, f"points {self.num_points}", f"lines {self.num_lines}"]
        out.extend(" ".join(str(x) for x in line) for line in self.lines)
        return "\n".join(out) + "\n"

    @cached_property
    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_inc().encode()).hexdigest()[:16]

    def __repr__(self) -> str:
        return f"IncidenceSystem(v={self.num_points}, b={self.num_lines})"


def parse_inc(text: str) -> IncidenceSystem:
    """Parse the ``.inc`` text format; rejects out-of-range or unsorted lines."""
    rows = [r.strip() for r in text.splitlines()]
    rows = [r for r in rows if r and not r.startswith("#")]
    if len(rows) < 3 or rows[0] != INC_MAGIC:
        raise MalformedInput(f"missing '{INC_MAGIC}' header")
    try:
        key, v = rows[1].split()
        key2, b = rows[2].split()
        v, b = int(v), int(b)
    except ValueError as exc:
        raise MalformedInput("bad points/lines header") from exc
    if key != "points" or key2 != "lines":
        raise MalformedInput("expected 'points <v>' and 'lines <b>'")
    body = rows[3:]
    if len(body) != b:
        raise MalformedInput(f"declared {b} lines, found {len(body)}")
    lines = []
    for r in body:
        try:
            pts = [int(t) for t in r.split()]
        except ValueError as exc:
            raise MalformedInput(f"non-integer entry in line '{r}'") from exc
        if any(a >= c for a, c in zip(pts, pts[1:])):
            raise MalformedInput(f"line '{r}' is not strictly ascending")
        if any(x < 0 or x >= v for x in pts):
            raise MalformedInput(f"line '{r}' has an out-of-range point")
        lines.append(pts)
    return IncidenceSystem(v, lines)


def read_inc(path) -> IncidenceSystem:
    return parse_inc(Path(path).read_text())


def write_inc(sys: IncidenceSystem, path) -> None:
    Path(path).write_text(sys.to_inc())


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a structural check.

    ``verdict`` is one of ``"PartialLinearSpace"``, ``"LinearSpace"``,
    ``"ProjectivePlane"``, ``"PAdmissible"`` or ``"Invalid"``; ``parameter``
    carries the order ``n`` or prime ``p`` where relevant.
    """

    verdict: str
    parameter: Optional[int] = None
    reason: str = ""
    witness: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.verdict != "Invalid"

    def __str__(self) -> str:
        s = self.verdict if self.parameter is None else f"{self.verdict}({self.parameter})"
        if self.reason:
            s += f": {self.reason}"
        if self.witness is not None:
            s += f" witness={self.witness}"
        return s


def _pair_owner(sys: IncidenceSystem):
    """Map each covered point pair to the line covering it, or report a repeat."""
    owner: dict[tuple[int, int], int] = {}
    for i, line in enumerate(sys.lines):
        for pair in combinations(line, 2):
            j = owner.get(pair)
            if j is not None:
                return None, (pair, j, i)
            owner[pair] = i
    return owner, None


def validate_partial_linear(sys: IncidenceSystem) -> ValidationReport:
    for i, line in enumerate(sys.lines):
        if len(line) < 2:
            return ValidationReport("Invalid", reason="line with fewer than two points", witness=("line", i))
    owner, clash = _pair_owner(sys)
    if clash is not None:
        pair, _, _ = clash
        return ValidationReport("Invalid", reason="point pair on two lines", witness=("pair",) + pair)
    v = sys.num_points
    if len(owner) == v * (v - 1) // 2:
        return ValidationReport("LinearSpace")
    return ValidationReport("PartialLinearSpace")


def is_linear_space(sys: IncidenceSystem) -> bool:
    return validate_partial_linear(sys).verdict == "LinearSpace"


def dual(sys: IncidenceSystem) -> IncidenceSystem:
    """Swap the roles of points and lines.

    Dual point ``i`` is line ``i`` of ``sys``; dual line ``x`` is the pencil
    of point ``x``.  Systems with no lines, with a point on no line, or with
    two points sharing the same pencil are rejected.
    """
    if sys.num_lines == 0:
        raise MalformedInput("dual of a system without lines")
    pencils = sys.pencils
    for x, pen in enumerate(pencils):
        if not pen:
            raise MalformedInput(f"point {x} lies on no line; dual undefined")
    if len(set(pencils)) != len(pencils):
        raise MalformedInput("two points have identical pencils; dual would repeat a line")
    return IncidenceSystem(sys.num_lines, pencils)


def classify(sys: IncidenceSystem) -> ValidationReport:
    """Report whether ``sys`` is a projective plane (with its order).

    Falls back to ``LinearSpace`` / ``PartialLinearSpace`` / ``Invalid``.
    """
    base = validate_partial_linear(sys)
    if base.verdict != "LinearSpace":
        return base
    if sys.num_lines < 2:
        return base
    n = sys.incidence_matrix().astype(np.int32)
    meets = n @ n.T
    np.fill_diagonal(meets, 1)
    if not np.all(meets == 1):
        i, j = map(int, np.argwhere(meets != 1)[0])
        return ValidationReport("LinearSpace", reason="two lines without a unique common point", witness=("lines", i, j))
    if any(len(p) < 2 for p in sys.pencils):
        x = next(i for i, p in enumerate(sys.pencils) if len(p) < 2)
        return ValidationReport("LinearSpace", reason="point on fewer than two lines", witness=("point", x))
    # axiom (iii): some point avoids both lines of every pair
    cover = n[:, None, :] | n[None, :, :]
    full = cover.min(axis=2).astype(bool)
    np.fill_diagonal(full, False)
    if full.any():
        i, j = map(int, np.argwhere(full)[0])
        return ValidationReport("LinearSpace", reason="two lines cover every point", witness=("lines", i, j))
    order = len(sys.lines[0]) - 1
    return ValidationReport("ProjectivePlane", parameter=order)


def is_p_admissible(sys: IncidenceSystem, p: int) -> bool:
    """``p^2+p+1`` points, lines of size ``p+1``, distinct lines meet exactly once."""
    if sys.num_points != p * p + p + 1:
        return False
    if any(len(line) != p + 1 for line in sys.lines):
        return False
    masks = sys.line_masks
    for a, b in combinations(masks, 2):
        if (a & b).bit_count() != 1:
            return False
    return True


def admissibility_report(sys: IncidenceSystem, p: int) -> ValidationReport:
    if is_p_admissible(sys, p):
        return ValidationReport("PAdmissible", parameter=p)
    return ValidationReport("Invalid", reason=f"not {p}-admissible")


# --------------------------------------------------------------------------
# planes


@dataclass(frozen=True, eq=False)
class Plane:
    """A validated finite projective plane with meet/join lookup tables.

    ``meet[i, j]`` is the common point of lines ``i != j`` and ``join[x, y]``
    the line through points ``x != y``; diagonals hold ``-1``.
    """

    system: IncidenceSystem
    order: int
    lines_through: tuple[tuple[int, ...], ...]
    meet: np.ndarray = field(repr=False)
    join: np.ndarray = field(repr=False)
    incidence: np.ndarray = field(repr=False)

    @property
    def num_points(self) -> int:
        return self.system.num_points

    @property
    def lines(self):
        return self.system.lines

    def __repr__(self) -> str:
        return f"Plane(order={self.order}, v={self.num_points})"


def build_plane(sys: IncidenceSystem) -> Plane:
    report = classify(sys)
    if report.verdict != "ProjectivePlane":
        raise NotAPlane(report)
    v = sys.num_points
    inc = sys.incidence_matrix().astype(bool)
    join = np.full((v, v), -1, dtype=np.int32)
    for i, line in enumerate(sys.lines):
        idx = np.array(line)
        join[np.ix_(idx, idx)] = i
    np.fill_diagonal(join, -1)
    meet = np.full((v, v), -1, dtype=np.int32)
    for x, pen in enumerate(sys.pencils):
        idx = np.array(pen)
        meet[np.ix_(idx, idx)] = x
    np.fill_diagonal(meet, -1)
    return Plane(
        system=sys,
        order=report.parameter,
        lines_through=sys.pencils,
        meet=meet,
        join=join,
        incidence=inc,
    )
