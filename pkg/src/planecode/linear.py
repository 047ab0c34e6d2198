"""Vectors and linear codes over a prime field F_p.

Words are numpy integer arrays with entries in ``0..p-1``; the residue
``a`` is identified with the integer ``a``, which fixes the index order of
weight types everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import MalformedInput
from .fields import is_prime
from .incidence import IncidenceSystem, Plane


def _check_prime(p):
    if not is_prime(p):
        raise MalformedInput(f"p={p} is not prime")


def fp_vector(coords, p: int) -> np.ndarray:
    """Coerce ``coords`` into a reduced residue vector."""
    _check_prime(p)
    return np.asarray(coords, dtype=np.int64) % p


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row-echelon form mod ``p``; pivot = first nonzero entry found scanning rows downward."""
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Row space of ``rows`` (kept in reduced echelon form)."""

    p: int
    length: int
    rows: np.ndarray
    pivots: tuple

    @classmethod
    def from_generators(cls, gens, p: int, length: int | None = None) -> "LinearCode":
        _check_prime(p)
        g = np.asarray(gens, dtype=np.int64)
        if g.ndim != 2:
            if length is None:
                raise MalformedInput("need a length for an empty generator list")
            g = g.reshape(0, length)
        red, piv = rref(g, p)
        return cls(p, g.shape[1], red, piv)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __eq__(self, other):
        if not isinstance(other, LinearCode):
            return NotImplemented
        return (
            self.p == other.p
            and self.length == other.length
            and self.pivots == other.pivots
            and np.array_equal(self.rows, other.rows)
        )

    def __hash__(self):
        return hash((self.p, self.length, self.pivots, self.rows.tobytes()))

    def __repr__(self):
        return f"LinearCode(p={self.p}, length={self.length}, dim={self.dim})"

    def encode(self, message) -> np.ndarray:
        return (np.asarray(message, dtype=np.int64) @ self.rows) % self.p

    def to_csv(self, source: str = "") -> str:
        head = f"# source={source} p={self.p} length={self.length} dim={self.dim}"
        body = [",".join(str(int(x)) for x in row) for row in self.rows]
        return "\n".join([head] + body) + "\n"

    def write_csv(self, path, source: str = "") -> None:
        Path(path).write_text(self.to_csv(source))


def code_from_system(sys: IncidenceSystem, p: int) -> LinearCode:
    """The F_p-span of the line indicator vectors."""
    return LinearCode.from_generators(sys.incidence_matrix(), p, sys.num_points)


def dual_code(c: LinearCode) -> LinearCode:
    p, v = c.p, c.length
    free = [j for j in range(v) if j not in set(c.pivots)]
    basis = np.zeros((len(free), v), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(c.pivots):
            basis[t, pc] = (-c.rows[i, f]) % p
    return LinearCode.from_generators(basis, p, v)


def span(*codes: LinearCode) -> LinearCode:
    p, v = codes[0].p, codes[0].length
    return LinearCode.from_generators(np.vstack([c.rows for c in codes]).reshape(-1, v), p, v)


def hull(c: LinearCode) -> LinearCode:
    """``C & C_perp`` computed as ``(C + C_perp)_perp``."""
    return dual_code(span(c, dual_code(c)))


def contains(c: LinearCode, w) -> bool:
    w = np.asarray(w, dtype=np.int64) % c.p
    if w.shape != (c.length,):
        raise MalformedInput(f"word length {w.shape} does not match code length {c.length}")
    if c.dim == 0:
        return not w.any()
    resid = (w - w[list(c.pivots)] @ c.rows) % c.p
    return not resid.any()


def is_subcode(a: LinearCode, b: LinearCode) -> bool:
    return all(contains(b, row) for row in a.rows)


def plane_membership(plane: Plane, p: int, w) -> bool:
    """Membership in C_p of a plane of order p via line sums: every
    ``<w, line>`` must equal ``<w, 1>``."""
    if plane.order != p:
        raise MalformedInput(f"plane order {plane.order} differs from p={p}")
    w = np.asarray(w, dtype=np.int64) % p
    sums = (plane.incidence.astype(np.int64) @ w) % p
    return bool(np.all(sums == w.sum() % p))


def type_of(w, p: int) -> tuple[int, ...]:
    """``(j_0, ..., j_{p-1})`` with ``j_a`` the number of coordinates equal to ``a``."""
    w = np.asarray(w, dtype=np.int64) % p
    return tuple(int(x) for x in np.bincount(w, minlength=p))


def weight_of(w) -> int:
    return int(np.count_nonzero(np.asarray(w)))


def types_of_rows(words: np.ndarray, p: int) -> np.ndarray:
    """Per-row residue counts, shape ``(n, p)``."""
    words = np.asarray(words)
    return np.stack([(words == a).sum(axis=1) for a in range(p)], axis=1)


def line_vector(line: Sequence[int], v: int) -> np.ndarray:
    w = np.zeros(v, dtype=np.int64)
    w[list(line)] = 1
    return w
