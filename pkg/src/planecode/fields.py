"""Small finite fields by lookup table, and the regular near-field of order 9.

Elements of GF(p^e) are encoded as integers ``0..q-1`` whose base-``p``
digits are the polynomial coefficients (constant term first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import MalformedInput, VerificationError

# Conway-style moduli, low degree first; the leading coefficient 1 is implied.
MODULI = {
    (2, 1): (0,),
    (3, 1): (0,),
    (5, 1): (0,),
    (7, 1): (0,),
    (11, 1): (0,),
    (2, 2): (1, 1),        # t^2 + t + 1
    (2, 3): (1, 1, 0),     # t^3 + t + 1
    (3, 2): (1, 0),        # t^2 + 1
}

SUPPORTED_ORDERS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2), 11: (11, 1)}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _to_digits(a, p, e):
    return [(a // p**i) % p for i in range(e)]


def _from_digits(ds, p):
    return sum(d * p**i for i, d in enumerate(ds))


@dataclass(frozen=True, eq=False)
class FiniteField:
    p: int
    e: int
    modulus: tuple
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def elements(self) -> range:
        return range(self.q)

    def power(self, a: int, k: int) -> int:
        r = 1
        for _ in range(k):
            r = int(self.mul[r, a])
        return r


def _poly_mulmod(a, b, p, modulus):
    e = len(modulus)
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    # reduce using t^e = -(modulus)
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for i, m in enumerate(modulus):
                prod[k - e + i] = (prod[k - e + i] - c * m) % p
    return prod[:e]


def finite_field(q: int) -> FiniteField:
    """GF(q) for q in {2,3,4,5,7,8,9,11}, with verified tables."""
    if q not in SUPPORTED_ORDERS:
        raise MalformedInput(f"unsupported field order {q}; supported: {sorted(SUPPORTED_ORDERS)}")
    p, e = SUPPORTED_ORDERS[q]
    modulus = MODULI[(p, e)]
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    digits = [_to_digits(a, p, e) for a in range(q)]
    for a in range(q):
        for b in range(q):
            add[a, b] = _from_digits([(x + y) % p for x, y in zip(digits[a], digits[b])], p)
            if e == 1:
                mul[a, b] = (a * b) % p
            else:
                mul[a, b] = _from_digits(_poly_mulmod(digits[a], digits[b], p, modulus), p)
    neg = np.array([int(np.where(add[a] == 0)[0][0]) for a in range(q)])
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        hits = np.where(mul[a] == 1)[0]
        if len(hits) != 1:
            raise VerificationError(f"GF({q}): element {a} has no unique inverse")
        inv[a] = hits[0]
    fld = FiniteField(p, e, modulus, add, mul, neg, inv)
    _check_field_axioms(fld)
    return fld


def _check_field_axioms(f: FiniteField) -> None:
    a = np.arange(f.q)
    add, mul = f.add, f.mul
    if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
        raise VerificationError("field tables not commutative")
    if not (np.array_equal(add[0], a) and np.array_equal(mul[1], a)):
        raise VerificationError("field identities wrong")
    # associativity and distributivity over all triples (q <= 11 here)
    if not np.array_equal(add[add[:, :, None], a[None, None, :]], add[a[:, None, None], add[None, :, :]]):
        raise VerificationError("addition not associative")
    if not np.array_equal(mul[mul[:, :, None], a[None, None, :]], mul[a[:, None, None], mul[None, :, :]]):
        raise VerificationError("multiplication not associative")
    lhs = mul[a[:, None, None], add[None, :, :]]
    rhs = add[mul[:, :, None], mul[:, None, :]]
    if not np.array_equal(lhs, rhs):
        raise VerificationError("distributivity fails")


# --------------------------------------------------------------------------
# near-field of order 9


@dataclass(frozen=True, eq=False)
class NearField9:
    """GF(9) with multiplication ``a o b = a*b`` if ``b`` is a square (or 0), else ``a^3 * b``.

    Right distributive and associative but not left distributive.
    """

    base: FiniteField = field(repr=False)
    mul: np.ndarray = field(repr=False)
    left_distributivity_witness: tuple = ()

    def add(self, a, b):
        return int(self.base.add[a, b])

    def op(self, a, b):
        return int(self.mul[a, b])


def near_field9() -> NearField9:
    gf = finite_field(9)
    squares = {int(gf.mul[x, x]) for x in range(1, 9)}
    mul = np.zeros((9, 9), dtype=np.int64)
    for a, b in product(range(9), repeat=2):
        if b == 0 or b in squares:
            mul[a, b] = gf.mul[a, b]
        else:
            mul[a, b] = gf.mul[gf.power(a, 3), b]
    add = gf.add
    witness = None
    for a, b, c in product(range(9), repeat=3):
        if mul[mul[a, b], c] != mul[a, mul[b, c]]:
            raise VerificationError(f"near-field not associative at {(a, b, c)}")
        if mul[add[a, b], c] != add[mul[a, c], mul[b, c]]:
            raise VerificationError(f"near-field not right distributive at {(a, b, c)}")
        if witness is None and mul[a, add[b, c]] != add[mul[a, b], mul[a, c]]:
            witness = (a, b, c)
    if witness is None:
        raise VerificationError("near-field multiplication is left distributive; expected a proper near-field")
    for a in range(1, 9):
        if sorted(mul[a, 1:]) != list(range(1, 9)):
            raise VerificationError("near-field nonzero elements do not form a quasigroup")
    return NearField9(gf, mul, witness)
