"""Arithmetic in F_q.

Elements are the integers 0..q-1.  Prime fields compute residues on the fly.
Extension fields (q = p^e, e > 1, q <= 16) encode the polynomial
c_0 + c_1 x + ... + c_{e-1} x^{e-1} as the integer sum c_i p^i and look
everything up in tables built from a fixed Conway polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .errors import DivisionByZero, NonPrimePower, UnsupportedOrder

MAX_PRIME = 2**16
MAX_EXTENSION = 16

# low-to-high coefficients of the Conway polynomial for each supported extension
CONWAY = {
    4: (2, (1, 1, 1)),  # x^2 + x + 1
    8: (2, (1, 1, 0, 1)),  # x^3 + x + 1
    9: (3, (2, 2, 1)),  # x^2 + 2x + 2
    16: (2, (1, 1, 0, 0, 1)),  # x^4 + x + 1
}


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p^e, or raise NonPrimePower."""
    if not isinstance(q, int) or q < 2:
        raise NonPrimePower(f"field order must be an integer >= 2, got {q!r}")
    p = None
    d = 2
    while d * d <= q:
        if q % d == 0:
            p = d
            break
        d += 1
    if p is None:
        return q, 1
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise NonPrimePower(f"{q} has at least two distinct prime divisors")
    return p, e


@dataclass(frozen=True)
class FieldSpec:
    q: int
    p: int
    e: int
    add_table: tuple | None = dc_field(default=None, repr=False, compare=False)
    mul_table: tuple | None = dc_field(default=None, repr=False, compare=False)
    neg_table: tuple | None = dc_field(default=None, repr=False, compare=False)
    inv_table: tuple | None = dc_field(default=None, repr=False, compare=False)

    @property
    def is_prime(self) -> bool:
        return self.e == 1

    def elements(self) -> range:
        return range(self.q)

    def add(self, x: int, y: int) -> int:
        if self.e == 1:
            return (x + y) % self.p
        return self.add_table[x][y]

    def neg(self, x: int) -> int:
        if self.e == 1:
            return -x % self.p
        return self.neg_table[x]

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.e == 1:
            return x * y % self.p
        return self.mul_table[x][y]

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZero("inverse of 0")
        if self.e == 1:
            return pow(x, -1, self.p)
        return self.inv_table[x]

    # row kernels used by the linear algebra

    def scale(self, row, c: int) -> list[int]:
        if self.e == 1:
            p = self.p
            return [c * x % p for x in row]
        mt = self.mul_table[c]
        return [mt[x] for x in row]

    def axpy(self, row, c: int, other) -> list[int]:
        """row - c * other, elementwise."""
        if self.e == 1:
            p = self.p
            return [(x - c * y) % p for x, y in zip(row, other)]
        at, nm = self.add_table, self.mul_table[self.neg_table[c]]
        return [at[x][nm[y]] for x, y in zip(row, other)]

    def lincomb(self, coeffs, rows, width: int) -> list[int]:
        out = [0] * width
        for c, row in zip(coeffs, rows):
            if c:
                out = self.axpy(out, self.neg(c), row)
        return out


def _poly_tables(p: int, e: int, modulus: tuple[int, ...]):
    q = p**e

    def digits(x):
        out = []
        for _ in range(e):
            x, r = divmod(x, p)
            out.append(r)
        return out

    def encode(ds):
        return sum(c * p**i for i, c in enumerate(ds))

    def polymul(a, b):
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus from the top degree down
        for deg in range(2 * e - 2, e - 1, -1):
            c = prod[deg]
            if c:
                for i, m in enumerate(modulus):
                    prod[deg - e + i] = (prod[deg - e + i] - c * m) % p
        return prod[:e]

    ds = [digits(x) for x in range(q)]
    add = tuple(
        tuple(encode([(a + b) % p for a, b in zip(ds[x], ds[y])]) for y in range(q))
        for x in range(q)
    )
    mul = tuple(tuple(encode(polymul(ds[x], ds[y])) for y in range(q)) for x in range(q))
    neg = tuple(encode([-a % p for a in ds[x]]) for x in range(q))
    inv = [0] * q
    for x in range(1, q):
        hits = [y for y in range(1, q) if mul[x][y] == 1]
        if len(hits) != 1:
            raise AssertionError(f"tables for q={q} do not form a field")
        inv[x] = hits[0]
    return add, mul, neg, tuple(inv)


def check_axioms(spec: FieldSpec) -> bool:
    """Exhaustive field-axiom check (intended for q <= 16)."""
    els = spec.elements()
    for x in els:
        if spec.add(x, 0) != x or spec.mul(x, 1) != x or spec.add(x, spec.neg(x)) != 0:
            return False
        if x and spec.mul(x, spec.inv(x)) != 1:
            return False
        for y in els:
            if spec.add(x, y) != spec.add(y, x) or spec.mul(x, y) != spec.mul(y, x):
                return False
            for z in els:
                if spec.add(spec.add(x, y), z) != spec.add(x, spec.add(y, z)):
                    return False
                if spec.mul(spec.mul(x, y), z) != spec.mul(x, spec.mul(y, z)):
                    return False
                if spec.mul(x, spec.add(y, z)) != spec.add(spec.mul(x, y), spec.mul(x, z)):
                    return False
    return True


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    p, e = prime_power(q)
    if e == 1:
        if q > MAX_PRIME:
            raise UnsupportedOrder(f"prime fields are supported up to 2^16, got {q}")
        return FieldSpec(q, p, 1)
    if q > MAX_EXTENSION or q not in CONWAY:
        raise UnsupportedOrder(f"extension fields are supported up to order 16, got {q}")
    _, modulus = CONWAY[q]
    add, mul, neg, inv = _poly_tables(p, e, modulus)
    spec = FieldSpec(q, p, e, add, mul, neg, inv)
    assert check_axioms(spec)
    return spec


def field_arith(spec: FieldSpec, op: str, x: int, y: int | None = None) -> int:
    for v in (x, y):
        if v is not None and not 0 <= v < spec.q:
            raise ValueError(f"{v} is not an element of F_{spec.q}")
    if op == "add":
        return spec.add(x, y)
    if op == "mul":
        return spec.mul(x, y)
    if op == "neg":
        return spec.neg(x)
    if op == "inv":
        return spec.inv(x)
    raise ValueError(f"unknown field operation {op!r}")
