"""Arithmetic in GF(q) for small prime powers q.

Elements are integer codes in [0, q). The base-p digits of a code, least
significant first, are the coefficients of a polynomial over GF(p) reduced
modulo a fixed monic irreducible ``modulus``. For prime q this is plain
arithmetic mod p.

The modulus is the lexicographically smallest monic irreducible polynomial
(coefficient lists compared low-to-high) and ``alpha`` is the smallest code
of multiplicative order q - 1, so every q maps to one reproducible field.
"""

from __future__ import annotations

import functools
import itertools
import math

from geobatch.errors import DivisionByZero, IndexOutOfRange, NotPrimePower

# add/neg tables are cheap up to this size; beyond it addition goes digit-wise
_ADD_TABLE_MAX_Q = 256


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, deg) with q = p**deg, or raise NotPrimePower."""
    if not isinstance(q, int) or q < 2:
        raise NotPrimePower(f"{q!r} is not a prime power")
    p = next(d for d in itertools.count(2) if q % d == 0 or d * d > q)
    if q % p:
        p = q  # q itself is prime
    deg = 0
    rest = q
    while rest % p == 0:
        rest //= p
        deg += 1
    if rest != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, deg


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except NotPrimePower:
        return False
    return True


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a modulo monic b over GF(p); lists are low-to-high."""
    a = list(a)
    db = len(b) - 1
    for shift in range(len(a) - 1 - db, -1, -1):
        c = a[shift + db]
        if c:
            for t in range(db + 1):
                a[shift + t] = (a[shift + t] - c * b[t]) % p
    return a[:db] if db else []


def _is_irreducible(poly: list[int], p: int) -> bool:
    # trial division by every monic polynomial of degree 1..deg//2
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_poly_rem(poly, divisor, p)):
                return False
    return True


def smallest_irreducible(p: int, deg: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``deg`` over GF(p)."""
    if deg == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=deg):
        poly = list(low) + [1]
        if poly[0] and _is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class Field:
    """The finite field GF(q), immutable once built.

    Use :func:`field_new` (cached) rather than the constructor.
    """

    def __init__(self, q: int):
        p, deg = prime_power(q)
        self.q = q
        self.p = p
        self.deg = deg
        self.modulus = smallest_irreducible(p, deg)

        if q <= _ADD_TABLE_MAX_Q:
            self._add = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
            self._neg = [self._neg_digits(a) for a in range(q)]
        else:
            self._add = None
            self._neg = None

        self.alpha = next(a for a in range(1, q) if self._order_slow(a) == q - 1)

        # log/antilog tables with respect to alpha; exp is doubled to skip a mod
        self._exp = [0] * (2 * (q - 1))
        self._log = [0] * q
        x = 1
        for e in range(q - 1):
            self._exp[e] = x
            self._exp[e + q - 1] = x
            self._log[x] = e
            x = self._mul_poly(x, self.alpha)

    def __repr__(self) -> str:
        return f"Field(q={self.q}, p={self.p}, deg={self.deg}, alpha={self.alpha})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("Field", self.q))

    def __reduce__(self):
        return (field_new, (self.q,))

    # -- code <-> digits --------------------------------------------------

    def digits(self, a: int) -> list[int]:
        """Polynomial coefficients of element ``a``, low-to-high, length deg."""
        out = []
        for _ in range(self.deg):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def from_digits(self, digits) -> int:
        code = 0
        for d in reversed(list(digits)):
            code = code * self.p + d % self.p
        return code

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        if self.deg == 1:
            return (a + b) % p
        return self.from_digits((x + y) % p for x, y in zip(self.digits(a), self.digits(b)))

    def _neg_digits(self, a: int) -> int:
        if self.deg == 1:
            return (-a) % self.p
        return self.from_digits((-x) % self.p for x in self.digits(a))

    def _mul_poly(self, a: int, b: int) -> int:
        if self.deg == 1:
            return a * b % self.p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.deg - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.from_digits(_poly_rem(prod, list(self.modulus), self.p))

    def _order_slow(self, a: int) -> int:
        x, e = a, 1
        while x != 1:
            x = self._mul_poly(x, a)
            e += 1
        return e

    def _check(self, a: int) -> None:
        if not 0 <= a < self.q:
            raise IndexOutOfRange(f"element code {a} outside [0, {self.q})")

    # -- arithmetic -------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        self._check(a)
        self._check(b)
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self._neg is not None:
            return self._neg[a]
        self._check(a)
        return self._neg_digits(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        self._check(a)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("0 has no multiplicative inverse")
            return 1 if e == 0 else 0
        self._check(a)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def element_order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise DivisionByZero("0 has no multiplicative order")
        self._check(a)
        n = self.q - 1
        return n // math.gcd(self._log[a], n)

    def alpha_pow(self, e: int) -> int:
        """alpha**e for any integer e."""
        return self._exp[e % (self.q - 1)]

    def elements(self) -> range:
        return range(self.q)


@functools.lru_cache(maxsize=None)
def field_new(q: int) -> Field:
    """Build (or fetch the cached) GF(q)."""
    return Field(q)
