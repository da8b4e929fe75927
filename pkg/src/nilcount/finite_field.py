"""Exact arithmetic in F_q for prime powers q <= 2**16.

Elements are plain ints in ``range(q)``.  For q = p**k the element with
index ``c_0 + c_1 p + ... + c_{k-1} p**(k-1)`` is the residue class of
``c_0 + c_1 x + ... + c_{k-1} x**(k-1)`` modulo a fixed irreducible
polynomial: the lexicographically least monic irreducible of degree k,
where the lower coefficients are compared as the integer they encode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DivisionByZero, NotAPrimePower, TooLarge

MAX_ORDER = 2**16
# dense q x q numpy tables are only built up to this order
_DENSE_TABLE_LIMIT = 1024


def prime_power_decomposition(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``, or raise :class:`NotAPrimePower`."""
    if q < 2:
        raise NotAPrimePower(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotAPrimePower(f"q={q} has at least two distinct prime factors")
    return p, k


def check_prime_power(q: int) -> int:
    prime_power_decomposition(q)
    return q


def _digits(a: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _undigits(ds, p: int) -> int:
    value = 0
    for c in reversed(ds):
        value = value * p + c
    return value


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    # den monic, coefficient lists lowest degree first
    num = list(num)
    dd = len(den) - 1
    for shift in range(len(num) - 1 - dd, -1, -1):
        c = num[shift + dd] % p
        if c:
            for i, d in enumerate(den):
                num[shift + i] = (num[shift + i] - c * d) % p
    return [c % p for c in num[:dd]] if dd > 0 else []


def _is_irreducible(poly: list[int], p: int) -> bool:
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for low in range(p**d):
            divisor = _digits(low, p, d) + [1]
            if not any(_poly_mod(poly, divisor, p)):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Coefficients (lowest first, leading 1 included) of the least monic irreducible."""
    for low in range(p**k):
        poly = _digits(low, p, k) + [1]
        if _is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("every degree has an irreducible polynomial")


@dataclass(frozen=True)
class FieldCtx:
    """The finite field F_q, immutable after construction."""

    q: int
    p: int
    k: int
    modulus: tuple[int, ...]
    _exp: tuple[int, ...] | None = field(default=None, repr=False, compare=False)
    _log: tuple[int, ...] | None = field(default=None, repr=False, compare=False)

    @property
    def is_prime(self) -> bool:
        return self.k == 1

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.q
        if self.p == 2:
            return a ^ b
        p, k = self.p, self.k
        return _undigits([(x + y) % p for x, y in zip(_digits(a, p, k), _digits(b, p, k))], p)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.q
        if self.p == 2:
            return a
        p, k = self.p, self.k
        return _undigits([-x % p for x in _digits(a, p, k)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.q
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        if self.k == 1:
            return pow(a, self.q - 2, self.q)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.q)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[self._log[a] * e % (self.q - 1)]

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense ``(add, mul)`` tables as q x q numpy arrays, for batched kernels."""
        return _dense_tables(self)


@lru_cache(maxsize=None)
def _dense_tables(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    if ctx.q > _DENSE_TABLE_LIMIT:
        raise TooLarge(f"dense tables are capped at q <= {_DENSE_TABLE_LIMIT}")
    q = ctx.q
    add = np.array([[ctx.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    mul = np.array([[ctx.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    add.setflags(write=False)
    mul.setflags(write=False)
    return add, mul


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _log_tables(p: int, k: int, modulus: tuple[int, ...]):
    q = p**k

    def mulmod(a: int, b: int) -> int:
        da, db = _digits(a, p, k), _digits(b, p, k)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return _undigits(_poly_mod(prod, list(modulus), p), p)

    def order_is_full(g: int) -> bool:
        for r in _prime_factors(q - 1):
            e, acc, base = (q - 1) // r, 1, g
            while e:
                if e & 1:
                    acc = mulmod(acc, base)
                base = mulmod(base, base)
                e >>= 1
            if acc == 1:
                return False
        return True

    gen = next(g for g in range(2, q) if order_is_full(g))
    exp = [0] * (q - 1)
    log = [0] * q
    x = 1
    for i in range(q - 1):
        exp[i] = x
        log[x] = i
        x = mulmod(x, gen)
    return tuple(exp), tuple(log)


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldCtx:
    """Build (and cache) the field with q elements.

    >>> F = make_field(4)
    >>> F.mul(2, 2), F.add(2, 2)
    (3, 0)
    """
    if q > MAX_ORDER:
        raise TooLarge(f"q={q} exceeds the cap {MAX_ORDER}")
    p, k = prime_power_decomposition(q)
    modulus = least_irreducible(p, k)
    if k == 1:
        return FieldCtx(q, p, k, modulus)
    exp, log = _log_tables(p, k, modulus)
    return FieldCtx(q, p, k, modulus, exp, log)
