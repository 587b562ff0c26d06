"""Exact integer and modular arithmetic used throughout the package.

Everything here is a pure function on Python ints. Primality is the
deterministic Miller-Rabin variant, so the bound ``MAX_PRIMALITY_INPUT``
below is the integer width this module supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator


class ArithmeticInputError(ValueError):
    """Base class for input-domain errors raised by this module."""


class NotPrimeError(ArithmeticInputError):
    pass


class WrongResidueClassError(ArithmeticInputError):
    """The prime is not in the residue class an operation needs (e.g. p = 2 mod 3)."""


class RamifiedPrimeError(ArithmeticInputError):
    """p = 3, where -3 is not a unit."""


# The first thirteen prime bases are deterministic below 3.3e24; twelve bases
# are not enough there (318665857834031151167461 fools all of them).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MAX_PRIMALITY_INPUT = 3_317_044_064_679_887_385_961_981
# smaller inputs are already settled by a prefix of the bases
_MR_TIERS = (
    (3_215_031_751, 4),
    (341_550_071_728_321, 7),
    (3_825_123_056_546_413_051, 9),
    (MAX_PRIMALITY_INPUT, 13),
)


def is_prime(m: int) -> bool:
    if m < 0:
        raise ArithmeticInputError("is_prime expects a nonnegative integer")
    if m >= MAX_PRIMALITY_INPUT:
        raise OverflowError(f"{m} exceeds the deterministic primality range")
    if m < 2:
        return False
    for q in _MR_BASES:
        if m % q == 0:
            return m == q
    if m < 1681:  # 41^2: no small factor means prime
        return True
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for bound, count in _MR_TIERS:
        if m < bound:
            break
    for a in _MR_BASES[:count]:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


def primes_up_to(X: int, segment: int = 1 << 16) -> Iterator[int]:
    """Yield the primes <= X in ascending order.

    Segmented sieve: memory is O(sqrt(X) + segment) regardless of X.
    """
    if X < 2:
        return
    base = _small_primes(math.isqrt(X))
    lo = 2
    while lo <= X:
        hi = min(lo + segment, X + 1)
        seg = bytearray([1]) * (hi - lo)
        for q in base:
            if q * q >= hi:
                break
            start = max(q * q, (lo + q - 1) // q * q)
            if start < hi:
                seg[start - lo :: q] = bytes(len(range(start, hi, q)))
        for i, flag in enumerate(seg):
            if flag:
                yield lo + i
        lo = hi


def prime_pi(X: int) -> int:
    return sum(1 for _ in primes_up_to(X))


# ---------------------------------------------------------------------------
# Factorization: trial division with a Pollard-Brent fallback.
# ---------------------------------------------------------------------------

_TRIAL_LIMIT = 1000
_TRIAL_PRIMES = _small_primes(_TRIAL_LIMIT)


def _pollard_brent(n: int) -> int:
    # n is odd and composite
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        f = lambda v: (v * v + c) % n
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = f(y)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = f(y)
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = f(ys)
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise RuntimeError(f"Pollard-Brent failed to split {n}")


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; factorize(1) == {}."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for q in _TRIAL_PRIMES:
        if q * q > n:
            break
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_brent(m)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def prime_divisors(n: int) -> list[int]:
    return list(factorize(n))


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_cube_free(n: int) -> bool:
    if n < 1:
        raise ArithmeticInputError("is_cube_free expects n >= 1")
    return all(e < 3 for e in factorize(n).values())


def integer_cube_root(m: int) -> int:
    """floor of the real cube root, exact for any size."""
    if m < 0:
        return -_icbrt_pos(-m, ceil=True)
    return _icbrt_pos(m, ceil=False)


def _icbrt_pos(m: int, ceil: bool) -> int:
    if m < 2:
        return m
    if m < 1 << 52:
        r = round(m ** (1.0 / 3.0))
    else:
        r = 1 << ((m.bit_length() + 2) // 3)
        while True:
            s = (2 * r + m // (r * r)) // 3
            if s >= r:
                break
            r = s
    while r * r * r > m:
        r -= 1
    while (r + 1) ** 3 <= m:
        r += 1
    if ceil and r * r * r != m:
        r += 1
    return r


def is_perfect_cube(m: int) -> tuple[bool, int | None]:
    """(True, root) when m is the cube of an integer, else (False, None)."""
    r = _icbrt_pos(abs(m), ceil=False)
    if r * r * r == abs(m):
        return True, r if m >= 0 else -r
    return False, None


def legendre_symbol(a: int, p: int) -> int:
    if p < 3 or p % 2 == 0:
        raise ValueError("legendre_symbol needs an odd prime")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a modulo the odd prime p (Tonelli-Shanks).

    Returns the even representative of the pair {r, p - r}. Raises
    ValueError when a is a non-residue.
    """
    a %= p
    if a == 0:
        return 0
    if legendre_symbol(a, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre_symbol(z, p) != -1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return r if r % 2 == 0 else p - r


@dataclass(frozen=True)
class Cornacchia4p:
    """The positive solution of L^2 + 27 M^2 = 4p."""

    p: int
    L: int
    M: int

    def __post_init__(self):
        if self.L * self.L + 27 * self.M * self.M != 4 * self.p:
            raise ValueError("L^2 + 27 M^2 != 4p")


def cornacchia_4p(p: int) -> Cornacchia4p:
    """Solve L^2 + 27 M^2 = 4p for a prime p = 1 (mod 3).

    Modified Cornacchia for x^2 + d y^2 = 4p with d = 27: the orders
    of discriminant -27 have class number one, so a solution exists.
    """
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if p == 3:
        raise RamifiedPrimeError("p = 3 has no decomposition 4p = L^2 + 27M^2")
    if p % 3 != 1:
        raise WrongResidueClassError(f"{p} is not 1 mod 3")
    d = 27
    x0 = sqrt_mod(-d, p)
    if x0 % 2 != d % 2:
        x0 = p - x0
    a, b = 2 * p, x0
    bound = math.isqrt(4 * p)
    while b > bound:
        a, b = b, a % b
    rest = 4 * p - b * b
    m2, r = divmod(rest, d)
    M = math.isqrt(m2)
    if r or M * M != m2 or M == 0:
        raise RuntimeError(f"Cornacchia failed for p = {p}")  # unreachable for valid p
    return Cornacchia4p(p, abs(b), M)
