"""Curves y^2 = x^3 + b over prime fields F_p, p >= 5.

Points are ``None`` (the point at infinity) or an ``(x, y)`` tuple of
residues. The fast trace computation uses the CM structure of the j = 0
family: for p = 2 (mod 3) the curve is supersingular, otherwise the
Frobenius is one of six unit multiples of the element (L + 3M sqrt(-3))/2
with L^2 + 27 M^2 = 4p, and random points pick out the right one.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .arithmetic import (
    NotPrimeError,
    WrongResidueClassError,
    cornacchia_4p,
    is_prime,
    legendre_symbol,
    sqrt_mod,
)

Point = Optional[Tuple[int, int]]

# random points tried before falling back to the O(p) count
DISAMBIGUATION_SAMPLES = 8
SEED_ENV = "CUBE_OBSTRUCT_SEED"


class BadReductionError(ValueError):
    pass


class NotOnCurveError(ValueError):
    pass


@dataclass
class CurveFp:
    p: int
    b: int
    _order: Optional[int] = field(default=None, repr=False, compare=False)
    _trace: Optional[int] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.p < 5 or not is_prime(self.p):
            raise NotPrimeError(f"p = {self.p} must be a prime >= 5")
        self.b %= self.p
        if self.b == 0:
            raise BadReductionError(f"y^2 = x^3 is singular mod {self.p}")

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        return (y * y - x * x * x - self.b) % self.p == 0

    def trace(self, rng: Optional[random.Random] = None) -> int:
        if self._trace is None:
            self._set_trace(trace_of_frobenius(self, rng))
        return self._trace

    def order(self, rng: Optional[random.Random] = None) -> int:
        if self._order is None:
            self._set_trace(self.trace(rng))
        return self._order

    def _set_trace(self, a: int) -> None:
        # both caches derive from the same value, so racing writers agree
        if a * a > 4 * self.p:
            raise ValueError(f"trace {a} violates the Hasse bound at p = {self.p}")
        self._trace = a
        self._order = self.p + 1 - a


def reduce_mod_p(n: int, p: int) -> CurveFp:
    """Reduction of y^2 = x^3 - 432 n^2 modulo a good prime p."""
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if (6 * n) % p == 0:
        raise BadReductionError(f"bad reduction prime: {p} divides 6n = {6 * n}")
    return CurveFp(p, -432 * n * n)


# --- group law ---------------------------------------------------------------


def ec_add(curve: CurveFp, P: Point, Q: Point) -> Point:
    if P is None:
        return Q
    if Q is None:
        return P
    p = curve.p
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = 3 * x1 * x1 * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def ec_neg(curve: CurveFp, P: Point) -> Point:
    if P is None:
        return None
    return P[0], (-P[1]) % curve.p


def ec_scalar_mul(curve: CurveFp, P: Point, k: int) -> Point:
    if not curve.contains(P):
        raise NotOnCurveError(f"{P} is not on y^2 = x^3 + {curve.b} mod {curve.p}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _mul(curve, P, k)


def _mul(curve: CurveFp, P: Point, k: int) -> Point:
    """k P by left-to-right double-and-add in Jacobian coordinates.

    (X : Y : Z) stands for (X / Z^2, Y / Z^3); only the final conversion
    back to affine needs a modular inverse. Formulas are for a4 = 0.
    """
    if P is None or k == 0:
        return None
    p = curve.p
    px, py = P
    X, Y, Z = px, py, 1
    for bit in bin(k)[3:]:
        # doubling
        if Y == 0 or Z == 0:
            X, Y, Z = 1, 1, 0
        else:
            A = X * X % p
            B = Y * Y % p
            C = B * B % p
            D = 2 * ((X + B) * (X + B) - A - C) % p
            E = 3 * A % p
            X3 = (E * E - 2 * D) % p
            Y, Z = (E * (D - X3) - 8 * C) % p, 2 * Y * Z % p
            X = X3
        if bit == "1":
            # mixed addition of the affine P
            if Z == 0:
                X, Y, Z = px, py, 1
                continue
            ZZ = Z * Z % p
            H = (px * ZZ - X) % p
            r = (py * ZZ * Z - Y) % p
            if H == 0:
                if r != 0:
                    X, Y, Z = 1, 1, 0
                    continue
                return ec_add(curve, _mul(curve, P, k >> 1), _mul(curve, P, k - (k >> 1)))
            HH = H * H % p
            HHH = H * HH % p
            V = X * HH % p
            X3 = (r * r - HHH - 2 * V) % p
            Y = (r * (V - X3) - Y * HHH) % p
            Z = Z * H % p
            X = X3
    if Z == 0:
        return None
    zi = pow(Z, -1, p)
    zi2 = zi * zi % p
    return X * zi2 % p, Y * zi2 * zi % p


def random_point(curve: CurveFp, rng: random.Random) -> Point:
    """Uniform x, accepted when x^3 + b is a square; y via modular sqrt."""
    p = curve.p
    while True:
        x = rng.randrange(p)
        r = (x * x * x + curve.b) % p
        if r == 0:
            return x, 0
        if legendre_symbol(r, p) == 1:
            y = sqrt_mod(r, p)
            return x, y if rng.random() < 0.5 else p - y


# --- point counting ----------------------------------------------------------


def count_points_naive(curve: CurveFp) -> int:
    """#E(F_p) = p + 1 + sum_x (x^3 + b | p), point at infinity included.

    The Legendre symbols come from a table of squares, so this is O(p)
    with no modular exponentiation.
    """
    p, b = curve.p, curve.b
    is_square = bytearray(p)
    for y in range(1, (p + 1) // 2):
        is_square[y * y % p] = 1
    total = p + 1
    for x in range(p):
        r = (x * x * x + b) % p
        if r:
            total += 1 if is_square[r] else -1
    return total


def trace_candidates(p: int) -> set[int]:
    """Traces of the six unit multiples of Frobenius in Z[(1+sqrt(-3))/2]."""
    if p % 3 != 1:
        raise WrongResidueClassError(f"{p} is not 1 mod 3")
    c = cornacchia_4p(p)
    L, M = c.L, c.M
    return {L, -L, (L + 9 * M) // 2, -(L + 9 * M) // 2, (L - 9 * M) // 2, -(L - 9 * M) // 2}


def default_rng(curve: CurveFp, seed: Optional[int] = None) -> random.Random:
    """Per-curve generator; the seed defaults to $CUBE_OBSTRUCT_SEED (or 0)."""
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, "0"))
    return random.Random(f"{seed}:{curve.p}:{curve.b}")


def trace_of_frobenius(
    curve: CurveFp,
    rng: Optional[random.Random] = None,
    samples: int = DISAMBIGUATION_SAMPLES,
) -> int:
    p = curve.p
    if p % 3 == 2:
        return 0
    if rng is None:
        rng = default_rng(curve)
    survivors = sorted(trace_candidates(p))
    for _ in range(samples):
        P = random_point(curve, rng)
        # (p + 1 - a) P = O  <=>  (p + 1) P = a P; candidates come in +- pairs,
        # so one small multiple |a| P serves both signs
        Q = _mul(curve, P, p + 1)
        small = {abs(a): _mul(curve, P, abs(a)) for a in survivors}
        survivors = [a for a in survivors if Q == (small[a] if a >= 0 else ec_neg(curve, small[-a]))]
        if len(survivors) == 1:
            return survivors[0]
    # the true trace always survives; several survivors means every sampled
    # point had order dividing two candidate group orders
    assert survivors, f"no trace candidate annihilates E mod {p}"
    return p + 1 - count_points_naive(curve)


def check_no_p_torsion(curve: CurveFp, p: int) -> bool:
    """True iff E(F_l)[p] = 0, i.e. p does not divide #E(F_l).

    A finite abelian group has an element of order p exactly when p divides
    its order (Cauchy), so the divisibility test is the whole check.
    """
    return curve.order() % p != 0
