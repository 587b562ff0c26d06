"""The curve E_n : x^3 + y^3 = n z^3 over Q, in the model y^2 = x^3 - 432 n^2.

The model is not minimal at 2 when n is odd: E_3 has conductor 243 and
good reduction at 2 once the coordinates are changed. ``bad_primes`` and
``reduction_type`` describe the short Weierstrass model itself (primes
dividing 6n); ``local_data``/``conductor`` report the minimal model via
Tate's algorithm, and that is what the L-series uses.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arithmetic import (
    integer_cube_root,
    is_cube_free,
    is_perfect_cube,
    is_prime,
    prime_divisors,
    primes_up_to,
)
from .curve_local import reduce_mod_p
from .tate import AInvariants, LocalData, discriminant, tate

TORSION_GCD_BOUND = 100


class CurveInputError(ValueError):
    pass


class NotCubeFreeError(CurveInputError):
    pass


class DegenerateCurveError(CurveInputError):
    """n = 1 or 2, where E_n(Q) has torsion and n is trivially a cube sum."""


class TorsionInconclusive(RuntimeError):
    pass


class Reduction(enum.Enum):
    # j = 0 is integral, so there is no multiplicative variant
    GOOD = "good"
    ADDITIVE = "additive"


@dataclass
class CurveEn:
    n: int
    b: int
    bad_primes: frozenset[int]
    conductor: Optional[int] = None
    _local: dict[int, LocalData] = field(default_factory=dict, repr=False, compare=False)

    @property
    def ainvs(self) -> AInvariants:
        return (0, 0, 0, 0, self.b)

    @property
    def j_invariant(self) -> int:
        return 0


@dataclass(frozen=True)
class CubeSumWitness:
    x: Fraction
    y: Fraction

    def check(self, n: int) -> bool:
        return self.x ** 3 + self.y ** 3 == n

    def __str__(self):
        return f"({self.x}, {self.y})"


def build_curve(n: int) -> CurveEn:
    if n < 1 or not is_cube_free(n):
        raise NotCubeFreeError(f"{n} is not a cube-free natural number")
    if n in (1, 2):
        raise DegenerateCurveError(
            f"n = {n} is excluded: E_{n}(Q) has a torsion point and {n} is trivially a sum of two cubes"
        )
    curve = CurveEn(n, -432 * n * n, frozenset(prime_divisors(6 * n)))
    curve.conductor = conductor(curve)
    return curve


def bad_primes(curve: CurveEn) -> set[int]:
    return set(curve.bad_primes)


def reduction_type(curve: CurveEn, ell: int) -> Reduction:
    """Reduction type of the model y^2 = x^3 - 432 n^2 at ell."""
    return Reduction.ADDITIVE if ell in curve.bad_primes else Reduction.GOOD


def local_data(curve: CurveEn, ell: int) -> LocalData:
    """Minimal-model local data at ell (Kodaira symbol, conductor exponent)."""
    if ell not in curve._local:
        curve._local[ell] = tate(curve.ainvs, ell)
    return curve._local[ell]


def conductor(curve: CurveEn) -> int:
    return conductor_of_model(curve.ainvs)


def conductor_of_model(a: AInvariants) -> int:
    N = 1
    for p in prime_divisors(discriminant(a)):
        N *= p ** tate(a, p).conductor_exponent
    return N


# --- torsion -------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionCertificate:
    n: int
    two_torsion: str
    three_torsion: str
    gcd_bound: int
    orders: dict[int, int]
    gcd: int


def torsion_trivial_certificate(curve: CurveEn, gcd_bound: int = TORSION_GCD_BOUND) -> TorsionCertificate:
    """Certify E_n(Q)_tors = 0.

    Rational 2-torsion is a rational root of x^3 + b, i.e. -b = 432 n^2 a
    cube. Rational 3-torsion has x a root of the 3-division polynomial
    3x(x^3 + 4b): x = 0 needs b a square (b < 0), x^3 = -4b = 1728 n^2 needs
    n^2 a cube. Any remaining torsion has order dividing #E(F_l) for every
    good l, so a gcd supported on {2, 3} finishes the argument.
    """
    n, b = curve.n, curve.b
    cube2, _ = is_perfect_cube(-b)
    if cube2:
        raise TorsionInconclusive(f"432*{n}^2 is a cube: rational 2-torsion")
    cube3, _ = is_perfect_cube(-4 * b)
    if (b >= 0 and math.isqrt(b) ** 2 == b) or cube3:
        raise TorsionInconclusive(f"3-division polynomial has a rational root for n = {n}")
    orders: dict[int, int] = {}
    g = 0
    for ell in primes_up_to(gcd_bound):
        if ell < 5 or ell in curve.bad_primes:
            continue
        orders[ell] = reduce_mod_p(n, ell).order()
        g = math.gcd(g, orders[ell])
    if g == 0 or any(q > 3 for q in prime_divisors(g)):
        raise TorsionInconclusive(
            f"gcd of #E(F_l) over good l <= {gcd_bound} is {g}; raise the bound"
        )
    return TorsionCertificate(
        n=n,
        two_torsion=f"-b = {-b} is not a cube",
        three_torsion=f"b = {b} < 0 is not a square and -4b = {-4 * b} is not a cube",
        gcd_bound=gcd_bound,
        orders=orders,
        gcd=g,
    )


# --- rational points -------------------------------------------------------------

_CUBE_FILTER_MOD = 7 * 9 * 13
_CUBE_RESIDUES = bytearray(_CUBE_FILTER_MOD)
for _r in range(_CUBE_FILTER_MOD):
    _CUBE_RESIDUES[_r ** 3 % _CUBE_FILTER_MOD] = 1


def rational_point_search(n: int, H: int) -> Optional[CubeSumWitness]:
    """First solution of a^3 + b^3 = n c^3 with 1 <= c <= H.

    Order: ascending c, then ascending |a| (positive a before negative),
    |a| <= c * ceil(n^(1/3)) + 1. b is recovered by an exact cube-root test.
    """
    if n < 1 or not is_cube_free(n):
        raise NotCubeFreeError(f"{n} is not cube-free")
    k = integer_cube_root(n)
    if k ** 3 < n:
        k += 1
    mod, residues = _CUBE_FILTER_MOD, _CUBE_RESIDUES
    for c in range(1, H + 1):
        target = n * c ** 3
        for m in range(c * k + 2):
            for a in (m, -m) if m else (0,):
                s = target - a * a * a
                if not residues[s % mod]:
                    continue
                ok, bb = is_perfect_cube(s)
                if ok:
                    w = CubeSumWitness(Fraction(a, c), Fraction(bb, c))
                    assert w.check(n)
                    return w
    return None


def is_good_prime(curve: CurveEn, p: int) -> bool:
    return is_prime(p) and p not in curve.bad_primes
