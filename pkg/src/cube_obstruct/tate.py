"""Tate's algorithm for integral Weierstrass models over Q.

Works with a-invariant tuples (a1, a2, a3, a4, a6). Returns the Kodaira
symbol, the conductor exponent (via Ogg's formula f = v(disc) + 1 - m for
additive reduction) and the local minimal model, for any prime p,
including 2 and 3.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arithmetic import valuation

AInvariants = tuple[int, int, int, int, int]


def b_invariants(a: AInvariants) -> tuple[int, int, int, int]:
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def c_invariants(a: AInvariants) -> tuple[int, int]:
    b2, b4, b6, _ = b_invariants(a)
    return b2 * b2 - 24 * b4, -b2 ** 3 + 36 * b2 * b4 - 216 * b6


def discriminant(a: AInvariants) -> int:
    b2, b4, b6, b8 = b_invariants(a)
    return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def rst_transform(a: AInvariants, r: int, s: int, t: int) -> AInvariants:
    """Substitute x = x' + r, y = y' + s x' + t."""
    a1, a2, a3, a4, a6 = a
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1,
    )


def _v(x: int, p: int) -> int:
    # valuation with v(0) treated as "large"
    return 10 ** 6 if x == 0 else valuation(x, p)


def _repeated_root(coeffs: tuple[int, int, int], p: int) -> int:
    """A root of multiplicity >= 2 of T^3 + c2 T^2 + c1 T + c0 mod p.

    Repeated roots of a cubic over F_p are F_p-rational, so for small p a
    scan suffices; large p solves gcd(P, P') directly.
    """
    c2, c1, c0 = (c % p for c in coeffs)
    if p <= 3:
        for r in range(p):
            if (r ** 3 + c2 * r * r + c1 * r + c0) % p == 0 and (3 * r * r + 2 * c2 * r + c1) % p == 0:
                return r
        raise ValueError("no repeated root")
    # P = (T/3 + c2/9) P' + R with R linear; the repeated root is the root of R,
    # unless R vanishes, in which case P = (T + c2/3)^3.
    inv3 = pow(3, -1, p)
    alpha = (2 * c1 - 2 * c2 * c2 * inv3) * inv3 % p
    beta = (c0 - c1 * c2 * pow(9, -1, p)) % p
    if alpha == 0:
        return (-c2 * inv3) % p
    return (-beta * pow(alpha, -1, p)) % p


def _cubic_root_profile(coeffs: tuple[int, int, int], p: int) -> int:
    """Number of distinct roots (in an algebraic closure) of the monic cubic mod p."""
    c2, c1, c0 = coeffs
    disc = c2 * c2 * c1 * c1 - 4 * c1 ** 3 - 4 * c2 ** 3 * c0 - 27 * c0 * c0 + 18 * c2 * c1 * c0
    if disc % p:
        return 3
    r = _repeated_root(coeffs, p)
    # triple iff P = (T - r)^3
    if (c2 + 3 * r) % p == 0 and (c1 - 3 * r * r) % p == 0 and (c0 + r ** 3) % p == 0:
        return 1
    return 2


@dataclass(frozen=True)
class LocalData:
    p: int
    kodaira: str
    conductor_exponent: int
    disc_valuation: int  # of the minimal model
    minimal_model: AInvariants

    @property
    def good(self) -> bool:
        return self.conductor_exponent == 0

    @property
    def additive(self) -> bool:
        return self.conductor_exponent >= 2


def tate(a: AInvariants, p: int) -> LocalData:
    """Run Tate's algorithm at p on an integral model."""
    half = (p + 1) // 2  # 2 * half = 1 mod p, for odd p
    while True:
        disc = discriminant(a)
        if disc == 0:
            raise ValueError("singular Weierstrass model")
        vd = valuation(disc, p)
        if vd == 0:
            return LocalData(p, "I0", 0, 0, a)
        # move the singular point to (0, 0)
        a1, a2, a3, a4, a6 = a
        b2, b4, b6, b8 = b_invariants(a)
        if p == 2:
            if b2 % 2 == 0:
                r = a4 % 2
                t = (r * (1 + a2 + a4) + a6) % 2
            else:
                r = a3 % 2
                t = (r + a4) % 2
        elif p == 3:
            r = (-b6) % 3 if b2 % 3 == 0 else (-b2 * b4) % 3
            t = (a1 * r + a3) % 3
        else:
            c4, c6 = c_invariants(a)
            if c4 % p == 0:
                r = -pow(12, -1, p) * b2 % p
            else:
                r = -pow(12 * c4, -1, p) * (c6 + b2 * c4) % p
            t = -half * (a1 * r + a3) % p
        a = rst_transform(a, r, 0, t)
        a1, a2, a3, a4, a6 = a
        b2, b4, b6, b8 = b_invariants(a)

        if b2 % p:
            return LocalData(p, f"I{vd}", 1, vd, a)
        if _v(a6, p) < 2:
            return LocalData(p, "II", vd, vd, a)
        if _v(b8, p) < 3:
            return LocalData(p, "III", vd - 1, vd, a)
        if _v(b6, p) < 3:
            return LocalData(p, "IV", vd - 2, vd, a)

        # now arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            s = a2 % 2
            t = 2 * ((a6 // 4) % 2)
        else:
            s = -a1 * half
            t = -a3 * half
        a = rst_transform(a, 0, s, t)
        a1, a2, a3, a4, a6 = a
        P = (a2 // p, a4 // p ** 2, a6 // p ** 3)
        roots = _cubic_root_profile(P, p)
        if roots == 3:
            return LocalData(p, "I0*", vd - 4, vd, a)

        if roots == 2:
            # move the double root to T = 0, then chase the I_n* chain
            r = _repeated_root(P, p)
            a = rst_transform(a, p * r, 0, 0)
            n = 1
            mx = my = p * p
            while True:
                a1, a2, a3, a4, a6 = a
                a2t, a3t, a6t = a2 // p, a3 // my, a6 // (mx * my)
                if (a3t * a3t + 4 * a6t) % p:
                    break
                alpha = a6t % 2 if p == 2 else (-a3t * half) % p
                a = rst_transform(a, 0, 0, my * alpha)
                my *= p
                n += 1
                a1, a2, a3, a4, a6 = a
                a4t, a6t = a4 // (p * mx), a6 // (mx * my)
                if (a4t * a4t - 4 * a2t * a6t) % p:
                    break
                beta = (a6t * a2t) % 2 if p == 2 else (-a4t * half * pow(a2t, -1, p)) % p
                a = rst_transform(a, mx * beta, 0, 0)
                mx *= p
                n += 1
            return LocalData(p, f"I{n}*", vd - 4 - n, vd, a)

        # triple root: move it to T = 0
        r = _repeated_root(P, p)
        a = rst_transform(a, p * r, 0, 0)
        a1, a2, a3, a4, a6 = a
        a3t, a6t = a3 // p ** 2, a6 // p ** 4
        if (a3t * a3t + 4 * a6t) % p:
            return LocalData(p, "IV*", vd - 6, vd, a)
        alpha = a6t % 2 if p == 2 else (-a3t * half) % p
        a = rst_transform(a, 0, 0, p * p * alpha)
        a1, a2, a3, a4, a6 = a
        if _v(a4, p) < 4:
            return LocalData(p, "III*", vd - 7, vd, a)
        if _v(a6, p) < 6:
            return LocalData(p, "II*", vd - 8, vd, a)
        # not minimal: scale by u = p and start over
        a = (a1 // p, a2 // p ** 2, a3 // p ** 3, a4 // p ** 4, a6 // p ** 6)


def count_points_general(a: AInvariants, p: int) -> int:
    """#E(F_p) for a general Weierstrass model with good reduction, by enumeration."""
    a1, a2, a3, a4, a6 = a
    total = 1
    for x in range(p):
        rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                total += 1
    return total
