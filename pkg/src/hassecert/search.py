"""Brute-force rational point searches up to a height bound.

These searches corroborate the certificates empirically: a certified fiber
must come back empty, while synthetic control inputs with known points
must surface them.  All square tests are exact.
"""

import math
from fractions import Fraction

from .arith import is_rational_square
from .family import DP4Surface, HyperellipticCurve

# residues of perfect squares mod 64, 63, 65: a cheap pre-filter that
# rejects most non-squares before the big-int isqrt
_SQ64 = {(x * x) % 64 for x in range(64)}
_SQ63 = {(x * x) % 63 for x in range(63)}
_SQ65 = {(x * x) % 65 for x in range(65)}


def _is_square_int(n):
    if n < 0:
        return False
    if n % 64 not in _SQ64 or n % 63 not in _SQ63 or n % 65 not in _SQ65:
        return False
    r = math.isqrt(n)
    return r * r == n


def curve_point_search(curve, height):
    """All points (t, s) with t = m/n, |m| <= height, 1 <= n <= height,
    plus the two points above t = infinity when b/a is a rational square.

    Returns a list of (t, s) pairs with s >= 0 (each found point also has
    its mirror -s).
    """
    if height < 1:
        raise ValueError("height bound must be >= 1")
    g = curve.genus
    a, b, A, B = curve.a, curve.b, curve.A, curve.B
    # s^2 = (b/a)(t^(g+1) - A)(t^(g+1) - B) with t = m/n is a rational
    # square iff a b q^2 (m^(g+1) q - alpha n^(g+1)) (m^(g+1) q - beta n^(g+1))
    # is a perfect integer square, with A = alpha/q, B = beta/q
    q = A.denominator * B.denominator // math.gcd(A.denominator, B.denominator)
    alpha = int(A * q)
    beta = int(B * q)
    ab = int(a * b) if (a * b).denominator == 1 else None
    found = []
    for n in range(1, height + 1):
        npow = n ** (g + 1)
        for m in range(-height, height + 1):
            if math.gcd(m, n) != 1:
                continue
            mpow = m ** (g + 1)
            p1 = mpow * q - alpha * npow
            p2 = mpow * q - beta * npow
            if ab is not None:
                val = ab * p1 * p2
                if not _is_square_int(val):
                    continue
            t = Fraction(m, n)
            v = curve.chart_value("st", t)
            s = is_rational_square(v)
            if s is not None:
                found.append((t, s))
    lead = is_rational_square(b / a)
    if lead is not None:
        found.append(("inf", lead))
    return found


def surface_point_search(surface, height):
    """All projective points with integer coordinates of size <= height.

    Enumerates (u, v) in the box and, per pair, the x values the second
    quadric allows: when a is a prime not dividing den(C), x must be a
    multiple of a, which for desk-scale fibers pins x = 0 immediately.
    y and z then come from exact integer square tests:

        y^2 = a x1^2 + C^2 u v        (x = a x1)
        z^2 = (x^2 + b (u - Av)(u - Bv)) / a
    """
    if height < 1:
        raise ValueError("height bound must be >= 1")
    a, b, A, B, C = surface.a, surface.b, surface.A, surface.B, surface.C
    if a.denominator != 1 or b.denominator != 1:
        raise ValueError("surface search expects integral a, b")
    a_i, b_i = int(a), int(b)
    q = A.denominator * B.denominator // math.gcd(A.denominator, B.denominator)
    pA, pB = int(A * q), int(B * q)
    gamma, nu = C.numerator, C.denominator
    # a | x is forced by the second quadric whenever a stays away from the
    # denominator of C (a prime, the valuation argument at a)
    a_forces = a_i > 1 and nu % a_i != 0
    x_step = a_i if a_forces else 1
    found = set()

    def check(u, v):
        x1 = 0
        while x_step * x1 <= height:
            x = x_step * x1
            # y^2 * nu^2 = (x^2 / a) nu^2 + gamma^2 u v; with x = a x1 (or
            # direct x when not forced) the left side must be an integer
            if a_forces:
                My = a_i * x1 * x1 * nu * nu + gamma * gamma * u * v
            else:
                num = x * x * nu * nu + a_i * gamma * gamma * u * v
                if num % a_i:
                    x1 += 1
                    continue
                My = num // a_i
            if My >= 0 and _is_square_int(My):
                ry = math.isqrt(My)
                if ry % nu == 0 and ry // nu <= height:
                    # z^2 * a * q^2 = x^2 q^2 + b (uq - pA v)(uq - pB v)
                    Nz = x * x * q * q + b_i * (u * q - pA * v) * (u * q - pB * v)
                    if Nz >= 0 and Nz % a_i == 0 and _is_square_int(Nz // a_i):
                        rz = math.isqrt(Nz // a_i)
                        if rz % q == 0 and rz // q <= height:
                            found.add((x, ry // nu, rz // q, u, v))
            x1 += 1

    check(1, 0)
    for v in range(1, height + 1):
        for u in range(-height, height + 1):
            if u == 0 and v == 0:
                continue
            check(u, v)
    return sorted(found)


def rational_point_search(target, height):
    """Dispatch on the model type."""
    if isinstance(target, HyperellipticCurve):
        return curve_point_search(target, height)
    if isinstance(target, DP4Surface):
        return surface_point_search(target, height)
    raise TypeError(f"cannot search points on {type(target).__name__}")
