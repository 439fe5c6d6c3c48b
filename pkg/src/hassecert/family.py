"""Fiber models: the hyperelliptic curve, the quadric-pair surface, the map
between them, and the coordinate-scaled local models used by the solver
and the invariant computation.

Conventions for one fiber over a verified parameter quadruple (a,b,c,d):

    curve   a s^2 = b (t^(g+1) - A)(t^(g+1) - B),  glued with its
            reversed chart a S^2 = b (1 - A T^(g+1))(1 - B T^(g+1))
    surface x^2 - a z^2 = -b (u - A v)(u - B v)
            x^2 - a y^2 = -a C^2 u v

with A, B, C, D exact rationals depending on the fiber parameter theta
and satisfying B - A = 2 c D^2 identically.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import is_rational_square, padic_val
from .params import ParamSet
from .polynomials import Polynomial


@dataclass(frozen=True)
class Theta:
    """A point of the projective line over Q: a rational or infinity."""

    value: Fraction | None  # None encodes infinity

    @classmethod
    def of(cls, num, den=1):
        return cls(Fraction(num, den))

    @classmethod
    def infinity(cls):
        return cls(None)

    @classmethod
    def parse(cls, s):
        s = s.strip()
        if s in ("inf", "infinity", "oo"):
            return cls.infinity()
        return cls(Fraction(s))

    @property
    def is_infinity(self):
        return self.value is None

    def __str__(self):
        return "inf" if self.is_infinity else str(self.value)

    def to_json(self):
        if self.is_infinity:
            return "inf"
        return {"num": str(self.value.numerator), "den": str(self.value.denominator)}

    @classmethod
    def from_json(cls, obj):
        if obj == "inf":
            return cls.infinity()
        return cls(Fraction(int(obj["num"]), int(obj["den"])))


class NonvanishingError(ArithmeticError):
    """A structured coefficient vanished where the family forbids it."""

    def __init__(self, symbol, coeffs):
        self.symbol = symbol
        super().__init__(f"coefficient {symbol} vanishes on fiber theta={coeffs.theta}")


@dataclass(frozen=True)
class FamilyCoeffs:
    """Structured coefficients of one fiber."""

    A: Fraction
    B: Fraction
    C: Fraction
    D: Fraction
    theta: Theta
    params: ParamSet

    def to_json(self):
        def frac(x):
            return f"{x.numerator}/{x.denominator}"

        return {
            "params": self.params.to_json(),
            "theta": self.theta.to_json(),
            "coeffs": {k: frac(getattr(self, k)) for k in "ABCD"},
            "genus": str(self.params.g),
            "h": str(self.params.h),
        }


def fiber_coeffs(params, theta):
    """Exact A, B, C, D of the fiber at theta; B - A = 2cD^2 by construction."""
    a, b, c, d = (Fraction(v) for v in (params.a, params.b, params.c, params.d))
    g, h = params.g, params.h
    if theta.is_infinity:
        D = a ** (2 * h + 1) * b ** (2 * h + 1)
        C = a ** (2 * h + 1)
        A = a ** (4 * h + 3) + b * c**2 * d * D**2
    else:
        t = theta.value
        D = a ** (2 * h + 1) * b ** (2 * h + 1) * t ** (g + 1) - 1
        C = a ** (2 * h + 1) * t ** (g + 1) - 1
        A = a ** (4 * h + 3) * t ** (2 * g + 2) + b * c**2 * d * D**2
    B = A + 2 * c * D**2
    return FamilyCoeffs(A=A, B=B, C=C, D=D, theta=theta, params=params)


def check_nonvanishing(coeffs):
    """Assert A, B, C, D all nonzero; returns the checked list.

    Vanishing contradicts the family construction over verified parameters,
    so it is treated as input corruption and raised loudly.
    """
    trace = []
    for symbol in "ABCD":
        value = getattr(coeffs, symbol)
        trace.append((symbol, value != 0))
        if value == 0:
            raise NonvanishingError(symbol, coeffs)
    return trace


@dataclass(frozen=True)
class CurveChange:
    """Multiplicative substitution mapping model coordinates back to the
    original fiber coordinates: s_orig = s_mult * s_model, t likewise."""

    s_mult: Fraction = Fraction(1)
    t_mult: Fraction = Fraction(1)

    @property
    def is_identity(self):
        return self.s_mult == 1 and self.t_mult == 1


@dataclass(frozen=True)
class HyperellipticCurve:
    """Two-chart model a s^2 = b prod, with exact structured coefficients.

    The chart polynomials f (in t) and F (in T) are derived; F's
    coefficient list is the reversal of f's.
    """

    a: Fraction
    b: Fraction
    A: Fraction
    B: Fraction
    genus: int
    coeffs: FamilyCoeffs | None = None
    change: CurveChange = CurveChange()

    def f_poly(self):
        g = self.genus
        lead = self.b / self.a
        cs = [Fraction(0)] * (2 * g + 3)
        cs[0] = lead * self.A * self.B
        cs[g + 1] = -lead * (self.A + self.B)
        cs[2 * g + 2] = lead
        return Polynomial(cs)

    def F_poly(self):
        return self.f_poly().reversed_coeffs(2 * self.genus + 3)

    def chart_value(self, chart, t):
        """f(t) or F(T) as an exact Fraction."""
        t = Fraction(t)
        g = self.genus
        lead = self.b / self.a
        if chart == "st":
            return lead * (t ** (g + 1) - self.A) * (t ** (g + 1) - self.B)
        if chart == "ST":
            return lead * (1 - self.A * t ** (g + 1)) * (1 - self.B * t ** (g + 1))
        raise ValueError(f"unknown chart {chart!r}")


@dataclass(frozen=True)
class SurfaceChange:
    """Diagonal substitution mapping model coordinates back to the original
    fiber: orig_i = mult_i * model_i.  brauer_factor is the multiplicative
    factor the second slot of the quaternion class picks up under the
    substitution; it must be a nonzero rational square for the invariant
    to transport unchanged, and consumers assert that."""

    mults: tuple = (Fraction(1),) * 5  # (x, y, z, u, v)
    brauer_factor: Fraction = Fraction(1)

    @property
    def is_identity(self):
        return all(m == 1 for m in self.mults)

    def assert_square_factor(self):
        if is_rational_square(self.brauer_factor) is None:
            raise ArithmeticError(
                f"model change multiplies the quaternion slot by the non-square {self.brauer_factor}"
            )


@dataclass(frozen=True)
class DP4Surface:
    """Quadric pair x^2-az^2 = -b(u-Av)(u-Bv), x^2-ay^2 = -aC^2 uv."""

    a: Fraction
    b: Fraction
    A: Fraction
    B: Fraction
    C: Fraction
    genus: int
    coeffs: FamilyCoeffs | None = None
    change: SurfaceChange = SurfaceChange()

    def quadric_residuals(self, point):
        """The two quadric values at a 5-tuple (x, y, z, u, v); exact."""
        x, y, z, u, v = (Fraction(w) for w in point)
        q1 = x**2 - self.a * z**2 + self.b * (u - self.A * v) * (u - self.B * v)
        q2 = x**2 - self.a * y**2 + self.a * self.C**2 * u * v
        return q1, q2

    def quadric_matrices(self):
        """The two quadrics as symmetric 5x5 rational matrices in the
        coordinate order (x, y, z, u, v), so Q_i(P) = P^T M_i P."""
        a, b, A, B, C = self.a, self.b, self.A, self.B, self.C
        zero = Fraction(0)
        m1 = [[zero] * 5 for _ in range(5)]
        m1[0][0] = Fraction(1)
        m1[2][2] = -a
        m1[3][3] = b
        m1[3][4] = m1[4][3] = -b * (A + B) / 2
        m1[4][4] = b * A * B
        m2 = [[zero] * 5 for _ in range(5)]
        m2[0][0] = Fraction(1)
        m2[1][1] = -a
        m2[3][4] = m2[4][3] = a * C * C / 2
        return m1, m2


def build_curve(coeffs):
    check_nonvanishing(coeffs)
    p = coeffs.params
    return HyperellipticCurve(
        a=Fraction(p.a), b=Fraction(p.b), A=coeffs.A, B=coeffs.B, genus=p.g, coeffs=coeffs
    )


def build_surface(coeffs):
    check_nonvanishing(coeffs)
    p = coeffs.params
    return DP4Surface(
        a=Fraction(p.a),
        b=Fraction(p.b),
        A=coeffs.A,
        B=coeffs.B,
        C=coeffs.C,
        genus=p.g,
        coeffs=coeffs,
    )


def check_smooth_curve(curve):
    """Smoothness of the two-chart model: a, b, A, B, A-B all nonzero."""
    vals = (curve.a, curve.b, curve.A, curve.B, curve.A - curve.B)
    return all(v != 0 for v in vals)


def smoothness_quartic(a, b, A, B, C):
    """The obstruction to surface smoothness beyond coefficient nonvanishing."""
    return b**2 * (B - A) ** 2 + 2 * a * b * C**2 * (B - A) + 4 * a * b * C**2 * A + a**2 * C**4


def check_smooth_surface(surface):
    """Exact surface smoothness: nonzero coefficients and nonzero quartic."""
    a, b, A, B, C = surface.a, surface.b, surface.A, surface.B, surface.C
    if 0 in (a, b, A, B, C) or A == B:
        return False
    return smoothness_quartic(a, b, A, B, C) != 0


def delta_coords(chart, s, t, C, g):
    """Image of a curve point under the degree-(g+1)/2 map to the surface.

    Works over any commutative ring: coordinates are polynomial in the
    inputs.  Charts:
        st: (s, t)  ->  (0 : C t^((g+1)/2) : s : t^(g+1) : 1)
        ST: (S, T)  ->  (0 : C T^((g+1)/2) : S : 1 : T^(g+1))
    """
    if g % 2 == 0:
        raise ValueError("the curve-to-surface map needs odd genus")
    half = (g + 1) // 2
    if chart == "st":
        return (0 * t, C * t**half, s, t ** (g + 1), t**0)
    if chart == "ST":
        return (0 * t, C * t**half, s, t**0, t ** (g + 1))
    raise ValueError(f"unknown chart {chart!r}")


def delta_map(point, coeffs):
    """Exact-rational delta image of (chart, s, t) on the fiber of coeffs."""
    chart, s, t = point
    return delta_coords(chart, Fraction(s), Fraction(t), coeffs.C, coeffs.params.g)


def j_invariant(coeffs):
    """Exact j-invariant of a genus-1 fiber (the curve's Jacobian):

        j = 16 [ (A-B)^2 + 16 A B ]^3  /  ( A B (A-B)^4 ).
    """
    g = getattr(coeffs.params, "g", None) if coeffs.params is not None else 1
    if g != 1:
        raise ValueError("j-invariant is defined here only for genus 1")
    A, B = coeffs.A, coeffs.B
    den = A * B * (A - B) ** 4
    if den == 0:
        raise ZeroDivisionError("j-invariant denominator A B (A-B)^4 vanishes")
    return 16 * ((A - B) ** 2 + 16 * A * B) ** 3 / den


def _tilde_coeffs(params, theta, p, l):
    """Coefficients after clearing p^l from the denominator of theta.

    With theta = p^(-l) * thetatilde (thetatilde a p-adic unit):
        Dtilde = a^(2h+1) b^(2h+1) thetatilde^(g+1) - p^((g+1)l)
        Ctilde = a^(2h+1) thetatilde^(g+1) - p^((g+1)l)
        Atilde = a^(4h+3) thetatilde^(2g+2) + b c^2 d Dtilde^2
        Btilde = Atilde + 2 c Dtilde^2
    and Atilde = p^((2g+2)l) A, similarly for B; Ctilde = p^((g+1)l) C.
    """
    a, b, c, d = (Fraction(v) for v in (params.a, params.b, params.c, params.d))
    g, h = params.g, params.h
    tt = theta.value * Fraction(p) ** l
    pw = Fraction(p) ** ((g + 1) * l)
    Dt = a ** (2 * h + 1) * b ** (2 * h + 1) * tt ** (g + 1) - pw
    Ct = a ** (2 * h + 1) * tt ** (g + 1) - pw
    At = a ** (4 * h + 3) * tt ** (2 * g + 2) + b * c**2 * d * Dt**2
    Bt = At + 2 * c * Dt**2
    return At, Bt, Ct, Dt


def integral_model(curve, p):
    """A p-integral model of the curve with the substitution recorded.

    For v_p(theta) = -l < 0 the fiber coordinates are rescaled by
    (s, t) -> (p^(-(2g+2)l) s, p^(-2l) t), turning the structured
    coefficients into Atilde = p^((2g+2)l) A and Btilde likewise, which
    are p-adic integers.  Elsewhere the model is already integral.
    """
    coeffs = curve.coeffs
    if coeffs is None:
        return curve, CurveChange()
    theta = coeffs.theta
    g = curve.genus
    if theta.is_infinity or padic_val(theta.value, p) >= 0:
        return curve, CurveChange()
    l = -padic_val(theta.value, p)
    At, Bt, _, _ = _tilde_coeffs(coeffs.params, theta, p, l)
    change = CurveChange(
        s_mult=Fraction(1, p ** ((2 * g + 2) * l)), t_mult=Fraction(1, p ** (2 * l))
    )
    model = HyperellipticCurve(
        a=curve.a, b=curve.b, A=At, B=Bt, genus=g, coeffs=coeffs, change=change
    )
    return model, change


def admissible_model(surface, p, theta):
    """A model of the surface whose coefficients are p-adic integers, with
    the quaternion-class transport factor recorded (always a square).

    Cases:
      - theta = infinity: global v-rescaling by a^(-4h-2), giving the
        reduced coefficients A = a + b^(4h+3) c^2 d etc., valid at every p.
      - v_p(theta) >= 0: identity.
      - v_p(theta) = -l < 0, p != a: clear p^l from theta; coordinates
        (x,y,z,u) scale by p^((2g+2)l), the class by the square p^(-(2g+2)l).
      - p = a, v_a(theta) = -l < 0: with k = (g+1)l - (2h+1), the raw
        coefficients are already a-integral when k < 0; when k > 0 an
        extra a-power rescaling reduces A to a thetatilde^(2g+2) + ...
        (k = 0 cannot happen for odd g).
    """
    coeffs = surface.coeffs
    if coeffs is None:
        return surface, SurfaceChange()
    params = coeffs.params
    g, h = params.g, params.h
    a = Fraction(params.a)
    b, c, d = Fraction(params.b), Fraction(params.c), Fraction(params.d)

    if theta.is_infinity:
        scale = a ** (4 * h + 2)
        Adot = a + b ** (4 * h + 3) * c**2 * d
        Bdot = Adot + 2 * b ** (4 * h + 2) * c
        change = SurfaceChange(
            mults=(Fraction(1),) * 4 + (Fraction(1) / scale,),
            brauer_factor=scale,
        )
        change.assert_square_factor()
        model = DP4Surface(
            a=surface.a, b=surface.b, A=Adot, B=Bdot, C=Fraction(1),
            genus=g, coeffs=coeffs, change=change,
        )
        return model, change

    v = padic_val(theta.value, p)
    if v >= 0:
        return surface, SurfaceChange()
    l = -v

    if p != params.a:
        At, Bt, Ct, _ = _tilde_coeffs(params, theta, p, l)
        m = Fraction(1, p ** ((2 * g + 2) * l))
        change = SurfaceChange(
            mults=(m, m, m, m, Fraction(1)),
            brauer_factor=m,
        )
        change.assert_square_factor()
        model = DP4Surface(
            a=surface.a, b=surface.b, A=At, B=Bt, C=Ct,
            genus=g, coeffs=coeffs, change=change,
        )
        return model, change

    # p = a
    k = (g + 1) * l - (2 * h + 1)
    if k == 0:
        raise ArithmeticError("(g+1)l = 2h+1 is impossible for odd g")
    tt = theta.value * a**l
    if k < 0:
        # raw coefficients are a-integral already (rewritten form has
        # Dtilde = a^(-k) b^(2h+1) thetatilde^(g+1) - 1); keep identity
        return surface, SurfaceChange()
    # k > 0: rescale (x,y,z,u) by a^((2g+2)l - (4h+2))
    Dt = b ** (2 * h + 1) * tt ** (g + 1) - a**k
    Ct = tt ** (g + 1) - a**k
    At = a * tt ** (2 * g + 2) + b * c**2 * d * Dt**2
    Bt = At + 2 * c * Dt**2
    e = (2 * g + 2) * l - (4 * h + 2)
    m = Fraction(1) / a**e
    change = SurfaceChange(
        mults=(m, m, m, m, Fraction(1)),
        brauer_factor=m,
    )
    change.assert_square_factor()
    model = DP4Surface(
        a=surface.a, b=surface.b, A=At, B=Bt, C=Ct,
        genus=g, coeffs=coeffs, change=change,
    )
    return model, change
