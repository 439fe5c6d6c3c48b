"""Evaluation and certification of the local invariants of the quaternion
class attached to each surface fiber, and assembly of the obstruction
certificate that rules out rational points.

The class is (a, b(u - Av)/v), with three further equivalent slot
expressions obtained from the defining quadrics; only the square class of
the slot matters, so every evaluation goes through Hilbert symbols on
exact rational representatives.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import (
    Place,
    _int_val,
    frac_mod,
    hilbert_symbol,
    is_local_square,
    legendre,
    padic_val,
    unit_part,
)
from .family import admissible_model
from .local import (
    SamplerBudgetExceeded,
    delta_surface_point,
    sample_surface_points,
)

HALF = Fraction(1, 2)
ZERO = Fraction(0)


class PrecisionError(ArithmeticError):
    """All slot representations were indeterminate at the available
    precision; carries the precision a retry should use."""

    def __init__(self, required):
        self.required = required
        super().__init__(f"slot values indeterminate; resample at precision {required}")


@dataclass(frozen=True)
class QuaternionClass:
    """The order-2 class (a, slot) with its four slot representations
    b(u-Av)/v, -(u-Bv)/v, b(u-Av)/(-au), -(u-Bv)/(-au): any two differ by
    a norm from Q(sqrt(a)) times a square, so their symbols agree at every
    point where both are defined and nonzero."""

    a: Fraction
    b: Fraction
    A: Fraction
    B: Fraction

    def slot_fractions(self, u, v):
        """The four representations at exact rational (u, v); entries are
        None where the value is zero or undefined."""
        out = []
        phi = u - self.A * v
        psi = u - self.B * v
        for num, den in ((self.b * phi, v), (-psi, v),
                         (self.b * phi, -self.a * u), (-psi, -self.a * u)):
            if den == 0 or num == 0:
                out.append(None)
            else:
                out.append(num / den)
        return out

    def slot_residues(self, u, v, p, prec):
        """Square-class representatives of the four representations at a
        residue point (u, v) mod p^prec; None where indeterminate."""
        pk = p**prec
        au = frac_mod(self.a, pk)
        A_, B_, b_ = frac_mod(self.A, pk), frac_mod(self.B, pk), frac_mod(self.b, pk)
        phi = (u - A_ * v) % pk
        psi = (u - B_ * v) % pk
        margin = 3 if p == 2 else 1
        out = []
        for num, den in ((b_ * phi % pk, v % pk), ((-psi) % pk, v % pk),
                         (b_ * phi % pk, (-au * u) % pk), ((-psi) % pk, (-au * u) % pk)):
            if num == 0 or den == 0:
                out.append(None)
                continue
            wn, wd = _int_val(num, p), _int_val(den, p)
            if wn > prec - 1 - margin or wd > prec - 1 - margin:
                out.append(None)
                continue
            un = (num // p**wn) % p ** (margin + 1)
            ud = (den // p**wd) % p ** (margin + 1)
            rep = Fraction(p) ** (wn - wd) * Fraction(un) / Fraction(ud)
            out.append(rep)
        return out


def quaternion_class(surface_model):
    return QuaternionClass(a=surface_model.a, b=surface_model.b,
                           A=surface_model.A, B=surface_model.B)


def evaluate_invariant_at_point(surface_model, point, place):
    """Invariant in {0, 1/2} of the class at one local point.

    Picks every representation whose square class is determined at the
    point's precision, asserts they agree, and converts the Hilbert symbol
    (a, slot)_v: +1 -> 0, -1 -> 1/2.
    """
    qc = quaternion_class(surface_model)
    u, v = point.coords[3], point.coords[4]
    if place.is_real:
        reps = qc.slot_fractions(Fraction(u), Fraction(v))
    else:
        reps = qc.slot_residues(int(u), int(v), place.p, point.prec)
    defined = [r for r in reps if r is not None]
    if not defined:
        raise PrecisionError((point.prec or 8) * 2)
    symbols = {hilbert_symbol(surface_model.a, r, place) for r in defined}
    if len(symbols) != 1:
        raise ArithmeticError(
            f"representations disagree at {place}: {reps} -> {symbols}"
        )
    return ZERO if symbols.pop() == 1 else HALF


def sample_invariant(surface_model, place, n, seed=0, extra_points=()):
    """Invariant at n independently sampled local points.

    Returns (value, consistent, count).  Points come from the direct
    sampler plus any caller-provided ones (delta images); if the sampler
    cannot reach n points within budget, whatever was obtained is used.
    """
    if n < 1:
        raise ValueError("sample count must be >= 1")
    pts = list(extra_points)
    try:
        need = max(0, n - len(pts))
        if need:
            pts.extend(sample_surface_points(surface_model, place, need, seed=seed))
    except (SamplerBudgetExceeded, ValueError):
        pass
    if not pts:
        raise SamplerBudgetExceeded(f"no local points available at {place}")
    values = []
    for pt in pts:
        while True:
            try:
                values.append(evaluate_invariant_at_point(surface_model, pt, place))
                break
            except PrecisionError as e:
                # escalate precision by doubling, capped at 64 digits
                if place.is_real or e.required > 64:
                    raise
                pt = sample_surface_points(surface_model, place, 1,
                                           seed=seed + 7, prec=e.required)[0]
    consistent = len(set(values)) == 1
    return values[0], consistent, len(values)


@dataclass
class InvariantCertificate:
    place: Place
    value: Fraction
    method: str
    hypothesis_trace: list = field(default_factory=list)
    sample_count: int = 0
    samples_consistent: bool = True
    warning: str = ""

    @property
    def rigorous(self):
        return self.method != "sampled" and all(ok for _, ok in self.hypothesis_trace)

    def to_json(self):
        return {
            "place": str(self.place),
            "value": "0" if self.value == 0 else "1/2",
            "method": self.method,
            "hypotheses": [[text, ok] for text, ok in self.hypothesis_trace],
            "sample_count": self.sample_count,
            "samples_consistent": self.samples_consistent,
            "warning": self.warning,
        }


def _trace(trace, text, ok):
    trace.append((text, bool(ok)))
    return bool(ok)


def certify_invariant(surface, place, theta):
    """Walk the per-place decision tree and certify the invariant value.

    Branches (hypotheses re-verified numerically, never assumed):
      prop-square: a is a local square, the class is locally trivial -> 0
      prop-good:   p odd, p does not divide 2ab(B-A), admissible -> 0
      prop-c:      p odd, p not dividing 2abC, a non-square, v_p(A) even,
                   unit part of A non-square -> 0
      prop-a:      v_p(a) = 1, p not dividing ABC(B-A), b a square,
                   B - A a non-square -> 1/2
    A fiber over verified parameters always lands in a branch; anything
    else falls back to sampling, marked non-rigorous.
    """
    params = surface.coeffs.params
    trace = []
    if place.is_real:
        if _trace(trace, "a > 0, so a is a real square", surface.a > 0):
            return InvariantCertificate(place, ZERO, "prop-square", trace)
        return _sampled_fallback(surface, place, trace, "negative a at the real place")
    p = place.p
    model, change = admissible_model(surface, p, theta)
    change.assert_square_factor()
    a = model.a
    if padic_val(a, p) == 0 and is_local_square(a, place):
        _trace(trace, f"a is a square in Q_{p}", True)
        return InvariantCertificate(place, ZERO, "prop-square", trace)
    if p == 2:
        _trace(trace, "a is a square in Q_2", False)
        return _sampled_fallback(surface, place, trace,
                                 "no deterministic branch at 2 when a is not a square")
    A, B, C = model.A, model.B, model.C
    va = padic_val(a, p)
    if va == 1:
        conds = [
            ("v_p(a) = 1", True),
            ("p does not divide A", padic_val(A, p) == 0),
            ("p does not divide B", padic_val(B, p) == 0),
            ("p does not divide C", padic_val(C, p) == 0),
            ("p does not divide B - A", padic_val(B - A, p) == 0),
            ("b is a square mod p", legendre(frac_mod(model.b, p), p) == 1),
            ("B - A is not a square mod p",
             padic_val(B - A, p) == 0 and legendre(frac_mod(B - A, p), p) == -1),
        ]
        if all(_trace(trace, t, ok) for t, ok in conds):
            return InvariantCertificate(place, HALF, "prop-a", trace)
        return _sampled_fallback(surface, place, trace, "prop-a hypotheses failed")
    # p odd, a a p-adic unit, a not a square (checked above)
    _trace(trace, "a is not a square mod p", True)
    vBA = padic_val(B - A, p)
    if vBA == 0:
        conds = [
            ("p does not divide 2ab", padic_val(2 * a * model.b, p) == 0),
            ("p does not divide B - A", True),
            ("model coefficients are p-integral",
             all(padic_val(x, p) >= 0 for x in (A, B, C) if x != 0)),
        ]
        if all(_trace(trace, t, ok) for t, ok in conds):
            return InvariantCertificate(place, ZERO, "prop-good", trace)
        return _sampled_fallback(surface, place, trace, "prop-good hypotheses failed")
    vA = padic_val(A, p)
    conds = [
        ("p does not divide 2ab", padic_val(2 * a * model.b, p) == 0),
        ("p does not divide C", padic_val(C, p) == 0),
        ("v_p(A) is even", A != 0 and vA % 2 == 0),
        ("the unit part of A is not a square mod p",
         A != 0 and legendre(frac_mod(unit_part(A, p), p), p) == -1),
    ]
    if all(_trace(trace, t, ok) for t, ok in conds):
        return InvariantCertificate(place, ZERO, "prop-c", trace)
    return _sampled_fallback(surface, place, trace, "no deterministic branch applies")


def _sampled_fallback(surface, place, trace, why):
    theta = surface.coeffs.theta
    p = None if place.is_real else place.p
    model = surface
    if p is not None:
        model, _ = admissible_model(surface, p, theta)
    value, consistent, count = sample_invariant(model, place, 10)
    return InvariantCertificate(
        place, value, "sampled", trace, sample_count=count,
        samples_consistent=consistent,
        warning=f"non-rigorous: {why}; value from sampling only",
    )


@dataclass
class ObstructionCertificate:
    fiber: dict
    table: dict  # Place -> InvariantCertificate
    total: Fraction
    conclusion: bool
    pullback: str
    blanket_statement: str
    notes: str = ""
    complete: bool = True

    def to_json(self):
        places = sorted(self.table, key=lambda pl: pl.sort_key())
        return {
            "fiber": self.fiber,
            "table": [self.table[pl].to_json() for pl in places],
            "sum": "0" if self.total == 0 else "1/2",
            "conclusion": self.conclusion,
            "pullback": self.pullback,
            "blanket": self.blanket_statement,
            "notes": self.notes,
            "complete": self.complete,
        }


def obstruction_certificate(curve, surface, local_result, samples=10, seed=0):
    """The per-place invariant table, its sum, and the final conclusion.

    Requires everywhere-local solvability (otherwise the adelic pairing is
    vacuous).  Every certified value is additionally confirmed on sampled
    local points (delta images of the curve witnesses plus direct samples);
    any disagreement or an unexpected table is a hard failure.
    """
    if not local_result.solvable_everywhere:
        raise ValueError("obstruction table needs everywhere-local solvability first")
    coeffs = surface.coeffs
    params = coeffs.params
    theta = coeffs.theta
    table = {}
    errors = []
    for place in local_result.critical.places:
        cert = certify_invariant(surface, place, theta)
        # sampling confirmation at every place
        model = surface
        if not place.is_real:
            model, _ = admissible_model(surface, place.p, theta)
        extra = []
        curve_cert = local_result.certificates.get(place)
        if curve_cert is not None and curve_cert.witness is not None:
            try:
                extra = [delta_surface_point(model, curve, place, curve_cert)]
            except (ArithmeticError, ValueError):
                extra = []
        try:
            sval, consistent, count = sample_invariant(
                model, place, samples, seed=seed, extra_points=extra
            )
            cert.sample_count = count
            cert.samples_consistent = consistent
            if not consistent:
                errors.append(f"samples disagree among themselves at {place}")
            if sval != cert.value:
                errors.append(
                    f"sampled value {sval} contradicts certified {cert.value} at {place}"
                )
        except SamplerBudgetExceeded:
            cert.warning = (cert.warning + "; " if cert.warning else "") + \
                "sampling unavailable at this place"
        table[place] = cert
    expected_half = {Place.finite(params.a)}
    support = {pl for pl, cert in table.items() if cert.value == HALF}
    if support != expected_half:
        errors.append(f"invariant support {sorted(str(pl) for pl in support)} "
                      f"is not exactly the place of a = {params.a}")
    total = sum((cert.value for cert in table.values()), start=ZERO)
    total = total - int(total)  # value in Q/Z
    blanket = (
        "at every place outside the critical set: p is odd, does not divide "
        "2ab, does not divide B - A = 2cD^2, and the defining equations are "
        "p-admissible, so the invariant vanishes by the good-reduction "
        "valuation argument"
    )
    conclusion = (not errors) and total == HALF and local_result.solvable_everywhere
    notes = ""
    if params.g == 1:
        notes = (
            "genus 1: the curve is a torsor under its Jacobian, trivial in "
            "every completion yet without rational points, hence a nonzero "
            "element of the Tate-Shafarevich group; a point over the quadratic "
            "extension at t = 0 bounds its order by 2"
        )
    if errors:
        notes = (notes + "; " if notes else "") + "; ".join(errors)
    pullback = (
        "the sum of local invariants is 1/2, nonzero in Q/Z, so the surface "
        "has no rational point; the curve maps to the surface through the "
        "degree-(g+1)/2 morphism, and the genus-1 intersection with the "
        "hyperplane x = 0 contains its image, so neither has a rational point"
    )
    return ObstructionCertificate(
        fiber=coeffs.to_json(),
        table=table,
        total=total,
        conclusion=conclusion,
        pullback=pullback,
        blanket_statement=blanket,
        notes=notes,
        complete=not errors,
    )
