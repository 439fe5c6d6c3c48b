from fractions import Fraction

import pytest

from hassecert.arith import Place, hilbert_symbol
from hassecert.brauer import (
    HALF,
    ZERO,
    PrecisionError,
    certify_invariant,
    evaluate_invariant_at_point,
    obstruction_certificate,
    quaternion_class,
    sample_invariant,
)
from hassecert.family import Theta, admissible_model, build_curve, build_surface, fiber_coeffs
from hassecert.local import SurfacePoint, certify_all_local, sample_surface_points
from hassecert.params import sieve_params


PARAMS = sieve_params(1, 0, bound=10**7, count=1)[0]
CO_0 = fiber_coeffs(PARAMS, Theta.of(0))
CURVE_0 = build_curve(CO_0)
SURFACE_0 = build_surface(CO_0)


def test_invariant_zero_where_a_is_square():
    # at the real place and at 2, a is a local square: value 0 regardless
    for place in (Place.real(), Place.finite(2)):
        cert = certify_invariant(SURFACE_0, place, CO_0.theta)
        assert cert.value == ZERO
        assert cert.method == "prop-square"
        assert cert.rigorous


def test_invariant_half_exactly_at_a():
    cert = certify_invariant(SURFACE_0, Place.finite(PARAMS.a), CO_0.theta)
    assert cert.value == HALF
    assert cert.method == "prop-a"
    assert cert.rigorous
    texts = [t for t, ok in cert.hypothesis_trace]
    assert any("B - A is not a square" in t for t in texts)
    assert all(ok for _, ok in cert.hypothesis_trace)


def test_invariant_at_c_via_prop_c():
    cert = certify_invariant(SURFACE_0, Place.finite(PARAMS.c), CO_0.theta)
    assert cert.value == ZERO
    assert cert.method == "prop-c"
    # c^-2 A = bd must be a nonsquare mod c, and so must a
    from hassecert.arith import legendre

    assert legendre(PARAMS.b * PARAMS.d, PARAMS.c) == -1
    assert legendre(PARAMS.a, PARAMS.c) == -1


def test_invariant_at_infinity_fiber():
    co = fiber_coeffs(PARAMS, Theta.infinity())
    surface = build_surface(co)
    cert = certify_invariant(surface, Place.finite(PARAMS.a), co.theta)
    assert cert.value == HALF and cert.method == "prop-a"
    cert_c = certify_invariant(surface, Place.finite(PARAMS.c), co.theta)
    assert cert_c.value == ZERO and cert_c.method == "prop-c"


def test_sampled_values_agree_with_certified():
    for p in (PARAMS.a, PARAMS.c, 11):
        place = Place.finite(p)
        model, _ = admissible_model(SURFACE_0, p, CO_0.theta)
        cert = certify_invariant(SURFACE_0, place, CO_0.theta)
        value, consistent, count = sample_invariant(model, place, 10, seed=3)
        assert consistent and count >= 10
        assert value == cert.value, p


def test_representation_independence_on_samples():
    place = Place.finite(PARAMS.a)
    model, _ = admissible_model(SURFACE_0, PARAMS.a, CO_0.theta)
    pts = sample_surface_points(model, place, 8, seed=5)
    qc = quaternion_class(model)
    for pt in pts:
        reps = qc.slot_residues(int(pt.coords[3]), int(pt.coords[4]), PARAMS.a, pt.prec)
        defined = [r for r in reps if r is not None]
        assert len(defined) >= 2
        symbols = {hilbert_symbol(model.a, r, place) for r in defined}
        assert len(symbols) == 1


def test_real_evaluation_uses_exact_slots():
    pts = sample_surface_points(SURFACE_0, Place.real(), 5, seed=2)
    for pt in pts:
        val = evaluate_invariant_at_point(SURFACE_0, pt, Place.real())
        assert val == ZERO


def test_precision_error_on_degenerate_point():
    place = Place.finite(PARAMS.c)
    pt = SurfacePoint(place=place, coords=(0, 0, 0, 0, 0), prec=6)
    with pytest.raises(PrecisionError):
        evaluate_invariant_at_point(SURFACE_0, pt, place)


def test_sample_invariant_rejects_zero_count():
    with pytest.raises(ValueError):
        sample_invariant(SURFACE_0, Place.real(), 0)


def test_sampled_fallback_marked_non_rigorous():
    # synthetic coefficients outside the family: a non-square mod 5,
    # B - A divisible by 5, and C divisible by 5 defeat every branch
    from hassecert.family import DP4Surface

    surf = DP4Surface(a=Fraction(3), b=Fraction(1), A=Fraction(1),
                      B=Fraction(51), C=Fraction(5), genus=1,
                      coeffs=CO_0)
    cert = certify_invariant(surf, Place.finite(5), Theta.of(0))
    assert cert.method == "sampled"
    assert not cert.rigorous
    assert "non-rigorous" in cert.warning
    assert cert.sample_count >= 1


def test_quadric_matrix_export_consistency():
    import random

    rng = random.Random(31)
    m1, m2 = SURFACE_0.quadric_matrices()
    for _ in range(20):
        pt = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)) for _ in range(5)]
        q1, q2 = SURFACE_0.quadric_residuals(pt)
        e1 = sum(pt[i] * m1[i][j] * pt[j] for i in range(5) for j in range(5))
        e2 = sum(pt[i] * m2[i][j] * pt[j] for i in range(5) for j in range(5))
        assert (e1, e2) == (q1, q2)


def test_obstruction_certificate_theta_zero():
    res = certify_all_local(CURVE_0)
    obs = obstruction_certificate(CURVE_0, SURFACE_0, res)
    assert obs.conclusion and obs.complete
    assert obs.total == HALF
    support = [pl for pl, c in obs.table.items() if c.value == HALF]
    assert support == [Place.finite(PARAMS.a)]
    for pl, cert in obs.table.items():
        assert cert.sample_count >= 10
        assert cert.samples_consistent
    j = obs.to_json()
    assert j["sum"] == "1/2"
    assert j["conclusion"] is True
    assert "Tate-Shafarevich" in obs.notes


def test_obstruction_requires_local_solvability():
    res = certify_all_local(CURVE_0)
    res.solvable_everywhere = False
    with pytest.raises(ValueError):
        obstruction_certificate(CURVE_0, SURFACE_0, res)


def test_sum_invariance_25_random_thetas():
    import random

    rng = random.Random(9)
    seen = set()
    while len(seen) < 25:
        th = Theta.of(rng.randrange(-12, 13), rng.randrange(1, 5))
        seen.add(th)
    for th in sorted(seen, key=str):
        co = fiber_coeffs(PARAMS, th)
        curve, surface = build_curve(co), build_surface(co)
        res = certify_all_local(curve, sample_count=5)
        assert res.solvable_everywhere, str(th)
        obs = obstruction_certificate(curve, surface, res, samples=3)
        assert obs.total == HALF and obs.conclusion, str(th)
