import pytest

from hassecert.arith import is_prime, legendre
from hassecert.params import (
    ParamSet,
    SieveExhausted,
    omega0_for_genus,
    sieve_params,
    verify_conditions,
)


def test_omega0_examples():
    assert omega0_for_genus(1) == (3,)
    assert omega0_for_genus(3) == (3, 5, 7, 11, 13, 17, 19, 23, 29, 31)
    o5 = omega0_for_genus(5)
    assert all(p <= 100 and p % 2 == 1 and is_prime(p) for p in o5)
    assert len(o5) == 24
    with pytest.raises(ValueError):
        omega0_for_genus(2)


def test_verify_rejects_equal_primes():
    ps = ParamSet(a=73, b=73, c=5, d=11, omega0=(3,), g=1, h=0)
    rep = verify_conditions(ps)
    assert not rep.ok
    assert any(i == "i.distinct" for i, _ in rep.failures())


def test_verify_rejects_5_mod_8():
    # 13 = 5 mod 8 can never be a 2-adic square
    ps = ParamSet(a=13, b=73, c=5, d=11, omega0=(3,), g=1, h=0)
    rep = verify_conditions(ps)
    bad = {i for i, _ in rep.failures()}
    assert "ii.a-mod8" in bad and "iii.a-mod8-congruence" in bad


def test_sieve_g1_first_quadruple():
    (ps,) = sieve_params(1, 0, bound=10**7, count=1)
    assert ps.b % 24 == 1  # b = 1 mod 8 and a square mod 3 forces 1 mod 24
    assert verify_conditions(ps).ok
    assert ps.b == 73 and ps.a == 1753  # smallest admissible values
    assert ps.full_family_ok


def test_sieve_g1_five_distinct():
    quads = sieve_params(1, 0, bound=10**7, count=5)
    assert len(quads) == 5
    keys = {(ps.b, ps.d) for ps in quads}
    assert len(keys) == 5  # pairwise distinct b or d
    for ps in quads:
        assert verify_conditions(ps).ok


def test_sieve_low_bound_exhausts_at_b():
    with pytest.raises(SieveExhausted) as ei:
        sieve_params(1, 0, bound=50, count=1)
    assert ei.value.slot == "b"


def test_sieve_determinism():
    one = sieve_params(1, 0, bound=10**7, count=3)
    two = sieve_params(1, 0, bound=10**7, count=3)
    assert one == two


def test_condition_iv_vi_symbol_consistency():
    # bc^2d = 1 mod a forces legendre(bc^2d, a) = +1; the recorded symbols
    # must multiply to the same value
    for ps in sieve_params(1, 0, bound=10**7, count=3):
        prod = legendre(ps.b, ps.a) * legendre(ps.c, ps.a) ** 2 * legendre(ps.d, ps.a)
        assert prod == legendre(ps.b * ps.c**2 * ps.d, ps.a) == 1


def test_reciprocity_crosscheck():
    # a = 1 mod 8 makes the symbols symmetric between a and b
    for ps in sieve_params(1, 0, bound=10**7, count=3):
        assert legendre(ps.a, ps.b) == legendre(ps.b, ps.a)


def test_json_roundtrip():
    (ps,) = sieve_params(1, 0, bound=10**7, count=1)
    assert ParamSet.loads(ps.dumps()) == ps
    obj = ps.to_json()
    assert all(isinstance(v, str) for k, v in obj.items() if k != "omega0")
    assert all(isinstance(q, str) for q in obj["omega0"])


def test_sieve_g1_h1_same_quadruples():
    # the conditions do not involve h
    q0 = sieve_params(1, 0, bound=10**7, count=1)[0]
    q1 = sieve_params(1, 1, bound=10**7, count=1)[0]
    assert (q0.a, q0.b, q0.c, q0.d) == (q1.a, q1.b, q1.c, q1.d)
    assert q1.h == 1


def test_sieve_g3_large_bound():
    (ps,) = sieve_params(3, 0, bound=10**12, count=1)
    assert verify_conditions(ps).ok
    assert not ps.full_family_ok  # g = 3 mod 4
