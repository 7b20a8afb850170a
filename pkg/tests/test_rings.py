from hypothesis import given, strategies as st

from adicomp.coeffs import GF, mono_key_function, mono_div, mono_lcm
from adicomp.rings import Ideal, RingMap, integers, integers_mod, polynomial_ring
from strategies import F3, QX, polys


def _lead(f):
    key = mono_key_function(f.ring.order)
    m = max(f.terms, key=key)
    return m, f.terms[m]


def _spoly(f, g):
    R = f.ring
    (mf, cf), (mg, cg) = _lead(f), _lead(g)
    lcm = mono_lcm(mf, mg)

    def mono(m):
        out = R.one
        for v, e in zip(R.gens(), m):
            out = out * v ** e
        return out

    return R(cg) * mono(mono_div(lcm, mf)) * f - R(cf) * mono(mono_div(lcm, mg)) * g


def test_basic_arithmetic_and_printing():
    R = polynomial_ring("QQ", ["x", "y"])
    x, y = R.gens()
    assert str((x + y) ** 2) == "x^2 + 2*x*y + y^2"
    assert (x - x).is_zero()
    assert R("1/2") * 2 == R.one


def test_integer_ideal_is_principal_gcd():
    Z = integers()
    assert str(Ideal(Z, [4, 6]).groebner_basis()) == "(2)"
    assert Ideal(Z, [3, 5]).is_unit()


def test_quotient_ring_reduces():
    R = polynomial_ring("QQ", ["x"]).quotient(["x^3"])
    assert (R("x") ** 3).is_zero()
    assert str(R("x^4 + x")) == "x"


def test_integers_mod_units():
    R = integers_mod(8)
    assert R.unit_inverse(R(3)) == R(3)
    assert R.unit_inverse(R(2)) is None


def test_strong_basis_over_integers_membership():
    R = polynomial_ring("ZZ", ["x"])
    I = Ideal(R, ["2*x", "3"])
    assert I.contains_element(R("x"))
    assert not I.contains_element(R("1"))


def test_radical_membership():
    R = polynomial_ring("QQ", ["x", "y"])
    I = Ideal(R, ["x^2", "y^3"])
    assert I.radical_member(R("x + y"))
    assert not I.radical_member(R("x + 1"))


def test_ring_map_and_ideal_image():
    R = polynomial_ring("QQ", ["x"])
    S = polynomial_ring("QQ", ["t"])
    theta = RingMap(R, S, ["t^2"])
    assert str(theta(R("x + 1"))) == "t^2 + 1"
    assert str(Ideal(R, ["x"]).map(theta)) == "(t^2)"


def test_ring_map_rejects_bad_relation():
    R = polynomial_ring("QQ", ["x"]).quotient(["x^2"])
    S = polynomial_ring("QQ", ["t"])
    try:
        RingMap(R, S, ["t"])
    except ValueError as exc:
        assert "relation" in str(exc)
    else:
        raise AssertionError("expected ValueError")


def test_gf_inverse():
    F = GF(7)
    assert F.norm(3 * F.inv(3)) == 1


@given(st.lists(polys(QX), min_size=1, max_size=3))
def test_spolys_reduce_to_zero_over_q(gens):
    I = Ideal(QX, gens)
    G = I.groebner_basis()
    for i, f in enumerate(G.gens):
        for g in G.gens[i + 1:]:
            assert I.normal_form(_spoly(f, g)).is_zero()


@given(st.lists(polys(F3, max_exp=2), min_size=1, max_size=3))
def test_spolys_reduce_to_zero_over_gf3(gens):
    I = Ideal(F3, gens)
    G = I.groebner_basis()
    for i, f in enumerate(G.gens):
        for g in G.gens[i + 1:]:
            assert I.normal_form(_spoly(f, g)).is_zero()


@given(st.lists(polys(QX), min_size=1, max_size=2), polys(QX), polys(QX))
def test_ideal_absorbs_multiples(gens, a, b):
    I = Ideal(QX, gens)
    f = a * gens[0] + b * gens[-1]
    assert I.contains_element(f)
    assert I.normal_form(f).is_zero()


@given(polys(QX), polys(QX))
def test_normal_form_is_idempotent_and_additive(f, g):
    I = Ideal(QX, ["x^2 - y", "x*y - 1"])
    nf = I.normal_form
    assert nf(nf(f)) == nf(f)
    assert nf(f + g) == nf(nf(f) + nf(g))


@given(st.integers(-50, 50).filter(bool), st.integers(-50, 50).filter(bool))
def test_integer_ideal_contains_gcd(a, b):
    from math import gcd
    Z = integers()
    I = Ideal(Z, [a, b])
    assert I.contains_element(Z(gcd(a, b)))
    assert I.groebner_basis().gens == (Z(gcd(a, b)),)
