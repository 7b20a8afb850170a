from hypothesis import given, strategies as st

from adicomp.koszul import (
    KoszulSpec,
    directed_transition,
    double_dual,
    dual_koszul,
    inverse_transition,
    koszul_complex,
    koszul_on,
    koszul_tower,
    wpr_probe,
)
from adicomp.rings import integers, polynomial_ring
from adicomp.structure import describe
from strategies import QX, polys

Z = integers()


def test_koszul_layout():
    K = koszul_on(Z, [Z(2), Z(3)])
    assert K.ranks() == {-2: 1, -1: 2, 0: 1}


def test_powered_generators():
    spec = KoszulSpec(Z, (Z(2),), 3)
    assert [int(g.constant_value()) for g in spec.powered()] == [8]


def test_regular_sequence_homology():
    R = polynomial_ring("QQ", ["x", "y"])
    K = koszul_on(R, R.gens())
    assert describe(K.homology(-2)) == "QQ[x, y]/(x, y)"
    assert describe(K.homology(-1)) == "0"
    assert describe(K.homology(0)) == "0"


def test_non_regular_sequence_has_middle_homology():
    R = polynomial_ring("QQ", ["x", "y"]).quotient(["x*y"])
    K = koszul_on(R, [R("x")])
    assert describe(K.homology(0)) != "0"


def test_transitions_are_chain_maps_with_expected_components():
    spec = KoszulSpec(Z, (Z(2),), 1)
    f = inverse_transition(spec, 3, 1)
    assert f.component(0).matrix[0][0] == Z(4)
    assert f.component(-1).matrix[0][0] == Z(1)
    g = directed_transition(spec, 1, 3)
    assert g.component(-1).matrix[0][0] == Z(4)


def test_tower_stage_homology():
    T = koszul_tower(Z, [Z(2)], 4, "inverse")
    assert describe(T.stage(3).homology(-1)) == "Z/8"


def test_wpr_in_polynomial_ring_has_diagonal_witness():
    R = polynomial_ring("QQ", ["x"])
    v = wpr_probe(R, [R("x")], 4)[0]
    assert v.holds
    assert all(m == n for n, m in v.witnesses)


def test_wpr_needs_one_step_when_x_is_a_zero_divisor():
    R = polynomial_ring("QQ", ["x", "y"]).quotient(["x*y"])
    v = wpr_probe(R, [R("x")], 4)[0]
    assert v.holds
    assert all(m == n + 1 for n, m in v.witnesses)


@given(st.lists(st.integers(-12, 12).filter(bool), min_size=1, max_size=3), st.integers(1, 3))
def test_dual_is_shifted_koszul_over_integers(xs, n):
    spec = KoszulSpec(Z, tuple(Z(x) for x in xs), n)
    assert dual_koszul(spec).iso_verified()
    _, iso = double_dual(spec)
    assert iso.is_degreewise_iso()


@given(st.lists(polys(QX, max_terms=2, max_exp=2), min_size=1, max_size=2))
def test_dual_is_shifted_koszul_over_polynomials(gens):
    spec = KoszulSpec(QX, tuple(gens), 1)
    dk = dual_koszul(spec)
    assert dk.iso_verified()
    assert dk.complex.ranks() == dk.shifted.ranks()


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_inverse_transitions_compose(a, b, c):
    spec = KoszulSpec(Z, (Z(2), Z(3)), 1)
    lo, mid, hi = sorted((a, b, c))
    left = inverse_transition(spec, mid, lo)
    right = inverse_transition(spec, hi, mid)
    assert (left @ right).equals(inverse_transition(spec, hi, lo))


def test_koszul_complex_matches_koszul_on():
    spec = KoszulSpec(Z, (Z(2), Z(5)), 2)
    assert koszul_complex(spec).ranks() == koszul_on(Z, spec.powered()).ranks()
