from hypothesis import given, strategies as st

from adicomp.complexes import (
    BoundedComplex,
    ChainMap,
    complex_sum,
    derived_binary,
    free_resolution,
    hom_complex,
    shift,
    tensor_complexes,
)
from adicomp.koszul import koszul_on
from adicomp.modules import FpModule, ModuleMap
from adicomp.rings import integers, polynomial_ring
from adicomp.structure import describe
from strategies import QX, polys

Z = integers()


def cyc(n):
    return FpModule(Z, 1, [[Z(n)]])


def _dd_zero(C):
    return all((C.differential(n - 1) @ C.differential(n)).is_zero() for n in range(C.lo + 2, C.hi + 1))


def test_two_term_homology():
    f = ModuleMap(FpModule.free(Z, 1), FpModule.free(Z, 1), [[Z(4)]])
    C = BoundedComplex.two_term(f, 1)
    assert describe(C.homology(0)) == "Z/4"
    assert describe(C.homology(1)) == "0"


def test_shift_moves_homology():
    C = koszul_on(Z, [Z(3)])
    assert describe(shift(C, 2).homology(1)) == "Z/3"


def test_tor_and_ext_of_cyclic_groups():
    tor = derived_binary(cyc(4), cyc(6), "tensor")
    assert describe(tor.homology(1)) == "Z/2"
    ext = derived_binary(cyc(4), cyc(6), "hom")
    assert describe(ext.homology(-1)) == "Z/2"
    assert describe(ext.homology(0)) == "Z/2"


def test_resolution_of_residue_field_is_koszul_shaped():
    R = polynomial_ring("QQ", ["x", "y"])
    from adicomp.rings import Ideal
    res = free_resolution(FpModule.cyclic(Ideal(R, ["x", "y"])))
    assert res.complete
    assert res.complex.ranks() == {0: 1, 1: 2, 2: 1}


def test_chain_map_checks_commutativity():
    C = koszul_on(Z, [Z(2)])
    try:
        ChainMap(C, C, {0: ModuleMap(C.term(0), C.term(0), [[Z(2)]])})
    except ValueError:
        pass
    else:
        raise AssertionError("non-commuting map accepted")


@given(st.lists(polys(QX, max_terms=2, max_exp=2), min_size=1, max_size=2),
       st.lists(polys(QX, max_terms=2, max_exp=2), min_size=1, max_size=2))
def test_d_squared_zero_for_tensor_and_hom(a, b):
    K, L = koszul_on(QX, a), koszul_on(QX, b)
    assert _dd_zero(tensor_complexes(K, L))
    assert _dd_zero(hom_complex(K, L))
    assert _dd_zero(complex_sum(K, shift(L, 1)))


@given(st.lists(st.integers(-9, 9).filter(bool), min_size=1, max_size=3))
def test_euler_characteristic_of_koszul_is_zero(xs):
    K = koszul_on(Z, [Z(x) for x in xs])
    chi = sum((-1) ** n * r for n, r in K.ranks().items())
    assert chi == 0


@given(st.integers(2, 30), st.integers(2, 30))
def test_tensor_of_two_term_complexes_computes_tor(a, b):
    from math import gcd
    A = koszul_on(Z, [Z(a)])
    B = koszul_on(Z, [Z(b)])
    T = tensor_complexes(A, B)
    g = gcd(a, b)
    assert describe(T.homology(-2)) == describe(cyc(g))
    assert describe(T.homology(-1)) == describe(cyc(g))
