from math import gcd

from hypothesis import assume, given, strategies as st

from adicomp.modules import (
    FpModule,
    ModuleMap,
    cokernel,
    direct_sum,
    hom,
    is_isomorphism,
    is_surjective,
    kernel,
    simplify,
    tensor,
)
from adicomp.rings import Ideal, integers, polynomial_ring
from adicomp.structure import annihilator, describe, invariant_factors
from strategies import int_matrices

Z = integers()


def cyc(n):
    return FpModule(Z, 1, [[Z(n)]])


def test_describe_canonical_forms():
    assert describe(cyc(8)) == "Z/8"
    assert describe(cyc(1)) == "0"
    assert describe(FpModule.free(Z, 2)) == "Z^2"
    assert describe(FpModule(Z, 2, [[Z(2), Z(4)], [Z(6), Z(8)]])) == "Z/2 ⊕ Z/4"


def test_cyclic_quotient_over_polynomials():
    R = polynomial_ring("QQ", ["x", "y"])
    M = FpModule.cyclic(Ideal(R, ["x", "y"]))
    assert describe(M) == "QQ[x, y]/(x, y)"


def test_hom_and_tensor_of_cyclic_groups():
    H, _ = hom(cyc(8), cyc(12))
    assert describe(H) == "Z/4"
    assert describe(tensor(cyc(8), cyc(12))) == "Z/4"
    assert describe(tensor(FpModule.free(Z, 2), cyc(3))) == "Z/3 ⊕ Z/3"


def test_kernel_and_cokernel_of_multiplication():
    f = ModuleMap(FpModule.free(Z, 1), cyc(12), [[Z(4)]])
    K, _ = kernel(f)
    C, _ = cokernel(f)
    assert describe(K) == "Z"
    assert describe(C) == "Z/4"


def test_simplify_drops_unit_relations():
    M = FpModule(Z, 2, [[Z(1), Z(3)], [Z(0), Z(5)]])
    S, to_s, from_s = simplify(M)
    assert S.ngens == 1
    assert is_isomorphism(to_s)
    assert describe(S) == "Z/5"


def test_annihilator():
    assert str(annihilator(direct_sum(cyc(4), cyc(6)))) in ("(12)", "(-12)")


@given(st.integers(1, 40), st.integers(1, 40))
def test_hom_tensor_cyclic_orders(a, b):
    g = gcd(a, b)
    H, _ = hom(cyc(a), cyc(b))
    assert describe(H) == describe(cyc(g))
    assert describe(tensor(cyc(a), cyc(b))) == describe(cyc(g))


@given(int_matrices())
def test_invariant_factors_match_determinantal_divisors(m):
    d = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    assume(d != 0)
    M = FpModule(Z, 2, [[Z(v) for v in row] for row in m])
    tors, free = invariant_factors(M)
    assert free == 0
    d1 = gcd(*[abs(v) for row in m for v in row])
    full = [1] * (2 - len(tors)) + [abs(t) for t in tors]
    assert full[0] == d1
    assert full[0] * full[1] == abs(d)


@given(int_matrices(2, 3, 6))
def test_simplify_is_isomorphism(m):
    M = FpModule(Z, 3, [[Z(v) for v in row] for row in m])
    S, to_s, from_s = simplify(M)
    assert is_isomorphism(to_s)
    assert describe(S) == describe(M)
    for i in range(3):
        assert M.equal_elements(from_s.apply(to_s.apply(M.gen(i))), M.gen(i))


@given(st.integers(2, 30), st.integers(1, 30))
def test_projection_onto_quotient_is_surjective(a, k):
    f = ModuleMap(FpModule.free(Z, 1), cyc(a), [[Z(k)]])
    assert is_surjective(f) == (gcd(a, k) == 1)
