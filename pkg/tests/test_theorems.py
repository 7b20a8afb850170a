import pytest
from hypothesis import given, strategies as st

from adicomp.complexes import BoundedComplex
from adicomp.modules import FpModule, ModuleMap
from adicomp.rings import Ideal, RingMap, integers, polynomial_ring
from adicomp.theorems import (
    RadicalPreconditionError,
    TheoremReport,
    base_change_suite,
    factorization_check,
    radical_invariance_check,
    six_conditions,
)

Z = integers()


def cyc(n):
    return FpModule(Z, 1, [[Z(n)]])


def statuses(rep):
    return {k: v.status for k, v in rep.conditions.items()}


def test_six_conditions_local_module_all_hold():
    R = polynomial_ring("QQ", ["x", "y"])
    M = FpModule.cyclic(Ideal(R, ["x - 1"]))
    rep = six_conditions(M, Ideal(R, ["x", "y"]), 6)
    assert set(statuses(rep).values()) == {"holds"}
    assert rep.consistency == "all_equivalent_observed"


def test_six_conditions_two_term_complex_all_fail():
    f = ModuleMap(FpModule.free(Z, 1), FpModule.free(Z, 1), [[Z(4)]])
    rep = six_conditions(BoundedComplex.two_term(f, 1), Ideal(Z, [2]), 6)
    assert set(statuses(rep).values()) == {"fails_up_to_depth"}
    assert not rep.discrepancy


def test_report_round_trip():
    rep = six_conditions(cyc(3), Ideal(Z, [2]), 4)
    back = TheoremReport.from_dict(rep.to_dict())
    assert back.to_dict() == rep.to_dict()


def test_factorization_on_sum():
    from adicomp.modules import direct_sum
    rep = factorization_check(direct_sum(FpModule.free(Z, 1), cyc(3)), Ideal(Z, [2]), 5)
    assert all(v.holds for v in rep.conditions.values())


def test_base_change_requires_radical_equality():
    R = polynomial_ring("QQ", ["x", "y"])
    with pytest.raises(RadicalPreconditionError):
        base_change_suite(RingMap.identity(R), Ideal(R, ["x"]), Ideal(R, ["y"]), 4)


def test_base_change_identity_holds():
    R = polynomial_ring("QQ", ["x"])
    rep = base_change_suite(RingMap.identity(R), Ideal(R, ["x"]), Ideal(R, ["x^2"]), 5)
    assert all(v.holds for v in rep.conditions.values())
    assert (rep.witnesses["p"], rep.witnesses["q"]) == (2, 1)


def test_base_change_localization_at_odd_prime():
    P = polynomial_ring("ZZ", ["t"])
    S = P.quotient(["5*t - 1"])
    rep = base_change_suite(RingMap(Z, S, []), Ideal(Z, [3]), Ideal(S, [3]), 5)
    assert all(v.holds for v in rep.conditions.values())


def test_radical_invariance_reports_both_generator_sets():
    rep = radical_invariance_check(cyc(8), [Z(2)], [3], 6)
    assert {k.split(":")[1] for k in rep.conditions} == {"first", "second"}
    assert not rep.discrepancy


@given(st.integers(1, 40))
def test_six_conditions_agree_on_cyclic_groups(m):
    rep = six_conditions(cyc(m), Ideal(Z, [2]), 5)
    certified = {v.status for v in rep.conditions.values() if v.certified}
    assert len(certified) <= 1
    # only odd-order groups are killed by K(2)
    assert rep.conditions["a"].holds == (m % 2 == 1)


@given(st.integers(1, 4), st.integers(1, 4))
def test_radical_invariance_over_powers(a, b):
    R = polynomial_ring("QQ", ["x", "y"])
    M = FpModule.cyclic(Ideal(R, ["x^2", "x*y"]))
    rep = radical_invariance_check(M, [R("x"), R("y")], [a, b], 4)
    assert not rep.discrepancy
