from hypothesis import given, strategies as st

from adicomp.functors import (
    adic_tower,
    completeness_profile,
    derived_completion,
    derived_torsion,
    gm_comparison,
    interleaving_certificate,
    l_functor,
)
from adicomp.modules import FpModule, direct_sum
from adicomp.rings import Ideal, integers, polynomial_ring
from adicomp.structure import describe
from adicomp.towers import ind_zero, pro_iso, pro_zero

Z = integers()
TWO = Ideal(Z, [2])


def cyc(n):
    return FpModule(Z, 1, [[Z(n)]])


def test_adic_tower_of_integers():
    A = adic_tower(FpModule.free(Z, 1), TWO, 5)
    assert [describe(A.stage(n)) for n in range(1, 6)] == ["Z/2", "Z/4", "Z/8", "Z/16", "Z/32"]


def test_adic_tower_stabilizes_on_torsion():
    A = adic_tower(direct_sum(cyc(8), cyc(3)), TWO, 5)
    assert [describe(A.stage(n)) for n in range(1, 6)] == ["Z/2", "Z/4", "Z/8", "Z/8", "Z/8"]


def test_lambda_and_gamma_of_integers():
    lt = derived_completion(FpModule.free(Z, 1), [Z(2)], 5)
    assert [describe(lt.homology(0).stage(n)) for n in range(1, 5)] == ["Z/2", "Z/4", "Z/8", "Z/16"]
    assert pro_zero(lt.homology(1), 5).holds
    S = derived_torsion(FpModule.free(Z, 1), [Z(2)], 5)
    assert [describe(S.homology(-1).stage(n)) for n in range(1, 4)] == ["Z/2", "Z/4", "Z/8"]
    assert ind_zero(S.homology(0), 5).holds


def test_gamma_of_torsion_module_is_not_ind_zero():
    S = derived_torsion(cyc(4), [Z(2)], 6)
    assert ind_zero(S.homology(0), 6).fails


def test_interleaving_certificate():
    R = polynomial_ring("QQ", ["x", "y"])
    cert = interleaving_certificate(Ideal(R, ["x", "y"]), 3)
    assert cert["ok"]
    assert cert["lower"][2][:2] == [3, 5]


def test_l_functors():
    assert l_functor(cyc(8), TWO, 0, 6).to_dict()["value"] == "Z/8"
    assert l_functor(cyc(3), TWO, 0, 6).to_dict()["value"] == "0"
    assert l_functor(FpModule.free(Z, 1), TWO, 1, 6).verdict.holds


def test_profiles():
    p = completeness_profile(FpModule.free(Z, 1), TWO, 6).verdicts()
    assert [p[k].status for k in ("separated", "adically_complete", "l0_complete", "derived_complete")] == \
        ["holds", "fails_up_to_depth", "fails_up_to_depth", "fails_up_to_depth"]
    p = completeness_profile(cyc(8), TWO, 6).verdicts()
    assert all(v.holds for v in p.values())
    p = completeness_profile(cyc(3), TWO, 6).verdicts()
    assert p["separated"].fails and p["l0_complete"].fails and p["derived_complete"].fails


def test_profile_over_polynomial_ring():
    R = polynomial_ring("QQ", ["x"])
    I = Ideal(R, ["x"])
    M = FpModule.cyclic(Ideal(R, ["x^2"]))
    prof = completeness_profile(M, I, 6)
    assert all(v.holds for v in prof.verdicts().values())
    assert prof.implications_ok


def _v2(a):
    return (a & -a).bit_length() - 1


@given(st.integers(1, 100))
def test_gm_comparison_on_cyclic_groups(a):
    # the vanishing gap is the 2-adic valuation, so depth v2 + 2 always certifies
    depth = max(6, _v2(a) + 2)
    f, lt, A = gm_comparison(cyc(a), TWO, depth)
    assert pro_iso(f, depth).holds
    for i in lt.degrees():
        if i >= 1:
            assert pro_zero(lt.homology(i), depth).holds


def test_wide_gap_is_undetermined_until_depth_grows():
    assert completeness_profile(cyc(32), TWO, 6).verdicts()["derived_complete"].status == "undetermined"
    assert completeness_profile(cyc(32), TWO, 8).verdicts()["derived_complete"].holds


@given(st.integers(0, 4), st.integers(0, 5))
def test_torsion_profile_matches_odd_part(e, odd_part):
    # Z/m at (2) is complete in every sense iff m is a power of two
    m = 2 ** e * (2 * odd_part + 1)
    prof = completeness_profile(cyc(m), TWO, 6).verdicts()
    assert prof["separated"].holds == (odd_part == 0)
    assert prof["derived_complete"].holds == (odd_part == 0)
