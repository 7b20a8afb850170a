import json

from hypothesis import given, strategies as st

from adicomp.modules import FpModule, ModuleMap
from adicomp.rings import integers
from adicomp.towers import (
    FAILS,
    HOLDS,
    UNDETERMINED,
    FailsUpToDepth,
    Holds,
    IndSystem,
    LevelMap,
    Tower,
    Undetermined,
    Verdict,
    conjunction,
    ind_zero,
    ml_lim_diagnostics,
    pro_iso,
    pro_zero,
    revalidate,
)

Z = integers()


def cyc(n):
    return FpModule(Z, 1, [[Z(n)]])


def nilpotent_tower(p, a):
    """Constant Z/p^a with multiplication by p: every a-fold composite vanishes."""
    M = cyc(p ** a)
    return Tower(lambda n: M, lambda n: ModuleMap(M, M, [[Z(p)]]))


def nilpotent_ind(p, a):
    M = cyc(p ** a)
    return IndSystem(lambda n: M, lambda n: ModuleMap(M, M, [[Z(p)]]))


def truncations(p):
    """Z/p^n with the canonical projections."""
    return Tower(lambda n: cyc(p ** n), lambda n: ModuleMap(cyc(p ** (n + 1)), cyc(p ** n), [[Z(1)]]))


def test_constant_nonzero_tower_fails():
    v = pro_zero(Tower.constant(cyc(5)), 6)
    assert v.status == FAILS
    assert v.evidence["surviving_generators"] == [0]


def test_zero_tower_holds_with_gap_zero():
    v = pro_zero(Tower.constant(FpModule.zero(Z)), 4)
    assert v.holds and v.evidence["gap"] == 0


def test_gap_too_wide_is_undetermined():
    v = pro_zero(nilpotent_tower(2, 5), 6)
    assert v.status == UNDETERMINED


def test_truncation_tower_is_mittag_leffler_but_not_constant():
    d = ml_lim_diagnostics(truncations(2), 6)
    assert d["ml"].holds
    assert d["lim1_zero"].holds
    assert d["constant_from"] is None


def test_constant_tower_limit():
    d = ml_lim_diagnostics(Tower.constant(cyc(8)), 6)
    assert d["constant_from"] == 1
    assert d["lim"].ngens == 1


def test_pro_iso_detects_cokernel():
    T = truncations(3)
    zero = Tower.constant(FpModule.zero(Z))
    f = LevelMap(zero, T, lambda n: ModuleMap(FpModule.zero(Z), T.stage(n), []))
    v = pro_iso(f, 5)
    assert v.fails and "cokernel" in v.note


def test_conjunction():
    h, f, u = Holds(4), FailsUpToDepth(4), Undetermined(4)
    assert conjunction([h, h], 4).holds
    assert conjunction([h, u, f], 4).fails
    assert conjunction([h, u], 4).status == UNDETERMINED


@given(st.integers(2, 5), st.integers(1, 3), st.integers(0, 3))
def test_nilpotent_tower_gap(p, a, extra):
    depth = a + 2 + extra
    v = pro_zero(nilpotent_tower(p, a), depth)
    assert v.holds
    assert v.evidence["gap"] == a
    assert revalidate(nilpotent_tower(p, a), v)


@given(st.integers(2, 5), st.integers(1, 3), st.integers(0, 3))
def test_nilpotent_ind_system_gap(p, a, extra):
    depth = a + 2 + extra
    v = ind_zero(nilpotent_ind(p, a), depth)
    assert v.holds and v.evidence["gap"] == a
    assert revalidate(nilpotent_ind(p, a), v)


@given(st.integers(2, 5), st.integers(1, 3), st.integers(4, 8))
def test_pro_zero_invariant_under_reindexing(p, a, depth):
    T = nilpotent_tower(p, a)
    assert pro_zero(T, depth).status == pro_zero(T.drop_first(), depth).status


@given(st.integers(2, 7), st.integers(3, 7))
def test_identity_is_pro_iso(p, depth):
    T = truncations(p)
    ident = LevelMap(T, T, lambda n: ModuleMap.identity(T.stage(n)))
    v = pro_iso(ident, depth)
    assert v.holds and v.evidence["shift"] == 0


@given(st.sampled_from([HOLDS, FAILS, UNDETERMINED]), st.integers(2, 12),
       st.lists(st.lists(st.integers(0, 9), min_size=2, max_size=2), max_size=4), st.text(max_size=20))
def test_verdict_json_round_trip(status, depth, wit, note):
    v = Verdict(status, depth, wit if status == HOLDS else None, {"k": 1}, note)
    back = Verdict.from_dict(json.loads(json.dumps(v.to_dict())))
    assert back.to_dict() == v.to_dict()
