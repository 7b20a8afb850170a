"""Acceptance suite: twelve criteria, each driven through a shipped gallery scenario.

Every criterion prints one PASS/FAIL line: under pytest in a terminal summary
section, and directly when run as ``python3 tests/test_acceptance.py``.
"""
import json
import sys
from functools import lru_cache

import pytest

from adicomp.cli import gallery_names, gallery_text
from adicomp.dsl import elaborate, parse_scenario
from adicomp.functors import derived_completion
from adicomp.report import load_report, report_verdicts, run_scenario, to_json, to_text
from adicomp.towers import pro_zero

LINES = {}


@lru_cache(maxsize=None)
def gallery(name):
    return run_scenario(parse_scenario(gallery_text(name)), name)


def tasks(name, task=None):
    return [t for t in gallery(name)["tasks"] if task is None or t["task"] == task]


def statuses(t):
    return {k: v["status"] for k, v in t["verdicts"].items()}


def record(number, title, check):
    """Run one criterion, print its line, re-raise on failure."""
    try:
        check()
        ok, why = True, ""
    except AssertionError as exc:
        ok, why = False, f" ({exc})" if str(exc) else ""
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}{why}"
    LINES[number] = line
    print(line, flush=True)
    assert ok, line


# ---------------------------------------------------------------- criteria

def c1():
    ts = tasks("koszul-selfdual", "koszul_selfdual")
    assert [t["command"].split()[1] for t in ts] == ["I2", "Ix", "Ixy"]
    for t in ts:
        assert t["verdicts"]["dual_is_shift"]["status"] == "holds", t["command"]
        assert t["result"]["dual_ranks"] == t["result"]["shifted_ranks"]


def c2():
    (t,) = tasks("regular-sequence", "koszul_homology")
    hom = t["result"]["homology"]
    assert hom == {"-2": "QQ[x, y]/(x, y)", "-1": "0", "0": "0"}, hom
    assert t["verdicts"]["concentrated"]["status"] == "holds"


def c3():
    ts = tasks("six-conditions-suite", "six_conditions")
    assert len(ts) >= 6
    wanted = {"U I", "K I", "N I", "M3 T", "Z T", "C T"}
    assert wanted <= {" ".join(t["command"].split()[1:3]) for t in ts}
    for t in ts:
        assert t["depth"] == 6
        certified = {s for s in statuses(t).values() if s != "undetermined"}
        assert len(certified) == 1, t["command"]
        assert not t["discrepancy"]


def c4():
    ts = tasks("gm-comparison", "gm_comparison")
    assert len(ts) >= 6
    for t in ts:
        st = statuses(t)
        assert st["H_0 pro-iso"] == "holds", t["command"]
        higher = [k for k in st if k != "H_0 pro-iso"]
        assert higher, t["command"]
        assert all(st[k] == "holds" for k in higher), t["command"]


def c5():
    profiles = {t["command"].split()[1]: t for t in tasks("Z-at-2", "profile")}
    order = ["separated", "adically_complete", "l0_complete", "derived_complete"]
    assert [statuses(profiles["M8"])[k] for k in order] == ["holds"] * 4
    assert [statuses(profiles["Z"])[k] for k in order] == ["holds"] + ["fails_up_to_depth"] * 3
    st3 = statuses(profiles["M3"])
    assert [st3[k] for k in ("separated", "l0_complete", "derived_complete")] == ["fails_up_to_depth"] * 3
    for t in profiles.values():
        for v in t["verdicts"].values():
            cert = v.get("witnesses") if v["status"] == "holds" else v.get("evidence")
            assert cert is not None, (t["command"], v)


def c6():
    ts = tasks("factorization", "factorization")
    assert len(ts) >= 6
    for t in ts:
        assert t["verdicts"]["surjective"]["status"] == "holds", t["command"]


def c7():
    (t,) = tasks("spectral-edge", "spectral_edge")
    wit = t["result"]["witnesses"]
    assert wit["-1"]["homology"] == "Z/2"
    assert t["verdicts"]["H_-1"]["status"] == "holds"
    assert wit["1"]["adic_stage_at_depth"] == "0"
    assert t["verdicts"]["H_1"]["status"] == "holds"
    env = elaborate(parse_scenario(gallery_text("spectral-edge")))
    lt = derived_completion(env["C"], env["T"], 6)
    assert pro_zero(lt.homology(1), 6).holds


def c8():
    (t,) = tasks("basechange-pos", "base_change")
    st = statuses(t)
    assert all(st[k] == "holds" for k in "bcd"), st
    assert (t["result"]["witnesses"]["p"], t["result"]["witnesses"]["q"]) == (1, 1)
    assert not t["discrepancy"]


def c9():
    rep = gallery("basechange-gap")
    (t,) = rep["tasks"]
    st = statuses(t)
    assert st["d"] == "holds" and st["b"] == "fails_up_to_depth" and st["c"] == "fails_up_to_depth", st
    assert t["discrepancy"] is True
    assert json.loads(to_json(rep))["tasks"][0]["discrepancy"] is True
    assert "DISCREPANCY" in to_text(rep)


def c10():
    pos, zd = tasks("wpr", "wpr")
    for t, shift in ((pos, 0), (zd, 1)):
        v = t["verdicts"]["H_0"]
        assert t["depth"] == 4
        assert v["status"] == "holds", t["command"]
        assert all(m == n + shift for n, m in v["witnesses"]), v["witnesses"]


def c11():
    ts = tasks("finite-oracle", "finite_oracle")
    assert {t["result"]["ring"] for t in ts} == {"Z/8", "F2[x]/(x^3)"}
    for t in ts:
        assert t["verdicts"]["oracle_agreement"]["status"] == "holds"
        assert t["result"]["comparisons"] == t["result"]["matches"] == 18 * 18 * 8
        assert set(t["result"]["by_operation"]) >= {"hom_0", "tensor_0", "tor_2", "ext_2"}


def c12():
    for name in gallery_names():
        first = to_json(gallery(name))
        second = to_json(run_scenario(parse_scenario(gallery_text(name)), name))
        assert first == second, f"{name} differs between runs"
        before = {k: v.to_dict() for k, v in report_verdicts(gallery(name)).items()}
        after = {k: v.to_dict() for k, v in report_verdicts(load_report(first)).items()}
        assert before == after, f"{name} verdicts changed in round trip"


CRITERIA = [
    (1, "Koszul self-duality (koszul-selfdual)", c1),
    (2, "regular-sequence concentration (regular-sequence)", c2),
    (3, "six-condition coherence at depth 6 (six-conditions-suite)", c3),
    (4, "GM comparison shadow (gm-comparison)", c4),
    (5, "completion profiles of Z, Z/8, Z/3 at (2) (Z-at-2)", c5),
    (6, "levelwise surjectivity of the comparison (factorization)", c6),
    (7, "spectral edge for K(2) + shifted K(3) (spectral-edge)", c7),
    (8, "base change Z -> Z[t]/(3t-1) (basechange-pos)", c8),
    (9, "base change gap detection (basechange-gap)", c9),
    (10, "weak pro-regularity probe (wpr)", c10),
    (11, "finite-ring oracle equivalence (finite-oracle)", c11),
    (12, "determinism and JSON round trip (all gallery scenarios)", c12),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    record(number, title, check)


def test_every_criterion_has_a_gallery_scenario():
    shipped = set(gallery_names())
    for _, title, _ in CRITERIA[:-1]:
        assert title.rsplit("(", 1)[1].rstrip(")") in shipped


if __name__ == "__main__":
    failed = 0
    for number, title, check in CRITERIA:
        try:
            record(number, title, check)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
