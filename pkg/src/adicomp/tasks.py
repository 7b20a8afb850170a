"""Execution of scenario tasks against elaborated objects."""
from __future__ import annotations

from typing import Any, Callable, Dict, Tuple

from .complexes import BoundedComplex
from .dsl import ORACLE_RINGS, Task
from .functors import (
    adic_tower,
    completeness_profile,
    derived_completion,
    derived_torsion,
    gm_comparison,
    l_functor,
)
from .koszul import KoszulSpec, double_dual, dual_koszul, koszul_on, wpr_probe
from .modules import FpModule
from .rings import Ring
from .structure import describe
from .theorems import (
    base_change_suite,
    factorization_check,
    radical_invariance_check,
    six_conditions,
    spectral_edge,
)
from .towers import DEFAULT_DEPTH, FailsUpToDepth, Holds, Verdict, ind_zero, ml_lim_diagnostics, pro_iso, pro_zero

TaskOutcome = Tuple[Dict[str, Any], Dict[str, Verdict], bool]

DEFAULT_DEPTHS = {"wpr": 4}


def _module(v):
    return FpModule.free(v, 1) if isinstance(v, Ring) else v


def _arg(env, task: Task, i: int):
    return _module(env[task.args[i].name])


def task_depth(task: Task, override) -> int:
    if override is not None:
        return override
    return task.params.get("depth", DEFAULT_DEPTHS.get(task.name, DEFAULT_DEPTH))


def _report(rep) -> TaskOutcome:
    result = rep.to_dict()
    result.pop("conditions", None)
    return result, dict(rep.conditions), rep.discrepancy


def _profile(env, t, d):
    cp = completeness_profile(_arg(env, t, 0), env[t.args[1].name], d)
    return cp.to_dict(), cp.verdicts(), False


def _six(env, t, d):
    return _report(six_conditions(_arg(env, t, 0), env[t.args[1].name], d))


def _factorization(env, t, d):
    return _report(factorization_check(_arg(env, t, 0), env[t.args[1].name], d))


def _spectral(env, t, d):
    return _report(spectral_edge(_arg(env, t, 0), env[t.args[1].name], d))


def _base_change(env, t, d):
    return _report(base_change_suite(env[t.args[0].name], env[t.args[1].name], env[t.args[2].name], d))


def _radical(env, t, d):
    I = env[t.args[1].name]
    return _report(radical_invariance_check(_arg(env, t, 0), I.gens, t.params["exponents"], d))


def _wpr(env, t, d):
    I = env[t.args[0].name]
    res = wpr_probe(I.ring, I.gens, d)
    verdicts = {f"H_{i}": v for i, v in sorted(res.items())}
    shifts = [m - n for v in res.values() if v.holds for n, m in v.witnesses]
    result = {"generators": [str(g) for g in I.gens], "max_witness_shift": max(shifts) if shifts else None}
    return result, verdicts, False


def _selfdual(env, t, d):
    I = env[t.args[0].name]
    spec = KoszulSpec(I.ring, tuple(I.gens), 1)
    dk = dual_koszul(spec)
    ok = dk.iso_verified()
    _, bidual = double_dual(spec)
    ok2 = bidual.is_degreewise_iso()
    result = {"k": spec.k, "dual_ranks": {str(n): r for n, r in dk.complex.ranks().items()},
              "shifted_ranks": {str(n): r for n, r in dk.shifted.ranks().items()}}
    v1 = Holds(d, {"degrees": dk.complex.degrees()}, "explicit iso Hom(K, R) -> Σ^k K is a degreewise isomorphism") \
        if ok else FailsUpToDepth(d, None, "constructed map is not an isomorphism")
    v2 = Holds(d, {"degrees": bidual.source.degrees()}, "explicit iso Hom(Hom(K, R), R) -> K") \
        if ok2 else FailsUpToDepth(d, None, "constructed map is not an isomorphism")
    return result, {"dual_is_shift": v1, "double_dual": v2}, False


def _koszul_homology(env, t, d):
    I = env[t.args[0].name]
    K = koszul_on(I.ring, list(I.gens))
    k = len(I.gens)
    hom = {str(n): describe(K.homology(n)) for n in K.degrees()}
    off = [n for n in K.degrees() if n != -k and hom[str(n)] != "0"]
    v = Holds(d, {"top_degree": -k}, "homology concentrated in the top degree") if not off \
        else FailsUpToDepth(d, {"nonzero_degrees": off}, "homology outside the top degree")
    return {"homology": hom}, {"concentrated": v}, False


def _l_functor(env, t, d):
    n = t.params.get("n", 0)
    rep = l_functor(_arg(env, t, 0), env[t.args[1].name], n, d)
    return rep.to_dict(), {f"L_{n}": rep.verdict}, False


def _stage_table(system, d):
    return [describe(system.stage(n)) for n in range(1, d + 1)]


def _lambda(env, t, d):
    X = _module(env[t.args[0].name])
    lt = derived_completion(X, env[t.args[1].name], d)
    result, verdicts = {}, {}
    for i in lt.degrees():
        H = lt.homology(i)
        result[str(i)] = _stage_table(H, d)
        verdicts[f"H_{i} pro-zero"] = pro_zero(H, d)
    return {"stages": result}, verdicts, False


def _gamma(env, t, d):
    X = _module(env[t.args[0].name])
    S = derived_torsion(X, env[t.args[1].name], d)
    C = X if isinstance(X, BoundedComplex) else BoundedComplex.concentrated(X)
    result, verdicts = {}, {}
    for i in range(C.lo - S.spec.k, C.hi + 1):
        H = S.homology(i)
        result[str(i)] = _stage_table(H, d)
        verdicts[f"H_{i} ind-zero"] = ind_zero(H, d)
    return {"stages": result}, verdicts, False


def _adic(env, t, d):
    A = adic_tower(_arg(env, t, 0), env[t.args[1].name], d)
    diag = ml_lim_diagnostics(A, d)
    result = {"stages": _stage_table(A, d), "constant_from": diag["constant_from"],
              "lim": describe(diag["lim"]) if diag["lim"] is not None else None}
    return result, {"mittag_leffler": diag["ml"], "lim1_zero": diag["lim1_zero"]}, False


def _gm(env, t, d):
    f, lt, A = gm_comparison(_arg(env, t, 0), env[t.args[1].name], d)
    verdicts = {"H_0 pro-iso": pro_iso(f, d)}
    for i in lt.degrees():
        if i >= 1:
            verdicts[f"H_{i} pro-zero"] = pro_zero(lt.homology(i), d)
    result = {"lambda_H0": _stage_table(lt.homology(0), d), "adic": _stage_table(A, d)}
    return result, verdicts, False


def _oracle(env, t, d):
    from .oracle import compare_suite
    name = ORACLE_RINGS[t.params["ring"]]
    recs = compare_suite(name, t.params.get("max_degree", 2))
    counts: Dict[str, list] = {}
    for r in recs:
        key = f"{r['op']}_{r['degree']}"
        c = counts.setdefault(key, [0, 0])
        c[0] += 1
        c[1] += r["match"]
    bad = [r for r in recs if not r["match"]]
    v = Holds(d, {"comparisons": len(recs)}, "library agrees with exhaustive enumeration") if not bad \
        else FailsUpToDepth(d, {"mismatches": bad[:10]}, f"{len(bad)} mismatches")
    result = {"ring": name, "comparisons": len(recs), "matches": len(recs) - len(bad),
              "by_operation": {k: {"total": a, "matches": b} for k, (a, b) in sorted(counts.items())}}
    return result, {"oracle_agreement": v}, False


RUNNERS: Dict[str, Callable[..., TaskOutcome]] = {
    "profile": _profile,
    "six_conditions": _six,
    "factorization": _factorization,
    "spectral_edge": _spectral,
    "base_change": _base_change,
    "radical_invariance": _radical,
    "wpr": _wpr,
    "koszul_selfdual": _selfdual,
    "koszul_homology": _koszul_homology,
    "l_functor": _l_functor,
    "derived_completion": _lambda,
    "derived_torsion": _gamma,
    "adic": _adic,
    "gm_comparison": _gm,
    "finite_oracle": _oracle,
}

# tasks whose verdicts do not depend on a tower horizon
EXACT_TASKS = {"koszul_selfdual", "koszul_homology", "finite_oracle"}


def run_task(task: Task, env: Dict[str, Any], depth_override=None) -> Tuple[int, TaskOutcome]:
    d = task_depth(task, depth_override)
    return d, RUNNERS[task.name](env, task, d)
