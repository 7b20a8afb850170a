"""Completion functors on finitely presented modules and bounded complexes.

Stage n of the derived completion is ``Hom(K(x^n), X)``; stage n of the
derived torsion is ``K(x^n) ⊗ X``.  Koszul complexes are bounded and
termwise free, so no replacement of X is needed for either.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from .complexes import (
    BoundedComplex,
    ChainMap,
    as_complex,
    hom_complex,
    hom_precompose,
    tensor_chain_maps,
    tensor_complexes,
)
from .koszul import KoszulSpec, directed_transition, koszul_complex
from .modules import FpModule, ModuleMap, is_isomorphism, simplify, tensor
from .rings import Ideal, Ring
from .structure import (
    adic_stable_index,
    describe,
    element_power_chain,
    euclidean_world,
    ideal_times_module,
    invariant_factors,
    is_graded_setup,
    is_nilpotent_on,
    nilpotency_index,
)
from .towers import (
    DEFAULT_DEPTH,
    FailsUpToDepth,
    Holds,
    IndSystem,
    LevelMap,
    Tower,
    Undetermined,
    Verdict,
    conjunction,
    ml_lim_diagnostics,
    pro_iso,
    pro_zero,
)

Target = Union[FpModule, BoundedComplex]


def _as_ideal(ring: Ring, I) -> Ideal:
    if isinstance(I, Ideal):
        return I
    return Ideal(ring, list(I))


# ---------------------------------------------------------------- adic towers

class AdicTower(Tower):
    """Stages X/I^nX with the canonical surjections; ``gamma(n): X -> stage n``."""

    def __init__(self, X: Target, I: Ideal):
        self.X = X
        self.I = I
        self._powers: Dict[int, Ideal] = {}
        self._data: Dict[int, tuple] = {}
        super().__init__(self._stage, self._trans, "adic")

    def power(self, n: int) -> Ideal:
        if n not in self._powers:
            self._powers[n] = self.I if n == 1 else self.power(n - 1) * self.I
        return self._powers[n]

    def _module_data(self, n: int):
        if n not in self._data:
            M = self.X
            raw = FpModule(M.ring, M.ngens, list(M.relations) + ideal_times_module(self.power(n), M))
            S, to_new, to_old = simplify(raw)
            gamma = ModuleMap(M, S, to_new.matrix, check=False)
            self._data[n] = (S, gamma, to_old)
        return self._data[n]

    def _stage(self, n: int):
        if isinstance(self.X, FpModule):
            return self._module_data(n)[0]
        C = self.X
        terms = {d: FpModule(C.ring, C.term(d).ngens, list(C.term(d).relations)
                             + ideal_times_module(self.power(n), C.term(d))) for d in C.degrees()}
        diffs = {d: ModuleMap(terms[d], terms[d - 1], C.differential(d).matrix, check=False)
                 for d in C.degrees() if d - 1 in terms}
        return BoundedComplex(C.ring, terms, diffs, check=False)

    def _trans(self, n: int):
        if isinstance(self.X, FpModule):
            S1, _, back1 = self._module_data(n + 1)
            S0, gamma0, _ = self._module_data(n)
            rows = [gamma0.apply(r) for r in back1.matrix]
            return ModuleMap(S1, S0, rows, check=False)
        src, tgt = self.stage(n + 1), self.stage(n)
        return ChainMap(src, tgt, {d: ModuleMap(src.term(d), tgt.term(d),
                                                [tgt.term(d).gen(i) for i in range(tgt.term(d).ngens)], check=False)
                                   for d in src.degrees()}, check=False)

    def gamma(self, n: int) -> ModuleMap:
        return self._module_data(n)[1]


def adic_tower(X: Target, I, depth: int = DEFAULT_DEPTH) -> AdicTower:
    ring = X.ring
    return AdicTower(X, _as_ideal(ring, I))


def completed_tensor_tower(M: FpModule, N: FpModule, I, depth: int = DEFAULT_DEPTH):
    """Adic tower of M ⊗ N and the levelwise comparison with (M/I^n) ⊗ (N/I^n)."""
    I = _as_ideal(M.ring, I)
    T = adic_tower(tensor(M, N), I, depth)
    isos = []
    for n in range(1, depth + 1):
        P = I if n == 1 else T.power(n)
        lhs = FpModule(M.ring, M.ngens * N.ngens, list(tensor(M, N).relations)
                       + ideal_times_module(P, tensor(M, N)))
        Mn = FpModule(M.ring, M.ngens, list(M.relations) + ideal_times_module(P, M))
        Nn = FpModule(N.ring, N.ngens, list(N.relations) + ideal_times_module(P, N))
        rhs = tensor(Mn, Nn)
        f = ModuleMap(lhs, rhs, [rhs.gen(i) for i in range(rhs.ngens)])
        isos.append(is_isomorphism(f))
    if all(isos):
        v = Holds(depth, list(range(1, depth + 1)), "comparison is an isomorphism at every level")
    else:
        bad = [n + 1 for n, ok in enumerate(isos) if not ok]
        v = FailsUpToDepth(depth, {"levels": bad}, "comparison not an isomorphism")
    return T, v


def interleaving_certificate(I: Ideal, levels: int) -> dict:
    """I^{k(n-1)+1} ⊆ (x_1^n..x_k^n) ⊆ I^n for n = 1..levels, with x the generators of I."""
    k = len(I.gens)
    out = {"lower": [], "upper": [], "ok": True}
    for n in range(1, levels + 1):
        xn = Ideal(I.ring, [g ** n for g in I.gens])
        e = k * (n - 1) + 1
        lo = xn.contains(I.power(e))
        up = I.power(n).contains(xn)
        out["lower"].append([n, e, lo])
        out["upper"].append([n, up])
        out["ok"] = out["ok"] and lo and up
    return out


# ---------------------------------------------------------------- derived completion / torsion

@dataclass
class LambdaTower:
    """Stages Hom(K(x^n), X), transitions from the directed Koszul system, and λ."""
    X: BoundedComplex
    spec: KoszulSpec
    tower: Tower
    lam: LevelMap

    def homology(self, i: int) -> Tower:
        return self.tower.homology(i)

    def degrees(self) -> List[int]:
        return list(range(self.X.lo, self.X.hi + self.spec.k + 1))


def derived_completion(X: Target, gens, depth: int = DEFAULT_DEPTH) -> LambdaTower:
    ring = X.ring
    gens = list(gens.gens) if isinstance(gens, Ideal) else list(gens)
    spec = KoszulSpec(ring, tuple(gens), 1)
    C = as_complex(X)
    stages: Dict[int, BoundedComplex] = {}

    def stage(n):
        if n not in stages:
            stages[n] = hom_complex(koszul_complex(spec.with_exponent(n)), C)
        return stages[n]

    def trans(n):
        f = directed_transition(spec, n, n + 1)
        g = hom_precompose(f, C)
        return ChainMap(stage(n + 1), stage(n), {d: g.component(d) for d in g.source.degrees()}, check=False)

    T = Tower(stage, trans, "Λ")
    const = Tower.constant(C, "X")

    def lam(n):
        L = stage(n)
        comps = {}
        for d in C.degrees():
            # Hom(K_0, X_d) is the first block of L_d (K_0 has rank 1, lowest Koszul degree is -k)
            offset = _hom_block_offset(spec.k, C, d)
            width = L.term(d).ngens
            rows = []
            for i in range(C.term(d).ngens):
                row = [ring.zero] * width
                row[offset + i] = ring.one
                rows.append(tuple(row))
            comps[d] = ModuleMap(C.term(d), L.term(d), rows, check=False)
        return ChainMap(C, L, comps)

    return LambdaTower(C, spec, T, LevelMap(const, T, lam))


def _hom_block_offset(k: int, X: BoundedComplex, d: int) -> int:
    """Offset of the Hom(K_0, X_d) block inside Hom(K, X)_d (blocks ordered by Koszul degree)."""
    from math import comb
    off = 0
    for m in range(-k, 0):
        if X.lo <= m + d <= X.hi:
            off += comb(k, -m) * X.term(m + d).ngens
    return off


def derived_torsion(X: Target, gens, depth: int = DEFAULT_DEPTH) -> IndSystem:
    ring = X.ring
    gens = list(gens.gens) if isinstance(gens, Ideal) else list(gens)
    spec = KoszulSpec(ring, tuple(gens), 1)
    C = as_complex(X)
    stages: Dict[int, BoundedComplex] = {}

    def stage(n):
        if n not in stages:
            stages[n] = tensor_complexes(koszul_complex(spec.with_exponent(n)), C)
        return stages[n]

    def trans(n):
        f = tensor_chain_maps(directed_transition(spec, n, n + 1), ChainMap.identity(C))
        return ChainMap(stage(n), stage(n + 1), {d: f.component(d) for d in f.source.degrees()}, check=False)

    S = IndSystem(stage, trans, "Γ")
    S.spec = spec
    return S


def gm_comparison(M: FpModule, I, depth: int = DEFAULT_DEPTH):
    """H_0(Λ_n M) -> M/I^nM as a level map, with the Λ data and adic tower."""
    I = _as_ideal(M.ring, I)
    lt = derived_completion(M, I, depth)
    A = adic_tower(M, I, depth)
    H0 = lt.homology(0)

    def comp(n):
        h = lt.tower.stage(n).homology_data(0)
        gamma = A.gamma(n)
        off = _hom_block_offset(lt.spec.k, lt.X, 0)
        rows = [gamma.apply(rep[off:off + M.ngens]) for rep in h.reps]
        return ModuleMap(h.module, A.stage(n), rows, check=False)

    return LevelMap(H0, A, comp), lt, A


# ---------------------------------------------------------------- L_n

@dataclass
class LReport:
    n: int
    verdict: Verdict
    value: Optional[FpModule] = None
    stable_from: Optional[int] = None
    note: str = ""

    def to_dict(self) -> dict:
        out = {"n": self.n, "verdict": self.verdict.to_dict()}
        if self.value is not None:
            out["value"] = describe(self.value)
            out["stable_from"] = self.stable_from
        if self.note:
            out["note"] = self.note
        return out


def l_functor(M: FpModule, I, n: int, depth: int = DEFAULT_DEPTH) -> LReport:
    if not isinstance(M, FpModule):
        raise TypeError("l_functor accepts modules only; for complexes use derived_completion")
    if n < 0:
        raise ValueError("n must be nonnegative")
    I = _as_ideal(M.ring, I)
    if n >= 1:
        lt = derived_completion(M, I, depth)
        if n > lt.spec.k:
            return LReport(n, Holds(depth, [], "stages vanish in this degree"), note="above the Koszul length")
        return LReport(n, pro_zero(lt.homology(n), depth))
    f, lt, A = gm_comparison(M, I, depth)
    v = pro_iso(f, depth)
    N = adic_stable_index(I, M, depth)
    if N is not None:
        value = A.stage(N) if N >= 1 else FpModule.zero(M.ring)
        return LReport(0, v, value, N, f"I^{N}M = I^{N + 1}M, so the completion is M/I^{N}M")
    return LReport(0, v, None, None, "adic tower not constant within depth")


# ---------------------------------------------------------------- completeness

@dataclass
class CompletionProfile:
    separated: Verdict
    adically_complete: Verdict
    l0_complete: Verdict
    derived_complete: Verdict
    evidence: dict = field(default_factory=dict)

    @property
    def implications_ok(self) -> bool:
        c, s, l, d = self.adically_complete, self.separated, self.l0_complete, self.derived_complete
        if c.holds and (s.fails or l.fails):
            return False
        if l.holds and d.fails:
            return False
        return True

    def verdicts(self) -> Dict[str, Verdict]:
        return {"separated": self.separated, "adically_complete": self.adically_complete,
                "l0_complete": self.l0_complete, "derived_complete": self.derived_complete}

    def to_dict(self) -> dict:
        out = {k: v.to_dict() for k, v in self.verdicts().items()}
        out["implications_ok"] = self.implications_ok
        out["evidence"] = self.evidence
        return out


def _euclidean_separated(M: FpModule, I: Ideal, depth: int) -> Verdict:
    """M = T ⊕ R^r with I = (g): free summands are separated (Krull), and T is
    separated iff the stable part of the chain g^n T vanishes."""
    if I.is_unit():
        return FailsUpToDepth(depth, {"stable_submodule": describe(M)}, "I is the unit ideal and M is nonzero")
    gb = I.groebner_basis().gens
    if not gb:
        return Holds(depth, {"reason": "I = 0"})
    if len(gb) != 1:
        return Undetermined(depth, "ideal is not principal after reduction")
    T = _torsion_part(M)
    N, stable = element_power_chain(T, gb[0], 64)
    if N is None:
        return Undetermined(depth, "torsion chain did not stabilize")
    if all(T.is_zero_element(r) for r in stable):
        return Holds(depth, {"reason": "structure theorem", "stable_index": N}, "intersection of I^n M is zero")
    S = FpModule(T.ring, T.ngens, list(T.relations) + [r for r in stable])
    return FailsUpToDepth(depth, {"stable_index": N, "stable_quotient": describe(S)},
                          "I^n M stabilizes at a nonzero submodule")


def _torsion_part(M: FpModule) -> FpModule:
    """A module isomorphic to the torsion summand of M (Euclidean bases)."""
    ring = M.ring
    tors, free = invariant_factors(M)
    if ring.nvars == 0:
        return FpModule(ring, len(tors), [tuple(ring(d) if i == j else ring.zero for j in range(len(tors)))
                                          for i, d in enumerate(tors)])
    return FpModule(ring, len(tors), [tuple(d if i == j else ring.zero for j in range(len(tors)))
                                      for i, d in enumerate(tors)])


def separated_verdict(M: FpModule, I: Ideal, depth: int) -> Verdict:
    ring = M.ring
    if M.is_zero():
        return Holds(depth, {"reason": "zero module"})
    if euclidean_world(ring):
        return _euclidean_separated(M, I, depth)
    if is_nilpotent_on(I, M):
        return Holds(depth, {"reason": "I is nilpotent on M"})
    if is_graded_setup(M, I):
        return Holds(depth, {"reason": "graded module, I in positive degrees"})
    for x in I.gens:
        N, stable = element_power_chain(M, x, depth)
        if N is not None and not all(M.is_zero_element(r) for r in stable):
            return FailsUpToDepth(depth, {"generator": str(x), "stable_index": N},
                                  f"({x})^n M stabilizes at a nonzero submodule inside every I^n M")
    return Undetermined(depth, "no exact separatedness criterion applies")


def completeness_profile(M: FpModule, I, depth: int = DEFAULT_DEPTH) -> CompletionProfile:
    ring = M.ring
    I = _as_ideal(ring, I)
    ev: dict = {"module": describe(M)}
    sep = separated_verdict(M, I, depth)
    nil = is_nilpotent_on(I, M)
    if nil:
        N = nilpotency_index(I, M)
        ev["nilpotency_index"] = N
        comp = Holds(depth, {"I^N M = 0": N}, "adic tower constant from N, γ is an isomorphism")
    elif sep.fails:
        comp = FailsUpToDepth(depth, {"separated": sep.to_dict()}, "not separated")
    elif euclidean_world(ring):
        comp = FailsUpToDepth(depth, {"free_rank": invariant_factors(M)[1]},
                              "free summand over a proper nonzero ideal is not complete")
    elif is_graded_setup(M, I):
        comp = FailsUpToDepth(depth, {"graded": True},
                              "graded module on which I is not nilpotent is not complete")
    else:
        comp = Undetermined(depth, "no completeness certificate")
    per_gen = {}
    l0_parts = []
    for x in I.gens:
        N, stable = element_power_chain(M, x, depth)
        if N is None:
            tower = Tower(lambda n: M, lambda n, x=x: ModuleMap(M, M, [tuple(x * e for e in M.gen(i))
                                                                     for i in range(M.ngens)]), "x-tower")
            ml = ml_lim_diagnostics(tower, depth)["ml"]
            per_gen[str(x)] = {"stable_index": None, "ml": ml.to_dict()}
            l0_parts.append(FailsUpToDepth(depth, {"generator": str(x), "ml": ml.status},
                                           "x^n M still shrinking: Mittag-Leffler fails for the x-tower"))
        elif all(M.is_zero_element(r) for r in stable):
            per_gen[str(x)] = {"stable_index": N, "stable_zero": True}
            l0_parts.append(Holds(depth, {"generator": str(x), "x^N M = 0": N}))
        else:
            per_gen[str(x)] = {"stable_index": N, "stable_zero": False}
            l0_parts.append(FailsUpToDepth(depth, {"generator": str(x), "stable_index": N},
                                           "nonzero x-divisible submodule gives Hom(R[1/x], M) != 0"))
    ev["per_generator"] = per_gen
    l0 = conjunction(l0_parts, depth, "per-generator contramodule test")
    lt = derived_completion(M, I, depth)
    degree_verdicts = {}
    for i in lt.degrees():
        degree_verdicts[i] = pro_iso(lt.lam.homology(i), depth)
    dc = conjunction(list(degree_verdicts.values()), depth, "test: λ induces pro-isomorphisms on homology")
    ev["derived_by_degree"] = {str(i): v.status for i, v in degree_verdicts.items()}
    return CompletionProfile(sep, comp, l0, dc, ev)
