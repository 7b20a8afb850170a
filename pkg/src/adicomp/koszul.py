"""Koszul complexes, their duals, telescope towers and the pro-regularity probe.

``K(x_1^n, ..., x_k^n)`` has basis ``e_S`` for subsets S of ``{0..k-1}``,
``e_S`` in degree ``-|S|``, subsets of equal size ordered as
``itertools.combinations``, and

    d(e_S) = sum_{i not in S} (-1)^{#{j in S : j < i}} x_i^n e_{S ∪ {i}}.

This is the same complex as the iterated tensor product of ``R -x_i^n-> R``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from .coeffs import ZZ
from .complexes import BoundedComplex, ChainMap, hom_complex, shift
from .modules import FpModule, ModuleMap
from .rings import Ideal, Ring, RingElement, polynomial_ring
from .towers import DEFAULT_DEPTH, Holds, IndSystem, Tower, Undetermined, Verdict


@dataclass(frozen=True)
class KoszulSpec:
    ring: Ring
    gens: Tuple[RingElement, ...]
    n: int = 1

    def __post_init__(self):
        gens = tuple(self.ring(g) for g in self.gens)
        if not gens:
            raise ValueError("a Koszul complex needs at least one element")
        if self.n < 1:
            raise ValueError("exponent must be at least 1")
        object.__setattr__(self, "gens", gens)

    @property
    def k(self) -> int:
        return len(self.gens)

    def powered(self) -> List[RingElement]:
        return [g ** self.n for g in self.gens]

    def with_exponent(self, n: int) -> "KoszulSpec":
        return KoszulSpec(self.ring, self.gens, n)


def subsets(k: int, s: int) -> List[Tuple[int, ...]]:
    return list(combinations(range(k), s))


def _index(k: int) -> Dict[Tuple[int, ...], int]:
    return {S: i for s in range(k + 1) for i, S in enumerate(subsets(k, s))}


def koszul_on(ring: Ring, elems: Sequence[RingElement]) -> BoundedComplex:
    k = len(elems)
    idx = _index(k)
    terms = {-s: FpModule.free(ring, len(subsets(k, s))) for s in range(k + 1)}
    diffs = {}
    for s in range(k):
        src = subsets(k, s)
        width = len(subsets(k, s + 1))
        rows = []
        for S in src:
            row = [ring.zero] * width
            for i in range(k):
                if i in S:
                    continue
                sign = -1 if sum(1 for j in S if j < i) % 2 else 1
                T = tuple(sorted(S + (i,)))
                row[idx[T]] = elems[i] if sign > 0 else -elems[i]
            rows.append(tuple(row))
        diffs[-s] = ModuleMap(terms[-s], terms[-s - 1], rows, check=False)
    return BoundedComplex(ring, terms, diffs)


def koszul_complex(spec: KoszulSpec) -> BoundedComplex:
    return koszul_on(spec.ring, spec.powered())


def _diag_map(C: BoundedComplex, D: BoundedComplex, k: int, coeff) -> ChainMap:
    """Chain map scaling e_S by coeff(S)."""
    ring = C.ring
    comps = {}
    for s in range(k + 1):
        S_list = subsets(k, s)
        rows = []
        for a, S in enumerate(S_list):
            row = [ring.zero] * len(S_list)
            row[a] = coeff(S)
            rows.append(tuple(row))
        comps[-s] = ModuleMap(C.term(-s), D.term(-s), rows, check=False)
    return ChainMap(C, D, comps)


def _prod(ring: Ring, elems, idxs, e: int) -> RingElement:
    out = ring.one
    for i in idxs:
        out = out * elems[i] ** e
    return out


def directed_transition(spec: KoszulSpec, m: int, n: int) -> ChainMap:
    """K(x^m) -> K(x^n) for n >= m: e_S -> prod_{i in S} x_i^{n-m} e_S."""
    k = spec.k
    src, tgt = koszul_complex(spec.with_exponent(m)), koszul_complex(spec.with_exponent(n))
    return _diag_map(src, tgt, k, lambda S: _prod(spec.ring, spec.gens, S, n - m))


def inverse_transition(spec: KoszulSpec, m: int, n: int) -> ChainMap:
    """K(x^m) -> K(x^n) for m >= n: e_S -> prod_{i not in S} x_i^{m-n} e_S."""
    k = spec.k
    src, tgt = koszul_complex(spec.with_exponent(m)), koszul_complex(spec.with_exponent(n))
    return _diag_map(src, tgt, k, lambda S: _prod(spec.ring, spec.gens, [i for i in range(k) if i not in S], m - n))


def koszul_tower(ring: Ring, generators: Sequence, depth: int = DEFAULT_DEPTH, direction: str = "inverse"):
    """Stages K(x^n), n >= 1; transitions checked to commute at construction."""
    spec = KoszulSpec(ring, tuple(generators), 1)
    stages: Dict[int, BoundedComplex] = {}

    def stage(n):
        if n not in stages:
            stages[n] = koszul_complex(spec.with_exponent(n))
        return stages[n]

    def _build(src_n, tgt_n, coeff):
        return _diag_map(stage(src_n), stage(tgt_n), spec.k, coeff)

    if direction == "inverse":
        def trans(n):
            return _build(n + 1, n, lambda S: _prod(ring, spec.gens, [i for i in range(spec.k) if i not in S], 1))
        T = Tower(stage, trans, "K")
    elif direction == "directed":
        def trans(n):
            return _build(n, n + 1, lambda S: _prod(ring, spec.gens, S, 1))
        T = IndSystem(stage, trans, "K")
    else:
        raise ValueError(f"unknown direction {direction!r}")
    T.spec = spec
    return T


# ---------------------------------------------------------------- duality

@lru_cache(maxsize=None)
def _generic_signs(k: int, kind: str) -> Dict[Tuple[int, Tuple[int, ...]], int]:
    """Signs of the basis matching for the generic sequence over ZZ[x_1..x_k].

    kind "dual": Hom(K, R)_d basis e_S^* (|S| = d) -> (Σ^k K)_d basis e_{S^c}.
    kind "bidual": Hom(Hom(K, R), R)_{-s} basis e_S^** -> K_{-s} basis e_S.
    """
    names = [f"x{i}" for i in range(k)]
    R = polynomial_ring(ZZ, names)
    K = koszul_on(R, R.gens())
    if kind == "dual":
        A = hom_complex(K, FpModule.free(R, 1))
        B = shift(K, k)
        match = _dual_match(k)
    else:
        A = hom_complex(hom_complex(K, FpModule.free(R, 1)), FpModule.free(R, 1))
        B = K
        match = _bidual_match(k)
    return _propagate(A, B, match)


def _dual_match(k):
    idx = _index(k)
    full = set(range(k))

    def match(d, a):
        S = subsets(k, d)[a]
        return d, idx[tuple(sorted(full - set(S)))]
    return match


def _bidual_match(k):
    def match(d, a):
        return d, a
    return match


def _propagate(A: BoundedComplex, B: BoundedComplex, match) -> Dict[Tuple[int, int], int]:
    """Signs σ with σ_j·d_B(match j) = ... solved degree by degree from the top."""
    signs: Dict[Tuple[int, int], int] = {}
    for a in range(A.term(A.hi).ngens):
        signs[(A.hi, a)] = 1
    for d in range(A.hi, A.lo, -1):
        dA, dB = A.differential(d), B.differential(d)
        for a in range(A.term(d).ngens):
            _, b = match(d, a)
            rhs = dB.matrix[b]
            sa = signs[(d, a)]
            for j, c in enumerate(dA.matrix[a]):
                if c.is_zero():
                    continue
                _, bj = match(d - 1, j)
                target = rhs[bj] * sa
                if target == c:
                    sj = 1
                elif target == -c:
                    sj = -1
                else:
                    raise AssertionError("duality matching is not diagonal up to sign")
                prev = signs.setdefault((d - 1, j), sj)
                if prev != sj:
                    raise AssertionError("inconsistent duality signs")
    return signs


def _matching_map(A: BoundedComplex, B: BoundedComplex, match, signs) -> ChainMap:
    ring = A.ring
    comps = {}
    for d in A.degrees():
        rows = []
        for a in range(A.term(d).ngens):
            _, b = match(d, a)
            row = [ring.zero] * B.term(d).ngens
            row[b] = ring(signs[(d, a)])
            rows.append(tuple(row))
        comps[d] = ModuleMap(A.term(d), B.term(d), rows, check=False)
    return ChainMap(A, B, comps)


@dataclass
class DualKoszul:
    complex: BoundedComplex
    iso: ChainMap          # complex -> Σ^k K
    shifted: BoundedComplex

    def iso_verified(self) -> bool:
        return self.iso.is_degreewise_iso()


def dual_koszul(spec: KoszulSpec) -> DualKoszul:
    """Hom(K, R) in degrees [0, k] with an explicit iso to Σ^k K."""
    R = spec.ring
    K = koszul_complex(spec)
    DK = hom_complex(K, FpModule.free(R, 1))
    SK = shift(K, spec.k)
    iso = _matching_map(DK, SK, _dual_match(spec.k), _generic_signs(spec.k, "dual"))
    return DualKoszul(DK, iso, SK)


def double_dual(spec: KoszulSpec) -> Tuple[BoundedComplex, ChainMap]:
    """Hom(Hom(K, R), R) with its iso onto K."""
    R = spec.ring
    K = koszul_complex(spec)
    DDK = hom_complex(hom_complex(K, FpModule.free(R, 1)), FpModule.free(R, 1))
    iso = _matching_map(DDK, K, _bidual_match(spec.k), _generic_signs(spec.k, "bidual"))
    return DDK, iso


def top_homology_iso(spec: KoszulSpec) -> ModuleMap:
    """H_{-k}(K(x^n)) -> R/(x^n), the cokernel comparison."""
    K = koszul_complex(spec)
    h = K.homology_data(-spec.k)
    Q = FpModule.cyclic(Ideal(spec.ring, spec.powered()))
    rows = [(rep[0],) for rep in h.reps]
    return ModuleMap(h.module, Q, rows)


# ---------------------------------------------------------------- pro-regularity probe

PROBE_NOTE = ("criterion: pro-vanishing of the non-top Koszul homology towers of the inverse system; "
              "this definition is taken from the external literature, not derived here")


def wpr_probe(ring: Ring, generators: Sequence, depth: int = 4) -> Dict[int, Verdict]:
    """Per degree i in [-k+1, 0]: some m in [n, depth] kills H_i(K(x^m)) -> H_i(K(x^n))."""
    if depth < 2:
        raise ValueError("depth must be at least 2")
    T = koszul_tower(ring, generators, depth, "inverse")
    k = T.spec.k
    out: Dict[int, Verdict] = {}
    for i in range(-k + 1, 1):
        H = T.homology(i)
        table = []
        missing = None
        for n in range(1, depth):
            hit = None
            for m in range(n, depth + 1):
                if H.composite(m, n).is_zero():
                    hit = m
                    break
            if hit is None:
                missing = n
                break
            table.append([n, hit])
        if missing is None:
            out[i] = Holds(depth, table, PROBE_NOTE)
        else:
            out[i] = Undetermined(depth, PROBE_NOTE + f"; no witness for n = {missing} within depth",
                                  evidence={"partial": table})
    return out
