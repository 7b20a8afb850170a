"""Brute-force reference for Hom, ⊗, Ext and Tor over two rings of order 8.

Everything here enumerates.  The finite rings carry their own arithmetic
tables (integers mod 8, and F_2[x]/(x^3) on 3-bit masks), modules are
quotients of R^w by an enumerated submodule, and isomorphism classes are
compared through the signature ``r -> |M[r]|`` over all r in R.  Both rings
are principal with a chain of ideals, so the signature is a complete
invariant of finite modules.

For tensor products the count goes through duality.  Both rings are
self-injective with simple socle, so D = Hom(-, R) preserves orders and
D(X[r]) = D(X)/rD(X).  D(M ⊗ N) is the module of R-bilinear maps, which is
enumerated directly.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Sequence, Tuple

Vec = Tuple[int, ...]


class FiniteRing:
    def __init__(self, name: str, size: int, add, mul):
        self.name = name
        self.elements = list(range(size))
        self.add_t = [[add(a, b) for b in self.elements] for a in self.elements]
        self.mul_t = [[mul(a, b) for b in self.elements] for a in self.elements]
        self.zero = 0
        self.neg_t = [next(b for b in self.elements if self.add_t[a][b] == 0) for a in self.elements]

    def __repr__(self):
        return f"FiniteRing({self.name})"


def zmod(n: int) -> FiniteRing:
    return FiniteRing(f"Z/{n}", n, lambda a, b: (a + b) % n, lambda a, b: (a * b) % n)


def _f2_mul(a: int, b: int, k: int) -> int:
    out = 0
    for i in range(k):
        if b >> i & 1:
            out ^= a << i
    return out & ((1 << k) - 1)


def f2_truncated(k: int = 3) -> FiniteRing:
    """F_2[x]/(x^k); bit i of an element is the coefficient of x^i."""
    return FiniteRing(f"F2[x]/(x^{k})", 1 << k, lambda a, b: a ^ b, lambda a, b: _f2_mul(a, b, k))


# ---------------------------------------------------------------- vectors and spans

def _vadd(R: FiniteRing, u: Vec, v: Vec) -> Vec:
    return tuple(R.add_t[a][b] for a, b in zip(u, v))


def _vscale(R: FiniteRing, r: int, v: Vec) -> Vec:
    return tuple(R.mul_t[r][a] for a in v)


def span(R: FiniteRing, gens: Sequence[Vec], width: int) -> FrozenSet[Vec]:
    out = {tuple([0] * width)}
    for g in gens:
        multiples = {_vscale(R, r, g) for r in R.elements}
        out = {_vadd(R, s, m) for s in out for m in multiples}
    return frozenset(out)


def _all_vectors(R: FiniteRing, width: int) -> List[Vec]:
    return list(product(R.elements, repeat=width))


class FinMod:
    """R^width modulo the span of the relation rows."""

    def __init__(self, R: FiniteRing, width: int, relations: Sequence[Vec] = ()):
        self.R = R
        self.width = width
        self.relations = [tuple(r) for r in relations]
        self.rel = span(R, self.relations, width)
        self.canon: Dict[Vec, Vec] = {}
        for v in _all_vectors(R, width):
            if v not in self.canon:
                coset = [_vadd(R, v, w) for w in self.rel]
                rep = min(coset)
                for c in coset:
                    self.canon[c] = rep
        self.elements = sorted(set(self.canon.values()))

    @property
    def size(self) -> int:
        return len(self.elements)

    def add(self, a: Vec, b: Vec) -> Vec:
        return self.canon[_vadd(self.R, a, b)]

    def scale(self, r: int, a: Vec) -> Vec:
        return self.canon[_vscale(self.R, r, a)]

    def zero(self) -> Vec:
        return self.canon[tuple([0] * self.width)]


def signature(M: FinMod) -> Tuple[int, ...]:
    z = M.zero()
    return tuple(sum(1 for m in M.elements if M.scale(r, m) == z) for r in M.R.elements)


def _signature_of_set(R: FiniteRing, elems: Sequence[Tuple], zero: Tuple, scale) -> Tuple[int, ...]:
    return tuple(sum(1 for e in elems if scale(r, e) == zero) for r in R.elements)


# ---------------------------------------------------------------- Hom and tensor

def hom_signature(M: FinMod, N: FinMod) -> Tuple[int, ...]:
    """Homs are tuples of generator images killing every relation."""
    R = M.R
    homs = []
    zero_n = N.zero()
    for imgs in product(N.elements, repeat=M.width):
        ok = True
        for rel in M.relations:
            acc = zero_n
            for c, im in zip(rel, imgs):
                acc = N.add(acc, N.scale(c, im))
            if acc != zero_n:
                ok = False
                break
        if ok:
            homs.append(imgs)
    zero = tuple([zero_n] * M.width)
    return _signature_of_set(R, homs, zero, lambda r, f: tuple(N.scale(r, x) for x in f))


def _bilinear_maps(M: FinMod, N: FinMod) -> List[Vec]:
    R = M.R
    g, h = M.width, N.width
    out = []
    for b in product(R.elements, repeat=g * h):
        ok = True
        for rel in M.relations:
            for j in range(h):
                acc = 0
                for i in range(g):
                    acc = R.add_t[acc][R.mul_t[rel[i]][b[i * h + j]]]
                if acc:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for rel in N.relations:
                for i in range(g):
                    acc = 0
                    for j in range(h):
                        acc = R.add_t[acc][R.mul_t[rel[j]][b[i * h + j]]]
                    if acc:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            out.append(b)
    return out


def tensor_signature(M: FinMod, N: FinMod) -> Tuple[int, ...]:
    """|(M⊗N)[r]| = |D/rD| with D the bilinear maps M × N -> R."""
    R = M.R
    D = _bilinear_maps(M, N)
    out = []
    for r in R.elements:
        rD = {_vscale(R, r, b) for b in D}
        out.append(len(D) // len(rD))
    return tuple(out)


# ---------------------------------------------------------------- resolutions, Ext, Tor

def _min_generators(R: FiniteRing, sub: FrozenSet[Vec], width: int) -> List[Vec]:
    if len(sub) == 1:
        return []
    elems = sorted(sub)
    spans = {v: span(R, [v], width) for v in elems}
    for v in elems:
        if spans[v] == sub:
            return [v]
    ranked = sorted(elems, key=lambda v: -len(spans[v]))
    for k in range(2, len(elems) + 1):
        for combo in combinations(ranked, k):
            if span(R, list(combo), width) == sub:
                return list(combo)
    raise AssertionError("unreachable: the set spans itself")


def resolution(M: FinMod, length: int) -> List[List[Vec]]:
    """Matrices D_1..D_length (rows: images of basis vectors) of a minimal free resolution."""
    cache = M.__dict__.setdefault("_resolutions", {})
    if length not in cache:
        cache[length] = _resolve(M, length)
    return cache[length]


def _resolve(M: FinMod, length: int) -> List[List[Vec]]:
    R = M.R
    mats: List[List[Vec]] = []
    width = M.width
    sub = M.rel
    for _ in range(length):
        gens = _min_generators(R, sub, width)
        mats.append(gens)
        if not gens:
            break
        # kernel of R^k -> R^width, coefficients c with sum c_i gens_i = 0
        k = len(gens)
        ker = []
        for c in _all_vectors(R, k):
            acc = tuple([0] * width)
            for ci, g in zip(c, gens):
                acc = _vadd(R, acc, _vscale(R, ci, g))
            if not any(acc):
                ker.append(c)
        sub, width = frozenset(ker), k
    return mats


def _homology_signature(R: FiniteRing, N: FinMod, src_w: int, d_in, d_out) -> Tuple[int, ...]:
    """Signature of ker(d_out) / im(d_in) on N^src_w, maps given as functions."""
    zero = tuple([N.zero()] * src_w)
    cycles = [v for v in product(N.elements, repeat=src_w)
              if d_out is None or all(x == N.zero() for x in d_out(v))]
    im = {d_in(u) for u in d_in.domain} if d_in is not None else {zero}
    out = []
    for r in R.elements:
        killed = sum(1 for z in cycles if tuple(N.scale(r, x) for x in z) in im)
        out.append(killed // len(im))
    return tuple(out)


class _Linear:
    """N^a -> N^b, v -> v·A for a matrix A over R."""

    def __init__(self, N: FinMod, rows: Sequence[Vec], a: int, b: int):
        self.N, self.rows, self.a, self.b = N, rows, a, b
        self.domain = list(product(N.elements, repeat=a))

    def __call__(self, v):
        N = self.N
        out = [N.zero()] * self.b
        for k in range(self.a):
            for l in range(self.b):
                c = self.rows[k][l]
                if c:
                    out[l] = N.add(out[l], N.scale(c, v[k]))
        return tuple(out)


def _widths(M: FinMod, mats: List[List[Vec]]) -> List[int]:
    return [M.width] + [len(m) for m in mats]


def tor_signature(M: FinMod, N: FinMod, i: int) -> Tuple[int, ...]:
    mats = resolution(M, i + 1)
    w = _widths(M, mats) + [0] * (i + 2)
    R = M.R
    if w[i] == 0:
        return tuple(1 for _ in R.elements)
    d_out = _Linear(N, mats[i - 1], w[i], w[i - 1]) if i >= 1 else None
    d_in = _Linear(N, mats[i], w[i + 1], w[i]) if i < len(mats) and w[i + 1] else None
    return _homology_signature(R, N, w[i], d_in, d_out)


def _transpose(rows: Sequence[Vec], a: int, b: int) -> List[Vec]:
    return [tuple(rows[k][l] for k in range(a)) for l in range(b)]


def ext_signature(M: FinMod, N: FinMod, i: int) -> Tuple[int, ...]:
    """Cohomology of Hom(P, N) = N^{w_i}, coboundary φ -> φ∘d."""
    mats = resolution(M, i + 1)
    w = _widths(M, mats) + [0] * (i + 2)
    R = M.R
    if w[i] == 0:
        return tuple(1 for _ in R.elements)
    # δ^i: N^{w_i} -> N^{w_{i+1}} with (δφ)_k = sum_l D_{i+1}[k][l] φ_l
    d_out = _Linear(N, _transpose(mats[i], w[i + 1], w[i]), w[i], w[i + 1]) if i < len(mats) and w[i + 1] else None
    d_in = _Linear(N, _transpose(mats[i - 1], w[i], w[i - 1]), w[i - 1], w[i]) if i >= 1 else None
    return _homology_signature(R, N, w[i], d_in, d_out)


# ---------------------------------------------------------------- seed suite

SEEDS: Dict[str, Dict[int, List[Vec]]] = {
    "Z/8": {1: [(2,), (4,), (3,)], 2: [(2, 0), (0, 4), (1, 1), (4, 2)]},
    # x = 0b010, x^2 = 0b100, 1 + x = 0b011
    "F2[x]/(x^3)": {1: [(0b010,), (0b100,), (0b011,)], 2: [(0b010, 0), (0, 0b100), (1, 0b010), (0b100, 0b010)]},
}


@lru_cache(maxsize=None)
def finite_ring(name: str) -> FiniteRing:
    if name == "Z/8":
        return zmod(8)
    if name == "F2[x]/(x^3)":
        return f2_truncated(3)
    raise ValueError(f"no finite oracle ring {name!r}")


def seed_modules(name: str) -> List[Tuple[int, Tuple[Vec, ...]]]:
    """All presentations with 1 or 2 generators and at most 2 seed relations."""
    out = []
    for g, rows in SEEDS[name].items():
        for k in range(0, 3):
            for combo in combinations(rows, k):
                out.append((g, combo))
    return out


@lru_cache(maxsize=None)
def fin_module(name: str, g: int, rels: Tuple[Vec, ...]) -> FinMod:
    return FinMod(finite_ring(name), g, rels)


# ---------------------------------------------------------------- comparison with the library

def library_ring(name: str):
    from .rings import integers_mod, polynomial_ring
    if name == "Z/8":
        return integers_mod(8)
    return polynomial_ring("GF(2)", ["x"]).quotient(["x^3"])


def to_library(name: str, ring, a: int):
    if name == "Z/8":
        return ring(a)
    return ring.element({(i,): 1 for i in range(3) if a >> i & 1})


def from_library(name: str, e) -> int:
    if name == "Z/8":
        return int(e.constant_value()) % 8 if not e.is_zero() else 0
    out = 0
    for (i,), c in e.terms.items():
        if c % 2:
            out |= 1 << i
    return out


def library_signature(name: str, M) -> Tuple[int, ...]:
    """Signature of a library FpModule, enumerated from its presentation."""
    rows = tuple(tuple(from_library(name, e) for e in r) for r in M.relations)
    return _presentation_signature(name, M.ngens, rows)


@lru_cache(maxsize=None)
def _presentation_signature(name: str, g: int, rows: Tuple[Vec, ...]) -> Tuple[int, ...]:
    return signature(FinMod(finite_ring(name), g, rows))


def compare_suite(name: str, max_degree: int = 2) -> List[dict]:
    """One record per (M, N, operation, degree) with both signatures."""
    from .complexes import free_resolution, hom_complex, tensor_complexes
    from .modules import FpModule, hom, tensor

    ring = library_ring(name)
    mods = seed_modules(name)
    lib = {}
    for g, rels in mods:
        lib[(g, rels)] = FpModule(ring, g, [tuple(to_library(name, ring, a) for a in r) for r in rels])
    records = []
    for (gm, rm), (gn, rn) in product(mods, repeat=2):
        M, N = lib[(gm, rm)], lib[(gn, rn)]
        fM, fN = fin_module(name, gm, rm), fin_module(name, gn, rn)
        P = free_resolution(M, max_degree + 1).complex
        T, H = tensor_complexes(P, N), hom_complex(P, N)
        cases = [("hom", 0, hom(M, N)[0], hom_signature(fM, fN)),
                 ("tensor", 0, tensor(M, N), tensor_signature(fM, fN))]
        for i in range(max_degree + 1):
            cases.append(("tor", i, T.homology(i), tor_signature(fM, fN, i)))
            cases.append(("ext", i, H.homology(-i), ext_signature(fM, fN, i)))
        for op, i, X, expect in cases:
            got = library_signature(name, X)
            records.append({"M": [gm, [list(r) for r in rm]], "N": [gn, [list(r) for r in rn]],
                            "op": op, "degree": i, "oracle": list(expect), "library": list(got),
                            "match": got == expect})
    return records
