"""Bounded chain complexes of finitely presented modules.

Indexing is homological: ``d_n : C_n -> C_{n-1}``.  Koszul complexes sit in
degrees ``[-k, 0]``.  Sign conventions:

* shift: ``(Σ^k C)_n = C_{n-k}`` with differential ``(-1)^k d``;
* cone of ``f: C -> D``: ``C_{n-1} ⊕ D_n`` with ``d(c, y) = (-dc, f(c) + dy)``;
* tensor: ``d(c ⊗ y) = dc ⊗ y + (-1)^{|c|} c ⊗ dy``, summands ordered by ``|c|`` ascending;
* hom: ``(df) = d∘f - (-1)^{|f|} f∘d``.
"""
from __future__ import annotations

import threading
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .modules import (
    FpModule,
    ModuleMap,
    Row,
    direct_sum,
    is_isomorphism,
    kernel,
    row_to_vec,
    simplify,
    tagged_basis,
    tensor,
    vec_to_row,
)
from .rings import Ring, RingMismatch


class ComplexError(ValueError):
    pass


class BoundedComplex:
    """Terms ``C_lo .. C_hi`` and differentials ``d_n: C_n -> C_{n-1}``."""

    def __init__(self, ring: Ring, terms: Dict[int, FpModule], diffs: Optional[Dict[int, ModuleMap]] = None,
                 check: bool = True):
        self.ring = ring
        nz = [n for n, M in terms.items() if M.ngens > 0]
        if nz:
            self.lo, self.hi = min(nz), max(nz)
        else:
            self.lo, self.hi = 0, -1
        self._terms = {n: terms[n] for n in range(self.lo, self.hi + 1) if n in terms}
        for n, M in self._terms.items():
            if M.ring != ring:
                raise RingMismatch(f"term {n} over {M.ring}, complex over {ring}")
        self._diffs: Dict[int, ModuleMap] = {}
        for n, d in (diffs or {}).items():
            if self.lo < n <= self.hi:
                if d.source.ngens != self.term(n).ngens or d.target.ngens != self.term(n - 1).ngens:
                    raise ComplexError(f"differential d_{n} has the wrong shape")
                self._diffs[n] = d
        self._lock = threading.Lock()
        self._homology: Dict[int, "Homology"] = {}
        if check:
            for n in range(self.lo + 2, self.hi + 1):
                if not (self.differential(n - 1) @ self.differential(n)).is_zero():
                    raise ComplexError(f"d_{n - 1} ∘ d_{n} is not zero")

    # ------------------------------------------------------------ access
    def term(self, n: int) -> FpModule:
        M = self._terms.get(n)
        return M if M is not None else FpModule.zero(self.ring)

    def differential(self, n: int) -> ModuleMap:
        d = self._diffs.get(n)
        if d is not None:
            return d
        return ModuleMap.zero_map(self.term(n), self.term(n - 1))

    def degrees(self) -> List[int]:
        return list(range(self.lo, self.hi + 1))

    def ranks(self) -> Dict[int, int]:
        return {n: self.term(n).ngens for n in self.degrees()}

    def is_free(self) -> bool:
        return all(self.term(n).is_free for n in self.degrees())

    def is_zero_complex(self) -> bool:
        return self.hi < self.lo

    def __repr__(self):
        parts = [f"{n}:{self.term(n).ngens}" for n in self.degrees()]
        return f"BoundedComplex({self.ring}, ranks {{{', '.join(parts)}}})"

    @classmethod
    def concentrated(cls, M: FpModule, degree: int = 0) -> "BoundedComplex":
        return cls(M.ring, {degree: M})

    @classmethod
    def zero(cls, ring: Ring) -> "BoundedComplex":
        return cls(ring, {})

    @classmethod
    def two_term(cls, f: ModuleMap, degree: int = 0) -> "BoundedComplex":
        """``f`` placed as ``d_degree : C_degree -> C_{degree-1}``."""
        return cls(f.ring, {degree: f.source, degree - 1: f.target}, {degree: f})

    # ------------------------------------------------------------ homology
    def homology_data(self, n: int) -> "Homology":
        h = self._homology.get(n)
        if h is None:
            h = _compute_homology(self, n)
            with self._lock:
                self._homology.setdefault(n, h)
        return h

    def homology(self, n: int) -> FpModule:
        return self.homology_data(n).module

    def is_acyclic(self) -> bool:
        return all(self.homology(n).is_zero() for n in self.degrees())


def as_complex(X) -> BoundedComplex:
    if isinstance(X, BoundedComplex):
        return X
    if isinstance(X, FpModule):
        return BoundedComplex.concentrated(X)
    raise TypeError(f"expected a module or complex, got {type(X).__name__}")


class ChainMap:
    def __init__(self, source: BoundedComplex, target: BoundedComplex, comps: Dict[int, ModuleMap],
                 check: bool = True):
        if source.ring != target.ring:
            raise RingMismatch("chain map between complexes over different rings")
        self.source = source
        self.target = target
        self.ring = source.ring
        self._comps: Dict[int, ModuleMap] = {}
        for n in source.degrees():
            f = comps.get(n)
            if f is None:
                f = ModuleMap.zero_map(source.term(n), target.term(n))
            elif f.source.ngens != source.term(n).ngens or f.target.ngens != target.term(n).ngens:
                raise ComplexError(f"component {n} has the wrong shape")
            self._comps[n] = f
        if check:
            for n in source.degrees():
                lhs = target.differential(n) @ self.component(n)
                rhs = self.component(n - 1) @ source.differential(n)
                if not lhs.equals(rhs):
                    raise ComplexError(f"chain map does not commute with d in degree {n}")

    def component(self, n: int) -> ModuleMap:
        f = self._comps.get(n)
        if f is not None:
            return f
        return ModuleMap.zero_map(self.source.term(n), self.target.term(n))

    @classmethod
    def identity(cls, C: BoundedComplex) -> "ChainMap":
        return cls(C, C, {n: ModuleMap.identity(C.term(n)) for n in C.degrees()}, check=False)

    @classmethod
    def zero_map(cls, C: BoundedComplex, D: BoundedComplex) -> "ChainMap":
        return cls(C, D, {}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        comps = {n: self.component(n) @ other.component(n) for n in other.source.degrees()}
        return ChainMap(other.source, self.target, comps, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        comps = {n: self.component(n) - other.component(n) for n in self.source.degrees()}
        return ChainMap(self.source, self.target, comps, check=False)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {n: self.component(n).scale(c) for n in self.source.degrees()}, check=False)

    def is_zero(self) -> bool:
        return all(self.component(n).is_zero() for n in self.source.degrees())

    def equals(self, other: "ChainMap") -> bool:
        return (self - other).is_zero()

    def induced(self, n: int) -> ModuleMap:
        return induced_map(self, n)

    def is_degreewise_iso(self) -> bool:
        degs = set(self.source.degrees()) | set(self.target.degrees())
        for n in degs:
            f = ModuleMap(self.source.term(n), self.target.term(n), self.component(n).matrix, check=False) \
                if n in self._comps else ModuleMap.zero_map(self.source.term(n), self.target.term(n))
            if not is_isomorphism(f):
                return False
        return True


# ---------------------------------------------------------------- homology

class Homology:
    """H_n(C) with cycle representatives and a coordinate map from cycles."""

    def __init__(self, module: FpModule, reps: List[Row], tb, to_new: ModuleMap, ring: Ring, nz: int):
        self.module = module
        self.reps = reps
        self._tb = tb
        self._to_new = to_new
        self._ring = ring
        self._nz = nz

    def coords(self, row: Sequence) -> Row:
        """Class of a cycle, in the generators of ``module``."""
        if self._tb is None:
            return ()
        t = self._tb.lift(row_to_vec(row))
        if t is None:
            raise ComplexError("element is not a cycle")
        return self._to_new.apply(vec_to_row(self._ring, t, self._nz))


def _compute_homology(C: BoundedComplex, n: int) -> Homology:
    ring = C.ring
    Cn = C.term(n)
    if Cn.ngens == 0:
        Z = FpModule.zero(ring)
        return Homology(Z, [], None, ModuleMap.identity(Z), ring, 0)
    d = C.differential(n)
    if d.target.ngens == 0:
        Z = [Cn.gen(i) for i in range(Cn.ngens)]
    else:
        Z = list(kernel(d)[1].matrix)
    B = [r for r in C.differential(n + 1).matrix]
    tb = tagged_basis(ring, Cn.ngens, Z, list(Cn.relations) + B)
    rels = []
    for v in tb.syzygies():
        row = vec_to_row(ring, v, len(Z))
        if any(not e.is_zero() for e in row):
            rels.append(row)
    H = FpModule(ring, len(Z), rels)
    Hs, to_new, to_old = simplify(H)
    reps = []
    for r in to_old.matrix:
        rep = [ring.zero] * Cn.ngens
        for c, z in zip(r, Z):
            if not c.is_zero():
                rep = [a + c * b for a, b in zip(rep, z)]
        reps.append(tuple(rep))
    return Homology(Hs, reps, tb, to_new, ring, len(Z))


def homology(C: BoundedComplex, n: int) -> FpModule:
    return C.homology(n)


def induced_map(f: ChainMap, n: int) -> ModuleMap:
    hs = f.source.homology_data(n)
    ht = f.target.homology_data(n)
    comp = f.component(n)
    rows = [ht.coords(comp.apply(rep)) for rep in hs.reps]
    return ModuleMap(hs.module, ht.module, rows, check=False)


# ---------------------------------------------------------------- algebra

def shift(C: BoundedComplex, k: int) -> BoundedComplex:
    terms = {n + k: C.term(n) for n in C.degrees()}
    sign = -1 if k % 2 else 1
    diffs = {}
    for n in C.degrees():
        if n - 1 >= C.lo:
            d = C.differential(n)
            diffs[n + k] = d.scale(sign) if sign < 0 else d
    return BoundedComplex(C.ring, terms, diffs, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k),
                    {n + k: f.component(n) for n in f.source.degrees()}, check=False)


def _block_rows(ring: Ring, blocks: Sequence[Tuple[int, Row]], width: int) -> Row:
    row = [ring.zero] * width
    for off, part in blocks:
        for j, e in enumerate(part):
            if not e.is_zero():
                row[off + j] = row[off + j] + e
    return tuple(row)


def cone(f: ChainMap) -> BoundedComplex:
    C, D = f.source, f.target
    ring = f.ring
    lo = min(C.lo + 1, D.lo) if not C.is_zero_complex() else D.lo
    hi = max(C.hi + 1, D.hi) if not C.is_zero_complex() else D.hi
    if C.is_zero_complex() and D.is_zero_complex():
        return BoundedComplex.zero(ring)
    terms = {n: direct_sum(C.term(n - 1), D.term(n)) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        a, b = C.term(n - 1).ngens, D.term(n).ngens
        a2 = C.term(n - 2).ngens
        dc = C.differential(n - 1)
        fc = f.component(n - 1)
        dd = D.differential(n)
        width = a2 + D.term(n - 1).ngens
        rows = []
        for i in range(a):
            rows.append(_block_rows(ring, [(0, tuple(-e for e in dc.matrix[i])), (a2, fc.matrix[i])], width))
        for i in range(b):
            rows.append(_block_rows(ring, [(a2, dd.matrix[i])], width))
        diffs[n] = ModuleMap(terms[n], terms[n - 1], rows, check=False)
    return BoundedComplex(ring, terms, diffs, check=False)


def complex_sum(*cs: BoundedComplex) -> BoundedComplex:
    ring = cs[0].ring
    live = [c for c in cs if not c.is_zero_complex()]
    if not live:
        return BoundedComplex.zero(ring)
    lo = min(c.lo for c in live)
    hi = max(c.hi for c in live)
    terms = {n: direct_sum(*[c.term(n) for c in cs]) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        width = terms[n - 1].ngens
        rows = []
        off = 0
        for c in cs:
            for r in c.differential(n).matrix:
                rows.append(_block_rows(ring, [(off, r)], width))
            off += c.term(n - 1).ngens
        diffs[n] = ModuleMap(terms[n], terms[n - 1], rows, check=False)
    return BoundedComplex(ring, terms, diffs, check=False)


def complex_algebra(inputs, which: str, k: int = 0):
    if which == "shift":
        return shift(inputs, k)
    if which == "cone":
        return cone(inputs)
    if which == "direct_sum":
        return complex_sum(*inputs)
    raise ValueError(f"unknown complex operation {which!r}")


# ---------------------------------------------------------------- tensor

def _tensor_layout(C: BoundedComplex, D: BoundedComplex, n: int):
    """[(p, q, offset)] for the summands C_p ⊗ D_q of total degree n, p ascending."""
    out = []
    off = 0
    for p in C.degrees():
        q = n - p
        if D.lo <= q <= D.hi:
            out.append((p, q, off))
            off += C.term(p).ngens * D.term(q).ngens
    return out, off


def tensor_complexes(C, D, require_free: bool = True) -> BoundedComplex:
    C, D = as_complex(C), as_complex(D)
    if C.ring != D.ring:
        raise RingMismatch("tensor of complexes over different rings")
    if require_free and not (C.is_free() or D.is_free()):
        raise ComplexError("tensor_complexes needs one termwise free argument")
    ring = C.ring
    if C.is_zero_complex() or D.is_zero_complex():
        return BoundedComplex.zero(ring)
    lo, hi = C.lo + D.lo, C.hi + D.hi
    layouts = {n: _tensor_layout(C, D, n) for n in range(lo - 1, hi + 1)}
    terms = {}
    for n in range(lo, hi + 1):
        lay, _ = layouts[n]
        terms[n] = direct_sum(*[tensor(C.term(p), D.term(q)) for p, q, _ in lay]) if lay else FpModule.zero(ring)
    diffs = {}
    for n in range(lo + 1, hi + 1):
        lay, _ = layouts[n]
        tlay, width = layouts[n - 1]
        toff = {(p, q): o for p, q, o in tlay}
        rows = []
        for p, q, _ in lay:
            Cp, Dq = C.term(p), D.term(q)
            dC, dD = C.differential(p), D.differential(q)
            hq = Dq.ngens
            sign = -1 if p % 2 else 1
            for i in range(Cp.ngens):
                for j in range(hq):
                    row = [ring.zero] * width
                    o = toff.get((p - 1, q))
                    if o is not None:
                        h = D.term(q).ngens
                        for a, e in enumerate(dC.matrix[i]):
                            if not e.is_zero():
                                row[o + a * h + j] += e
                    o = toff.get((p, q - 1))
                    if o is not None:
                        h = D.term(q - 1).ngens
                        for b, e in enumerate(dD.matrix[j]):
                            if not e.is_zero():
                                row[o + i * h + b] += e if sign > 0 else -e
                    rows.append(tuple(row))
        diffs[n] = ModuleMap(terms[n], terms[n - 1], rows, check=False)
    return BoundedComplex(ring, terms, diffs)


def tensor_chain_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """f ⊗ g, assuming compatible layouts (same degree supports on both sides)."""
    S = tensor_complexes(f.source, g.source, require_free=False)
    T = tensor_complexes(f.target, g.target, require_free=False)
    ring = f.ring
    comps = {}
    for n in S.degrees():
        lay, _ = _tensor_layout(f.source, g.source, n)
        tlay, width = _tensor_layout(f.target, g.target, n)
        toff = {(p, q): o for p, q, o in tlay}
        rows = []
        for p, q, _ in lay:
            fp, gq = f.component(p), g.component(q)
            o = toff.get((p, q))
            h = g.target.term(q).ngens
            for i in range(f.source.term(p).ngens):
                for j in range(g.source.term(q).ngens):
                    row = [ring.zero] * width
                    if o is not None:
                        for a, x in enumerate(fp.matrix[i]):
                            if x.is_zero():
                                continue
                            for b, y in enumerate(gq.matrix[j]):
                                if not y.is_zero():
                                    row[o + a * h + b] += x * y
                    rows.append(tuple(row))
        comps[n] = ModuleMap(S.term(n), T.term(n), rows, check=False)
    return ChainMap(S, T, comps)


# ---------------------------------------------------------------- hom

def _hom_layout(C: BoundedComplex, X: BoundedComplex, n: int):
    """[(m, offset)] for blocks Hom(C_m, X_{m+n}); generator (i, j) at offset + i*h + j."""
    out = []
    off = 0
    for m in C.degrees():
        if X.lo <= m + n <= X.hi:
            out.append((m, off))
            off += C.term(m).ngens * X.term(m + n).ngens
    return out, off


def hom_complex(C: BoundedComplex, X) -> BoundedComplex:
    X = as_complex(X)
    if not C.is_free():
        raise ComplexError("hom_complex needs a termwise free first argument")
    if C.ring != X.ring:
        raise RingMismatch("hom of complexes over different rings")
    ring = C.ring
    if C.is_zero_complex() or X.is_zero_complex():
        return BoundedComplex.zero(ring)
    lo, hi = X.lo - C.hi, X.hi - C.lo
    layouts = {n: _hom_layout(C, X, n) for n in range(lo - 1, hi + 1)}
    terms = {}
    for n in range(lo, hi + 1):
        lay, _ = layouts[n]
        mods = []
        for m, _ in lay:
            mods.extend([X.term(m + n)] * C.term(m).ngens)
        terms[n] = direct_sum(*mods) if mods else FpModule.zero(ring)
    diffs = {}
    for n in range(lo + 1, hi + 1):
        lay, _ = layouts[n]
        tlay, width = layouts[n - 1]
        toff = dict(tlay)
        sign = -1 if n % 2 else 1  # (-1)^n
        rows = []
        for m, _ in lay:
            h = X.term(m + n).ngens
            dX = X.differential(m + n)
            dC = C.differential(m + 1)  # C_{m+1} -> C_m
            for i in range(C.term(m).ngens):
                for j in range(h):
                    row = [ring.zero] * width
                    o = toff.get(m)
                    if o is not None:
                        h2 = X.term(m + n - 1).ngens
                        for b, e in enumerate(dX.matrix[j]):
                            if not e.is_zero():
                                row[o + i * h2 + b] += e
                    o = toff.get(m + 1)
                    if o is not None:
                        for l in range(C.term(m + 1).ngens):
                            a = dC.matrix[l][i]
                            if not a.is_zero():
                                row[o + l * h + j] += -a if sign > 0 else a
                    rows.append(tuple(row))
        diffs[n] = ModuleMap(terms[n], terms[n - 1], rows, check=False)
    return BoundedComplex(ring, terms, diffs)


def hom_precompose(f: ChainMap, X) -> ChainMap:
    """Hom(f, X): Hom(D, X) -> Hom(C, X) for f: C -> D between termwise free complexes."""
    X = as_complex(X)
    C, D = f.source, f.target
    S, T = hom_complex(D, X), hom_complex(C, X)
    ring = f.ring
    comps = {}
    for n in S.degrees():
        lay, _ = _hom_layout(D, X, n)
        tlay, width = _hom_layout(C, X, n)
        toff = dict(tlay)
        rows = []
        for m, _ in lay:
            h = X.term(m + n).ngens
            fm = f.component(m)  # C_m -> D_m
            for i in range(D.term(m).ngens):
                for j in range(h):
                    row = [ring.zero] * width
                    o = toff.get(m)
                    if o is not None:
                        for l in range(C.term(m).ngens):
                            a = fm.matrix[l][i]
                            if not a.is_zero():
                                row[o + l * h + j] += a
                    rows.append(tuple(row))
        comps[n] = ModuleMap(S.term(n), T.term(n), rows, check=False)
    return ChainMap(S, T, comps)


def hom_postcompose(C: BoundedComplex, g: ChainMap) -> ChainMap:
    """Hom(C, g): Hom(C, X) -> Hom(C, Y) for g: X -> Y."""
    X, Y = g.source, g.target
    S, T = hom_complex(C, X), hom_complex(C, Y)
    ring = g.ring
    comps = {}
    for n in S.degrees():
        lay, _ = _hom_layout(C, X, n)
        tlay, width = _hom_layout(C, Y, n)
        toff = dict(tlay)
        rows = []
        for m, _ in lay:
            gm = g.component(m + n)
            h2 = Y.term(m + n).ngens
            for i in range(C.term(m).ngens):
                for j in range(X.term(m + n).ngens):
                    row = [ring.zero] * width
                    o = toff.get(m)
                    if o is not None:
                        for b, e in enumerate(gm.matrix[j]):
                            if not e.is_zero():
                                row[o + i * h2 + b] += e
                    rows.append(tuple(row))
        comps[n] = ModuleMap(S.term(n), T.term(n), rows, check=False)
    return ChainMap(S, T, comps)


# ---------------------------------------------------------------- resolutions

class Resolution(NamedTuple):
    complex: BoundedComplex
    augmentation: ChainMap
    complete: bool


def default_length(ring: Ring) -> int:
    """Global dimension bound for rings without relations; a working default otherwise."""
    if not ring.ideal_gb:
        return ring.nvars + (0 if ring.domain.is_field else 1)
    return ring.nvars + 3


def free_resolution(M: FpModule, length: Optional[int] = None) -> Resolution:
    ring = M.ring
    if length is None:
        length = default_length(ring)
    F0 = FpModule.free(ring, M.ngens)
    terms = {0: F0}
    diffs = {}
    rows = list(M.relations)
    prev = F0
    i = 1
    while rows and i <= length:
        Fi = FpModule.free(ring, len(rows))
        d = ModuleMap(Fi, prev, rows, check=False)
        terms[i] = Fi
        diffs[i] = d
        rows = [r for r in kernel(d)[1].matrix if any(not e.is_zero() for e in r)]
        prev = Fi
        i += 1
    complete = not rows
    P = BoundedComplex(ring, terms, diffs, check=False)
    aug = ChainMap(P, BoundedComplex.concentrated(M), {0: ModuleMap(F0, M, [M.gen(i) for i in range(M.ngens)], check=False)}, check=False)
    return Resolution(P, aug, complete)


def _lift_map(source: FpModule, values: Sequence[Row], along: ModuleMap) -> ModuleMap:
    """For a free source, a map h with along ∘ h = (e_i -> values[i])."""
    rows = []
    for v in values:
        pre = along.lift(v)
        if pre is None:
            raise ComplexError("lifting failed: value not in the image")
        rows.append(pre)
    return ModuleMap(source, along.source, rows, check=False)


class Replacement(NamedTuple):
    complex: BoundedComplex
    map: ChainMap
    complete: bool


def free_replacement(C, length: Optional[int] = None) -> Replacement:
    """Termwise free P with a chain map P -> C, a quasi-isomorphism when ``complete``.

    Built by induction on the lowest degree: resolve C_lo by Q, replace the
    brutal truncation above lo by P', and glue with a degree -1 map P' -> Q.
    Truncated resolutions give a map that is a quasi-isomorphism below the
    truncation horizon only.
    """
    C = as_complex(C)
    ring = C.ring
    if C.is_free():
        return Replacement(C, ChainMap.identity(C), True)
    if length is None:
        length = default_length(ring)
    lo = C.lo
    upper = BoundedComplex(ring, {n: C.term(n) for n in range(lo + 1, C.hi + 1)},
                           {n: C.differential(n) for n in range(lo + 2, C.hi + 1)}, check=False)
    if upper.is_zero_complex():
        res = free_resolution(C.term(lo), length)
        P = shift(res.complex, lo)
        comp = {lo: res.augmentation.component(0)}
        return Replacement(P, ChainMap(P, C, comp), res.complete)
    Pu, phi_u, comp_u = free_replacement(upper, length)
    res = free_resolution(C.term(lo), length)
    Q = shift(res.complex, lo)
    eps = res.augmentation.component(0)  # Q_lo -> C_lo
    top_q = Q.hi if not Q.is_zero_complex() else lo - 1
    # H_n needs exactness of Q at n-2, known below top_q (everywhere when complete)
    hmax = Pu.hi if (res.complete or Pu.hi <= top_q + 1) else top_q + 1
    H: Dict[int, ModuleMap] = {}
    n = lo + 1
    if n <= hmax:
        vals = (C.differential(n) @ phi_u.component(n)).matrix
        H[n] = _lift_map(Pu.term(n), vals, eps)
    for n in range(lo + 2, hmax + 1):
        # d_Q H_n = -H_{n-1} d_{P'}
        target = (H[n - 1] @ Pu.differential(n)).scale(-1)
        if Q.term(n - 1).ngens == 0:
            if not target.is_zero():
                raise ComplexError("free replacement gluing failed")
            H[n] = ModuleMap.zero_map(Pu.term(n), Q.term(n - 1))
            continue
        H[n] = _lift_map(Pu.term(n), target.matrix, Q.differential(n - 1))
    top = max(hmax, top_q)
    terms = {}
    diffs = {}
    for n in range(lo, top + 1):
        terms[n] = direct_sum(Pu.term(n), Q.term(n))
    for n in range(lo + 1, top + 1):
        a = Pu.term(n).ngens
        a1 = Pu.term(n - 1).ngens
        width = a1 + Q.term(n - 1).ngens
        dP, dQ = Pu.differential(n), Q.differential(n)
        Hn = H.get(n, ModuleMap.zero_map(Pu.term(n), Q.term(n - 1)))
        rows = []
        for i in range(a):
            rows.append(_block_rows(ring, [(0, dP.matrix[i]), (a1, Hn.matrix[i])], width))
        for i in range(Q.term(n).ngens):
            rows.append(_block_rows(ring, [(a1, dQ.matrix[i])], width))
        diffs[n] = ModuleMap(terms[n], terms[n - 1], rows, check=False)
    P = BoundedComplex(ring, terms, diffs)
    comps = {}
    for n in range(lo, top + 1):
        a = Pu.term(n).ngens
        rows = list(phi_u.component(n).matrix) if n > lo else []
        if n == lo:
            rows.extend(eps.matrix)
        else:
            rows.extend([C.term(n).zero_element()] * Q.term(n).ngens)
        comps[n] = ModuleMap(P.term(n), C.term(n), rows, check=False)
    complete = comp_u and res.complete and hmax == Pu.hi
    return Replacement(P, ChainMap(P, C, comps), complete)


def is_quasi_iso(f: ChainMap) -> bool:
    return cone(f).is_acyclic()


def derived_binary(X, N, which: str, length: Optional[int] = None) -> BoundedComplex:
    """Derived tensor or hom: resolve the first argument, then apply the plain functor."""
    if isinstance(X, FpModule):
        P = free_resolution(X, length).complex
    else:
        P = free_replacement(X, length).complex
    if which == "tensor":
        return tensor_complexes(P, N)
    if which == "hom":
        return hom_complex(P, N)
    raise ValueError(f"unknown derived functor {which!r}")
