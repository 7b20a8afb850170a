"""Gröbner bases of submodules of free modules A^r, A = K[x_1..x_n], K in {ZZ, QQ, GF(p)}.

Vectors are dicts mapping ``(position, monomial)`` to a nonzero coefficient.
Polynomials are vectors supported in position 0.  Terms are compared
position-over-term with *lower* positions larger, so that a basis computed
for ``(v, e_i)``-tagged rows eliminates the leading block; this is what the
syzygy and lifting routines rely on.

Over ZZ the basis is a strong Gröbner basis (S- and G-polynomials); with no
variables this degenerates to a Hermite normal form computation.  Normal forms
are canonical: for ZZ every coefficient is reduced into ``[0, lc)`` by the
reducer of smallest leading coefficient.
"""
from __future__ import annotations

import heapq
import threading
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coeffs import (
    Domain,
    Monomial,
    lcm_int,
    mono_div,
    mono_divides,
    mono_key_function,
    mono_lcm,
    mono_mul,
    xgcd,
)

Term = Tuple[int, Monomial]
Vector = Dict[Term, object]


def freeze(v: Vector) -> tuple:
    return tuple(sorted(v.items()))


class _Elt:
    __slots__ = ("vec", "pos", "mono", "lc", "single")

    def __init__(self, vec: Vector, lt: Term):
        self.vec = vec
        self.pos, self.mono = lt
        self.lc = vec[lt]
        self.single = all(p == self.pos for p, _ in vec)


class Engine:
    """Reduction and Buchberger completion for one (domain, nvars, order) triple."""

    def __init__(self, domain: Domain, nvars: int, order: str):
        self.dom = domain
        self.nvars = nvars
        self.order = order
        self._mk = mono_key_function(order)
        self.zero_mono: Monomial = (0,) * nvars
        self._cache: Dict[tuple, List[Vector]] = {}
        self._lock = threading.Lock()

    # ------------------------------------------------------------ basics
    def key(self, t: Term):
        return (-t[0], self._mk(t[1]))

    def lead(self, v: Vector) -> Term:
        return max(v, key=self.key)

    def normalize(self, v: Vector) -> Vector:
        """Make the leading coefficient 1 (fields) or positive (ZZ)."""
        if not v:
            return v
        lc = v[self.lead(v)]
        dom = self.dom
        if dom.is_field:
            if lc == 1:
                return v
            inv = dom.inv(lc)
            return {t: dom.norm(c * inv) for t, c in v.items()}
        if lc < 0:
            return {t: -c for t, c in v.items()}
        return v

    def _axpy(self, v: Vector, q, m: Monomial, w: Vector) -> None:
        """v -= q * m * w, in place."""
        norm = self.dom.norm
        for (p, e), c in w.items():
            k = (p, mono_mul(e, m))
            nv = norm(v.get(k, 0) - q * c)
            if nv == 0:
                v.pop(k, None)
            else:
                v[k] = nv

    # ------------------------------------------------------------ reduction
    def reduce(self, v: Vector, basis: Sequence[_Elt], by_pos=None) -> Vector:
        """Full reduction of v by basis (canonical when basis is a reduced GB)."""
        if by_pos is None:
            by_pos = _index(basis)
        v = dict(v)
        rem: Vector = {}
        key = self.key
        field = self.dom.is_field
        dom = self.dom
        while v:
            t = max(v, key=key)
            c = v[t]
            pos, mono = t
            best = None
            for b in by_pos.get(pos, ()):
                if mono_divides(b.mono, mono):
                    if field:
                        best = b
                        break
                    if best is None or abs(b.lc) < abs(best.lc):
                        best = b
                        if abs(b.lc) == 1:
                            break
            if best is None:
                rem[t] = v.pop(t)
                continue
            if field:
                q = c if best.lc == 1 else dom.norm(c * dom.inv(best.lc))
            else:
                q = c // best.lc
            if q == 0:
                rem[t] = v.pop(t)
                continue
            self._axpy(v, q, mono_div(mono, best.mono), best.vec)
            if t in v:
                rem[t] = v.pop(t)
        return rem

    # ------------------------------------------------------------ completion
    def groebner(self, gens: Iterable[Vector]) -> List[Vector]:
        """Reduced (strong, over ZZ) Gröbner basis, deterministic for fixed input order."""
        gens = [g for g in gens if g]
        ck = tuple(freeze(g) for g in gens)
        hit = self._cache.get(ck)
        if hit is not None:
            return hit
        result = self._buchberger(gens)
        with self._lock:
            self._cache[ck] = result
        return result

    def _buchberger(self, gens: List[Vector]) -> List[Vector]:
        basis: List[_Elt] = []
        by_pos: Dict[int, List[_Elt]] = {}
        heap: list = []
        counter = 0
        done = set()
        field = self.dom.is_field

        def add(h: Vector):
            nonlocal counter
            h = self.normalize(h)
            e = _Elt(h, self.lead(h))
            idx = len(basis)
            for j, b in enumerate(basis):
                if b.pos != e.pos:
                    continue
                L = mono_lcm(b.mono, e.mono)
                heapq.heappush(heap, (self._mk(L), counter, j, idx))
                counter += 1
            basis.append(e)
            by_pos.setdefault(e.pos, []).append(e)

        for g in gens:
            h = self.reduce(g, basis, by_pos)
            if h:
                add(h)

        while heap:
            _, _, i, j = heapq.heappop(heap)
            done.add((i, j))
            f, g = basis[i], basis[j]
            L = mono_lcm(f.mono, g.mono)
            if field and f.single and g.single and L == mono_mul(f.mono, g.mono):
                continue
            if field and self._chain_skip(i, j, L, basis, done):
                continue
            for h in self._pair_polys(f, g, L):
                h = self.reduce(h, basis, by_pos)
                if h:
                    add(h)
        return self._interreduce(basis)

    def _chain_skip(self, i, j, L, basis, done) -> bool:
        pos = basis[i].pos
        for k, b in enumerate(basis):
            if k in (i, j) or b.pos != pos or not mono_divides(b.mono, L):
                continue
            if (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done:
                return True
        return False

    def _pair_polys(self, f: _Elt, g: _Elt, L: Monomial) -> List[Vector]:
        mf, mg = mono_div(L, f.mono), mono_div(L, g.mono)
        out = []
        if self.dom.is_field:
            s: Vector = {}
            self._axpy(s, -1, mf, f.vec)
            self._axpy(s, 1, mg, g.vec)
            out.append(s)
            return out
        a, b = f.lc, g.lc
        c = lcm_int(a, b)
        s = {}
        self._axpy(s, -(c // a), mf, f.vec)
        self._axpy(s, c // b, mg, g.vec)
        out.append(s)
        if a % b and b % a:
            _, u, w = xgcd(a, b)
            gp: Vector = {}
            self._axpy(gp, -u, mf, f.vec)
            self._axpy(gp, -w, mg, g.vec)
            out.append(gp)
        return out

    def _interreduce(self, basis: List[_Elt]) -> List[Vector]:
        field = self.dom.is_field
        keep: List[_Elt] = []
        for i, e in enumerate(basis):
            redundant = False
            for j, o in enumerate(basis):
                if i == j or o.pos != e.pos or not mono_divides(o.mono, e.mono):
                    continue
                if not field and e.lc % o.lc:
                    continue
                same = o.mono == e.mono and (field or o.lc == e.lc)
                if same and j > i:
                    continue
                redundant = True
                break
            if not redundant:
                keep.append(e)
        out = []
        for i, e in enumerate(keep):
            others = keep[:i] + keep[i + 1:]
            out.append(self.normalize(self.reduce(e.vec, others)))
        out = [v for v in out if v]
        out.sort(key=lambda v: self.key(self.lead(v)), reverse=True)
        return out

    # ------------------------------------------------------------ helpers
    def elts(self, gb: Sequence[Vector]) -> List[_Elt]:
        return [_Elt(v, self.lead(v)) for v in gb]

    def nf(self, v: Vector, gb: Sequence[Vector]) -> Vector:
        return self.reduce(v, self.elts(gb))


def _index(basis: Sequence[_Elt]) -> Dict[int, List[_Elt]]:
    out: Dict[int, List[_Elt]] = {}
    for b in basis:
        out.setdefault(b.pos, []).append(b)
    return out


_ENGINES: Dict[tuple, Engine] = {}
_ENGINE_LOCK = threading.Lock()


def engine_for(domain: Domain, nvars: int, order: str) -> Engine:
    k = (domain.name, nvars, order)
    eng = _ENGINES.get(k)
    if eng is None:
        with _ENGINE_LOCK:
            eng = _ENGINES.setdefault(k, Engine(domain, nvars, order))
    return eng


class TaggedBasis:
    """Gröbner basis of the rows ``(g_i, e_i)`` plus untagged ``(x, 0)`` extras.

    Main block occupies positions ``0..rank-1``; tags follow.  Elements of the
    basis living entirely in the tag block generate the syzygies of the ``g_i``
    modulo the extras; reducing ``(v, 0)`` expresses v in terms of the ``g_i``.
    """

    def __init__(self, engine: Engine, rank: int, gens: Sequence[Vector], extras: Sequence[Vector] = ()):
        self.engine = engine
        self.rank = rank
        self.ngens = len(gens)
        z = engine.zero_mono
        rows = []
        for i, g in enumerate(gens):
            v = dict(g)
            v[(rank + i, z)] = engine.dom.from_int(1)
            rows.append(v)
        rows.extend(dict(x) for x in extras if x)
        self.gb = engine.groebner(rows)
        self._elts = engine.elts(self.gb)
        self._by_pos = _index(self._elts)

    def syzygies(self) -> List[Vector]:
        out = []
        for e in self._elts:
            if e.pos >= self.rank:
                out.append({(p - self.rank, m): c for (p, m), c in e.vec.items()})
        return out

    def lift(self, v: Vector) -> Optional[Vector]:
        """Coefficients a with v = sum a_i g_i modulo extras, or None if v is not in the span."""
        r = self.engine.reduce(v, self._elts, self._by_pos)
        if any(p < self.rank for p, _ in r):
            return None
        norm = self.engine.dom.norm
        return {(p - self.rank, m): norm(-c) for (p, m), c in r.items()}

    def contains(self, v: Vector) -> bool:
        r = self.engine.reduce(v, self._elts, self._by_pos)
        return not any(p < self.rank for p, _ in r)
