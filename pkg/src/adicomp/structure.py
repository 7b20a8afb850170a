"""Structure of modules: Smith normal form over Euclidean bases, annihilators,
nilpotence of ideals on modules, homogeneity, and short descriptions."""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .modules import FpModule, ModuleMap, kernel, row_to_vec, tagged_basis
from .rings import Ideal, Ring, RingElement


# ---------------------------------------------------------------- Euclidean arithmetic

class _IntOps:
    def norm(self, a):
        return abs(a)

    def divmod(self, a, b):
        q, r = divmod(a, b)
        return q, r

    def normal(self, a):
        return abs(a)

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return abs(a) == 1


class _UnivariateOps:
    """K[x] with elements as RingElements of a one-variable ring over a field."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.dom = ring.domain

    def norm(self, a: RingElement):
        return a.degree()

    def _lead(self, a: RingElement):
        e = max(a.terms)
        return e, a.terms[e]

    def divmod(self, a: RingElement, b: RingElement):
        R = self.ring
        q, r = R.zero, a
        (eb,), cb = self._lead(b)
        inv = self.dom.inv(cb)
        while not r.is_zero() and r.degree() >= b.degree():
            (er,), cr = self._lead(r)
            t = R.element({(er - eb,): self.dom.norm(cr * inv)})
            q = q + t
            r = r - t * b
        return q, r

    def normal(self, a: RingElement):
        if a.is_zero():
            return a
        _, c = self._lead(a)
        return a * self.ring(self.dom.inv(c))

    def is_zero(self, a):
        return a.is_zero()

    def is_unit(self, a):
        return not a.is_zero() and a.degree() == 0


def smith_diagonal(mat: List[List], ncols: int, ops) -> List:
    """Invariant factors (nonzero, normalized, each dividing the next) of a matrix."""
    A = [list(r) for r in mat if any(not ops.is_zero(x) for x in r)]
    out = []
    while A and ncols:
        # pivot: smallest norm nonzero entry
        best = None
        for i, r in enumerate(A):
            for j, x in enumerate(r):
                if not ops.is_zero(x) and (best is None or ops.norm(x) < best[0]):
                    best = (ops.norm(x), i, j)
        if best is None:
            break
        _, i, j = best
        A[0], A[i] = A[i], A[0]
        for r in A:
            r[0], r[j] = r[j], r[0]
        p = A[0][0]
        dirty = False
        for i in range(1, len(A)):
            if not ops.is_zero(A[i][0]):
                q, rem = ops.divmod(A[i][0], p)
                A[i] = [a - q * b for a, b in zip(A[i], A[0])]
                if not ops.is_zero(rem):
                    dirty = True
        for j in range(1, ncols):
            if not ops.is_zero(A[0][j]):
                q, rem = ops.divmod(A[0][j], p)
                for r in A:
                    r[j] = r[j] - q * r[0]
                if not ops.is_zero(rem):
                    dirty = True
        if dirty:
            continue
        bad = None
        for i in range(1, len(A)):
            for j in range(1, ncols):
                if not ops.is_zero(A[i][j]) and not ops.is_zero(ops.divmod(A[i][j], p)[1]):
                    bad = i
                    break
            if bad:
                break
        if bad:
            A[0] = [a + b for a, b in zip(A[0], A[bad])]
            continue
        out.append(ops.normal(p))
        A = [r[1:] for r in A[1:]]
        A = [r for r in A if any(not ops.is_zero(x) for x in r)]
        ncols -= 1
    return out


def _ops_for(ring: Ring):
    if ring.nvars == 0:
        return _IntOps() if not ring.domain.is_field else None
    if ring.nvars == 1 and ring.domain.is_field and not ring.ideal_gb:
        return _UnivariateOps(ring)
    return None


def euclidean_world(ring: Ring) -> bool:
    """ZZ, ZZ/m, a field, or K[x]: modules decompose into cyclic summands."""
    return ring.nvars == 0 or (ring.nvars == 1 and ring.domain.is_field and not ring.ideal_gb)


def invariant_factors(M: FpModule) -> Optional[Tuple[List, int]]:
    """(torsion invariant factors, free rank) when the base is Euclidean-like, else None.

    Over ZZ/m the answer describes M as an abelian group; over a field the
    torsion list is empty.
    """
    ring = M.ring
    g = M.ngens
    if ring.nvars == 0 and ring.domain.is_field:
        rows = [[e.constant_value() for e in r] for r in M.relations]
        rank = _field_rank(rows, g, ring.domain)
        return [], g - rank
    ops = _ops_for(ring)
    if ops is None:
        return None
    if isinstance(ops, _IntOps):
        rows = [[int(e.constant_value()) for e in r] for r in M.relations]
        m = ring.integer_modulus
        if m:
            rows += [[m if i == j else 0 for j in range(g)] for i in range(g)]
    else:
        rows = [list(r) for r in M.relations]
    diag = smith_diagonal(rows, g, ops)
    tors = [d for d in diag if not ops.is_unit(d)]
    return tors, g - len(diag)


def _field_rank(rows, ncols, dom) -> int:
    A = [[dom.norm(x) for x in r] for r in rows]
    rank = 0
    col = 0
    while col < ncols and rank < len(A):
        piv = next((i for i in range(rank, len(A)) if A[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = dom.inv(A[rank][col])
        A[rank] = [dom.norm(x * inv) for x in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][col] != 0:
                c = A[i][col]
                A[i] = [dom.norm(a - c * b) for a, b in zip(A[i], A[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------- descriptions

def _ring_label(ring: Ring) -> str:
    if ring.nvars == 0 and ring.domain.name == "ZZ":
        return "Z"
    return ring.ambient().describe() if ring.ideal_gb and ring.nvars else ring.describe()


def describe(M: FpModule) -> str:
    """Short human-readable isomorphism type (canonical on Euclidean bases)."""
    if M.ngens == 0 or M.is_zero():
        return "0"
    ring = M.ring
    inv = invariant_factors(M)
    if inv is not None:
        tors, free = inv
        parts = []
        if ring.nvars == 0:
            base = "Z" if ring.domain.name == "ZZ" else ring.domain.name
            parts = [f"Z/{d}" for d in tors]
        else:
            base = ring.describe()
            parts = [f"{base}/({d})" for d in tors]
        if free:
            parts.append(base if free == 1 else f"{base}^{free}")
        return " ⊕ ".join(parts)
    if M.ngens == 1:
        amb = ring.ambient()
        gens = [amb.element(r[0].terms) for r in M.relations] + [amb.element(p) for p in ring.ideal_gb]
        J = Ideal(amb, gens).groebner_basis()
        if J.is_zero():
            return amb.describe()
        return f"{_ring_label(amb)}/({', '.join(str(g) for g in J.gens)})"
    if M.is_free:
        return f"{ring.describe()}^{M.ngens}"
    rels = "; ".join("[" + ", ".join(str(e) for e in r) + "]" for r in M.relations)
    return f"coker({M.ngens} gens; {rels})"


# ---------------------------------------------------------------- annihilators, powers

def annihilator(M: FpModule) -> Ideal:
    """ann(M) as the kernel of R -> M^g, 1 -> (e_1, ..., e_g)."""
    from .modules import direct_sum
    ring = M.ring
    if M.ngens == 0:
        return Ideal(ring, [ring.one])
    big = direct_sum(*([M] * M.ngens))
    row = []
    for i in range(M.ngens):
        row.extend(M.gen(i))
    f = ModuleMap(FpModule.free(ring, 1), big, [tuple(row)], check=False)
    _, inc = kernel(f)
    return Ideal(ring, [r[0] for r in inc.matrix])


def ideal_times_module(I: Ideal, M: FpModule) -> List[Tuple]:
    """Generators of I·M as rows."""
    out = []
    for f in I.gens:
        for i in range(M.ngens):
            out.append(tuple(f if j == i else M.ring.zero for j in range(M.ngens)))
    return out


def quotient_by_ideal(M: FpModule, I: Ideal) -> FpModule:
    return FpModule(M.ring, M.ngens, list(M.relations) + ideal_times_module(I, M))


def submodule_contains(M: FpModule, gens: Sequence[Tuple], rows: Sequence[Tuple]) -> bool:
    """Every row lies in the submodule of M generated by gens."""
    tb = tagged_basis(M.ring, M.ngens, list(gens), M.relations)
    return all(tb.contains(row_to_vec(M.row(r))) for r in rows)


def power_rows(M: FpModule, I: Ideal, n: int) -> List[Tuple]:
    return ideal_times_module(I.power(n), M)


def is_nilpotent_on(I: Ideal, M: FpModule) -> bool:
    """I^N M = 0 for some N, decided by I ⊆ sqrt(ann M)."""
    ann = annihilator(M)
    return all(ann.radical_member(x) for x in I.gens)


def nilpotency_index(I: Ideal, M: FpModule, limit: int = 64) -> Optional[int]:
    """Least N with I^N M = 0, searched up to limit."""
    if M.is_zero():
        return 0
    P = Ideal(M.ring, [M.ring.one])
    for N in range(1, limit + 1):
        P = P * I
        if all(M.is_zero_element(r) for r in ideal_times_module(P, M)):
            return N
    return None


def adic_stable_index(I: Ideal, M: FpModule, limit: int) -> Optional[int]:
    """Least N <= limit with I^N M = I^{N+1} M (then the chain is constant from N)."""
    P = Ideal(M.ring, [M.ring.one])
    prev = ideal_times_module(P, M)
    for N in range(0, limit + 1):
        P2 = P * I
        nxt = ideal_times_module(P2, M)
        if submodule_contains(M, nxt, prev):
            return N
        P, prev = P2, nxt
    return None


def element_power_chain(M: FpModule, x: RingElement, limit: int) -> Tuple[Optional[int], Optional[List[Tuple]]]:
    """Least N <= limit with x^N M = x^{N+1} M and generators of the stable submodule."""
    cur = [M.gen(i) for i in range(M.ngens)]
    for N in range(0, limit + 1):
        nxt = [tuple(x * e for e in r) for r in cur]
        if submodule_contains(M, nxt, cur):
            return N, cur
        cur = nxt
    return None, None


# ---------------------------------------------------------------- gradings

def _homogeneous_degree(e: RingElement) -> Optional[int]:
    degs = {sum(m) for m in e.terms}
    return degs.pop() if len(degs) == 1 else None


def is_graded_setup(M: FpModule, I: Ideal) -> bool:
    """Standard grading makes the ring, I (in positive degrees) and M homogeneous."""
    ring = M.ring
    if ring.nvars == 0:
        return False
    for p in ring.ideal_gb:
        if len({sum(m) for m in p}) > 1:
            return False
    for g in I.gens:
        d = _homogeneous_degree(g)
        if d is None or d <= 0:
            return False
    # generator shifts s_i with d(r_i) + s_i constant along each relation row
    edges: Dict[int, List[Tuple[int, int]]] = {}
    for r in M.relations:
        entries = []
        for i, e in enumerate(r):
            if e.is_zero():
                continue
            d = _homogeneous_degree(e)
            if d is None:
                return False
            entries.append((i, d))
        i0, d0 = entries[0]
        for i, d in entries[1:]:
            edges.setdefault(i0, []).append((i, d0 - d))
            edges.setdefault(i, []).append((i0, d - d0))
    shift: Dict[int, int] = {}
    for start in range(M.ngens):
        if start in shift:
            continue
        shift[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            for v, off in edges.get(u, ()):
                want = shift[u] + off
                if v not in shift:
                    shift[v] = want
                    stack.append(v)
                elif shift[v] != want:
                    return False
    return True
