"""Finitely presented modules and maps between them.

A module is ``R^g / (relation rows)``; an element is a row vector of length g.
A map ``M -> N`` is the matrix whose i-th row is the image of generator i, so
composition is matrix product in diagrammatic order and ``(g @ f).matrix ==
f.matrix * g.matrix``.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

from .groebner import TaggedBasis, Vector
from .rings import Ideal, Ring, RingElement, RingMap, RingMismatch, poly_to_vec

Row = Tuple[RingElement, ...]


class ModuleError(ValueError):
    pass


def row_to_vec(row: Sequence[RingElement], offset: int = 0) -> Vector:
    v: Vector = {}
    for i, e in enumerate(row):
        for m, c in e.terms.items():
            v[(i + offset, m)] = c
    return v


def vec_to_row(ring: Ring, v: Vector, length: int) -> Row:
    parts = [dict() for _ in range(length)]
    for (p, m), c in v.items():
        parts[p][m] = c
    return tuple(ring.element(p) for p in parts)


def _ring_extras(ring: Ring, rank: int, offset: int = 0) -> List[Vector]:
    """J·e_i for the defining ideal J of a quotient ring."""
    return [poly_to_vec(p, i + offset) for i in range(rank) for p in ring.ideal_gb]


def tagged_basis(ring: Ring, rank: int, gens: Sequence[Row], extras: Sequence[Row] = ()) -> TaggedBasis:
    ext = [row_to_vec(r) for r in extras] + _ring_extras(ring, rank)
    return TaggedBasis(ring.engine, rank, [row_to_vec(g) for g in gens], ext)


def _rows_from_tags(ring: Ring, vecs: Iterable[Vector], length: int) -> List[Row]:
    out = []
    for v in vecs:
        row = vec_to_row(ring, v, length)
        if any(not e.is_zero() for e in row) and row not in out:
            out.append(row)
    return out


def is_zero_row(row: Row) -> bool:
    return all(e.is_zero() for e in row)


class FpModule:
    """Cokernel of a map of finite free modules, given by relation rows."""

    def __init__(self, ring: Ring, ngens: int, relations: Iterable[Sequence] = (), labels: Optional[Sequence[str]] = None):
        self.ring = ring
        self.ngens = ngens
        rels: List[Row] = []
        for r in relations:
            r = tuple(ring(e) for e in r)
            if len(r) != ngens:
                raise ModuleError(f"relation of length {len(r)} for {ngens} generators")
            if not is_zero_row(r) and r not in rels:
                rels.append(r)
        self.relations: Tuple[Row, ...] = tuple(rels)
        self.labels = tuple(labels) if labels else None

    # ------------------------------------------------------------ constructors
    @classmethod
    def free(cls, ring: Ring, n: int = 1) -> "FpModule":
        return cls(ring, n)

    @classmethod
    def zero(cls, ring: Ring) -> "FpModule":
        return cls(ring, 0)

    @classmethod
    def cyclic(cls, I: Ideal) -> "FpModule":
        """R/I."""
        return cls(I.ring, 1, [(g,) for g in I.gens])

    # ------------------------------------------------------------ identity
    def _key(self):
        return (self.ring, self.ngens, self.relations)

    def __eq__(self, other):
        return isinstance(other, FpModule) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        rels = "; ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.relations)
        return f"FpModule({self.ring}, gens={self.ngens}, rels=[{rels}])"

    # ------------------------------------------------------------ elements
    @cached_property
    def _relation_basis(self):
        eng = self.ring.engine
        gb = eng.groebner([row_to_vec(r) for r in self.relations] + _ring_extras(self.ring, self.ngens))
        return eng.elts(gb)

    def row(self, entries: Sequence) -> Row:
        r = tuple(self.ring(e) for e in entries)
        if len(r) != self.ngens:
            raise ModuleError(f"element of length {len(r)} for {self.ngens} generators")
        return r

    def gen(self, i: int) -> Row:
        return tuple(self.ring.one if j == i else self.ring.zero for j in range(self.ngens))

    def zero_element(self) -> Row:
        return tuple(self.ring.zero for _ in range(self.ngens))

    def reduce(self, row: Sequence) -> Row:
        row = self.row(row)
        v = self.ring.engine.reduce(row_to_vec(row), self._relation_basis)
        return vec_to_row(self.ring, v, self.ngens)

    def is_zero_element(self, row: Sequence) -> bool:
        return is_zero_row(self.reduce(row))

    def equal_elements(self, a: Sequence, b: Sequence) -> bool:
        return self.is_zero_element(row_sub(self.row(a), self.row(b)))

    def is_zero(self) -> bool:
        return all(self.is_zero_element(self.gen(i)) for i in range(self.ngens))

    @property
    def is_free(self) -> bool:
        return not self.relations

    def relation_matrix(self) -> List[Row]:
        return list(self.relations)


def row_add(a: Row, b: Row) -> Row:
    return tuple(x + y for x, y in zip(a, b))


def row_sub(a: Row, b: Row) -> Row:
    return tuple(x - y for x, y in zip(a, b))


def row_scale(c: RingElement, a: Row) -> Row:
    return tuple(c * x for x in a)


def row_times_matrix(row: Sequence[RingElement], matrix: Sequence[Row], ring: Ring, ncols: int) -> Row:
    out = [ring.zero] * ncols
    for c, mrow in zip(row, matrix):
        if c.is_zero():
            continue
        for j, e in enumerate(mrow):
            if not e.is_zero():
                out[j] = out[j] + c * e
    return tuple(out)


class ModuleMap:
    """Homomorphism given by the images of the source generators."""

    def __init__(self, source: FpModule, target: FpModule, matrix: Sequence[Sequence], check: bool = True):
        if source.ring != target.ring:
            raise RingMismatch(f"{source.ring} vs {target.ring}")
        self.source = source
        self.target = target
        self.ring = source.ring
        mat = [target.row(r) for r in matrix]
        if len(mat) != source.ngens:
            raise ModuleError(f"map needs {source.ngens} rows, got {len(mat)}")
        self.matrix: Tuple[Row, ...] = tuple(mat)
        if check:
            for rel in source.relations:
                if not target.is_zero_element(self.apply(rel)):
                    raise ModuleError("map does not carry source relations to target relations")

    @classmethod
    def identity(cls, M: FpModule) -> "ModuleMap":
        return cls(M, M, [M.gen(i) for i in range(M.ngens)], check=False)

    @classmethod
    def zero_map(cls, M: FpModule, N: FpModule) -> "ModuleMap":
        return cls(M, N, [N.zero_element() for _ in range(M.ngens)], check=False)

    def apply(self, row: Sequence) -> Row:
        return row_times_matrix(self.source.row(row), self.matrix, self.ring, self.target.ngens)

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """self ∘ other."""
        if other.target.ngens != self.source.ngens or other.target.ring != self.source.ring:
            raise ModuleError("composition of incompatible maps")
        return ModuleMap(other.source, self.target, [self.apply(r) for r in other.matrix], check=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         [row_add(a, b) for a, b in zip(self.matrix, other.matrix)], check=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         [row_sub(a, b) for a, b in zip(self.matrix, other.matrix)], check=False)

    def __neg__(self) -> "ModuleMap":
        return self.scale(self.ring(-1))

    def scale(self, c) -> "ModuleMap":
        c = self.ring(c)
        return ModuleMap(self.source, self.target, [row_scale(c, r) for r in self.matrix], check=False)

    def is_zero(self) -> bool:
        return all(self.target.is_zero_element(r) for r in self.matrix)

    def equals(self, other: "ModuleMap") -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        rows = "; ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.matrix)
        return f"ModuleMap({self.source.ngens} -> {self.target.ngens}: [{rows}])"

    # ------------------------------------------------------------ lifting
    @cached_property
    def _image_basis(self) -> TaggedBasis:
        return tagged_basis(self.ring, self.target.ngens, self.matrix, self.target.relations)

    def lift(self, row: Sequence) -> Optional[Row]:
        """Some preimage of a target element, or None when it is not in the image."""
        t = self._image_basis.lift(row_to_vec(self.target.row(row)))
        if t is None:
            return None
        return vec_to_row(self.ring, t, self.source.ngens)

    def in_image(self, row: Sequence) -> bool:
        return self._image_basis.contains(row_to_vec(self.target.row(row)))

    @cached_property
    def _preimage_rows(self) -> List[Row]:
        """Generators of {v in R^g : f(v) = 0 in target}."""
        return _rows_from_tags(self.ring, self._image_basis.syzygies(), self.source.ngens)


# ---------------------------------------------------------------- simplification

def simplify(M: FpModule) -> Tuple[FpModule, ModuleMap, ModuleMap]:
    """Eliminate generators through unit pivots.  Returns (M', M -> M', M' -> M), both isomorphisms."""
    ring = M.ring
    rels = [list(r) for r in M.relations]
    alive = list(range(M.ngens))
    # image of every original generator, as a dict over surviving generators
    images = {i: {i: ring.one} for i in range(M.ngens)}
    while True:
        pivot = None
        for ri, r in enumerate(rels):
            for j in alive:
                inv = ring.unit_inverse(r[j])
                if inv is not None:
                    weight = sum(1 for k in alive if not r[k].is_zero())
                    if pivot is None or weight < pivot[3]:
                        pivot = (ri, j, inv, weight)
            if pivot is not None and pivot[3] == 1:
                break
        if pivot is None:
            break
        ri, j, inv, _ = pivot
        r = rels.pop(ri)
        # e_j = -inv * sum_{k != j} r_k e_k
        sub = {k: -inv * r[k] for k in alive if k != j and not r[k].is_zero()}
        for s in rels:
            c = s[j]
            if c.is_zero():
                continue
            for k in alive:
                s[k] = s[k] - c * inv * r[k]
            s[j] = ring.zero
        for i, img in images.items():
            c = img.pop(j, None)
            if c is None:
                continue
            for k, v in sub.items():
                img[k] = img.get(k, ring.zero) + c * v
                if img[k].is_zero():
                    del img[k]
        alive.remove(j)
        rels = [s for s in rels if any(not s[k].is_zero() for k in alive)]
    new_rels = [tuple(s[k] for k in alive) for s in rels]
    N = FpModule(ring, len(alive), new_rels)
    N = _compact_relations(N)
    to_new = ModuleMap(M, N, [tuple(images[i].get(k, ring.zero) for k in alive) for i in range(M.ngens)], check=False)
    to_old = ModuleMap(N, M, [M.gen(k) for k in alive], check=False)
    return N, to_new, to_old


def _compact_relations(M: FpModule) -> FpModule:
    """Replace relations by a reduced Gröbner basis of the relation module when that is no larger."""
    if not M.relations:
        return M
    ring = M.ring
    rows = []
    for v in ring.engine.groebner([row_to_vec(r) for r in M.relations] + _ring_extras(ring, M.ngens)):
        row = vec_to_row(ring, v, M.ngens)
        if not is_zero_row(row) and row not in rows:
            rows.append(row)
    if len(rows) <= len(M.relations):
        return FpModule(ring, M.ngens, rows, M.labels)
    return M


def simplified(M: FpModule, to_m: ModuleMap) -> Tuple[FpModule, ModuleMap]:
    """Simplify M where ``to_m: M -> X`` is a structure map; returns (M', M' -> X)."""
    N, _, back = simplify(M)
    return N, to_m @ back


# ---------------------------------------------------------------- kernel / cokernel / image

def kernel(f: ModuleMap, simplify_result: bool = True) -> Tuple[FpModule, ModuleMap]:
    src = f.source
    ring = f.ring
    gens = [r for r in f._preimage_rows if not src.is_zero_element(r)]
    tb = tagged_basis(ring, src.ngens, gens, src.relations)
    rels = _rows_from_tags(ring, tb.syzygies(), len(gens))
    K = FpModule(ring, len(gens), rels)
    inc = ModuleMap(K, src, gens, check=False)
    if simplify_result:
        K, inc = simplified(K, inc)
    return K, inc


def image(f: ModuleMap, simplify_result: bool = True) -> Tuple[FpModule, ModuleMap]:
    tgt = f.target
    ring = f.ring
    gens = []
    for r in f.matrix:
        if not tgt.is_zero_element(r) and r not in gens:
            gens.append(r)
    tb = tagged_basis(ring, tgt.ngens, gens, tgt.relations)
    rels = _rows_from_tags(ring, tb.syzygies(), len(gens))
    Im = FpModule(ring, len(gens), rels)
    inc = ModuleMap(Im, tgt, gens, check=False)
    if simplify_result:
        Im, inc = simplified(Im, inc)
    return Im, inc


def cokernel(f: ModuleMap, simplify_result: bool = True) -> Tuple[FpModule, ModuleMap]:
    tgt = f.target
    C = FpModule(f.ring, tgt.ngens, list(tgt.relations) + list(f.matrix))
    proj = ModuleMap(tgt, C, [C.gen(i) for i in range(tgt.ngens)], check=False)
    if simplify_result:
        C2, to_new, _ = simplify(C)
        return C2, to_new @ proj
    return C, proj


def module_op(f: ModuleMap, which: str) -> Tuple[FpModule, ModuleMap]:
    if which == "kernel":
        return kernel(f)
    if which == "cokernel":
        return cokernel(f)
    if which == "image":
        return image(f)
    raise ValueError(f"unknown module operation {which!r}")


def syzygy_module(rows: Sequence[Sequence[RingElement]], ring: Optional[Ring] = None,
                  width: Optional[int] = None) -> Tuple[FpModule, ModuleMap]:
    """Kernel of ``R^m -> R^g`` sending e_i to rows[i]; returns (kernel, inclusion into R^m)."""
    if not rows:
        if ring is None:
            raise ModuleError("ring required for an empty row list")
        return FpModule.zero(ring), ModuleMap(FpModule.zero(ring), FpModule.zero(ring), [])
    ring = ring or rows[0][0].ring
    g = width if width is not None else len(rows[0])
    F = FpModule.free(ring, len(rows))
    G = FpModule.free(ring, g)
    return kernel(ModuleMap(F, G, rows))


# ---------------------------------------------------------------- predicates

def is_injective(f: ModuleMap) -> bool:
    return all(f.source.is_zero_element(r) for r in f._preimage_rows)


def is_surjective(f: ModuleMap) -> bool:
    return all(f.in_image(f.target.gen(i)) for i in range(f.target.ngens))


def is_isomorphism(f: ModuleMap) -> bool:
    return is_surjective(f) and is_injective(f)


def is_zero(M: FpModule) -> bool:
    return M.is_zero()


def module_predicates(x) -> dict:
    if isinstance(x, FpModule):
        return {"is_zero": x.is_zero()}
    return {
        "is_zero": x.is_zero(),
        "is_injective": is_injective(x),
        "is_surjective": is_surjective(x),
        "is_isomorphism": is_isomorphism(x),
    }


# ---------------------------------------------------------------- binary constructions

def direct_sum(*mods: FpModule) -> FpModule:
    ring = mods[0].ring
    total = sum(M.ngens for M in mods)
    rels = []
    off = 0
    for M in mods:
        if M.ring != ring:
            raise RingMismatch("direct sum over different rings")
        for r in M.relations:
            row = [ring.zero] * total
            row[off:off + M.ngens] = r
            rels.append(tuple(row))
        off += M.ngens
    return FpModule(ring, total, rels)


def sum_injection(mods: Sequence[FpModule], k: int, S: Optional[FpModule] = None) -> ModuleMap:
    S = S or direct_sum(*mods)
    off = sum(M.ngens for M in mods[:k])
    return ModuleMap(mods[k], S, [S.gen(off + i) for i in range(mods[k].ngens)], check=False)


def sum_projection(mods: Sequence[FpModule], k: int, S: Optional[FpModule] = None) -> ModuleMap:
    S = S or direct_sum(*mods)
    off = sum(M.ngens for M in mods[:k])
    Mk = mods[k]
    rows = []
    for i in range(S.ngens):
        rows.append(Mk.gen(i - off) if off <= i < off + Mk.ngens else Mk.zero_element())
    return ModuleMap(S, Mk, rows, check=False)


def map_sum(maps: Sequence[ModuleMap]) -> ModuleMap:
    S = direct_sum(*[f.source for f in maps])
    T = direct_sum(*[f.target for f in maps])
    rows = []
    off = 0
    ring = S.ring
    for f in maps:
        for r in f.matrix:
            row = [ring.zero] * T.ngens
            row[off:off + f.target.ngens] = r
            rows.append(tuple(row))
        off += f.target.ngens
    return ModuleMap(S, T, rows, check=False)


def tensor(M: FpModule, N: FpModule) -> FpModule:
    """Generators e_i ⊗ f_j at index i*N.ngens + j."""
    if M.ring != N.ring:
        raise RingMismatch("tensor over different rings")
    ring = M.ring
    g, h = M.ngens, N.ngens
    rels = []
    for r in M.relations:
        for j in range(h):
            row = [ring.zero] * (g * h)
            for i in range(g):
                row[i * h + j] = r[i]
            rels.append(tuple(row))
    for i in range(g):
        for s in N.relations:
            row = [ring.zero] * (g * h)
            for j in range(h):
                row[i * h + j] = s[j]
            rels.append(tuple(row))
    return FpModule(ring, g * h, rels)


def tensor_maps(f: ModuleMap, g: ModuleMap) -> ModuleMap:
    S = tensor(f.source, g.source)
    T = tensor(f.target, g.target)
    ring = f.ring
    h2 = g.target.ngens
    rows = []
    for i in range(f.source.ngens):
        for j in range(g.source.ngens):
            row = [ring.zero] * T.ngens
            for a, x in enumerate(f.matrix[i]):
                if x.is_zero():
                    continue
                for b, y in enumerate(g.matrix[j]):
                    if not y.is_zero():
                        row[a * h2 + b] = row[a * h2 + b] + x * y
            rows.append(tuple(row))
    return ModuleMap(S, T, rows, check=False)


def swap_map(M: FpModule, N: FpModule) -> ModuleMap:
    """Canonical M ⊗ N -> N ⊗ M."""
    S, T = tensor(M, N), tensor(N, M)
    rows = [T.gen(j * M.ngens + i) for i in range(M.ngens) for j in range(N.ngens)]
    return ModuleMap(S, T, rows)


def hom(M: FpModule, N: FpModule) -> Tuple[FpModule, ModuleMap]:
    """Hom(M, N) as a submodule of N^{M.ngens}; generator (i, j) sits at i*N.ngens + j."""
    if M.ring != N.ring:
        raise RingMismatch("hom over different rings")
    ring = M.ring
    g, h = M.ngens, N.ngens
    big = direct_sum(*([N] * g)) if g else FpModule.zero(ring)
    rels = M.relations
    tgt = direct_sum(*([N] * len(rels))) if rels else FpModule.zero(ring)
    rows = []
    for i in range(g):
        for j in range(h):
            row = [ring.zero] * (len(rels) * h)
            for k, r in enumerate(rels):
                row[k * h + j] = r[i]
            rows.append(tuple(row))
    phi = ModuleMap(big, tgt, rows, check=False)
    return kernel(phi)


def hom_element_to_map(M: FpModule, N: FpModule, elem: Sequence[RingElement]) -> ModuleMap:
    """Read an element of N^{M.ngens} as the map M -> N."""
    h = N.ngens
    return ModuleMap(M, N, [tuple(elem[i * h:(i + 1) * h]) for i in range(M.ngens)])


def binary_constructions(M: FpModule, N: FpModule, which: str) -> FpModule:
    if which == "tensor":
        return tensor(M, N)
    if which == "hom":
        return hom(M, N)[0]
    if which == "direct_sum":
        return direct_sum(M, N)
    raise ValueError(f"unknown construction {which!r}")


# ---------------------------------------------------------------- base change

def base_change(theta: RingMap, X):
    """Extension of scalars along theta for ideals, modules, maps and complexes."""
    from .complexes import BoundedComplex, ChainMap

    if isinstance(X, Ideal):
        return X.map(theta)
    if isinstance(X, FpModule):
        _check_ring(theta, X.ring)
        return FpModule(theta.target, X.ngens, [tuple(theta(e) for e in r) for r in X.relations])
    if isinstance(X, ModuleMap):
        _check_ring(theta, X.ring)
        return ModuleMap(base_change(theta, X.source), base_change(theta, X.target),
                         [tuple(theta(e) for e in r) for r in X.matrix])
    if isinstance(X, BoundedComplex):
        _check_ring(theta, X.ring)
        terms = {n: base_change(theta, X.term(n)) for n in X.degrees()}
        diffs = {n: base_change(theta, X.differential(n)) for n in X.degrees() if n - 1 in terms}
        return BoundedComplex(theta.target, terms, diffs)
    if isinstance(X, ChainMap):
        return ChainMap(base_change(theta, X.source), base_change(theta, X.target),
                        {n: base_change(theta, X.component(n)) for n in X.source.degrees()})
    raise TypeError(f"cannot base change {type(X).__name__}")


def _check_ring(theta: RingMap, ring: Ring) -> None:
    if ring != theta.source:
        raise RingMismatch(f"object over {ring}, map from {theta.source}")
