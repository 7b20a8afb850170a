"""Base rings, elements, ideals and ring maps.

Every supported ring is ``K[x_1..x_n] / J`` with K one of ZZ, QQ, GF(p) and J
stored as a reduced Gröbner basis.  ZZ is the case n = 0, ZZ/m is n = 0 with
J = (m).  Elements are kept in normal form, so equality is syntactic.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .coeffs import QQ, ZZ, Domain, Monomial, mono_key_function, mono_mul
from .expr import ParseError, parse_standalone
from .groebner import Engine, Vector, engine_for

Poly = Dict[Monomial, object]


class RingMismatch(ValueError):
    pass


# ---------------------------------------------------------------- raw polynomial helpers

def poly_add(a: Poly, b: Poly, dom: Domain, sign: int = 1) -> Poly:
    out = dict(a)
    for m, c in b.items():
        v = dom.norm(out.get(m, 0) + sign * c)
        if v == 0:
            out.pop(m, None)
        else:
            out[m] = v
    return out


def poly_mul(a: Poly, b: Poly, dom: Domain) -> Poly:
    out: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = mono_mul(m1, m2)
            v = dom.norm(out.get(m, 0) + c1 * c2)
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
    return out


def poly_scale(a: Poly, c, dom: Domain) -> Poly:
    out = {}
    for m, v in a.items():
        w = dom.norm(v * c)
        if w != 0:
            out[m] = w
    return out


def poly_to_vec(p: Poly, pos: int = 0) -> Vector:
    return {(pos, m): c for m, c in p.items()}


def vec_to_poly(v: Vector) -> Poly:
    return {m: c for (_, m), c in v.items()}


class Ring:
    """Quotient ``K[vars] / J`` of a polynomial ring; J may be empty."""

    def __init__(self, domain: Domain, variables: Sequence[str] = (), order: str = "grevlex",
                 relations: Iterable = (), name: Optional[str] = None):
        self.domain = domain
        self.variables: Tuple[str, ...] = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        mono_key_function(order)
        self.order = order
        self.nvars = len(self.variables)
        self.engine: Engine = engine_for(domain, self.nvars, order)
        self.name = name
        rel_polys = []
        for r in relations:
            if isinstance(r, RingElement):
                rel_polys.append(dict(r.terms))
            elif isinstance(r, str):
                rel_polys.append(_eval_ast(parse_standalone(r), self._ambient_ops()))
            elif isinstance(r, int):
                rel_polys.append(self._const_poly(r))
            else:
                rel_polys.append(dict(r))
        gb = self.engine.groebner([poly_to_vec(p) for p in rel_polys])
        self.ideal_gb: Tuple[Poly, ...] = tuple(vec_to_poly(v) for v in gb)
        self._gb_elts = self.engine.elts(gb)
        self._key = (domain.name, self.variables, order,
                     tuple(tuple(sorted(p.items())) for p in self.ideal_gb))

    # ------------------------------------------------------------ identity
    def __eq__(self, other):
        return isinstance(other, Ring) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return self.name or self.describe()

    def describe(self) -> str:
        if not self.variables:
            base = self.domain.name
        else:
            base = f"{self.domain.name}[{', '.join(self.variables)}]"
        if self.ideal_gb:
            return f"{base}/({', '.join(self._poly_str(p) for p in self.ideal_gb)})"
        return base

    @property
    def kind(self) -> str:
        if self.nvars == 0:
            if self.domain == ZZ:
                return "integers-mod-m" if self.ideal_gb else "integers"
            return "field"
        return "quotient" if self.ideal_gb else "polynomial"

    @property
    def is_euclidean(self) -> bool:
        """ZZ, a field, or a univariate polynomial ring over a field (no relations)."""
        if self.ideal_gb:
            return False
        return self.nvars == 0 or (self.nvars == 1 and self.domain.is_field)

    @cached_property
    def integer_modulus(self) -> Optional[int]:
        """m with J ∩ ZZ = (m) when J contains a nonzero integer (ZZ coefficients only)."""
        if self.domain != ZZ:
            return None
        zero = (0,) * self.nvars
        for p in self.ideal_gb:
            if list(p) == [zero]:
                return abs(p[zero])
        return None

    # ------------------------------------------------------------ element construction
    def _const_poly(self, c) -> Poly:
        c = self.domain.norm(c)
        return {(0,) * self.nvars: c} if c != 0 else {}

    def reduce_poly(self, p: Poly) -> Poly:
        if not self.ideal_gb:
            return p
        return vec_to_poly(self.engine.reduce(poly_to_vec(p), self._gb_elts))

    def element(self, p: Poly) -> "RingElement":
        return RingElement(self, self.reduce_poly(p))

    def __call__(self, x) -> "RingElement":
        if isinstance(x, RingElement):
            if x.ring == self:
                return x
            if not x.ring.variables and x.is_constant():
                return self.element(self._const_poly(x.constant_value()))
            raise RingMismatch(f"element of {x.ring} is not in {self}")
        if isinstance(x, (int, Fraction)):
            if isinstance(x, Fraction):
                return self.element(self._const_poly(self.domain.parse_rational(x.numerator, x.denominator)))
            return self.element(self._const_poly(x))
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot convert {x!r} into {self}")

    def parse(self, text: str) -> "RingElement":
        return self.from_ast(parse_standalone(text))

    def from_ast(self, node) -> "RingElement":
        return self.element(_eval_ast(node, self._ambient_ops()))

    def _ambient_ops(self):
        return _AmbientOps(self)

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, {})

    @property
    def one(self) -> "RingElement":
        return self.element(self._const_poly(1))

    def gens(self) -> List["RingElement"]:
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.element({tuple(e): self.domain.from_int(1)}))
        return out

    def var(self, name: str) -> "RingElement":
        return self.gens()[self.variables.index(name)]

    # ------------------------------------------------------------ derived rings
    def quotient(self, relations: Iterable, name: Optional[str] = None) -> "Ring":
        rels = [self(r).terms if not isinstance(r, RingElement) else r.terms for r in relations]
        return Ring(self.domain, self.variables, self.order, list(self.ideal_gb) + rels, name=name)

    def ambient(self) -> "Ring":
        return Ring(self.domain, self.variables, self.order)

    def extend(self, new_vars: Sequence[str], order: Optional[str] = None) -> "Ring":
        """Ring with extra variables appended (relations carried over)."""
        k = len(new_vars)
        rels = [{m + (0,) * k: c for m, c in p.items()} for p in self.ideal_gb]
        return Ring(self.domain, self.variables + tuple(new_vars), order or self.order, rels)

    def unit_inverse(self, a: "RingElement") -> Optional["RingElement"]:
        """Inverse of a when a is a detectably invertible constant, else None."""
        if a.is_zero() or not a.is_constant():
            return None
        c = a.constant_value()
        if self.domain.is_unit(c):
            return self(self.domain.inv(c)) if self.domain.is_field else self(c)
        m = self.integer_modulus
        if m is not None and m > 1:
            try:
                return self(pow(c, -1, m))
            except ValueError:
                return None
        return None

    def _poly_str(self, p: Poly) -> str:
        return poly_str(p, self.variables, self.domain, self.order)


class _AmbientOps:
    def __init__(self, ring: Ring):
        self.ring = ring

    def const(self, n: int) -> Poly:
        return self.ring._const_poly(n)

    def var(self, name: str, line: int, col: int) -> Poly:
        r = self.ring
        if name not in r.variables:
            raise ParseError(f"unknown variable {name!r} in {r.describe()}", line, col)
        e = [0] * r.nvars
        e[r.variables.index(name)] = 1
        return {tuple(e): r.domain.from_int(1)}


def _eval_ast(node, ops: _AmbientOps) -> Poly:
    dom = ops.ring.domain
    kind = node[0]
    if kind == "int":
        return ops.const(node[1])
    if kind == "name":
        return ops.var(node[1], node[2], node[3])
    if kind == "neg":
        return poly_scale(_eval_ast(node[1], ops), -1, dom)
    if kind == "pow":
        base = _eval_ast(node[1], ops)
        out = ops.const(1)
        for _ in range(node[2][1]):
            out = ops.ring.reduce_poly(poly_mul(out, base, dom))
        return out
    a = _eval_ast(node[1], ops)
    b = _eval_ast(node[2], ops)
    if kind == "add":
        return poly_add(a, b, dom)
    if kind == "sub":
        return poly_add(a, b, dom, -1)
    if kind == "mul":
        return ops.ring.reduce_poly(poly_mul(a, b, dom))
    if kind == "div":
        zero = (0,) * ops.ring.nvars
        if list(b) != [zero]:
            raise ParseError("division only by nonzero constants")
        c = b[zero]
        num, den = (c.numerator, c.denominator) if isinstance(c, Fraction) else (c, 1)
        return poly_scale(a, dom.parse_rational(den, num), dom)
    raise ValueError(f"bad expression node {kind}")


def poly_str(p: Poly, variables: Sequence[str], dom: Domain, order: str) -> str:
    if not p:
        return "0"
    mk = mono_key_function(order)
    parts = []
    for m in sorted(p, key=mk, reverse=True):
        c = p[m]
        mono = "*".join(
            (v if e == 1 else f"{v}^{e}") for v, e in zip(variables, m) if e
        )
        neg = dom.characteristic == 0 and c < 0
        mag = -c if neg else c
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


class RingElement:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Poly):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # ------------------------------------------------------------ arithmetic
    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        return self.ring(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RingElement(self.ring, poly_add(self.terms, o.terms, self.ring.domain))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return RingElement(self.ring, poly_add(self.terms, o.terms, self.ring.domain, -1))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RingElement(self.ring, poly_scale(self.terms, -1, self.ring.domain))

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.terms or not o.terms:
            return self.ring.zero
        return self.ring.element(poly_mul(self.terms, o.terms, self.ring.domain))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # ------------------------------------------------------------ predicates
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        zero = (0,) * self.ring.nvars
        return not self.terms or list(self.terms) == [zero]

    def constant_value(self):
        if not self.terms:
            return 0
        return self.terms[(0,) * self.ring.nvars]

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        return self.ring._poly_str(self.terms)

    def __repr__(self):
        return f"<{self} in {self.ring}>"

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)


# ---------------------------------------------------------------- constructors

def integers() -> Ring:
    return Ring(ZZ, (), name="ZZ")


def integers_mod(m: int) -> Ring:
    return Ring(ZZ, (), relations=[{(): m}], name=f"ZZ/{m}")


def polynomial_ring(domain: Union[Domain, str], variables: Sequence[str], order: str = "grevlex") -> Ring:
    from .coeffs import domain_from_name

    if isinstance(domain, str):
        domain = domain_from_name(domain)
    return Ring(domain, variables, order)


def field(domain: Union[Domain, str]) -> Ring:
    return polynomial_ring(domain, ())


# ---------------------------------------------------------------- ideals

class Ideal:
    """Finitely generated ideal; generators are kept nonzero and in normal form."""

    def __init__(self, ring: Ring, gens: Iterable):
        self.ring = ring
        gl = []
        for g in gens:
            e = ring(g)
            if e.ring != ring:
                raise RingMismatch("generator from another ring")
            if not e.is_zero() and e not in gl:
                gl.append(e)
        self.gens: Tuple[RingElement, ...] = tuple(gl)

    def __repr__(self):
        return f"({', '.join(str(g) for g in self.gens)})"

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.gens == other.gens

    def __hash__(self):
        return hash((self.ring, self.gens))

    @cached_property
    def _gb_vectors(self) -> List[Vector]:
        r = self.ring
        rows = [poly_to_vec(g.terms) for g in self.gens]
        rows += [poly_to_vec(p) for p in r.ideal_gb]
        return r.engine.groebner(rows)

    @cached_property
    def _gb_elts(self):
        return self.ring.engine.elts(self._gb_vectors)

    def groebner_basis(self) -> "Ideal":
        """Reduced basis of the image ideal, relations of the ring removed."""
        r = self.ring
        out = []
        for v in self._gb_vectors:
            e = r.element(vec_to_poly(v))
            if not e.is_zero():
                out.append(e)
        return Ideal(r, out)

    def normal_form(self, f) -> RingElement:
        f = self.ring(f)
        r = self.ring
        return RingElement(r, vec_to_poly(r.engine.reduce(poly_to_vec(f.terms), self._gb_elts)))

    def contains_element(self, f) -> bool:
        return self.normal_form(f).is_zero()

    def contains(self, other: "Ideal") -> bool:
        _same(self.ring, other.ring)
        return all(self.contains_element(g) for g in other.gens)

    def is_unit(self) -> bool:
        return self.contains_element(self.ring.one)

    def is_zero(self) -> bool:
        return not self.gens

    def __mul__(self, other: "Ideal") -> "Ideal":
        _same(self.ring, other.ring)
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens]).minimized()

    def __add__(self, other: "Ideal") -> "Ideal":
        _same(self.ring, other.ring)
        return Ideal(self.ring, self.gens + other.gens)

    def power(self, n: int) -> "Ideal":
        if n < 0:
            raise ValueError("negative power")
        out = Ideal(self.ring, [self.ring.one])
        for _ in range(n):
            out = out * self
        return out

    def minimized(self) -> "Ideal":
        """Drop generators lying in the ideal of the earlier ones."""
        kept: List[RingElement] = []
        for g in self.gens:
            if kept and Ideal(self.ring, kept).contains_element(g):
                continue
            kept.append(g)
        return Ideal(self.ring, kept)

    def radical_member(self, f) -> bool:
        """f in sqrt(I), decided by 1 in (I, 1 - t*f) over the ring extended by t."""
        f = self.ring(f)
        r = self.ring
        t_name = "_t"
        while t_name in r.variables:
            t_name += "_"
        big = r.extend([t_name])
        lift = lambda p: {m + (0,): c for m, c in p.items()}
        gens = [big.element(lift(g.terms)) for g in self.gens]
        t = big.var(t_name)
        gens.append(big.one - t * big.element(lift(f.terms)))
        return Ideal(big, gens).is_unit()

    def map(self, theta: "RingMap") -> "Ideal":
        return Ideal(theta.target, [theta(g) for g in self.gens])


def _same(a: Ring, b: Ring) -> None:
    if a != b:
        raise RingMismatch(f"{a} vs {b}")


def normal_form(f: RingElement, B) -> RingElement:
    """Reduced remainder of f modulo the ideal generated by B (an Ideal or a list)."""
    if not isinstance(B, Ideal):
        B = Ideal(f.ring, list(B))
    _same(f.ring, B.ring)
    return B.normal_form(f)


def groebner_basis(I: Ideal) -> Ideal:
    return I.groebner_basis()


def ideal_ops(I: Ideal, J: Optional[Ideal] = None, which: str = "product", n: int = 0, f=None):
    if which == "product":
        return I * J
    if which == "power":
        return I.power(n)
    if which == "contains":
        return I.contains(J)
    if which == "radical_member":
        return I.radical_member(f)
    raise ValueError(f"unknown ideal operation {which!r}")


# ---------------------------------------------------------------- ring maps

class RingMap:
    """θ: source → target determined by the images of the source variables."""

    def __init__(self, source: Ring, target: Ring, images: Union[Sequence, Dict[str, object]] = ()):
        self.source = source
        self.target = target
        if isinstance(images, dict):
            missing = [v for v in source.variables if v not in images]
            if missing:
                raise ValueError(f"no image for variables {missing}")
            images = [images[v] for v in source.variables]
        images = list(images)
        if len(images) != source.nvars:
            raise ValueError(f"expected {source.nvars} images, got {len(images)}")
        self.images: Tuple[RingElement, ...] = tuple(target(x) for x in images)
        self._check_coefficients()
        for p in source.ideal_gb:
            if not self._map_poly(p).is_zero():
                raise ValueError(f"image of relation {source._poly_str(p)} is nonzero in {target}")

    def _check_coefficients(self):
        s, t = self.source.domain, self.target.domain
        ok = s == t or s == ZZ or (s == QQ and t == QQ)
        if not ok:
            raise ValueError(f"no coefficient map {s} -> {t}")

    def _map_poly(self, p: Poly) -> RingElement:
        t = self.target
        out = t.zero
        for m, c in p.items():
            term = t(c)
            for x, e in zip(self.images, m):
                if e:
                    term = term * x ** e
            out = out + term
        return out

    def __call__(self, f) -> RingElement:
        f = self.source(f)
        return self._map_poly(f.terms)

    @classmethod
    def identity(cls, ring: Ring) -> "RingMap":
        return cls(ring, ring, ring.gens())

    def __repr__(self):
        return f"RingMap({self.source} -> {self.target}: {[str(x) for x in self.images]})"
