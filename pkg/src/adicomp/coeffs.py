"""Coefficient domains (ZZ, QQ, GF(p)) and monomial orders."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, Tuple


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, u, v) with g = gcd(a, b) >= 0 and u*a + v*b = g."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


class Domain:
    name = "?"
    is_field = True
    characteristic = 0

    def norm(self, c):
        return c

    def from_int(self, n: int):
        return self.norm(n)

    def inv(self, c):
        raise NotImplementedError

    def is_unit(self, c) -> bool:
        return c != 0

    def to_str(self, c) -> str:
        return str(c)

    def parse_rational(self, num: int, den: int):
        """Coefficient num/den, or ValueError when den is not invertible."""
        if den == 1:
            return self.from_int(num)
        if not self.is_unit(self.from_int(den)):
            raise ValueError(f"cannot divide by {den} in {self.name}")
        return self.norm(self.from_int(num) * self.inv(self.from_int(den)))

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Domain) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


class IntegerDomain(Domain):
    name = "ZZ"
    is_field = False

    def norm(self, c):
        return int(c)

    def inv(self, c):
        if c in (1, -1):
            return c
        raise ZeroDivisionError(f"{c} is not a unit in ZZ")

    def is_unit(self, c) -> bool:
        return c in (1, -1)


class RationalField(Domain):
    name = "QQ"

    def norm(self, c):
        if isinstance(c, Fraction) and c.denominator == 1:
            return int(c.numerator)
        return c

    def inv(self, c):
        return self.norm(Fraction(1) / c)

    def parse_rational(self, num: int, den: int):
        return self.norm(Fraction(num, den))

    def to_str(self, c) -> str:
        return str(c)


class PrimeField(Domain):
    is_field = True

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"GF({p}) needs a prime modulus")
        self.p = p
        self.name = f"GF({p})"
        self.characteristic = p

    def norm(self, c):
        return int(c) % self.p

    def inv(self, c):
        return pow(int(c), -1, self.p)

    def is_unit(self, c) -> bool:
        return c % self.p != 0


ZZ = IntegerDomain()
QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def domain_from_name(name: str) -> Domain:
    name = name.strip()
    if name == "ZZ":
        return ZZ
    if name == "QQ":
        return QQ
    if name.startswith("GF(") and name.endswith(")"):
        return GF(int(name[3:-1]))
    raise ValueError(f"unknown coefficient domain {name!r}")


def lcm_int(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


# ---------------------------------------------------------------- monomials

Monomial = Tuple[int, ...]


def mono_key_function(order: str) -> Callable[[Monomial], tuple]:
    """Sort key: larger key = larger monomial."""
    if order == "lex":
        return lambda e: e
    if order == "grevlex":
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    raise ValueError(f"unknown monomial order {order!r}")


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))
