"""Arithmetic in the prime field Z/p."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import total_ordering

from sympy import isprime

from .errors import BadModulus, DivisionByZero, NoImaginaryUnit

DEFAULT_PRIME = 101
MODULUS_ENV = "SOSIDENT_MODULUS"

# Dense arrays are int64; products of two residues must not overflow.
MAX_PRIME = 2**31


@dataclass(frozen=True)
class Modulus:
    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or isinstance(p, bool):
            raise BadModulus(f"modulus must be an int, got {p!r}")
        if p >= MAX_PRIME:
            raise BadModulus(f"modulus {p} too large (must be < 2**31)")
        if not isprime(p):
            raise BadModulus(f"modulus {p} is not prime")

    def require_above(self, degree: int) -> None:
        """Raise BadModulus unless p > degree."""
        if self.p <= degree:
            raise BadModulus(f"modulus {self.p} must exceed degree {degree}")

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    def __int__(self):
        return self.p

    def __str__(self):
        return f"Z/{self.p}"


def default_modulus() -> Modulus:
    """The working modulus: $SOSIDENT_MODULUS if set, else 101."""
    raw = os.environ.get(MODULUS_ENV)
    if raw is None or raw.strip() == "":
        return Modulus(DEFAULT_PRIME)
    try:
        return Modulus(int(raw))
    except ValueError as exc:
        raise BadModulus(f"{MODULUS_ENV}={raw!r} is not a valid prime") from exc


def as_modulus(m) -> Modulus:
    return m if isinstance(m, Modulus) else Modulus(int(m))


@total_ordering
class FieldElement:
    """A residue class mod p, stored by its canonical representative."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: Modulus | int):
        m = as_modulus(modulus)
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "value", int(value) % m.p)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def p(self) -> int:
        return self.modulus.p

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise BadModulus(f"cannot mix {self.modulus} and {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def _make(self, v: int) -> FieldElement:
        return FieldElement(v, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def inverse(self) -> FieldElement:
        return ff_inv(self, self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * ff_inv(o, self.modulus)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(o) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._make(pow(self.value, e, self.p))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __lt__(self, other):
        return self.value < self._coerce(other)

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    __index__ = __int__

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.value}, p={self.p})"

    def __str__(self):
        return str(self.value)


def ff_inv(a, m: Modulus | int) -> FieldElement:
    """Multiplicative inverse of ``a`` mod p."""
    m = as_modulus(m)
    v = int(a) % m.p
    if v == 0:
        raise DivisionByZero(f"0 has no inverse mod {m.p}")
    return FieldElement(pow(v, -1, m.p), m)


def sqrt_minus_one(m: Modulus | int) -> FieldElement:
    """The smaller of the two square roots of -1 mod p.

    Exists exactly when p = 2 or p = 1 (mod 4). For p = 1 (mod 4) we raise a
    quadratic non-residue to the power (p-1)/4.
    """
    m = as_modulus(m)
    p = m.p
    if p == 2:
        return FieldElement(1, m)
    if p % 4 != 1:
        raise NoImaginaryUnit(f"-1 is not a square mod {p} (p = 3 mod 4)")
    for a in range(2, p):
        c = pow(a, (p - 1) // 4, p)
        if c * c % p == p - 1:
            return FieldElement(min(c, p - c), m)
    raise AssertionError("unreachable for prime p = 1 mod 4")
