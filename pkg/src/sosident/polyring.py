"""Homogeneous polynomials over Z/p in dense coefficient form.

A form of degree ``d`` in ``n + 1`` variables is a coefficient vector indexed
by a :class:`GradedBasis`. The default basis order is graded-lexicographic
(within a fixed degree: lexicographically descending exponent vectors, so
``x0**d`` comes first and ``xn**d`` last).

Dual forms (differential operators) live in the same coefficient space. The
contraction of a dual monomial ``(x^g)^v`` against ``x^b`` is ``x^(b-g)`` when
``b >= g`` componentwise and 0 otherwise; no multinomial factors appear.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb

import numpy as np

from .errors import ArityMismatch, BadModulus, DegreeMismatch, MalformedPolynomial
from .gf import FieldElement, Modulus, as_modulus

Monomial = tuple[int, ...]


def _compositions(n_vars: int, degree: int):
    """Exponent vectors of total ``degree``, lexicographically descending."""
    if n_vars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _compositions(n_vars - 1, degree - first):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class GradedBasis:
    """An ordered basis of monomials of fixed degree in ``n + 1`` variables."""

    n: int
    degree: int
    monomials: tuple[Monomial, ...]
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        mons = tuple(tuple(int(e) for e in m) for m in self.monomials)
        object.__setattr__(self, "monomials", mons)
        if len(mons) != comb(self.n + self.degree, self.n):
            raise DegreeMismatch(
                f"basis of degree {self.degree} in {self.n + 1} variables needs "
                f"{comb(self.n + self.degree, self.n)} monomials, got {len(mons)}")
        for m in mons:
            if len(m) != self.n + 1 or sum(m) != self.degree or min(m) < 0:
                raise DegreeMismatch(f"monomial {m} is not of degree {self.degree}")
        if len(set(mons)) != len(mons):
            raise DegreeMismatch("repeated monomial in basis")
        object.__setattr__(self, "_hash", hash((self.n, self.degree, mons)))

    @property
    def size(self) -> int:
        return len(self.monomials)

    def __len__(self):
        return len(self.monomials)

    @cached_property
    def index(self) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials)}

    @cached_property
    def exponents(self) -> np.ndarray:
        return np.array(self.monomials, dtype=np.int64).reshape(self.size, self.n + 1)

    def __eq__(self, other):
        if not isinstance(other, GradedBasis):
            return NotImplemented
        return self is other or (self._hash == other._hash and self.monomials == other.monomials
                                 and self.n == other.n)

    def __hash__(self):
        return self._hash

    def permuted(self, order: Sequence[int]) -> GradedBasis:
        """The same monomials listed in the order ``order``."""
        return GradedBasis(self.n, self.degree, tuple(self.monomials[i] for i in order))

    def __repr__(self):
        return f"GradedBasis(n={self.n}, degree={self.degree}, size={self.size})"


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> GradedBasis:
    """Graded-lex basis of degree ``d`` forms in ``n + 1`` variables."""
    if n < 0 or d < 0:
        raise DegreeMismatch(f"need n >= 0 and d >= 0, got n={n}, d={d}")
    return GradedBasis(n, d, tuple(_compositions(n + 1, d)))


@lru_cache(maxsize=256)
def sum_index(a: GradedBasis, b: GradedBasis, target: GradedBasis) -> np.ndarray:
    """Table ``T[i, j]`` = position in ``target`` of ``a[i] * b[j]``."""
    if not (a.n == b.n == target.n) or a.degree + b.degree != target.degree:
        raise DegreeMismatch("incompatible bases for a product table")
    # Encode exponent vectors in mixed radix to look up positions vectorially.
    radix = target.degree + 1
    weights = radix ** np.arange(target.n, -1, -1, dtype=np.int64)
    keys = (a.exponents[:, None, :] + b.exponents[None, :, :]) @ weights
    tkeys = target.exponents @ weights
    order = np.argsort(tkeys)
    pos = np.searchsorted(tkeys, keys, sorter=order)
    table = order[pos]
    table.setflags(write=False)
    return table


class HomogeneousPoly:
    """A form of fixed degree with coefficients in Z/p."""

    __slots__ = ("basis", "coeffs", "modulus")

    def __init__(self, basis: GradedBasis, coeffs, modulus):
        m = as_modulus(modulus)
        c = np.mod(np.asarray(coeffs, dtype=np.int64).reshape(-1), m.p)
        if c.shape[0] != basis.size:
            raise DegreeMismatch(
                f"coefficient vector has length {c.shape[0]}, basis size is {basis.size}")
        c.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "modulus", m)

    def __setattr__(self, name, value):
        raise AttributeError("HomogeneousPoly is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n: int, d: int, modulus) -> HomogeneousPoly:
        basis = monomial_basis(n, d)
        return cls(basis, np.zeros(basis.size, dtype=np.int64), modulus)

    @classmethod
    def monomial(cls, exponents: Sequence[int], modulus, coeff: int = 1) -> HomogeneousPoly:
        exps = tuple(int(e) for e in exponents)
        basis = monomial_basis(len(exps) - 1, sum(exps))
        c = np.zeros(basis.size, dtype=np.int64)
        c[basis.index[exps]] = coeff
        return cls(basis, c, modulus)

    @classmethod
    def from_terms(cls, n: int, d: int, terms: Iterable[tuple[Sequence[int], int]],
                   modulus) -> HomogeneousPoly:
        """Build from ``(exponents, coefficient)`` pairs; repeated monomials add up."""
        m = as_modulus(modulus)
        basis = monomial_basis(n, d)
        c = np.zeros(basis.size, dtype=np.int64)
        for exps, coeff in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n + 1:
                raise ArityMismatch(f"monomial {exps} does not have {n + 1} exponents")
            if sum(exps) != d or min(exps) < 0:
                raise DegreeMismatch(f"monomial {exps} does not have degree {d}")
            c[basis.index[exps]] = (c[basis.index[exps]] + int(coeff)) % m.p
        return cls(basis, c, m)

    @classmethod
    def random(cls, n: int, d: int, modulus, rng: np.random.Generator) -> HomogeneousPoly:
        """Dense form with i.i.d. uniform coefficients."""
        m = as_modulus(modulus)
        basis = monomial_basis(n, d)
        return cls(basis, rng.integers(0, m.p, size=basis.size, dtype=np.int64), m)

    @classmethod
    def linear(cls, coeffs: Sequence[int], modulus) -> HomogeneousPoly:
        """``c0*x0 + ... + cn*xn``."""
        return cls(monomial_basis(len(coeffs) - 1, 1), list(coeffs), modulus)

    # -- basic properties -----------------------------------------------

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def degree(self) -> int:
        return self.basis.degree

    @property
    def p(self) -> int:
        return self.modulus.p

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def terms(self) -> list[tuple[Monomial, int]]:
        nz = np.flatnonzero(self.coeffs)
        return [(self.basis.monomials[i], int(self.coeffs[i])) for i in nz]

    def coefficient(self, exponents: Sequence[int]) -> int:
        return int(self.coeffs[self.basis.index[tuple(exponents)]])

    def in_basis(self, basis: GradedBasis) -> HomogeneousPoly:
        if basis is self.basis:
            return self
        return HomogeneousPoly(basis, coeff_vector(self, basis), self.modulus)

    # -- arithmetic -----------------------------------------------------

    def _check_compatible(self, other: HomogeneousPoly) -> None:
        if self.modulus != other.modulus:
            raise BadModulus(f"cannot mix {self.modulus} and {other.modulus}")
        if self.n != other.n:
            raise ArityMismatch(f"{self.n + 1} vs {other.n + 1} variables")

    def __add__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        self._check_compatible(other)
        if self.degree != other.degree:
            raise DegreeMismatch(f"cannot add degree {self.degree} and {other.degree}")
        return HomogeneousPoly(self.basis, self.coeffs + coeff_vector(other, self.basis),
                               self.modulus)

    def __sub__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return HomogeneousPoly(self.basis, -self.coeffs, self.modulus)

    def scale(self, c) -> HomogeneousPoly:
        c = int(c) % self.p
        return HomogeneousPoly(self.basis, self.coeffs * c, self.modulus)

    def __mul__(self, other):
        if isinstance(other, HomogeneousPoly):
            return poly_mul(self, other)
        if isinstance(other, (int, np.integer, FieldElement)):
            return self.scale(int(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer, FieldElement)):
            return self.scale(int(other))
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = HomogeneousPoly.monomial((0,) * (self.n + 1), self.modulus)
        for _ in range(e):
            result = poly_mul(result, self)
        return result

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        if self.modulus != other.modulus or self.n != other.n or self.degree != other.degree:
            return False
        return bool(np.array_equal(self.coeffs, coeff_vector(other, self.basis)))

    def __hash__(self):
        canon = coeff_vector(self, monomial_basis(self.n, self.degree))
        return hash((self.p, self.n, self.degree, canon.tobytes()))

    # -- text forms -----------------------------------------------------

    def __str__(self):
        parts = []
        for mono, c in self.terms():
            factors = []
            for k, e in enumerate(mono):
                if e == 1:
                    factors.append(f"x{k}")
                elif e > 1:
                    factors.append(f"x{k}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"HomogeneousPoly({self}; n={self.n}, d={self.degree}, p={self.p})"

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.degree, "p": self.p,
                "terms": [{"exp": list(m), "c": c} for m, c in self.terms()]}

    @classmethod
    def from_json(cls, obj) -> HomogeneousPoly:
        """Parse ``{"n", "d", "p", "terms": [{"exp": [...], "c": int}]}``."""
        if isinstance(obj, (str, bytes)):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise MalformedPolynomial(f"invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise MalformedPolynomial("polynomial must be a JSON object")
        try:
            n, d, p, terms = obj["n"], obj["d"], obj["p"], obj["terms"]
        except KeyError as exc:
            raise MalformedPolynomial(f"missing field {exc}") from exc
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (n, d, p)):
            raise MalformedPolynomial("n, d and p must be integers")
        if n < 0 or d < 0:
            raise MalformedPolynomial("n and d must be nonnegative")
        if not isinstance(terms, list):
            raise MalformedPolynomial("terms must be a list")
        pairs = []
        for t in terms:
            if not isinstance(t, dict) or "exp" not in t or "c" not in t:
                raise MalformedPolynomial(f"bad term {t!r}")
            exps, c = t["exp"], t["c"]
            if (not isinstance(exps, list)
                    or not all(isinstance(e, int) and not isinstance(e, bool) for e in exps)
                    or not isinstance(c, int) or isinstance(c, bool)):
                raise MalformedPolynomial(f"bad term {t!r}")
            if len(exps) != n + 1 or sum(exps) != d or min(exps, default=0) < 0:
                raise MalformedPolynomial(f"exponents {exps} do not fit n={n}, d={d}")
            pairs.append((exps, c))
        try:
            modulus = Modulus(p)
        except BadModulus as exc:
            raise MalformedPolynomial(str(exc)) from exc
        return cls.from_terms(n, d, pairs, modulus)


def coeff_vector(f: HomogeneousPoly, basis: GradedBasis) -> np.ndarray:
    """Coefficients of ``f`` listed in the order of ``basis``."""
    if basis.degree != f.degree:
        raise DegreeMismatch(f"form has degree {f.degree}, basis has degree {basis.degree}")
    if basis.n != f.n:
        raise ArityMismatch(f"form has {f.n + 1} variables, basis has {basis.n + 1}")
    if basis is f.basis or basis.monomials == f.basis.monomials:
        return f.coeffs
    idx = f.basis.index
    perm = np.fromiter((idx[m] for m in basis.monomials), dtype=np.int64, count=basis.size)
    return f.coeffs[perm]


def poly_mul(f: HomogeneousPoly, g: HomogeneousPoly,
             target: GradedBasis | None = None) -> HomogeneousPoly:
    """Exact product ``f * g``."""
    f._check_compatible(g)
    if target is None:
        target = monomial_basis(f.n, f.degree + g.degree)
    table = sum_index(f.basis, g.basis, target)
    p = f.p
    prod = np.mod(np.outer(f.coeffs, g.coeffs), p)
    out = np.zeros(target.size, dtype=np.int64)
    np.add.at(out, table.reshape(-1), prod.reshape(-1))
    return HomogeneousPoly(target, out, f.modulus)


def contract(D: HomogeneousPoly, f: HomogeneousPoly) -> HomogeneousPoly:
    """Apply the dual form ``D`` of degree i to ``f`` of degree d.

    The result has degree ``d - i``; for ``i == d`` it is the scalar pairing
    ``sum_g D[g] * f[g]`` as a degree-0 form.
    """
    D._check_compatible(f)
    i, d = D.degree, f.degree
    if i > d:
        raise DegreeMismatch(f"cannot contract degree {d} by a dual form of degree {i}")
    out_basis = monomial_basis(f.n, d - i)
    table = sum_index(D.basis, out_basis, f.basis)
    cat = f.coeffs[table]                      # (size_i, size_{d-i})
    p = f.p
    vals = np.mod(np.mod(D.coeffs[:, None] * cat, p).sum(axis=0), p)
    return HomogeneousPoly(out_basis, vals, f.modulus)


def pairing(D: HomogeneousPoly, f: HomogeneousPoly) -> int:
    """Full-degree contraction as a plain integer residue."""
    if D.degree != f.degree:
        raise DegreeMismatch(f"pairing needs equal degrees, got {D.degree} and {f.degree}")
    return int(contract(D, f).coeffs[0])


def stack_coeffs(forms: Sequence[HomogeneousPoly], basis: GradedBasis | None = None) -> np.ndarray:
    """Rows are coefficient vectors of ``forms`` (all of one degree)."""
    if not forms:
        raise DegreeMismatch("empty list of forms")
    f0 = forms[0]
    if basis is None:
        basis = f0.basis
    for f in forms:
        f0._check_compatible(f)
        if f.degree != f0.degree:
            raise DegreeMismatch(f"mixed degrees {f0.degree} and {f.degree}")
    return np.vstack([coeff_vector(f, basis) for f in forms])
