"""Sums of two squares for binary forms given as products of linear factors.

For ``f = l_1 * ... * l_d`` and a split of the factors into complementary
halves A, B with products ``a`` and ``b``,

    f = ((a + b) / 2)^2 + (i (a - b) / 2)^2,    i^2 = -1.

Swapping A and B only flips the sign of the second summand, so each unordered
split gives one decomposition: C(d-1, d/2) of them. Orbit distinctness is
tested through the Gram matrix ``sum v_k v_k^T`` of coefficient vectors,
which any orthogonal change of summands preserves.
"""

from __future__ import annotations

import enum
import hashlib
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegreeMismatch, DependentInput, OddDegree
from .exactla import FMatrix, matmul_mod, rank_array
from .gf import Modulus, as_modulus, ff_inv, sqrt_minus_one
from .polyring import HomogeneousPoly, monomial_basis, poly_mul, stack_coeffs


@dataclass(frozen=True)
class Decomposition:
    """Summands ``f_1..f_r`` of ``f = sum f_k^2``."""

    summands: tuple[HomogeneousPoly, ...]

    def __post_init__(self):
        s = tuple(self.summands)
        if not s:
            raise DegreeMismatch("a decomposition needs at least one summand")
        for g in s[1:]:
            s[0]._check_compatible(g)
            if g.degree != s[0].degree:
                raise DegreeMismatch("summands of mixed degree")
        object.__setattr__(self, "summands", s)

    @property
    def r(self) -> int:
        return len(self.summands)

    @property
    def modulus(self) -> Modulus:
        return self.summands[0].modulus

    def coeff_rows(self) -> np.ndarray:
        s0 = self.summands[0]
        return stack_coeffs(self.summands, monomial_basis(s0.n, s0.degree))

    def expand(self) -> HomogeneousPoly:
        total = poly_mul(self.summands[0], self.summands[0])
        for g in self.summands[1:]:
            total = total + poly_mul(g, g)
        return total

    def transformed(self, M: FMatrix) -> Decomposition:
        """Summands ``g_i = sum_j M[i, j] f_j``."""
        if M.shape != (self.r, self.r):
            raise DegreeMismatch(f"need a {self.r}x{self.r} matrix, got {M.shape}")
        rows = matmul_mod(M.data, self.coeff_rows(), M.p)
        s0 = self.summands[0]
        basis = monomial_basis(s0.n, s0.degree)
        return Decomposition(tuple(HomogeneousPoly(basis, row, s0.modulus) for row in rows))


def _product(forms: Sequence[HomogeneousPoly]) -> HomogeneousPoly:
    out = forms[0]
    for g in forms[1:]:
        out = poly_mul(out, g)
    return out


def linear_factors(pairs: Sequence[Sequence[int]], modulus) -> list[HomogeneousPoly]:
    """``[a, b]`` pairs as binary linear forms ``a*x + b*y``."""
    m = as_modulus(modulus)
    out = []
    for pair in pairs:
        if len(pair) != 2:
            raise DegreeMismatch(f"linear factor {pair!r} must be [a, b]")
        out.append(HomogeneousPoly.linear([int(pair[0]), int(pair[1])], m))
    return out


def orbit_decompositions(linear_factors: Sequence[HomogeneousPoly]) -> list[Decomposition]:
    """One two-square decomposition per unordered split of the factors.

    Splits are enumerated as the d/2-subsets A containing the first factor, in
    lexicographic order.
    """
    factors = list(linear_factors)
    d = len(factors)
    if d == 0 or d % 2:
        raise OddDegree(f"need an even, positive number of linear factors, got {d}")
    for l in factors:
        if l.degree != 1 or l.n != 1:
            raise DegreeMismatch("factors must be linear binary forms")
        factors[0]._check_compatible(l)
    m = factors[0].modulus
    i_unit = int(sqrt_minus_one(m))
    half = int(ff_inv(2, m))
    out = []
    for rest in combinations(range(1, d), d // 2 - 1):
        A = (0,) + rest
        B = tuple(k for k in range(d) if k not in A)
        a = _product([factors[k] for k in A])
        b = _product([factors[k] for k in B])
        out.append(Decomposition(((a + b).scale(half), (a - b).scale(half * i_unit))))
    return out


def verify_decomposition(f: HomogeneousPoly, dec: Decomposition) -> bool:
    if f.degree != 2 * dec.summands[0].degree:
        raise DegreeMismatch(
            f"form of degree {f.degree} vs summands of degree {dec.summands[0].degree}")
    return f == dec.expand()


@dataclass(frozen=True)
class GramInvariant:
    matrix: FMatrix

    def digest(self) -> str:
        m = self.matrix
        h = hashlib.sha256(f"{m.rows}x{m.cols}/{m.p}:".encode())
        h.update(np.ascontiguousarray(m.data, dtype="<i8").tobytes())
        return h.hexdigest()[:16]


def gram_invariant(dec: Decomposition) -> GramInvariant:
    V = dec.coeff_rows()
    return GramInvariant(FMatrix(matmul_mod(V.T, V, dec.modulus.p), dec.modulus))


class OrbitComparison(str, enum.Enum):
    CERTIFIED_DISTINCT = "CertifiedDistinct"
    POSSIBLY_SAME = "PossiblySame"


def distinct_orbits(a: Decomposition, b: Decomposition) -> OrbitComparison:
    """One-sided test: different Gram invariants prove different orbits."""
    for dec in (a, b):
        if rank_array(dec.coeff_rows(), dec.modulus.p) < dec.r:
            raise DependentInput("decomposition has dependent summands")
    if gram_invariant(a).matrix != gram_invariant(b).matrix:
        return OrbitComparison.CERTIFIED_DISTINCT
    return OrbitComparison.POSSIBLY_SAME


def random_orthogonal(r: int, modulus, seed: int) -> FMatrix:
    """Random ``M`` with ``M @ M.T == I`` over Z/p.

    Product of ``r*r`` reflections ``I - 2 v v^T / (v^T v)`` with
    anisotropic random v, followed by random sign flips of rows.
    """
    m = as_modulus(modulus)
    p = m.p
    if p == 2:
        raise ValueError("reflections need an odd modulus")
    rng = np.random.default_rng([int(seed), r])
    M = np.eye(r, dtype=np.int64)
    for _ in range(r * r):
        while True:
            v = rng.integers(0, p, size=r, dtype=np.int64)
            q = int(v @ v) % p
            if q:
                break
        coef = 2 * pow(q, -1, p) % p
        R = np.mod(np.eye(r, dtype=np.int64) - coef * np.mod(np.outer(v, v), p), p)
        M = matmul_mod(R, M, p)
    signs = np.where(rng.integers(0, 2, size=r) == 1, p - 1, 1)
    return FMatrix(np.mod(signs[:, None] * M, p), m)
