"""Dimensions of secant varieties of the variety of squares.

``sigma_r`` is the closure of the set of sums of ``r`` squares of forms of
degree ``d/2`` in ``n + 1`` variables. Its tangent space at a general point
``sum f_i^2`` is the Terracini span ``f_1*S + ... + f_r*S`` (S = forms of
degree d/2), whose expected dimension is ``r*N - C(r, 2)``.

Sampled ranks are computed over Z/p at random points. A rank found at a
special point bounds the generic rank over the rationals from below, so a
maximal rank certifies non-defectivity, and anything less is inconclusive.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import DegreeMismatch, OddDegree
from .exactla import FMatrix, rank_array
from .gf import Modulus, as_modulus
from .polyring import GradedBasis, HomogeneousPoly, monomial_basis, sum_index


def _check_even(d: int) -> None:
    if d % 2:
        raise OddDegree(f"degree {d} is odd; sums of squares need even degree")


@dataclass(frozen=True)
class SecantParams:
    n: int
    d: int
    r: int

    def __post_init__(self):
        _check_even(self.d)
        if self.d < 2:
            raise ValueError(f"degree must be at least 2, got {self.d}")
        if self.n < 1:
            raise ValueError(f"need at least two variables (n >= 1), got n={self.n}")
        if self.r < 1:
            raise ValueError(f"need r >= 1, got r={self.r}")

    @property
    def half(self) -> int:
        return self.d // 2

    @property
    def N(self) -> int:
        """Dimension of the space of forms of degree d/2."""
        return comb(self.half + self.n, self.n)

    @property
    def ambient_dim(self) -> int:
        return comb(self.d + self.n, self.n)


def expected_dim(params: SecantParams) -> int:
    return params.r * params.N - comb(params.r, 2)


def ambient_dim(n: int, d: int) -> int:
    return comb(d + n, n)


def generic_rank(d: int, n: int) -> int:
    """Smallest r whose expected dimension reaches the ambient dimension."""
    _check_even(d)
    N = comb(d // 2 + n, n)
    target = comb(d + n, n)
    r = 1
    while r * N - comb(r, 2) < target:
        r += 1
    return r


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent deterministic stream for one trial of one run."""
    return np.random.default_rng([int(seed), int(trial)])


def random_forms(n: int, degree: int, r: int, modulus, rng: np.random.Generator) -> list[HomogeneousPoly]:
    return [HomogeneousPoly.random(n, degree, modulus, rng) for _ in range(r)]


def terracini_matrix(f_list: Sequence[HomogeneousPoly], *,
                     multipliers: GradedBasis | None = None,
                     target: GradedBasis | None = None) -> FMatrix:
    """Row ``i*N + j`` holds the coefficients of ``f_i * t_j``.

    ``t_j`` runs over ``multipliers`` (default: the graded-lex basis of degree
    d/2) and columns follow ``target`` (default: graded-lex basis of degree d).
    """
    if not f_list:
        raise DegreeMismatch("empty list of forms")
    f0 = f_list[0]
    for f in f_list:
        f0._check_compatible(f)
        if f.degree != f0.degree:
            raise DegreeMismatch(f"mixed degrees {f0.degree} and {f.degree}")
    half, n = f0.degree, f0.n
    if multipliers is None:
        multipliers = monomial_basis(n, half)
    if target is None:
        target = monomial_basis(n, 2 * half)
    N = multipliers.size
    rows = np.zeros((len(f_list), N, target.size), dtype=np.int64)
    j = np.arange(N)[None, :]
    for i, f in enumerate(f_list):
        table = sum_index(f.basis, multipliers, target)      # (coeff index a, multiplier j)
        rows[i][j, table] = f.coeffs[:, None]
    return FMatrix(rows.reshape(len(f_list) * N, target.size), f0.modulus)


def terracini_rank(f_list: Sequence[HomogeneousPoly]) -> int:
    return rank_array(terracini_matrix(f_list).data, f_list[0].p)


class DimensionVerdict(str, enum.Enum):
    NON_DEFECTIVE_CERTIFIED = "NonDefectiveCertified"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class DimensionReport:
    params: SecantParams
    modulus: Modulus
    seed: int
    trials: int
    observed_rank: int
    expected_dim: int
    ambient_dim: int
    verdict: DimensionVerdict

    def to_dict(self) -> dict:
        return {
            "n": self.params.n, "d": self.params.d, "r": self.params.r,
            "p": self.modulus.p, "seed": self.seed, "trials": self.trials,
            "observed_rank": self.observed_rank, "expected_dim": self.expected_dim,
            "ambient_dim": self.ambient_dim, "verdict": self.verdict.value,
        }


def secant_dim_sample(params: SecantParams, modulus=None, seed: int = 0,
                      trials: int = 3) -> DimensionReport:
    """Maximum Terracini rank over ``trials`` random points."""
    from .gf import default_modulus

    m = default_modulus() if modulus is None else as_modulus(modulus)
    m.require_above(params.d)
    if trials < 1:
        raise ValueError("trials must be positive")
    edim = expected_dim(params)
    amb = params.ambient_dim
    goal = min(edim, amb)
    best = 0
    for t in range(trials):
        rng = trial_rng(seed, t)
        forms = random_forms(params.n, params.half, params.r, m, rng)
        best = max(best, terracini_rank(forms))
        if best >= goal:
            break
    verdict = (DimensionVerdict.NON_DEFECTIVE_CERTIFIED if best == goal
               else DimensionVerdict.INCONCLUSIVE)
    return DimensionReport(params, m, seed, trials, best, edim, amb, verdict)


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of a closed-form non-defectivity bound; truthy iff it holds."""

    holds: bool
    applicable: bool = True

    def __bool__(self):
        return self.holds


def bdp_bound_check(n: int, r: int, d: int) -> BoundCheck:
    """Closed-form sufficient condition ``r*(d/2 + 1) <= n*d + b``.

    ``b = min(n, r - n - 2)``, which needs ``r >= n + 2``; below that the
    bound is not applicable and the result is false.
    """
    if r < n + 2:
        return BoundCheck(False, applicable=False)
    b = min(n, r - n - 2)
    return BoundCheck(r * (Fraction(d, 2) + 1) <= n * d + b)


def bop2_bound_check(n: int, r: int, d: int) -> bool:
    """Sufficient condition ``r <= 2n - (2/d)(n + 2)``."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    return Fraction(r) <= 2 * n - Fraction(2, d) * (n + 2)
