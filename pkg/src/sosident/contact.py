"""Tangential contact loci and O(r)-identifiability certificates.

For forms ``f_1..f_r`` of degree d/2 let ``I_d = f_1*S + ... + f_r*S`` be the
Terracini span and ``H_1..H_m`` a basis of the dual forms annihilating it.
A square ``g^2`` lies in the contact locus iff ``g*S`` is inside ``I_d``,
i.e. iff ``<H_p, g*t> = 0`` for every p and every monomial t. Written in a
basis ``s_1..s_k`` of forms, the coefficient matrix of that linear system in
``g`` is the stacked Hessian ``[ (<H_p, s_i*s_j>)_ij ]_p``. Its entries are
``S @ Cat(H_p) @ S.T`` where Cat is the middle catalecticant, which is how
every Hessian here is computed.

The locus always contains ``span(f_i)``, so its dimension is at least r; the
criterion succeeds when the stacked Hessian restricted to a complement of
``span(f_i)`` has full rank ``N - r``.
"""

from __future__ import annotations

import enum
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeMismatch, DependentInput, NotSubgeneric
from .exactla import (FMatrix, kernel_array, matmul_mod, rank_array,
                      rank_lower_bound_streaming, row_echelon)
from .gf import Modulus, as_modulus, default_modulus
from .polyring import HomogeneousPoly, coeff_vector, monomial_basis, stack_coeffs, sum_index
from .secant import SecantParams, expected_dim, random_forms, terracini_matrix, trial_rng

SMOOTH_POINT = "f is a smooth point of σ_r(Sq_{d,n})"
EXPECTED_DIMENSION = "σ_r has the expected dimension rN - C(r,2)"

# Random combinations tried before falling back to the full stack.
COMBINATION_ATTEMPTS = 3


class HessianMode(str, enum.Enum):
    RANDOM_COMBINATION = "combo"
    FULL_STACK = "full"


class CertificateMode(str, enum.Enum):
    GENERIC = "Generic"
    SPECIFIC = "Specific"


class IdentifiabilityVerdict(str, enum.Enum):
    CERTIFIED = "Certified"
    INCONCLUSIVE = "Inconclusive"


def _check_forms(f_list: Sequence[HomogeneousPoly]) -> np.ndarray:
    """Coefficient rows of ``f_list`` in graded-lex order; raise if dependent."""
    if not f_list:
        raise DegreeMismatch("empty list of forms")
    f0 = f_list[0]
    F = stack_coeffs(f_list, monomial_basis(f0.n, f0.degree))
    if rank_array(F, f0.p) < len(f_list):
        raise DependentInput("the forms are linearly dependent")
    return F


def _orthogonal_complement(F: np.ndarray, p: int) -> np.ndarray | None:
    """Kernel of F under the coefficient pairing, if it is a complement of rowspace(F)."""
    S = kernel_array(F, p).T
    N = F.shape[1]
    if rank_array(np.vstack([F, S]), p) == N:
        return S
    return None


def _greedy_complement(F: np.ndarray, p: int) -> np.ndarray:
    """Extend rowspace(F) to the whole space with unit vectors (monomials)."""
    N = F.shape[1]
    _, pivots = row_echelon(F, p)
    pivot_set = set(pivots)
    # Echelon pivots of F mark columns F already covers; the other unit vectors
    # complete the echelon form to a full-rank square matrix.
    free = [c for c in range(N) if c not in pivot_set]
    return np.eye(N, dtype=np.int64)[free]


def complement_rows(F: np.ndarray, p: int) -> np.ndarray:
    S = _orthogonal_complement(F, p)
    if S is None:
        S = _greedy_complement(F, p)
    return S


@dataclass(frozen=True, eq=False)
class ContactData:
    """Everything derived from one tuple ``f_1..f_r``."""

    params: SecantParams
    modulus: Modulus
    f_list: tuple[HomogeneousPoly, ...]
    hyperplanes: tuple[HomogeneousPoly, ...]
    complement: tuple[HomogeneousPoly, ...]
    terracini_rank: int
    # coefficient rows in graded-lex order
    f_rows: np.ndarray = field(repr=False)
    complement_rows: np.ndarray = field(repr=False)
    hyperplane_rows: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.hyperplanes)

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def r(self) -> int:
        return self.params.r

    @property
    def target_rank(self) -> int:
        return self.N - self.r

    def catalecticant_of(self, h: np.ndarray) -> np.ndarray:
        """Middle catalecticant ``(h[a + b])_{a,b}`` of a degree-d dual vector."""
        half = monomial_basis(self.params.n, self.params.half)
        table = sum_index(half, half, monomial_basis(self.params.n, self.params.d))
        return h[table]

    def hessian(self, h: np.ndarray, rows: np.ndarray | None = None) -> np.ndarray:
        """``(<h, s_i * s_j>)_ij`` for the forms whose coefficients are ``rows``."""
        if rows is None:
            rows = self.complement_rows
        p = self.modulus.p
        cat = self.catalecticant_of(h)
        return matmul_mod(matmul_mod(rows, cat, p), rows.T, p)

    def hessian_blocks(self) -> Iterator[np.ndarray]:
        for h in self.hyperplane_rows:
            yield self.hessian(h)


def build_contact(f_list: Sequence[HomogeneousPoly]) -> ContactData:
    f_list = tuple(f_list)
    F = _check_forms(f_list)
    f0 = f_list[0]
    p = f0.p
    params = SecantParams(f0.n, 2 * f0.degree, len(f_list))
    T = terracini_matrix(f_list).data
    rref, pivots = row_echelon(T, p, reduced=True)
    ambient = T.shape[1]
    pivot_set = set(pivots)
    free = [c for c in range(ambient) if c not in pivot_set]
    H = np.zeros((len(free), ambient), dtype=np.int64)
    for j, c in enumerate(free):
        H[j, c] = 1
        H[j, pivots] = (-rref[:len(pivots), c]) % p
    S = complement_rows(F, p)
    full = monomial_basis(params.n, params.d)
    half = monomial_basis(params.n, params.half)
    return ContactData(
        params=params,
        modulus=f0.modulus,
        f_list=f_list,
        hyperplanes=tuple(HomogeneousPoly(full, h, f0.modulus) for h in H),
        complement=tuple(HomogeneousPoly(half, s, f0.modulus) for s in S),
        terracini_rank=len(pivots),
        f_rows=F,
        complement_rows=S,
        hyperplane_rows=H,
    )


def hyperplane_basis(f_list: Sequence[HomogeneousPoly]) -> list[HomogeneousPoly]:
    """Basis of the dual degree-d forms annihilating ``f_1*S + ... + f_r*S``."""
    return list(build_contact(f_list).hyperplanes)


def complement_basis(f_list: Sequence[HomogeneousPoly]) -> list[HomogeneousPoly]:
    """``N - r`` forms completing ``f_list`` to a basis of the degree-d/2 forms.

    Uses the orthogonal complement under the coefficient pairing when it is a
    direct complement, and monomials otherwise (the pairing can be isotropic
    over Z/p).
    """
    f_list = tuple(f_list)
    F = _check_forms(f_list)
    f0 = f_list[0]
    half = monomial_basis(f0.n, f0.degree)
    return [HomogeneousPoly(half, s, f0.modulus) for s in complement_rows(F, f0.p)]


def hessian_in_basis(H: HomogeneousPoly, forms: Sequence[HomogeneousPoly]) -> FMatrix:
    """Matrix ``(<H, g_i * g_j>)_ij``."""
    g0 = forms[0]
    if H.degree != 2 * g0.degree:
        raise DegreeMismatch(f"dual form of degree {H.degree} vs forms of degree {g0.degree}")
    half = monomial_basis(g0.n, g0.degree)
    full = monomial_basis(g0.n, H.degree)
    rows = stack_coeffs(forms, half)
    cat = coeff_vector(H, full)[sum_index(half, half, full)]
    p = H.p
    return FMatrix(matmul_mod(matmul_mod(rows, cat, p), rows.T, p), H.modulus)


def combination_hessian_rank(contact: ContactData, rng: np.random.Generator) -> int:
    """Rank of the Hessian of one random combination of the hyperplanes.

    This is a lower bound for the stacked rank.
    """
    if contact.m == 0:
        return 0
    p = contact.modulus.p
    lam = rng.integers(0, p, size=contact.m, dtype=np.int64)
    h = matmul_mod(lam[None, :], contact.hyperplane_rows, p)[0]
    return rank_array(contact.hessian(h), p)


def full_stack_rank(contact: ContactData) -> int:
    """Exact rank of ``[Hess(H_1) | ... | Hess(H_m)]`` in the complement basis."""
    if contact.m == 0 or contact.target_rank == 0:
        return 0
    return rank_lower_bound_streaming(contact.hessian_blocks(), contact.modulus,
                                      rows=contact.target_rank, target=contact.target_rank)


def stacked_hessian_rank(contact: ContactData, mode: HessianMode | str = HessianMode.RANDOM_COMBINATION,
                         seed: int = 0, *, rng: np.random.Generator | None = None,
                         fallback: bool = True) -> int:
    """Rank of the stacked Hessian restricted to the complement of span(f_i).

    In combination mode up to three random combinations are tried; if none
    reaches ``N - r`` and ``fallback`` is set, the exact full stack is used.
    """
    mode = HessianMode(mode)
    if contact.m == 0:
        return 0
    target = contact.target_rank
    if mode is HessianMode.FULL_STACK:
        return full_stack_rank(contact)
    if rng is None:
        rng = np.random.default_rng([int(seed)])
    best = 0
    for _ in range(COMBINATION_ATTEMPTS):
        best = max(best, combination_hessian_rank(contact, rng))
        if best == target:
            return best
    if fallback:
        return full_stack_rank(contact)
    return best


def contact_locus_dim(contact: ContactData, mode: HessianMode | str = HessianMode.RANDOM_COMBINATION,
                      seed: int = 0, *, fallback: bool = True) -> int:
    """Affine dimension of the contact locus (an upper bound in pure combination mode)."""
    return contact.N - stacked_hessian_rank(contact, mode, seed, fallback=fallback)


@dataclass(frozen=True)
class IdentifiabilityCertificate:
    params: SecantParams
    modulus: Modulus
    seed: int
    mode: CertificateMode
    trials: int
    terracini_rank: int
    expected_dim: int
    hessian_rank: int
    target_rank: int
    hessian_mode: HessianMode
    verdict: IdentifiabilityVerdict
    unchecked_hypotheses: tuple[str, ...] = ()

    @property
    def terracini_ok(self) -> bool:
        return self.terracini_rank == self.expected_dim

    def to_dict(self) -> dict:
        return {
            "n": self.params.n, "d": self.params.d, "r": self.params.r,
            "p": self.modulus.p, "seed": self.seed, "mode": self.mode.value,
            "trials": self.trials, "terracini_rank": self.terracini_rank,
            "expected_dim": self.expected_dim, "hessian_rank": self.hessian_rank,
            "target_rank": self.target_rank, "hessian_mode": self.hessian_mode.value,
            "verdict": self.verdict.value,
            "unchecked_hypotheses": list(self.unchecked_hypotheses),
        }


def _verdict(terracini_ok: bool, hessian_rank: int, target: int) -> IdentifiabilityVerdict:
    if terracini_ok and hessian_rank == target:
        return IdentifiabilityVerdict.CERTIFIED
    return IdentifiabilityVerdict.INCONCLUSIVE


def generic_identifiability(params: SecantParams, modulus=None, seed: int = 0, trials: int = 3,
                            mode: HessianMode | str = HessianMode.RANDOM_COMBINATION, *,
                            force: bool = False) -> IdentifiabilityCertificate:
    """Sample random points of sigma_r and test the contact-locus criterion.

    Certified as soon as one trial has Terracini rank equal to the expected
    dimension and stacked Hessian rank ``N - r``. Raises NotSubgeneric when the
    expected dimension exceeds the ambient dimension (the generic fibre is
    then larger than one orbit), unless ``force`` is set.
    """
    m = default_modulus() if modulus is None else as_modulus(modulus)
    m.require_above(params.d)
    if trials < 1:
        raise ValueError("trials must be positive")
    mode = HessianMode(mode)
    edim = expected_dim(params)
    if edim > params.ambient_dim and not force:
        raise NotSubgeneric(
            f"r={params.r} squares overfill the {params.ambient_dim}-dimensional space "
            f"(expected dimension {edim})")
    target = params.N - params.r
    best = None
    for t in range(trials):
        rng = trial_rng(seed, t)
        forms = random_forms(params.n, params.half, params.r, m, rng)
        try:
            contact = build_contact(forms)
        except DependentInput:
            continue
        ok = contact.terracini_rank == edim
        hess = stacked_hessian_rank(contact, mode, rng=rng)
        score = (ok and hess == target, ok, hess, contact.terracini_rank)
        if best is None or score > best:
            best = score
        if score[0]:
            break
    _, ok, hess, trank = best if best is not None else (False, False, 0, 0)
    return IdentifiabilityCertificate(
        params=params, modulus=m, seed=seed, mode=CertificateMode.GENERIC, trials=trials,
        terracini_rank=trank, expected_dim=edim, hessian_rank=hess,
        target_rank=target, hessian_mode=mode, verdict=_verdict(ok, hess, target))


def specific_identifiability(f_list: Sequence[HomogeneousPoly],
                             mode: HessianMode | str = HessianMode.RANDOM_COMBINATION,
                             seed: int = 0, *,
                             generic_certificate: IdentifiabilityCertificate | None = None,
                             ) -> IdentifiabilityCertificate:
    """Test the criterion at the given decomposition ``f = sum f_i^2``.

    Smoothness of f on sigma_r cannot be decided here and is always listed as
    an unchecked hypothesis. The expected-dimension hypothesis is discharged
    by a Certified generic certificate for the same (n, d, r).
    """
    mode = HessianMode(mode)
    contact = build_contact(f_list)
    params = contact.params
    edim = expected_dim(params)
    hess = stacked_hessian_rank(contact, mode, seed)
    unchecked = [SMOOTH_POINT]
    discharged = (
        generic_certificate is not None
        and generic_certificate.verdict is IdentifiabilityVerdict.CERTIFIED
        and (generic_certificate.params.n, generic_certificate.params.d,
             generic_certificate.params.r) == (params.n, params.d, params.r))
    if not discharged:
        unchecked.append(EXPECTED_DIMENSION)
    return IdentifiabilityCertificate(
        params=params, modulus=contact.modulus, seed=seed, mode=CertificateMode.SPECIFIC,
        trials=1, terracini_rank=contact.terracini_rank, expected_dim=edim,
        hessian_rank=hess, target_rank=contact.target_rank, hessian_mode=mode,
        verdict=_verdict(contact.terracini_rank == edim, hess, contact.target_rank),
        unchecked_hypotheses=tuple(unchecked))
