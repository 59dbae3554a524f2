"""Catalecticant matrices and the containment test for dual varieties.

Dual forms share the coefficient space of ordinary forms, so a hyperplane
``H`` can be fed to :func:`catalecticant` directly.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DegreeMismatch, NotApolar, OddDegree
from .exactla import FMatrix, matmul_mod, rank_array
from .polyring import HomogeneousPoly, coeff_vector, monomial_basis, stack_coeffs, sum_index


@dataclass(frozen=True)
class Catalecticant:
    source_degree: int
    target_degree: int
    matrix: FMatrix

    @property
    def rank(self) -> int:
        return rank_array(self.matrix.data, self.matrix.p)


def catalecticant(f: HomogeneousPoly, i: int) -> Catalecticant:
    """Matrix with entry ``(g, b)`` = coefficient of ``x^(g+b)`` in f.

    Rows are indexed by dual monomials of degree i, columns by monomials of
    degree ``d - i``, both in graded-lex order.
    """
    d = f.degree
    if not 0 <= i <= d:
        raise DegreeMismatch(f"catalecticant index {i} outside [0, {d}]")
    rows = monomial_basis(f.n, i)
    cols = monomial_basis(f.n, d - i)
    full = monomial_basis(f.n, d)
    mat = coeff_vector(f, full)[sum_index(rows, cols, full)]
    return Catalecticant(i, d - i, FMatrix(mat, f.modulus))


def middle_cat_rank(f: HomogeneousPoly) -> int:
    if f.degree % 2:
        raise OddDegree(f"middle catalecticant needs even degree, got {f.degree}")
    return catalecticant(f, f.degree // 2).rank


def containment_check(f_list: Sequence[HomogeneousPoly], H: HomogeneousPoly) -> bool:
    """Check that Cat(H) kills every f_i and that H drops rank by at least r.

    Raises NotApolar when H does not annihilate ``f_1*S + ... + f_r*S``;
    ``<H, f*t>`` is exactly the t-th entry of ``Cat(H) f``.
    """
    f0 = f_list[0]
    if H.degree != 2 * f0.degree:
        raise DegreeMismatch(f"H has degree {H.degree}, forms have degree {f0.degree}")
    cat = catalecticant(H, f0.degree).matrix
    F = stack_coeffs(f_list, monomial_basis(f0.n, f0.degree))
    images = matmul_mod(cat.data, F.T, H.p)
    if images.any():
        raise NotApolar("H does not annihilate the Terracini span of the forms")
    N = cat.rows
    return rank_array(cat.data, H.p) <= N - len(f_list)
