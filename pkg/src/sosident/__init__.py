"""Exact modular certificates for sums-of-squares decompositions of forms."""

from .binary import (Decomposition, GramInvariant, OrbitComparison, distinct_orbits,
                     gram_invariant, linear_factors, orbit_decompositions, random_orthogonal,
                     verify_decomposition)
from .catalect import Catalecticant, catalecticant, containment_check, middle_cat_rank
from .contact import (CertificateMode, ContactData, HessianMode, IdentifiabilityCertificate,
                      IdentifiabilityVerdict, build_contact, complement_basis,
                      contact_locus_dim, generic_identifiability, hyperplane_basis,
                      specific_identifiability, stacked_hessian_rank)
from .errors import *  # noqa: F401,F403
from .exactla import FMatrix, StreamingRank, kernel_basis, rank, rank_lower_bound_streaming
from .gf import FieldElement, Modulus, default_modulus, ff_inv, sqrt_minus_one
from .polyring import (GradedBasis, HomogeneousPoly, coeff_vector, contract, monomial_basis,
                       poly_mul)
from .secant import (DimensionReport, DimensionVerdict, SecantParams, bdp_bound_check,
                     bop2_bound_check, expected_dim, generic_rank, secant_dim_sample,
                     terracini_matrix)

__version__ = "0.1.0"
