"""Exact toolkit for Z_N lattice gauge theories encoded in the Gauss-law qudit code."""

from .zn_algebra import CapacityError, DimensionError, GenPauli, commutation_exponent, mod_inverse, mul
from .stabilizer import StabilizerCode, decompose_normalizer, distance, new_code, symplectic_rank, syndrome
from .gauss_code import LatticeSpec, build_code, residual_symmetry_site, site_z_rewrite, staggered_parity
from .encoding import HamiltonianParams, TermList, build_h_1d, build_h_2d, fermion_ops, zeta_dense
from .logical import logical_to_dense, residual_symmetry_logical, rewrite_hamiltonian, rewrite_term
from .bosonic import boson_ops, build_dual_1d, build_dual_2d, penalty_terms, pi_projector
from .verify import duality_check, gauge_projector, physical_projector, restricted_spectrum

__version__ = "0.1.0"
