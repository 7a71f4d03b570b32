"""Rewrite gauge-invariant Hamiltonians in terms of the logical operators of a code."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .encoding import TermList
from .gauss_code import LatticeSpec, lattice_of, staggered_parity
from .stabilizer import NotInNormalizer, StabilizerCode, decompose_normalizer, recompose, syndrome
from .zn_algebra import GenPauli, all_digits, check_capacity, roots_of_unity


class GaugeVariantTerm(ValueError):
    def __init__(self, message: str, index: int, syndrome: np.ndarray):
        super().__init__(message)
        self.index = index
        self.syndrome = syndrome


def rewrite_term(code: StabilizerCode, coeff: complex, monomial: GenPauli) -> tuple[complex, GenPauli]:
    """Drop stabilizer factors and fold the leftover phase into the coefficient."""
    try:
        dec = decompose_normalizer(code, monomial)
    except NotInNormalizer as err:
        raise GaugeVariantTerm(f"gauge-variant term, syndrome {err.syndrome.tolist()}", -1, err.syndrome) from None
    w = roots_of_unity(code.N)
    logical = GenPauli(code.N, 0, tuple(int(v) for v in dec.lx_exps), tuple(int(v) for v in dec.lz_exps))
    # recompose puts Xbar^r left of Zbar^t, which is also the canonical logical order
    return complex(coeff) * w[dec.phase], logical


def lift_term(code: StabilizerCode, coeff: complex, logical: GenPauli) -> tuple[complex, GenPauli]:
    """Physical representative of a logical monomial with all stabilizer exponents zero."""
    zero = np.zeros(code.n_generators, dtype=np.int64)
    rep = recompose(code, zero, logical.x_arr, logical.z_arr)
    return complex(coeff) * roots_of_unity(code.N)[logical.phase], rep


def rewrite_hamiltonian(code: StabilizerCode, physical: TermList, merge: bool = True) -> TermList:
    if physical.N != code.N or physical.n_qudits != code.n:
        raise ValueError("Hamiltonian and code live on different registers")
    out = TermList(code.N, code.k, basis="logical")
    for i, (c, p) in enumerate(physical.terms):
        s = syndrome(code, p)
        if np.any(s):
            raise GaugeVariantTerm(f"term {i} is gauge-variant, syndrome {s.tolist()}", i, s)
        out.add(*rewrite_term(code, c, p))
    return out.merged() if merge else out


def logical_to_dense(logical: TermList, limit: int | None = None) -> np.ndarray:
    return logical.to_dense(limit)


def logical_to_sparse(logical: TermList) -> sp.csr_matrix:
    return logical.to_sparse()


# ---------------------------------------------------------------------------
# site charges on the logical register


def site_charge(lat: LatticeSpec, link_digits: np.ndarray) -> np.ndarray:
    """``Delta + p`` per site: outgoing minus incoming link numbers plus parity (mod N).

    Equals the site occupation forced by the Gauss law.
    """
    out = np.zeros(link_digits.shape[:-1] + (lat.n_sites,), dtype=np.int64)
    for si, s in enumerate(lat.sites):
        acc = np.full(link_digits.shape[:-1], staggered_parity(s), dtype=np.int64)
        for i in lat.outgoing(s):
            acc = acc + link_digits[..., i]
        for i in lat.incoming(s):
            acc = acc - link_digits[..., i]
        out[..., si] = acc
    return out % lat.N


def residual_symmetry_diagonal(lat: LatticeSpec, site) -> np.ndarray:
    """Diagonal of ``-exp(i pi [delta(Delta+p-1) + delta(Delta+p)])`` on the logical register."""
    digits = all_digits(lat.N, lat.n_links)
    q = site_charge(lat, digits)[:, lat.site_index(site)]
    delta = (q == 1).astype(float) + (q == 0).astype(float)
    return (-np.exp(1j * np.pi * delta)).real


def residual_symmetry_logical(code: StabilizerCode, site) -> np.ndarray:
    lat = lattice_of(code)
    check_capacity(lat.N**lat.n_links)
    return np.diag(residual_symmetry_diagonal(lat, site)).astype(complex)


def residual_sector_indices(lat: LatticeSpec) -> np.ndarray:
    """Logical basis states on which every residual site symmetry is +1."""
    digits = all_digits(lat.N, lat.n_links)
    q = site_charge(lat, digits)
    return np.nonzero(np.all(q <= 1, axis=1))[0]
