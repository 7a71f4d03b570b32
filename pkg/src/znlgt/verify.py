"""Sector projectors, restricted spectra and the end-to-end duality check.

All Gauss-code sectors are spanned by computational basis states, so a
:class:`SectorProjector` stores the supporting basis indices and only builds a
dense matrix on request. Hamiltonians given as term lists are applied to the
sector basis directly, which keeps the checks cheap far beyond dense size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .bosonic import build_dual
from .encoding import HamiltonianParams, TermList, build_hamiltonian
from .gauss_code import LatticeSpec, build_code, lattice_of
from .logical import residual_sector_indices, rewrite_hamiltonian
from .stabilizer import StabilizerCode, syndrome
from .zn_algebra import all_digits, check_capacity, index_to_digits, to_dense

MATRIX_TOL = 1e-10
SPECTRUM_TOL = 1e-9
# basis enumeration and sparse builds stay below this many states
MAX_SPARSE_DIM = 2_000_000


class SectorLeak(ValueError):
    """The operator maps part of the sector outside of it."""


@dataclass(frozen=True)
class SectorProjector:
    N: int
    n_qudits: int
    indices: np.ndarray
    description: str = ""
    constraints: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.indices)

    @property
    def dim(self) -> int:
        return self.N**self.n_qudits

    def diagonal(self) -> np.ndarray:
        d = np.zeros(self.dim)
        d[self.indices] = 1.0
        return d

    def matrix(self, limit: int | None = None) -> np.ndarray:
        check_capacity(self.dim, limit)
        return np.diag(self.diagonal()).astype(complex)

    def isometry(self) -> sp.csr_matrix:
        """Columns are the sector basis states."""
        m = self.rank
        return sp.csr_matrix((np.ones(m), (self.indices, np.arange(m))), shape=(self.dim, m))


def _diagonal_support(code: StabilizerCode, extra_mask=None) -> np.ndarray:
    digits = all_digits(code.N, code.n)
    ok = np.ones(len(digits), dtype=bool)
    for g in code.generators:
        ok &= ((g.phase + digits @ g.z_arr) % code.N) == 0
    if extra_mask is not None:
        ok &= extra_mask(digits)
    return np.nonzero(ok)[0]


def averaged_projector(code: StabilizerCode, limit: int | None = None) -> np.ndarray:
    """``prod_g (1/N) sum_j g^j`` as a dense matrix."""
    check_capacity(code.N**code.n, limit)
    p = np.eye(code.N**code.n, dtype=complex)
    for g in code.generators:
        gd = to_dense(g, limit)
        acc = np.zeros_like(p)
        power = np.eye(len(p), dtype=complex)
        for _ in range(code.N):
            acc += power
            power = power @ gd
        p = p @ (acc / code.N)
    return p


def gauge_projector(code: StabilizerCode) -> SectorProjector:
    """Joint +1 eigenspace of every stabilizer generator."""
    desc = f"all {code.n_generators} stabilizers at +1"
    if all(not any(g.x) for g in code.generators):
        idx = _diagonal_support(code)
    else:
        p = averaged_projector(code)
        idx = np.nonzero(np.abs(np.diag(p)) > 0.5)[0]
        if not np.allclose(p, np.diag(np.diag(p)), atol=1e-12):
            raise ValueError("stabilizer sector is not a span of basis states; use averaged_projector")
    return SectorProjector(code.N, code.n, idx, desc, {"stabilizers": list(range(code.n_generators))})


def physical_projector(code: StabilizerCode) -> SectorProjector:
    """Gauge sector with every site restricted to levels 0 and 1."""
    lat = lattice_of(code)
    ns = lat.n_sites
    idx = _diagonal_support(code, lambda d: np.all(d[:, :ns] <= 1, axis=1))
    desc = f"all {code.n_generators} stabilizers at +1, site levels in {{0, 1}}"
    return SectorProjector(code.N, code.n, idx, desc,
                           {"stabilizers": list(range(code.n_generators)), "sites": list(range(ns))})


def residual_projector(lat: LatticeSpec) -> SectorProjector:
    """Logical-register states on which every residual site symmetry is +1."""
    return SectorProjector(lat.N, lat.n_links, residual_sector_indices(lat),
                           "residual site symmetry +1 at every site", {"sites": list(range(lat.n_sites))})


def restricted_matrix(h, sector: SectorProjector, tol: float = MATRIX_TOL) -> np.ndarray:
    """Block of ``h`` on the sector; raises :class:`SectorLeak` if h leaves it."""
    idx = sector.indices
    if isinstance(h, TermList):
        if h.N != sector.N or h.n_qudits != sector.n_qudits:
            raise ValueError("operator and sector live on different registers")
        rows, cols, vals = h.apply_columns(index_to_digits(idx, h.N, h.n_qudits))
        a = sp.csr_matrix((vals, (rows, cols)), shape=(sector.dim, len(idx)))
    else:
        if h.shape != (sector.dim, sector.dim):
            raise ValueError("operator and sector have different dimensions")
        a = sp.csr_matrix(h)[:, idx]
    a = a.tocoo()
    inside = np.isin(a.row, idx)
    leak = np.max(np.abs(a.data[~inside]), initial=0.0)
    if leak > tol:
        raise SectorLeak(f"operator leaves sector (max outside amplitude {leak:.3e})")
    pos = np.searchsorted(idx, a.row[inside])
    block = np.zeros((len(idx), len(idx)), dtype=complex)
    np.add.at(block, (pos, a.col[inside]), a.data[inside])
    return block


def restricted_spectrum(h, sector: SectorProjector, tol: float = MATRIX_TOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian operator on the sector."""
    if sector.rank == 0:
        return np.zeros(0)
    block = restricted_matrix(h, sector, tol)
    return np.linalg.eigvalsh((block + block.conj().T) / 2)


def _spectrum_diff(a: np.ndarray, b: np.ndarray) -> float:
    if len(a) != len(b):
        return float("inf")
    return float(np.max(np.abs(a - b), initial=0.0))


def max_syndrome_weight(code: StabilizerCode, h: TermList) -> int:
    """Largest number of violated stabilizers over all terms (0 means gauge-invariant)."""
    return max((int(np.count_nonzero(syndrome(code, p))) for _, p in h.terms), default=0)


def _max_abs(m) -> float:
    if sp.issparse(m):
        m = m.tocsr()
        m.eliminate_zeros()
        return float(np.max(np.abs(m.data), initial=0.0))
    return float(np.max(np.abs(m), initial=0.0))


def duality_check(
    lat: LatticeSpec,
    params: HamiltonianParams,
    matrix_tol: float = MATRIX_TOL,
    spectrum_tol: float = SPECTRUM_TOL,
    full_spectrum: bool | None = None,
) -> dict:
    """Compare the physical, logical and bosonic forms of one lattice Hamiltonian.

    Returns a report with keys ``sector_dims``, ``max_matrix_diff``,
    ``max_spectrum_diff`` and ``pass`` plus diagnostics. Spectra are compared on
    the physical sector and the residual logical sector; the logical and bosonic
    matrices are compared entry by entry (on the residual sector only for the
    compact encoding, whose off-sector action differs by construction).
    In 2D the spectral part runs only when ``full_spectrum`` is true.
    """
    if full_spectrum is None:
        full_spectrum = lat.dims == 1
    check_capacity(lat.N**lat.n_qudits, MAX_SPARSE_DIM)
    code = build_code(lat)
    h_phys = build_hamiltonian(lat, params)
    gauge_viol = max_syndrome_weight(code, h_phys)
    h_log = rewrite_hamiltonian(code, h_phys)
    residual = residual_projector(lat)
    bos_params = HamiltonianParams(params.m, params.eps, params.lambda_e, params.lambda_p, "projector")
    h_bos = build_dual(lat, bos_params, sparse=True)
    h_log_sp = h_log.to_sparse()

    if params.encoding == "projector":
        matrix_diff = _max_abs(h_log_sp - h_bos)
        scope = "full logical register"
    else:
        a = restricted_matrix(h_log, residual, tol=np.inf)
        b = restricted_matrix(h_bos, residual, tol=np.inf)
        matrix_diff = float(np.max(np.abs(a - b), initial=0.0))
        scope = "residual sector"
    hermitian_err = _max_abs(h_log_sp - h_log_sp.conj().T)

    report = {
        "lattice": lat.to_json(),
        "params": params.to_json(),
        "gauge_violations": gauge_viol,
        "n_physical_terms": len(h_phys),
        "n_logical_terms": len(h_log),
        "matrix_diff_scope": scope,
        "max_matrix_diff": matrix_diff,
        "hermiticity_error": hermitian_err,
    }
    ok = gauge_viol == 0 and matrix_diff < matrix_tol and hermitian_err < matrix_tol
    if full_spectrum:
        phys = physical_projector(code)
        try:
            spec_phys = restricted_spectrum(h_phys, phys)
            spec_log = restricted_spectrum(h_log, residual)
            sdiff = _spectrum_diff(spec_phys, spec_log)
        except SectorLeak as err:
            report["error"] = str(err)
            spec_phys = spec_log = np.zeros(0)
            sdiff = float("inf")
        report["sector_dims"] = {"physical": phys.rank, "residual": residual.rank}
        report["max_spectrum_diff"] = sdiff
        report["ground_energy"] = float(spec_phys[0]) if len(spec_phys) else None
        ok = ok and phys.rank == residual.rank and sdiff < spectrum_tol
    else:
        report["sector_dims"] = {"residual": residual.rank}
        report["max_spectrum_diff"] = None
    report["pass"] = bool(ok)
    return report

