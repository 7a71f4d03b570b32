import numpy as np
import pytest

from znlgt.encoding import HamiltonianParams, TermList, build_hamiltonian
from znlgt.gauss_code import LatticeSpec, build_code
from znlgt.logical import rewrite_hamiltonian
from znlgt.verify import (
    SectorLeak,
    SectorProjector,
    averaged_projector,
    duality_check,
    gauge_projector,
    max_syndrome_weight,
    physical_projector,
    residual_projector,
    restricted_matrix,
    restricted_spectrum,
)
from znlgt.zn_algebra import CapacityError, GenPauli


def test_gauge_projector_matches_group_average():
    code = build_code(LatticeSpec(1, (2,), "periodic", 3))
    avg = averaged_projector(code)
    sector = gauge_projector(code)
    assert np.allclose(avg, sector.matrix())
    assert sector.rank == 9  # N^k states survive


def test_physical_and_residual_ranks_match():
    for N in (3, 5):
        lat = LatticeSpec(1, (4,), "periodic", N)
        code = build_code(lat)
        assert physical_projector(code).rank == residual_projector(lat).rank


def test_isometry():
    lat = LatticeSpec(1, (2,), "periodic", 3)
    sector = residual_projector(lat)
    v = sector.isometry()
    assert np.allclose((v.T @ v).toarray(), np.eye(sector.rank))
    assert np.allclose((v @ v.T).toarray(), sector.matrix())


def test_restricted_matrix_detects_leak():
    sector = SectorProjector(3, 1, np.array([0]))
    h = TermList(3, 1, [(1.0, GenPauli.single(3, 1, 0, x=1))])
    with pytest.raises(SectorLeak, match="leaves sector"):
        restricted_matrix(h, sector)
    with pytest.raises(ValueError):
        restricted_matrix(np.eye(2), sector)


def test_restricted_spectrum_dense_and_termlist_agree():
    lat = LatticeSpec(1, (2,), "periodic", 3)
    code = build_code(lat)
    h = build_hamiltonian(lat, HamiltonianParams(1.0, 0.7, 0.5))
    phys = physical_projector(code)
    a = restricted_spectrum(h, phys)
    b = restricted_spectrum(h.to_dense(), phys)
    assert np.allclose(a, b)


def test_max_syndrome_weight():
    lat = LatticeSpec(1, (2,), "periodic", 3)
    code = build_code(lat)
    assert max_syndrome_weight(code, build_hamiltonian(lat, HamiltonianParams())) == 0
    bad = TermList(3, 4, [(1.0, GenPauli.single(3, 4, 0, x=1))])
    assert max_syndrome_weight(code, bad) > 0


@pytest.mark.parametrize("encoding", ["projector", "compact"])
def test_duality_check_1d(encoding):
    rep = duality_check(LatticeSpec(1, (2,), "periodic", 5), HamiltonianParams(0.5, 1.0, 0.3, 0.0, encoding))
    assert rep["pass"]
    assert rep["sector_dims"] == {"physical": 10, "residual": 10}
    assert rep["max_matrix_diff"] < 1e-10 and rep["max_spectrum_diff"] < 1e-9
    assert set(rep) >= {"sector_dims", "max_matrix_diff", "max_spectrum_diff", "pass"}


def test_duality_check_detects_wrong_tolerance():
    rep = duality_check(LatticeSpec(1, (2,), "periodic", 3), HamiltonianParams(1.0, 0.7, 0.5), matrix_tol=1e-30)
    assert not rep["pass"]


def test_duality_check_2d_default_skips_spectrum():
    rep = duality_check(LatticeSpec(2, (2, 2), "periodic", 3), HamiltonianParams(1.0, 0.7, 0.5, 0.3))
    assert rep["pass"] and rep["max_spectrum_diff"] is None


def test_duality_check_2d_full_spectrum():
    rep = duality_check(LatticeSpec(2, (2, 2), "periodic", 3), HamiltonianParams(1.0, 0.7, 0.5, 0.3),
                        full_spectrum=True)
    assert rep["pass"]
    assert rep["sector_dims"]["physical"] == rep["sector_dims"]["residual"]
    assert rep["max_spectrum_diff"] < 1e-9


def test_duality_check_capacity():
    with pytest.raises(CapacityError):
        duality_check(LatticeSpec(1, (12,), "periodic", 5), HamiltonianParams())


def test_logical_spectrum_is_unitary_invariant_of_physical():
    # the residual block is the physical block in a relabelled basis: same trace and norm
    lat = LatticeSpec(1, (2,), "periodic", 3)
    code = build_code(lat)
    h = build_hamiltonian(lat, HamiltonianParams(1.0, 0.7, 0.5))
    a = restricted_matrix(h, physical_projector(code))
    b = restricted_matrix(rewrite_hamiltonian(code, h), residual_projector(lat))
    assert np.isclose(np.trace(a), np.trace(b))
    assert np.isclose(np.linalg.norm(a), np.linalg.norm(b))
