import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from znlgt.bosonic import (
    boson_ops,
    build_dual_1d,
    build_dual_2d,
    compact_density_diagonal,
    delta_n,
    jw_string_diagonal,
    penalty_terms,
    pi_diagonal,
    pi_projector,
    residual_gauss_diagonal,
)
from znlgt.circuits import x_matrix, z_matrix
from znlgt.encoding import HamiltonianParams, build_hamiltonian
from znlgt.gauss_code import LatticeSpec, build_code
from znlgt.logical import residual_sector_indices, rewrite_hamiltonian, site_charge
from znlgt.zn_algebra import all_digits


def test_boson_ops_n3():
    b = boson_ops(3)
    want = np.zeros((3, 3))
    want[1, 0], want[2, 1] = 1, np.sqrt(2)
    assert np.allclose(b.phi_dag, want)
    assert np.allclose(b.n @ np.eye(3)[2], 2 * np.eye(3)[2])
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(b.z, np.diag([1, w, w**2]))


@pytest.mark.parametrize("N", [2, 3, 5, 7])
def test_boson_identities(N):
    b = boson_ops(N)
    comm = b.phi @ b.phi_dag - b.phi_dag @ b.phi
    edge = np.zeros((N, N))
    edge[N - 1, N - 1] = 1
    assert np.array_equal(np.round(comm.real, 12), np.eye(N) - N * edge)
    if N > 2:
        assert np.max(np.abs(b.z - z_matrix(N))) < 1e-13
        assert np.max(np.abs(b.x - x_matrix(N))) < 1e-13
    else:
        assert np.max(np.abs(b.z - np.diag([1, -1]))) < 1e-13
        assert np.max(np.abs(b.x - np.array([[0, 1], [1, 0]]))) < 1e-13


def test_delta_n():
    assert delta_n(np.array([0, 3, -3, 1, 2]), 3).tolist() == [1, 1, 1, 0, 0]


def test_pi_projector_examples():
    lat = LatticeSpec(1, (4,), "periodic", 3)
    digits = all_digits(3, 4)
    d = pi_diagonal(lat, (2,))
    # site 2 is even: pi = delta(n_2 - n_1 - 1)
    state = np.nonzero((digits[:, 1] == 0) & (digits[:, 2] == 1) & (digits[:, 0] == 0) & (digits[:, 3] == 0))[0][0]
    assert d[state] == 1
    state = np.nonzero(~digits.any(axis=1))[0][0]
    assert d[state] == 0
    p = pi_projector(LatticeSpec(1, (2,), "periodic", 3), (0,))
    assert np.allclose(p @ p, p) and np.allclose(p, p.conj().T)


def test_dual_electric_only():
    lat = LatticeSpec(1, (2,), "periodic", 3)
    lam = 0.5
    h = build_dual_1d(lat, HamiltonianParams(0.0, 0.0, lam))
    digits = all_digits(3, 2)
    assert np.allclose(h, np.diag(-2 * lam * np.cos(2 * np.pi * digits / 3).sum(axis=1)))


@pytest.mark.parametrize("L,N", [(2, 3), (2, 5), (4, 3)])
def test_dual_equals_logical_rewrite_1d(L, N):
    lat = LatticeSpec(1, (L,), "periodic", N)
    params = HamiltonianParams(1.0, 0.7, 0.5)
    hl = rewrite_hamiltonian(build_code(lat), build_hamiltonian(lat, params)).to_sparse()
    hb = build_dual_1d(lat, params, sparse=True)
    assert abs(hl - hb).max() < 1e-10
    assert abs(hb - hb.conj().T).max() < 1e-12


def test_dual_equals_logical_rewrite_2d():
    lat = LatticeSpec(2, (2, 2), "periodic", 3)
    params = HamiltonianParams(1.0, 0.7, 0.5, 0.3)
    hl = rewrite_hamiltonian(build_code(lat), build_hamiltonian(lat, params)).to_sparse()
    hb = build_dual_2d(lat, params)
    assert abs(hl - hb).max() < 1e-10


def test_string_forms():
    lat = LatticeSpec(2, (2, 2), "periodic", 3)
    charges = site_charge(lat, all_digits(3, lat.n_links))
    phase = jw_string_diagonal(lat, [1, 2], charges, "phase")
    assert np.allclose(phase**2, 1)
    delta = jw_string_diagonal(lat, [1, 2], charges, "delta")
    res = residual_sector_indices(lat)
    assert np.allclose(phase[res], delta[res])
    with pytest.raises(ValueError):
        jw_string_diagonal(lat, [1], charges, "other")


def test_phase_string_agrees_on_residual_sector():
    lat = LatticeSpec(2, (2, 2), "periodic", 3)
    params = HamiltonianParams(1.0, 0.7, 0.5, 0.3)
    a = build_dual_2d(lat, params, string_form="delta")
    b = build_dual_2d(lat, params, string_form="phase")
    res = residual_sector_indices(lat)
    assert abs(a[res][:, res] - b[res][:, res]).max() < 1e-12


def test_penalties():
    lat = LatticeSpec(1, (2,), "periodic", 3)
    first, second = penalty_terms(lat, (0,), 2.0)
    assert set(np.round(np.diag(first).real, 12)) <= {0.0, 4.0}
    assert np.array_equal(np.diag(first) == 0, np.diag(second) == 0)
    zero = penalty_terms(lat, (0,), 0.0)
    assert not zero[0].any() and not zero[1].any()
    with pytest.raises(ValueError):
        penalty_terms(lat, (0,), -1.0)


def test_residual_gauss_diagonal_matches_logical_form():
    lat = LatticeSpec(1, (4,), "periodic", 5)
    q = site_charge(lat, all_digits(5, 4))[:, 1]
    assert np.array_equal(residual_gauss_diagonal(lat, (1,)), np.where(q <= 1, 1.0, -1.0))


def test_compact_density_on_residual_sector():
    for N in (3, 5):
        lat = LatticeSpec(1, (2,), "periodic", N)
        res = residual_sector_indices(lat)
        for s in lat.sites:
            assert np.allclose(compact_density_diagonal(lat, s)[res], pi_diagonal(lat, s)[res])


@settings(max_examples=20, deadline=None)
@given(st.integers(-50, 50), st.sampled_from([3, 5, 7]))
def test_delta_is_kronecker(v, N):
    assert delta_n(np.array([v]), N)[0] == (v % N == 0)
