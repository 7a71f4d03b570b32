"""Bosonic dual of the encoded gauge theory, living on the link register only.

Every link carries a truncated boson with number operator ``n`` (so Zbar is
``exp(2 pi i n / N)``) and a Fourier-conjugate ``rho`` whose exponential is the
incrementer Xbar. Sites are gone: their occupation is the projector ``pi``,
a Kronecker delta of the signed link numbers around the site.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .encoding import HamiltonianParams
from .gauss_code import LatticeSpec, staggered_parity
from .logical import site_charge
from .zn_algebra import all_digits, check_capacity, qft_matrix


@dataclass(frozen=True)
class BosonOps:
    N: int
    phi_dag: np.ndarray
    phi: np.ndarray
    n: np.ndarray
    rho: np.ndarray

    @property
    def z(self) -> np.ndarray:
        return sla.expm(2j * np.pi * self.n / self.N)

    @property
    def x(self) -> np.ndarray:
        return sla.expm(2j * np.pi * self.rho / self.N)


def boson_ops(N: int) -> BosonOps:
    """Truncated boson on N levels with ``phi^dagger |N-1> = 0``.

    ``rho`` is the number operator carried to the Fourier basis by the transform
    that maps Z onto the incrementer X.
    """
    if N < 2:
        raise ValueError("need at least two levels")
    amps = np.sqrt(np.arange(1, N))
    phi_dag = np.diag(amps, -1).astype(complex)
    phi = phi_dag.conj().T
    num = phi_dag @ phi
    f = qft_matrix(N)
    rho = f.conj().T @ num @ f
    return BosonOps(N, phi_dag, phi, num, rho)


def delta_n(values: np.ndarray, N: int) -> np.ndarray:
    """Kronecker delta mod N via ``(1/N) sum_j exp(2 pi i j v / N)``, snapped to {0, 1}."""
    values = np.asarray(values)
    j = np.arange(N)
    raw = np.exp(2j * np.pi * np.multiply.outer(values, j) / N).mean(axis=-1)
    snapped = np.round(raw.real)
    if np.max(np.abs(raw - snapped), initial=0.0) > 1e-12:
        raise ArithmeticError("Fourier delta did not land on an integer")
    return snapped


def _charges(lat: LatticeSpec) -> np.ndarray:
    """Unreduced ``Delta + p`` for every logical basis state and site."""
    digits = all_digits(lat.N, lat.n_links)
    return site_charge(lat, digits)


def pi_diagonal(lat: LatticeSpec, site, charges: np.ndarray | None = None) -> np.ndarray:
    q = _charges(lat) if charges is None else charges
    return delta_n(q[:, lat.site_index(site)] - 1, lat.N)


def pi_projector(lat: LatticeSpec, site) -> np.ndarray:
    """Dense 0/1 diagonal projector onto an occupied site."""
    check_capacity(lat.N**lat.n_links)
    return np.diag(pi_diagonal(lat, site)).astype(complex)


def jw_string_diagonal(lat: LatticeSpec, between: list[int], charges: np.ndarray, form: str = "delta"):
    """Diagonal of the Jordan-Wigner string over the given sites (row positions).

    ``form="delta"`` multiplies ``delta(q-1) - delta(q)``, the exact image of the
    site factors. ``form="phase"`` multiplies ``(-1)^(1 - pi)``, which agrees on
    the residual sector and is unitary everywhere.
    """
    out = np.ones(len(charges))
    for k in between:
        q = charges[:, k]
        occ = delta_n(q - 1, lat.N)
        if form == "delta":
            out = out * (occ - delta_n(q, lat.N))
        elif form == "phase":
            out = out * (-1.0) ** (1 - occ)
        else:
            raise ValueError("string form must be 'delta' or 'phase'")
    return out


def link_unitary(lat: LatticeSpec, link: int, ops: BosonOps | None = None) -> sp.csr_matrix:
    """``exp(2 pi i rho / N)`` on one link, identity elsewhere."""
    ops = ops or boson_ops(lat.N)
    u = ops.x
    u = np.where(np.abs(u) < 1e-14, 0, u)
    left = sp.identity(lat.N**link, format="csr")
    right = sp.identity(lat.N ** (lat.n_links - link - 1), format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(u)), right, format="csr")


def _hop(lat, params, link, charges, ops, string=None):
    src, dst = lat.link_endpoints(link)
    pa = sp.diags(pi_diagonal(lat, src, charges))
    pb = sp.diags(pi_diagonal(lat, dst, charges))
    u = link_unitary(lat, link, ops)
    fwd = pa @ u @ pb
    h = fwd + fwd.conj().T
    if string is not None:
        h = sp.diags(string) @ h
    return -params.eps * h


def _finish(h: sp.spmatrix, sparse: bool):
    h = h.tocsr()
    if sparse:
        return h
    check_capacity(h.shape[0])
    return h.toarray()


def build_dual_1d(lat: LatticeSpec, params: HamiltonianParams, sparse: bool = False):
    """``-2 lam sum cos(2 pi n / N) + m sum (-1)^l pi_l - eps sum (pi_l e^{2 pi i rho_l / N} pi_{l+1} + h.c.)``."""
    if lat.dims != 1:
        raise ValueError("build_dual_1d needs a 1D lattice")
    N, k = lat.N, lat.n_links
    digits = all_digits(N, k)
    charges = _charges(lat)
    ops = boson_ops(N)
    diag = -2 * params.lambda_e * np.cos(2 * np.pi * digits / N).sum(axis=1)
    for s in lat.sites:
        sign = -1.0 if staggered_parity(s) else 1.0
        diag = diag + params.m * sign * pi_diagonal(lat, s, charges)
    h = sp.diags(diag.astype(complex)).tocsr()
    for i in range(k):
        h = h + _hop(lat, params, i, charges, ops)
    return _finish(h, sparse)


def build_dual_2d(lat: LatticeSpec, params: HamiltonianParams, sparse: bool = True, string_form: str = "delta"):
    """Electric, plaquette, mass and hopping terms of the 2D bosonic dual.

    y-hoppings carry the string over the sites strictly between their endpoints
    in row order. Returns a sparse matrix unless ``sparse=False``.
    """
    if lat.dims != 2:
        raise ValueError("build_dual_2d needs a 2D lattice")
    N, k = lat.N, lat.n_links
    digits = all_digits(N, k)
    charges = _charges(lat)
    ops = boson_ops(N)
    diag = -2 * params.lambda_e * np.cos(2 * np.pi * digits / N).sum(axis=1)
    for s in lat.sites:
        sign = -1.0 if staggered_parity(s) else 1.0
        diag = diag + params.m * sign * pi_diagonal(lat, s, charges)
    h = sp.diags(diag.astype(complex)).tocsr()

    if params.lambda_p:
        for s in lat.sites:
            right, up = lat.shift(s, 0), lat.shift(s, 1)
            if right is None or up is None:
                continue
            legs = [lat.link_index(s, 0), lat.link_index(right, 1), lat.link_index(s, 1), lat.link_index(up, 0)]
            if any(i is None for i in legs):
                continue
            # exp(2 pi i (rho_a + rho_b - rho_c - rho_d) / N) as a product of commuting factors
            ua, ub, uc, ud = (link_unitary(lat, i, ops) for i in legs)
            e = ua @ ub @ uc.conj().T @ ud.conj().T
            h = h - params.lambda_p * (e + e.conj().T)

    for i, (s, mu) in enumerate(lat.links):
        string = None
        if mu == 1:
            a, b = lat.site_index(s), lat.site_index(lat.shift(s, 1))
            lo, hi = sorted((a, b))
            string = jw_string_diagonal(lat, list(range(lo + 1, hi)), charges, string_form)
        h = h + _hop(lat, params, i, charges, ops, string)
    return _finish(h, sparse)


def build_dual(lat: LatticeSpec, params: HamiltonianParams, sparse: bool = False):
    if lat.dims == 1:
        return build_dual_1d(lat, params, sparse=sparse)
    return build_dual_2d(lat, params, sparse=sparse)


def residual_gauss_diagonal(lat: LatticeSpec, site, charges: np.ndarray | None = None) -> np.ndarray:
    """``-exp(i pi [delta(q-1) + delta(q)])`` with q the site charge."""
    q = (_charges(lat) if charges is None else charges)[:, lat.site_index(site)]
    return (-np.exp(1j * np.pi * (delta_n(q - 1, lat.N) + delta_n(q, lat.N)))).real.round()


def penalty_terms(lat: LatticeSpec, site, strength: float, sparse: bool = False):
    """The two energy penalties for leaving the residual sector at one site.

    Returns ``(strength * (1 - G_pi), strength * (1 - delta(q-1)) (1 - delta(q)))``.
    """
    if strength < 0:
        raise ValueError("penalty strength must be non-negative")
    charges = _charges(lat)
    q = charges[:, lat.site_index(site)]
    g = residual_gauss_diagonal(lat, site, charges)
    first = strength * (1 - g)
    second = strength * (1 - delta_n(q - 1, lat.N)) * (1 - delta_n(q, lat.N))
    if sparse:
        return sp.diags(first.astype(complex)).tocsr(), sp.diags(second.astype(complex)).tocsr()
    check_capacity(len(q))
    return np.diag(first).astype(complex), np.diag(second).astype(complex)


def compact_density_diagonal(lat: LatticeSpec, site) -> np.ndarray:
    """``sin^2(q pi / N) / sin^2(pi / N)``: occupation from the reduced compact form."""
    q = _charges(lat)[:, lat.site_index(site)]
    return np.sin(q * np.pi / lat.N) ** 2 / np.sin(np.pi / lat.N) ** 2
