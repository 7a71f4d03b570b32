"""Fermion-to-qudit encodings and the lattice gauge Hamiltonian as a sum of Pauli monomials."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .gauss_code import LatticeSpec, staggered_parity
from .zn_algebra import (
    DimensionError,
    GenPauli,
    adjoint,
    all_digits,
    apply_to_basis,
    check_capacity,
    check_prime,
    digits_to_index,
    mul,
    roots_of_unity,
)

ENCODINGS = ("projector", "compact")


@dataclass
class TermList:
    """``sum_t coeff_t * monomial_t`` over ``n_qudits`` qudits of dimension N."""

    N: int
    n_qudits: int
    terms: list[tuple[complex, GenPauli]] = field(default_factory=list)
    basis: str = "physical"

    def __post_init__(self):
        for c, p in self.terms:
            self._check(p)

    def _check(self, p: GenPauli):
        if p.n_levels != self.N or p.n_qudits != self.n_qudits:
            raise DimensionError(f"monomial on (N={p.n_levels}, n={p.n_qudits}) in a ({self.N}, {self.n_qudits}) list")

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def add(self, coeff: complex, p: GenPauli) -> None:
        self._check(p)
        self.terms.append((complex(coeff), p))

    def extend(self, other: TermList) -> TermList:
        for c, p in other.terms:
            self.add(c, p)
        return self

    def __add__(self, other: TermList) -> TermList:
        out = TermList(self.N, self.n_qudits, list(self.terms), self.basis)
        return out.extend(other)

    def scaled(self, s: complex) -> TermList:
        return TermList(self.N, self.n_qudits, [(s * c, p) for c, p in self.terms], self.basis)

    def __matmul__(self, other: TermList) -> TermList:
        """Operator product, expanded term by term without merging."""
        out = TermList(self.N, self.n_qudits, basis=self.basis)
        for a, p in self.terms:
            for b, q in other.terms:
                out.add(a * b, mul(p, q))
        return out

    def adjoint(self) -> TermList:
        return TermList(self.N, self.n_qudits, [(np.conj(c), adjoint(p)) for c, p in self.terms], self.basis)

    def dropped_zeros(self, tol: float = 1e-14) -> TermList:
        return TermList(self.N, self.n_qudits, [(c, p) for c, p in self.terms if abs(c) >= tol], self.basis)

    def merged(self, tol: float = 1e-14) -> TermList:
        """Fold phases into coefficients, add equal monomials, drop |c| < tol."""
        w = roots_of_unity(self.N)
        acc: dict[tuple, complex] = {}
        for c, p in self.terms:
            key = (p.x, p.z)
            acc[key] = acc.get(key, 0j) + c * w[p.phase]
        terms = [
            (c, GenPauli(self.N, 0, x, z)) for (x, z), c in sorted(acc.items()) if abs(c) >= tol
        ]
        return TermList(self.N, self.n_qudits, terms, self.basis)

    # realizations ---------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.N**self.n_qudits

    def apply_columns(self, digits: np.ndarray):
        """Rows, columns and values of the action on the given basis states.

        Returns (full-space output indices, column numbers, amplitudes) with
        duplicates not yet summed.
        """
        w = roots_of_unity(self.N)
        m = len(digits)
        rows, cols, vals = [], [], []
        colidx = np.arange(m)
        for c, p in self.terms:
            d_out, ph = apply_to_basis(p, digits)
            rows.append(digits_to_index(d_out, self.N))
            cols.append(colidx)
            vals.append(c * w[ph])
        if not rows:
            return np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, complex)
        return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)

    def to_sparse(self) -> sp.csr_matrix:
        dim = self.dim
        check_capacity(dim, limit=2_000_000)
        r, c, v = self.apply_columns(all_digits(self.N, self.n_qudits))
        return sp.csr_matrix((v, (r, c)), shape=(dim, dim))

    def to_dense(self, limit: int | None = None) -> np.ndarray:
        check_capacity(self.dim, limit)
        return self.to_sparse().toarray()

    # serialization --------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "n_qudits": self.n_qudits,
            "basis": self.basis,
            "terms": [{"re": float(c.real), "im": float(c.imag), "pauli": p.to_json()} for c, p in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict) -> TermList:
        terms = [(complex(t["re"], t["im"]), GenPauli.from_json(t["pauli"])) for t in data["terms"]]
        return cls(int(data["N"]), int(data["n_qudits"]), terms, data.get("basis", "physical"))

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def single(N: int, n: int, q: int, poly: Sequence[tuple[complex, int, int]]) -> TermList:
    """Embed ``sum c X^a Z^b`` (X left of Z) on qudit q of an n-qudit register."""
    out = TermList(N, n)
    for c, a, b in poly:
        out.add(c, GenPauli.single(N, n, q, x=a, z=b))
    return out


def identity_list(N: int, n: int) -> TermList:
    return TermList(N, n, [(1.0 + 0j, GenPauli.identity(N, n))])


def product(lists: Iterable[TermList], N: int, n: int) -> TermList:
    out = identity_list(N, n)
    for t in lists:
        out = out @ t
    return out


# ---------------------------------------------------------------------------
# single-site building blocks (one qudit q of an n-qudit register)


def level_projector(N: int, n: int, q: int, level: int) -> TermList:
    """``|level><level| = (1/N) sum_j omega^{-level j} Z^j``."""
    w = roots_of_unity(N)
    return single(N, n, q, [(w[(-level * j) % N] / N, 0, j) for j in range(N)])


def proj_creation(N: int, n: int, q: int) -> TermList:
    """``b^dagger = |1><0| = (1/N) sum_j omega^{-j} Z^j X``."""
    return level_projector(N, n, q, 1) @ single(N, n, q, [(1.0, 1, 0)])


def proj_annihilation(N: int, n: int, q: int) -> TermList:
    """``b = |0><1| = (1/N) sum_j Z^j X^dagger``."""
    return level_projector(N, n, q, 0) @ single(N, n, q, [(1.0, N - 1, 0)])


def proj_string(N: int, n: int, q: int) -> TermList:
    """``-Ztilde = -(|0><0| - |1><1|)`` expanded in Z powers; the j=0 term vanishes."""
    w = roots_of_unity(N)
    return single(N, n, q, [(-(1 - w[(-j) % N]) / N, 0, j) for j in range(1, N)])


def compact_creation(N: int, n: int, q: int) -> TermList:
    """``c^dagger = (1 - Z) X (Z - omega) / (1 - omega)^2``."""
    w = roots_of_unity(N)[1]
    left = single(N, n, q, [(1.0, 0, 0), (-1.0, 0, 1)])
    mid = single(N, n, q, [(1.0 / (1 - w) ** 2, 1, 0)])
    right = single(N, n, q, [(1.0, 0, 1), (-w, 0, 0)])
    return left @ mid @ right


def compact_annihilation(N: int, n: int, q: int) -> TermList:
    """``c = (Z^dagger - omega^-1) X^dagger (1 - Z^dagger) / (1 - omega^-1)^2``."""
    w = roots_of_unity(N)[1]
    wi = np.conj(w)
    left = single(N, n, q, [(1.0, 0, N - 1), (-wi, 0, 0)])
    mid = single(N, n, q, [(1.0 / (1 - wi) ** 2, N - 1, 0)])
    right = single(N, n, q, [(1.0, 0, 0), (-1.0, 0, N - 1)])
    return left @ mid @ right


def compact_string(N: int, n: int, q: int, dagger: bool = False) -> TermList:
    """``(2/(1-omega)) ((1+omega)/2 - Z)``; diag(-1, 1) on levels 0, 1."""
    w = roots_of_unity(N)[1]
    t = single(N, n, q, [(2 / (1 - w) * (1 + w) / 2, 0, 0), (-2 / (1 - w), 0, 1)])
    return t.adjoint() if dagger else t


def creation(kind: str, N: int, n: int, q: int) -> TermList:
    return proj_creation(N, n, q) if kind == "projector" else compact_creation(N, n, q)


def annihilation(kind: str, N: int, n: int, q: int) -> TermList:
    return proj_annihilation(N, n, q) if kind == "projector" else compact_annihilation(N, n, q)


def _check_kind(kind: str) -> str:
    kind = kind.replace("-jw", "").replace("_jw", "")
    if kind not in ENCODINGS:
        raise ValueError(f"unknown encoding {kind!r}; use 'projector' or 'compact'")
    return kind


def fermion_ops(kind: str, l: int, L: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense Jordan-Wigner creation and annihilation operators on an L-site register."""
    kind = _check_kind(kind)
    check_prime(N)
    if not 0 <= l < L:
        raise ValueError(f"site {l} outside 0..{L - 1}")
    check_capacity(N**L)
    if kind == "projector":
        strings_c = [proj_string(N, L, i) for i in range(l)]
        strings_a = strings_c
    else:
        strings_c = [compact_string(N, L, i, dagger=True) for i in range(l)]
        strings_a = [compact_string(N, L, i) for i in range(l)]
    cr = product(strings_c + [creation(kind, N, L, l)], N, L)
    an = product(strings_a + [annihilation(kind, N, L, l)], N, L)
    return cr.to_dense(), an.to_dense()


def zeta_dense(N: int) -> np.ndarray:
    """``exp(i pi (Z - Z^dagger) / (omega - omega^-1))`` as a diagonal matrix."""
    check_prime(N)
    if N < 3:
        raise ValueError("zeta is only defined for N > 2")
    j = np.arange(N)
    return np.diag(np.exp(1j * np.pi * np.sin(2 * np.pi * j / N) / np.sin(2 * np.pi / N)))


# ---------------------------------------------------------------------------
# Hamiltonians


@dataclass(frozen=True)
class HamiltonianParams:
    m: float = 1.0
    eps: float = 1.0
    lambda_e: float = 1.0
    lambda_p: float = 0.0
    encoding: str = "projector"

    def __post_init__(self):
        for name in ("m", "eps", "lambda_e", "lambda_p"):
            v = getattr(self, name)
            if isinstance(v, complex) or not np.isfinite(float(v)):
                raise ValueError(f"coupling {name} must be a finite real number")
            object.__setattr__(self, name, float(v))
        object.__setattr__(self, "encoding", _check_kind(self.encoding))

    def to_json(self) -> dict:
        return {"m": self.m, "eps": self.eps, "lambda_e": self.lambda_e,
                "lambda_p": self.lambda_p, "encoding": self.encoding}


def _mass(lat: LatticeSpec, params: HamiltonianParams) -> TermList:
    N, n = lat.N, lat.n_qudits
    out = TermList(N, n)
    for s in lat.sites:
        q = lat.site_qudit(s)
        sign = -1.0 if staggered_parity(s) else 1.0
        if params.encoding == "projector":
            dens = level_projector(N, n, q, 1)
        else:
            dens = compact_creation(N, n, q) @ compact_annihilation(N, n, q)
        out.extend(dens.scaled(params.m * sign))
    return out


def _electric(lat: LatticeSpec, params: HamiltonianParams) -> TermList:
    N, n = lat.N, lat.n_qudits
    out = TermList(N, n)
    for i in range(lat.n_links):
        q = lat.n_sites + i
        out.extend(single(N, n, q, [(-params.lambda_e, 0, 1), (-params.lambda_e, 0, N - 1)]))
    return out


def _string(lat: LatticeSpec, params: HamiltonianParams, a: int, b: int) -> list[TermList]:
    """Jordan-Wigner factors on sites strictly between row positions a and b."""
    N, n = lat.N, lat.n_qudits
    lo, hi = sorted((a, b))
    if params.encoding == "projector":
        return [proj_string(N, n, k) for k in range(lo + 1, hi)]
    # forward bonds pick up the string of the annihilator, backward ones of the creator
    return [compact_string(N, n, k, dagger=b < a) for k in range(lo + 1, hi)]


def hopping_bond(lat: LatticeSpec, params: HamiltonianParams, link: int, with_string: bool) -> TermList:
    """``-eps (string * a^dagger_src X_link a_dst + h.c.)`` for one link."""
    N, n = lat.N, lat.n_qudits
    src, dst = lat.link_endpoints(link)
    qs, qd = lat.site_qudit(src), lat.site_qudit(dst)
    kind = params.encoding
    factors = [creation(kind, N, n, qs), single(N, n, lat.n_sites + link, [(1.0, 1, 0)]), annihilation(kind, N, n, qd)]
    if with_string:
        factors = _string(lat, params, qs, qd) + factors
    fwd = product(factors, N, n).dropped_zeros().scaled(-params.eps)
    return fwd + fwd.adjoint()


def _plaquettes(lat: LatticeSpec, params: HamiltonianParams) -> TermList:
    N, n = lat.N, lat.n_qudits
    out = TermList(N, n)
    if lat.dims != 2:
        return out
    for s in lat.sites:
        right, up = lat.shift(s, 0), lat.shift(s, 1)
        if right is None or up is None:
            continue
        legs = [lat.link_qudit(s, 1), lat.link_qudit(up, 0), lat.link_qudit(right, 1), lat.link_qudit(s, 0)]
        if any(q is None for q in legs):
            continue
        x = [0] * n
        for q, e in zip(legs, (1, 1, -1, -1)):
            x[q] += e
        p = GenPauli(N, 0, tuple(x), (0,) * n)
        out.add(-params.lambda_p, p)
        out.add(-params.lambda_p, adjoint(p))
    return out


def build_h_1d(lat: LatticeSpec, params: HamiltonianParams) -> TermList:
    """Mass, hopping and electric terms on a 1D staggered chain.

    The periodic wrap bond carries no Jordan-Wigner string, as in the
    unrestricted sum over bonds; on two sites the string is empty anyway.
    """
    if lat.dims != 1:
        raise ValueError("build_h_1d needs a 1D lattice")
    if params.lambda_p:
        raise ValueError("lambda_p has no meaning in one dimension")
    h = _mass(lat, params)
    for i in range(lat.n_links):
        h.extend(hopping_bond(lat, params, i, with_string=False))
    return h.extend(_electric(lat, params))


def build_h_2d(lat: LatticeSpec, params: HamiltonianParams) -> TermList:
    """Electric, plaquette, mass and hopping terms on a 2D staggered lattice.

    x-bonds join consecutive sites in row order and need no string; y-bonds carry
    the string over the sites strictly between their endpoints in row order.
    """
    if lat.dims != 2:
        raise ValueError("build_h_2d needs a 2D lattice")
    h = _electric(lat, params)
    h.extend(_plaquettes(lat, params))
    h.extend(_mass(lat, params))
    for i, (s, mu) in enumerate(lat.links):
        h.extend(hopping_bond(lat, params, i, with_string=(mu == 1)))
    return h


def build_hamiltonian(lat: LatticeSpec, params: HamiltonianParams) -> TermList:
    return build_h_1d(lat, params) if lat.dims == 1 else build_h_2d(lat, params)
