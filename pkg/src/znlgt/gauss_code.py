"""Gauss-law stabilizer code on 1D and 2D staggered lattices.

Qudit layout: all sites first in row order ``f(n) = n_x + n_y * extent_x``, then
the links. In 1D link ``l`` joins site ``l`` to ``l+1``. In 2D all x-links come
before all y-links, each block in row order of its origin site. Logical qudit
``i`` is carried by link ``i``.

Each site carries ``G = omega**-p Z_site * prod(Z_in) * prod(Z_out^dagger)``,
and each link carries the logical pair ``Zbar = Z_link`` and
``Xbar = X_origin X_link X_target^dagger``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .stabilizer import StabilizerCode, decompose_normalizer, new_code
from .zn_algebra import GenPauli, check_prime

DIRECTIONS = ("x", "y")


@dataclass(frozen=True)
class LatticeSpec:
    dims: int
    extent: tuple[int, ...]
    boundary: str = "periodic"
    N: int = 3

    def __post_init__(self):
        ext = (self.extent,) if isinstance(self.extent, int) else tuple(int(e) for e in self.extent)
        if self.dims not in (1, 2):
            raise ValueError("only 1D and 2D lattices are supported")
        if len(ext) == 1 and self.dims == 2:
            ext = ext * 2
        if len(ext) != self.dims:
            raise ValueError(f"need {self.dims} extents, got {len(ext)}")
        if any(e < 2 for e in ext):
            raise ValueError("every extent must be at least 2")
        if self.boundary not in ("periodic", "open"):
            raise ValueError("boundary must be 'periodic' or 'open'")
        if self.boundary == "periodic" and any(e % 2 for e in ext):
            raise ValueError("periodic boundaries need even extents for consistent staggering")
        check_prime(self.N)
        object.__setattr__(self, "extent", ext)

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"

    @property
    def n_sites(self) -> int:
        return int(np.prod(self.extent))

    @cached_property
    def sites(self) -> list[tuple[int, ...]]:
        """Site coordinates in fermionic (row) order."""
        if self.dims == 1:
            return [(i,) for i in range(self.extent[0])]
        nx, ny = self.extent
        return [(x, y) for y in range(ny) for x in range(nx)]

    def site_index(self, site) -> int:
        site = self._coord(site)
        if self.dims == 1:
            return site[0]
        return site[0] + site[1] * self.extent[0]

    def _coord(self, site) -> tuple[int, ...]:
        if isinstance(site, (int, np.integer)):
            return self.sites[int(site)]
        site = tuple(int(v) for v in site)
        if len(site) != self.dims or any(not 0 <= v < e for v, e in zip(site, self.extent)):
            raise ValueError(f"site {site} is not in the lattice")
        return site

    def shift(self, site, mu: int, step: int = 1):
        """Neighbouring site along direction ``mu``; None past an open edge."""
        c = list(self._coord(site))
        c[mu] += step
        if not 0 <= c[mu] < self.extent[mu]:
            if not self.periodic:
                return None
            c[mu] %= self.extent[mu]
        return tuple(c)

    @cached_property
    def links(self) -> list[tuple[tuple[int, ...], int]]:
        """(origin site, direction) for every link, in qudit order."""
        out = []
        for mu in range(self.dims):
            for s in self.sites:
                if self.shift(s, mu) is not None:
                    out.append((s, mu))
        return out

    @cached_property
    def _link_lookup(self) -> dict:
        return {key: i for i, key in enumerate(self.links)}

    @property
    def n_links(self) -> int:
        return len(self.links)

    @property
    def n_qudits(self) -> int:
        return self.n_sites + self.n_links

    def link_index(self, site, mu: int):
        """Logical/link index of the link leaving ``site`` along ``mu`` (None if absent)."""
        return self._link_lookup.get((self._coord(site), mu))

    def site_qudit(self, site) -> int:
        return self.site_index(site)

    def link_qudit(self, site, mu: int):
        i = self.link_index(site, mu)
        return None if i is None else self.n_sites + i

    def link_endpoints(self, i: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        s, mu = self.links[i]
        return s, self.shift(s, mu)

    def outgoing(self, site) -> list[int]:
        return [i for mu in range(self.dims) if (i := self.link_index(site, mu)) is not None]

    def incoming(self, site) -> list[int]:
        out = []
        for mu in range(self.dims):
            prev = self.shift(site, mu, -1)
            if prev is not None:
                i = self.link_index(prev, mu)
                if i is not None:
                    out.append(i)
        return out

    def to_json(self) -> dict:
        return {"dims": self.dims, "extent": list(self.extent), "boundary": self.boundary, "N": self.N}

    @classmethod
    def from_json(cls, data: dict) -> LatticeSpec:
        return cls(int(data["dims"]), tuple(data["extent"]), data.get("boundary", "periodic"), int(data["N"]))


def staggered_parity(site) -> int:
    """0 on even sites, 1 on odd sites (coordinate sum parity)."""
    coords = (site,) if isinstance(site, (int, np.integer)) else tuple(site)
    return sum(int(c) for c in coords) % 2


def gauss_generator(lat: LatticeSpec, site) -> GenPauli:
    site = lat._coord(site)
    N, nq = lat.N, lat.n_qudits
    z = [0] * nq
    z[lat.site_qudit(site)] += 1
    for i in lat.incoming(site):
        z[lat.n_sites + i] += 1
    for i in lat.outgoing(site):
        z[lat.n_sites + i] -= 1
    return GenPauli(N, -staggered_parity(site), (0,) * nq, tuple(z))


def logical_x_op(lat: LatticeSpec, i: int) -> GenPauli:
    src, dst = lat.link_endpoints(i)
    x = [0] * lat.n_qudits
    x[lat.site_qudit(src)] += 1
    x[lat.n_sites + i] += 1
    x[lat.site_qudit(dst)] -= 1
    return GenPauli(lat.N, 0, tuple(x), (0,) * lat.n_qudits)


def logical_z_op(lat: LatticeSpec, i: int) -> GenPauli:
    return GenPauli.single(lat.N, lat.n_qudits, lat.n_sites + i, z=1)


def build_code(lat: LatticeSpec) -> StabilizerCode:
    gens = [gauss_generator(lat, s) for s in lat.sites]
    lx = [logical_x_op(lat, i) for i in range(lat.n_links)]
    lz = [logical_z_op(lat, i) for i in range(lat.n_links)]
    return new_code(lat.N, lat.n_qudits, gens, lx, lz, meta={"lattice": lat.to_json()})


def lattice_of(code: StabilizerCode) -> LatticeSpec:
    if "lattice" not in code.meta:
        raise ValueError("code carries no lattice metadata")
    return LatticeSpec.from_json(code.meta["lattice"])


def residual_symmetry_site(N: int) -> np.ndarray:
    """``-exp(i pi (|0><0| + |1><1|))``: +1 on levels 0 and 1, -1 elsewhere."""
    check_prime(N)
    if N < 3:
        raise ValueError("the residual site symmetry needs N >= 3")
    d = -np.ones(N)
    d[:2] = 1.0
    return np.diag(d).astype(complex)


@dataclass(frozen=True)
class SiteZRewrite:
    phase: int
    stabilizer: int
    logical_z: GenPauli  # monomial over the k logical qudits


def site_z_rewrite(code: StabilizerCode, site) -> SiteZRewrite:
    """``Z_site = omega**p * G_site * Zbar_out * Zbar_in^dagger``, found by decomposition."""
    lat = lattice_of(code)
    s = lat._coord(site)
    zs = GenPauli.single(code.N, code.n, lat.site_qudit(s), z=1)
    dec = decompose_normalizer(code, zs)
    nz = np.nonzero(dec.stab_exps)[0]
    stab = int(nz[0]) if len(nz) == 1 and dec.stab_exps[nz[0]] == 1 else -1
    if stab < 0:
        raise AssertionError("site Z does not factor through a single Gauss generator")
    mono = GenPauli(code.N, 0, (0,) * code.k, tuple(int(v) for v in dec.lz_exps))
    return SiteZRewrite(dec.phase, stab, mono)


def site_physical_digits(lat: LatticeSpec, link_digits: np.ndarray) -> np.ndarray:
    """Site digits forced by the Gauss law: ``n_out - n_in + p (mod N)`` per site.

    ``link_digits`` has shape (m, n_links); returns shape (m, n_sites).
    """
    link_digits = np.asarray(link_digits, dtype=np.int64)
    out = np.zeros(link_digits.shape[:-1] + (lat.n_sites,), dtype=np.int64)
    for si, s in enumerate(lat.sites):
        acc = staggered_parity(s)
        for i in lat.outgoing(s):
            acc = acc + link_digits[..., i]
        for i in lat.incoming(s):
            acc = acc - link_digits[..., i]
        out[..., si] = acc
    return out % lat.N

