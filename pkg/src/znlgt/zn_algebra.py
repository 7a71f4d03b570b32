"""Arithmetic over Z_N and generalized multi-qudit Pauli operators.

A :class:`GenPauli` stores ``omega**phase * prod_i X_i**x[i] Z_i**z[i]`` with
all X factors to the left of all Z factors on each qudit. ``X|j> = |j+1>``,
``Z|j> = omega**j |j>`` and ``omega = exp(2j*pi/N)``, so ``ZX = omega XZ``.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

#: Largest Hilbert-space dimension realized as a dense matrix.
MAX_DENSE_DIM = 5000


class DimensionError(ValueError):
    """Operands live on different qudit spaces."""


class CapacityError(RuntimeError):
    """A dense realization would not fit desk-scale memory."""


@functools.lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(n: int) -> None:
    if not is_prime(int(n)):
        raise ValueError(f"composite modulus: {n} is not prime")


def mod_inverse(a: int, n: int) -> int:
    """Return ``b`` with ``a*b = 1 (mod n)`` for prime ``n``."""
    check_prime(n)
    a %= n
    if a == 0:
        raise ZeroDivisionError(f"no inverse: 0 mod {n}")
    return pow(a, n - 2, n)


def roots_of_unity(n: int) -> np.ndarray:
    """``omega**k`` for ``k = 0..n-1``; exact 1 at k=0."""
    out = np.exp(2j * np.pi * np.arange(n) / n)
    out[0] = 1.0
    return out


def check_capacity(dim: int, limit: int | None = None) -> None:
    limit = MAX_DENSE_DIM if limit is None else limit
    if dim > limit:
        raise CapacityError(
            f"dimension {dim} exceeds capacity {limit}; reduce the lattice extent or N"
        )


# ---------------------------------------------------------------------------
# linear algebra over Z_p


def row_reduce(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``mat`` over Z_p. Returns (rref, pivot columns)."""
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("row_reduce expects a 2-d array")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        others = np.nonzero(a[:, c])[0]
        for i in others:
            if i != r:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod(mat: np.ndarray, p: int) -> int:
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0
    return len(row_reduce(mat, p)[1])


def solve_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Solve ``a @ x = b (mod p)``; returns one solution or None if inconsistent."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    m, k = a.shape
    red, pivots = row_reduce(np.hstack([a, b]), p)
    if k in pivots:
        return None
    x = np.zeros(k, dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = red[row, k]
    return x


# ---------------------------------------------------------------------------
# generalized Pauli operators


@dataclass(frozen=True)
class GenPauli:
    """``omega**phase * prod_i X_i**x[i] Z_i**z[i]`` on ``len(x)`` qudits of dimension N."""

    n_levels: int
    phase: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        n = int(self.n_levels)
        check_prime(n)
        if n == 2:
            raise ValueError("GenPauli requires an odd prime N; qubit i-phases are not tracked")
        if len(self.x) != len(self.z) or len(self.x) == 0:
            raise DimensionError("x and z exponent vectors must have equal, nonzero length")
        object.__setattr__(self, "n_levels", n)
        object.__setattr__(self, "phase", int(self.phase) % n)
        object.__setattr__(self, "x", tuple(int(v) % n for v in self.x))
        object.__setattr__(self, "z", tuple(int(v) % n for v in self.z))

    # constructors -----------------------------------------------------------

    @classmethod
    def identity(cls, n_levels: int, n_qudits: int) -> GenPauli:
        zero = (0,) * n_qudits
        return cls(n_levels, 0, zero, zero)

    @classmethod
    def from_exponents(cls, n_levels: int, x: Sequence[int], z: Sequence[int], phase: int = 0):
        return cls(n_levels, phase, tuple(x), tuple(z))

    @classmethod
    def single(cls, n_levels: int, n_qudits: int, qudit: int, x: int = 0, z: int = 0) -> GenPauli:
        """``X**x Z**z`` acting on one qudit."""
        xs = [0] * n_qudits
        zs = [0] * n_qudits
        xs[qudit] = x
        zs[qudit] = z
        return cls(n_levels, 0, tuple(xs), tuple(zs))

    @classmethod
    def from_powers(cls, n_levels: int, n_qudits: int, xs: dict | None = None, zs: dict | None = None):
        """Build from ``{qudit: power}`` maps (X part left of Z part)."""
        x = [0] * n_qudits
        z = [0] * n_qudits
        for q, v in (xs or {}).items():
            x[q] += v
        for q, v in (zs or {}).items():
            z[q] += v
        return cls(n_levels, 0, tuple(x), tuple(z))

    # properties ---------------------------------------------------------------

    @property
    def n_qudits(self) -> int:
        return len(self.x)

    @property
    def x_arr(self) -> np.ndarray:
        return np.array(self.x, dtype=np.int64)

    @property
    def z_arr(self) -> np.ndarray:
        return np.array(self.z, dtype=np.int64)

    def symplectic(self) -> np.ndarray:
        """The length-2n vector ``x || z``."""
        return np.array(self.x + self.z, dtype=np.int64)

    def is_identity(self, ignore_phase: bool = False) -> bool:
        trivial = not any(self.x) and not any(self.z)
        return trivial and (ignore_phase or self.phase == 0)

    def weight(self) -> int:
        return sum(1 for a, b in zip(self.x, self.z) if a or b)

    def support(self) -> list[int]:
        return [i for i, (a, b) in enumerate(zip(self.x, self.z)) if a or b]

    # algebra ------------------------------------------------------------------

    def _check_same(self, other: GenPauli) -> None:
        if not isinstance(other, GenPauli):
            raise TypeError(f"expected GenPauli, got {type(other).__name__}")
        if other.n_levels != self.n_levels or other.n_qudits != self.n_qudits:
            raise DimensionError(
                f"dimension mismatch: (N={self.n_levels}, n={self.n_qudits}) vs "
                f"(N={other.n_levels}, n={other.n_qudits})"
            )

    def __mul__(self, other: GenPauli) -> GenPauli:
        return mul(self, other)

    def __pow__(self, k: int) -> GenPauli:
        return pauli_pow(self, k)

    def adjoint(self) -> GenPauli:
        return adjoint(self)

    def with_phase(self, phase: int) -> GenPauli:
        return GenPauli(self.n_levels, phase, self.x, self.z)

    def to_dense(self, limit: int | None = None) -> np.ndarray:
        return to_dense(self, limit)

    def to_json(self) -> dict:
        return {"N": self.n_levels, "phase": self.phase, "x": list(self.x), "z": list(self.z)}

    @classmethod
    def from_json(cls, data: dict) -> GenPauli:
        return cls(int(data["N"]), int(data.get("phase", 0)), tuple(data["x"]), tuple(data["z"]))

    def __str__(self) -> str:
        parts = []
        for i, (a, b) in enumerate(zip(self.x, self.z)):
            if a:
                parts.append(f"X{i}" + (f"^{a}" if a != 1 else ""))
            if b:
                parts.append(f"Z{i}" + (f"^{b}" if b != 1 else ""))
        body = " ".join(parts) or "I"
        return f"w^{self.phase} {body}" if self.phase else body


def mul(p: GenPauli, q: GenPauli) -> GenPauli:
    """Canonical form of the operator product ``p @ q``."""
    p._check_same(q)
    n = p.n_levels
    # Z^s X^t = omega^{st} X^t Z^s on every qudit
    swap = int(np.dot(p.z_arr, q.x_arr))
    return GenPauli(
        n,
        p.phase + q.phase + swap,
        tuple((a + b) % n for a, b in zip(p.x, q.x)),
        tuple((a + b) % n for a, b in zip(p.z, q.z)),
    )


def commutation_exponent(p: GenPauli, q: GenPauli) -> int:
    """Return c with ``p q = omega**c q p``; zero iff the operators commute."""
    p._check_same(q)
    c = np.dot(p.z_arr, q.x_arr) - np.dot(p.x_arr, q.z_arr)
    return int(c) % p.n_levels


def adjoint(p: GenPauli) -> GenPauli:
    # (w^a X^r Z^s)^dag = w^{-a} Z^{-s} X^{-r} = w^{-a + rs} X^{-r} Z^{-s}
    rs = int(np.dot(p.x_arr, p.z_arr))
    return GenPauli(p.n_levels, -p.phase + rs, tuple(-v for v in p.x), tuple(-v for v in p.z))


def pauli_pow(p: GenPauli, k: int) -> GenPauli:
    """Canonical form of ``p**k``; negative k allowed."""
    k = int(k)
    n = p.n_levels
    # (X^r Z^s)^k = w^{rs k(k-1)/2} X^{kr} Z^{ks}
    rs = int(np.dot(p.x_arr, p.z_arr))
    tri = k * (k - 1) // 2
    return GenPauli(
        n,
        k * p.phase + rs * tri,
        tuple(k * v for v in p.x),
        tuple(k * v for v in p.z),
    )


def weight(p: GenPauli) -> int:
    return p.weight()


def product(ops: Iterable[GenPauli], n_levels: int | None = None, n_qudits: int | None = None):
    """Ordered product of GenPaulis (left to right)."""
    out = None
    for op in ops:
        out = op if out is None else mul(out, op)
    if out is None:
        if n_levels is None or n_qudits is None:
            raise ValueError("empty product needs n_levels and n_qudits")
        return GenPauli.identity(n_levels, n_qudits)
    return out


def single_qudit_matrix(n: int, x: int, z: int) -> np.ndarray:
    """Dense ``X**x Z**z`` on one N-level system."""
    w = roots_of_unity(n)
    m = np.zeros((n, n), dtype=complex)
    j = np.arange(n)
    m[(j + x) % n, j] = w[(z * j) % n]
    return m


def to_dense(p: GenPauli, limit: int | None = None) -> np.ndarray:
    n, q = p.n_levels, p.n_qudits
    check_capacity(n**q, limit)
    out = np.array([[roots_of_unity(n)[p.phase]]], dtype=complex)
    for a, b in zip(p.x, p.z):
        out = np.kron(out, single_qudit_matrix(n, a, b))
    return out


# ---------------------------------------------------------------------------
# computational-basis action (qudit 0 is the most significant digit)


def index_to_digits(index: np.ndarray, n_levels: int, n_qudits: int) -> np.ndarray:
    index = np.asarray(index, dtype=np.int64)
    digits = np.empty(index.shape + (n_qudits,), dtype=np.int64)
    rem = index.copy()
    for q in range(n_qudits - 1, -1, -1):
        digits[..., q] = rem % n_levels
        rem //= n_levels
    return digits


def digits_to_index(digits: np.ndarray, n_levels: int) -> np.ndarray:
    digits = np.asarray(digits, dtype=np.int64)
    weights = n_levels ** np.arange(digits.shape[-1] - 1, -1, -1, dtype=np.int64)
    return digits @ weights


def all_digits(n_levels: int, n_qudits: int) -> np.ndarray:
    return index_to_digits(np.arange(n_levels**n_qudits), n_levels, n_qudits)


def apply_to_basis(p: GenPauli, digits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Action on basis states: ``p|d> = omega**phase_out |d_out>``.

    ``digits`` has shape (m, n_qudits); returns (d_out, phase exponents).
    """
    n = p.n_levels
    d_out = (digits + p.x_arr) % n
    # Z^s acts first on |d>, X^r then shifts
    phase = (p.phase + digits @ p.z_arr) % n
    return d_out, phase


def to_sparse(p: GenPauli) -> sp.csr_matrix:
    n, q = p.n_levels, p.n_qudits
    dim = n**q
    d = all_digits(n, q)
    d_out, ph = apply_to_basis(p, d)
    rows = digits_to_index(d_out, n)
    return sp.csr_matrix((roots_of_unity(n)[ph], (rows, np.arange(dim))), shape=(dim, dim))


def paulis_to_json(ops: Iterable[GenPauli]) -> list[dict]:
    return [p.to_json() for p in ops]


def paulis_from_json(data: Iterable[dict]) -> list[GenPauli]:
    return [GenPauli.from_json(d) for d in data]


def dumps(p: GenPauli) -> str:
    return json.dumps(p.to_json())


def qft_matrix(n: int) -> np.ndarray:
    """``(1/sqrt N) sum_{j,k} omega^{jk} |k><j|``; conjugating Z by it gives X^dagger."""
    w = roots_of_unity(n)
    j = np.arange(n)
    return w[np.outer(j, j) % n] / np.sqrt(n)
