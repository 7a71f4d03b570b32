"""Qudit stabilizer codes: validation, syndromes, normalizer decomposition, distance."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .zn_algebra import (
    DimensionError,
    GenPauli,
    check_prime,
    commutation_exponent,
    mul,
    pauli_pow,
    paulis_from_json,
    paulis_to_json,
    rank_mod,
    row_reduce,
    solve_mod,
)

#: Default cap on the number of candidate operators a distance search may visit.
DISTANCE_BUDGET = 5_000_000


class CodeError(ValueError):
    """A stabilizer code failed validation."""


class NotInNormalizer(ValueError):
    """The operator is a detectable error and has no logical decomposition."""

    def __init__(self, message: str, syndrome: np.ndarray):
        super().__init__(message)
        self.syndrome = syndrome


class EnumerationLimit(RuntimeError):
    pass


def _matrix(ops: Sequence[GenPauli], n_qudits: int) -> np.ndarray:
    if not ops:
        return np.zeros((0, 2 * n_qudits), dtype=np.int64)
    return np.array([p.symplectic() for p in ops], dtype=np.int64)


def symplectic_rank(ops: Sequence[GenPauli]) -> int:
    """Rank over Z_N of the stacked ``x || z`` vectors."""
    ops = list(ops)
    if not ops:
        return 0
    n = ops[0].n_levels
    for p in ops[1:]:
        ops[0]._check_same(p)
    return rank_mod(_matrix(ops, ops[0].n_qudits), n)


@dataclass(frozen=True)
class StabilizerCode:
    N: int
    n: int
    generators: tuple[GenPauli, ...]
    logical_x: tuple[GenPauli, ...]
    logical_z: tuple[GenPauli, ...]
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def k(self) -> int:
        return len(self.logical_x)

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    def generator_matrix(self) -> np.ndarray:
        return _matrix(self.generators, self.n)

    def to_json(self) -> dict:
        out = {
            "N": self.N,
            "n": self.n,
            "k": self.k,
            "generators": paulis_to_json(self.generators),
            "logical_x": paulis_to_json(self.logical_x),
            "logical_z": paulis_to_json(self.logical_z),
        }
        if self.meta:
            out.update(self.meta)
        return out

    @classmethod
    def from_json(cls, data: dict) -> StabilizerCode:
        meta = {key: data[key] for key in ("lattice",) if key in data}
        return new_code(
            int(data["N"]),
            int(data["n"]),
            paulis_from_json(data["generators"]),
            paulis_from_json(data["logical_x"]),
            paulis_from_json(data["logical_z"]),
            meta=meta,
        )


def new_code(N, n, generators, logical_x, logical_z, meta: dict | None = None) -> StabilizerCode:
    """Validate and build a code. Raises :class:`CodeError` naming the offending pair."""
    check_prime(N)
    generators, logical_x, logical_z = list(generators), list(logical_x), list(logical_z)
    for name, group in (("generator", generators), ("logical_x", logical_x), ("logical_z", logical_z)):
        for i, p in enumerate(group):
            if p.n_levels != N or p.n_qudits != n:
                raise DimensionError(f"{name}[{i}] has (N={p.n_levels}, n={p.n_qudits}), expected ({N}, {n})")
    if len(logical_x) != len(logical_z):
        raise CodeError(f"{len(logical_x)} logical X but {len(logical_z)} logical Z operators")

    for (i, a), (j, b) in itertools.combinations(enumerate(generators), 2):
        c = commutation_exponent(a, b)
        if c:
            raise CodeError(f"generators {i} and {j} do not commute (commutation exponent {c})")
    r = symplectic_rank(generators)
    if r != len(generators):
        raise CodeError(f"generators are dependent: rank {r} < {len(generators)}")
    if len(logical_x) != n - r:
        raise CodeError(f"expected k = n - rank = {n - r} logical pairs, got {len(logical_x)}")

    for name, group in (("logical_x", logical_x), ("logical_z", logical_z)):
        for i, lop in enumerate(group):
            for j, g in enumerate(generators):
                c = commutation_exponent(g, lop)
                if c:
                    raise CodeError(f"{name}[{i}] does not commute with generator {j} (exponent {c})")
    for i, lx in enumerate(logical_x):
        for j, lz in enumerate(logical_z):
            want = (N - 1) if i == j else 0
            c = commutation_exponent(lx, lz)
            if c != want:
                raise CodeError(f"logical pair (X{i}, Z{j}) has commutation exponent {c}, expected {want}")
        for j, lx2 in enumerate(logical_x[i + 1:], start=i + 1):
            c = commutation_exponent(lx, lx2)
            if c:
                raise CodeError(f"logical X{i} and X{j} do not commute (exponent {c})")
    for i, j in itertools.combinations(range(len(logical_z)), 2):
        c = commutation_exponent(logical_z[i], logical_z[j])
        if c:
            raise CodeError(f"logical Z{i} and Z{j} do not commute (exponent {c})")
    full = generators + logical_x + logical_z
    if symplectic_rank(full) != len(full):
        raise CodeError("logical operators are not independent of the stabilizer group")
    return StabilizerCode(N, n, tuple(generators), tuple(logical_x), tuple(logical_z), dict(meta or {}))


def _syndrome_vec(code: StabilizerCode, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    g = code.generator_matrix()
    gx, gz = g[:, : code.n], g[:, code.n:]
    return (gz @ x - gx @ z) % code.N


def syndrome(code: StabilizerCode, error: GenPauli) -> np.ndarray:
    """Component g is the commutation exponent of generator g with ``error``."""
    if error.n_levels != code.N or error.n_qudits != code.n:
        raise DimensionError(f"error on (N={error.n_levels}, n={error.n_qudits}) vs code ({code.N}, {code.n})")
    if not code.generators:
        return np.zeros(0, dtype=np.int64)
    return _syndrome_vec(code, error.x_arr, error.z_arr)


def in_normalizer(code: StabilizerCode, p: GenPauli) -> bool:
    return not np.any(syndrome(code, p))


@dataclass(frozen=True)
class Decomposition:
    """``p = omega**phase * prod G**stab_exps * prod Xbar**lx_exps * prod Zbar**lz_exps``."""

    stab_exps: np.ndarray
    lx_exps: np.ndarray
    lz_exps: np.ndarray
    phase: int


def recompose(code: StabilizerCode, stab_exps, lx_exps, lz_exps, phase: int = 0) -> GenPauli:
    """Ordered product G^s . Xbar^r . Zbar^t times omega**phase."""
    out = GenPauli.identity(code.N, code.n)
    for ops, exps in ((code.generators, stab_exps), (code.logical_x, lx_exps), (code.logical_z, lz_exps)):
        for op, e in zip(ops, exps):
            if int(e) % code.N:
                out = mul(out, pauli_pow(op, int(e)))
    return out.with_phase(out.phase + phase)


def decompose_normalizer(code: StabilizerCode, p: GenPauli) -> Decomposition:
    s = syndrome(code, p)
    if np.any(s):
        raise NotInNormalizer(f"detectable error, not decomposable (syndrome {s.tolist()})", s)
    basis = _matrix(list(code.generators) + list(code.logical_x) + list(code.logical_z), code.n)
    sol = solve_mod(basis.T, p.symplectic(), code.N)
    if sol is None:
        raise AssertionError("internal invariant violated: normalizer element outside stabilizer+logical span")
    g, k = code.n_generators, code.k
    stab, lx, lz = sol[:g], sol[g: g + k], sol[g + k:]
    rec = recompose(code, stab, lx, lz)
    if rec.x != p.x or rec.z != p.z:
        raise AssertionError("internal invariant violated: recomposition mismatch")
    return Decomposition(stab, lx, lz, (p.phase - rec.phase) % code.N)


def in_stabilizer_span(code: StabilizerCode, vec: np.ndarray) -> bool:
    """True if the symplectic vector lies in the row space of the generators."""
    if not code.generators:
        return not np.any(vec % code.N)
    return solve_mod(code.generator_matrix().T, vec, code.N) is not None


_ALPHABETS = {"x", "z", "any"}


def _candidate_count(n: int, w: int, per_site: int) -> int:
    return math.comb(n, w) * per_site**w


def distance(code: StabilizerCode, kind: str = "any", w_max: int = 3, budget: int = DISTANCE_BUDGET):
    """Minimum weight of a logical operator (normalizer minus stabilizer) of the given type.

    ``kind="x"`` scans operators with only X exponents, ``"z"`` only Z exponents,
    ``"any"`` every nonidentity single-qudit factor. Returns None if nothing is found
    up to ``w_max``.
    """
    kind = kind.lower().replace("-type", "")
    if kind not in _ALPHABETS:
        raise ValueError(f"unknown distance kind {kind!r}; use x, z or any")
    if w_max < 1:
        raise ValueError("w_max must be at least 1")
    N, n = code.N, code.n
    if kind == "any":
        local = [(a, b) for a in range(N) for b in range(N) if a or b]
    elif kind == "x":
        local = [(a, 0) for a in range(1, N)]
    else:
        local = [(0, b) for b in range(1, N)]
    total = sum(_candidate_count(n, w, len(local)) for w in range(1, w_max + 1))
    if total > budget:
        raise EnumerationLimit(
            f"distance search needs {total} candidates, budget is {budget}; lower w_max"
        )
    g = code.generator_matrix()
    gx, gz = g[:, :n], g[:, n:]
    red, piv = row_reduce(g, N) if len(g) else (g, [])
    local_arr = np.array(local, dtype=np.int64)

    for w in range(1, w_max + 1):
        for support in itertools.combinations(range(n), w):
            sup = list(support)
            # all exponent assignments on this support at once
            choice = np.array(list(itertools.product(range(len(local)), repeat=w)), dtype=np.int64)
            xs = np.zeros((len(choice), n), dtype=np.int64)
            zs = np.zeros((len(choice), n), dtype=np.int64)
            xs[:, sup] = local_arr[choice, 0]
            zs[:, sup] = local_arr[choice, 1]
            synd = (xs @ gz.T - zs @ gx.T) % N if len(g) else np.zeros((len(choice), 0))
            for idx in np.nonzero(~np.any(synd, axis=1))[0]:
                vec = np.concatenate([xs[idx], zs[idx]])
                if not _in_rowspace(red, piv, vec, N):
                    return w
    return None


def _in_rowspace(red: np.ndarray, pivots: list[int], vec: np.ndarray, N: int) -> bool:
    v = vec.copy() % N
    for row, c in enumerate(pivots):
        if v[c]:
            v = (v - v[c] * red[row]) % N
    return not np.any(v)
