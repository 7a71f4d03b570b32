"""Qudit gates, Clifford checks, gate injection and the phase-flip repetition code."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .stabilizer import StabilizerCode, new_code, syndrome
from .zn_algebra import (
    GenPauli,
    check_prime,
    mod_inverse,
    qft_matrix,
    roots_of_unity,
    single_qudit_matrix,
    to_dense,
)

GATES = ("qft", "s", "t", "t3", "cz", "sum", "cx_tilde", "k")


def _diag(v) -> np.ndarray:
    return np.diag(np.asarray(v, dtype=complex))


def x_matrix(N: int, power: int = 1) -> np.ndarray:
    return single_qudit_matrix(N, power % N, 0)


def z_matrix(N: int, power: int = 1) -> np.ndarray:
    return single_qudit_matrix(N, 0, power % N)


def gate(name: str, N: int) -> np.ndarray:
    """Dense unitary for a named gate. Two-qudit gates act on (control, target)."""
    check_prime(N)
    w = roots_of_unity(N)
    j = np.arange(N)
    if name == "qft":
        return qft_matrix(N)
    if name == "s":
        if N == 2:
            raise ValueError("[2^-1] undefined for N = 2")
        return _diag(w[(j * (j + 1) * mod_inverse(2, N)) % N])
    if name == "t":
        if N < 5:
            raise ValueError(f"[6^-1] undefined for N = {N}; the T gate needs a prime N >= 5")
        return _diag(w[(j**3 * mod_inverse(6, N)) % N])
    if name == "t3":
        if N != 3:
            raise ValueError("t3 is the qutrit T gate (N = 3 only)")
        return _diag(np.exp(2j * np.pi / 9 * np.array([1, 0, -1])))
    if name == "k":
        return x_matrix(N, 0)[:, (-j) % N]
    if name == "cz":
        return _diag(w[np.outer(j, j).ravel() % N])
    if name == "sum":
        return _controlled_shift(N, +1)
    if name == "cx_tilde":
        f = np.kron(np.eye(N), qft_matrix(N))
        return f @ gate("cz", N) @ f
    raise ValueError(f"unknown gate {name!r}; choose from {', '.join(GATES)}")


def _controlled_shift(N: int, sign: int) -> np.ndarray:
    """``sum_i |i><i| (x) X^(sign*i)``."""
    out = np.zeros((N * N, N * N), dtype=complex)
    for i in range(N):
        out[i * N:(i + 1) * N, i * N:(i + 1) * N] = x_matrix(N, sign * i)
    return out


def swap_matrix(N: int) -> np.ndarray:
    out = np.zeros((N * N, N * N), dtype=complex)
    for a, b in itertools.product(range(N), repeat=2):
        out[b * N + a, a * N + b] = 1
    return out


def reversed_pair(u: np.ndarray, N: int) -> np.ndarray:
    """Same two-qudit gate with the roles of the qudits exchanged."""
    s = swap_matrix(N)
    return s @ u @ s


def swap_from_cx_tilde(N: int) -> np.ndarray:
    c12 = gate("cx_tilde", N)
    c21 = reversed_pair(c12, N)
    return c12 @ c21 @ c12


def kfree_swap(N: int) -> np.ndarray:
    """SUM_21 SUM_12^dagger SUM_21 (rightmost first): a swap followed by K on qudit 2."""
    s12 = gate("sum", N)
    s21 = reversed_pair(s12, N)
    return s21 @ s12.conj().T @ s21


# ---------------------------------------------------------------------------
# Clifford checks


def _check_unitary(u: np.ndarray, tol: float = 1e-10):
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("operator must be a square matrix")
    if np.max(np.abs(u.conj().T @ u - np.eye(len(u)))) > tol:
        raise ValueError("operator is not unitary")


def _n_qudits(dim: int, N: int) -> int:
    n = int(round(np.log(dim) / np.log(N)))
    if N**n != dim:
        raise ValueError(f"dimension {dim} is not a power of {N}")
    return n


def match_pauli(m: np.ndarray, N: int, tol: float = 1e-10):
    """Return (c, P) with ``m = c * P`` for a canonical GenPauli P, or None."""
    n = _n_qudits(len(m), N)
    col = m[:, 0]
    nz = np.nonzero(np.abs(col) > tol)[0]
    if len(nz) != 1:
        return None
    x_digits = []
    rem = int(nz[0])
    for _ in range(n):
        x_digits.append(rem % N)
        rem //= N
    x_digits = x_digits[::-1]
    shift = to_dense(GenPauli(N, 0, tuple(x_digits), (0,) * n))
    d = shift.conj().T @ m
    c = d[0, 0]
    if abs(abs(c) - 1) > tol:
        return None
    w = roots_of_unity(N)
    z_digits = []
    for q in range(n):
        ratio = d[N ** (n - 1 - q), N ** (n - 1 - q)] / c
        k = int(np.argmin(np.abs(w - ratio)))
        z_digits.append(k)
    p = GenPauli(N, 0, tuple(x_digits), tuple(z_digits))
    if np.max(np.abs(m - c * to_dense(p))) > tol:
        return None
    return complex(c), p


def conjugate_to_pauli(u: np.ndarray, p: GenPauli, tol: float = 1e-10):
    """``U P U^dagger`` as (unit scalar, GenPauli), or None if it is not a Pauli."""
    _check_unitary(u)
    return match_pauli(u @ to_dense(p) @ u.conj().T, p.n_levels, tol)


def is_clifford(u: np.ndarray, N: int, tol: float = 1e-10) -> bool:
    """True if conjugation maps every X_i and Z_i to a scaled Pauli."""
    _check_unitary(u)
    n = _n_qudits(len(u), N)
    for q in range(n):
        for x, z in ((1, 0), (0, 1)):
            if conjugate_to_pauli(u, GenPauli.single(N, n, q, x=x, z=z), tol) is None:
                return False
    return True


def _dev(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def clifford_identities(N: int) -> dict:
    """Max-entry deviations of the S and T conjugation identities.

    ``stated_*`` use the incrementer X of this package, ``reversed_*`` use the
    decrementer ``X^dagger`` as the shift. ``exact_*`` are the identities that
    hold for the incrementer: ``S X S^dagger = Z X`` and
    ``T X T^dagger = omega^[6^-1] X S``.
    """
    check_prime(N)
    w = roots_of_unity(N)[1]
    x, z = x_matrix(N), z_matrix(N)
    xr = x.conj().T
    s = gate("s", N)
    out = {
        "N": N,
        "stated_s": _dev(s @ x @ s.conj().T, w * z.conj().T @ x),
        "reversed_s": _dev(s @ xr @ s.conj().T, w * z.conj().T @ xr),
        "exact_s": _dev(s @ x @ s.conj().T, z @ x),
    }
    if N >= 5:
        t = gate("t", N)
        ph = w ** mod_inverse(6, N)
        out["stated_t"] = _dev(t @ x @ t.conj().T, s.conj().T @ x / ph)
        out["reversed_t"] = _dev(t @ xr @ t.conj().T, s.conj().T @ xr / ph)
        out["exact_t"] = _dev(t @ x @ t.conj().T, ph * x @ s)
    return out


@dataclass(frozen=True)
class NogoReport:
    total: int
    consistent: int
    txt_clifford: int
    t_clifford: int
    counterexamples: list


def qutrit_t_nogo() -> NogoReport:
    """Enumerate diagonal qutrit gates with ninth-root phases.

    For each (a, b, c) in Z_9^3, compares "T X T^dagger is Clifford" with
    "a = b = c (mod 3)", and checks that T is Clifford whenever the latter holds.
    """
    x = x_matrix(3)
    w9 = np.exp(2j * np.pi / 9)
    consistent = txt = tcl = 0
    bad = []
    for a, b, c in itertools.product(range(9), repeat=3):
        t = _diag(w9 ** np.array([a, b, c]))
        txt_ok = is_clifford(t @ x @ t.conj().T, 3)
        t_ok = is_clifford(t, 3)
        cong = a % 3 == b % 3 == c % 3
        txt += txt_ok
        tcl += t_ok
        if txt_ok == cong and (not cong or t_ok):
            consistent += 1
        else:
            bad.append({"abc": (a, b, c), "txt_clifford": txt_ok, "t_clifford": t_ok, "congruent": cong})
    return NogoReport(729, consistent, txt, tcl, bad)


# ---------------------------------------------------------------------------
# state-vector helpers


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: int
    probability: float
    state: np.ndarray
    probabilities: np.ndarray | None = None


def normalized(psi: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1) > tol:
        raise ValueError("state is not normalized")
    return psi


def random_state(N: int, n: int = 1, rng=None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    v = rng.normal(size=N**n) + 1j * rng.normal(size=N**n)
    return v / np.linalg.norm(v)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``|<a|b>|^2``; insensitive to global phase."""
    return float(abs(np.vdot(a, b)) ** 2)


def align_phase(target: np.ndarray, state: np.ndarray) -> np.ndarray:
    """``state`` times the global phase that maximizes overlap with ``target``."""
    ov = np.vdot(state, target)
    return state if abs(ov) < 1e-15 else state * (ov / abs(ov))


def apply_gate(psi: np.ndarray, u: np.ndarray, qudits, N: int, n: int) -> np.ndarray:
    """Apply a k-qudit gate to the listed qudits of an n-qudit state."""
    qudits = list(qudits)
    k = len(qudits)
    t = psi.reshape((N,) * n)
    t = np.moveaxis(t, qudits, range(k))
    shape = t.shape
    t = (u @ t.reshape(N**k, -1)).reshape(shape)
    return np.moveaxis(t, range(k), qudits).reshape(-1)


def measure(psi: np.ndarray, qudit: int, N: int, n: int, outcome=None, rng=None) -> MeasurementRecord:
    """Projective Z-basis measurement of one qudit; the measured qudit is traced out."""
    t = np.moveaxis(psi.reshape((N,) * n), qudit, 0).reshape(N, -1)
    probs = np.sum(np.abs(t) ** 2, axis=1)
    if outcome is None:
        rng = np.random.default_rng(rng)
        outcome = int(rng.choice(N, p=probs / probs.sum()))
    outcome = int(outcome) % N
    p = float(probs[outcome])
    if p < 1e-15:
        raise ValueError(f"outcome {outcome} has zero probability")
    return MeasurementRecord(outcome, p, t[outcome] / np.sqrt(p), probs)


# ---------------------------------------------------------------------------
# injection


def inject_qft(state: np.ndarray, outcome=None, rng=None) -> MeasurementRecord:
    """Apply QFT to a single qudit by consuming a |0> ancilla.

    Circuit on (system, ancilla): QFT on the ancilla, CZ, a swap made of SUM
    gates that leaves K on the ancilla, QFT on the ancilla (K QFT^dagger = QFT
    absorbs the K), measure the ancilla as L, then X^-L on the system.
    """
    psi = normalized(state)
    N = len(psi)
    reg = np.kron(psi, np.eye(N)[0])
    reg = apply_gate(reg, gate("qft", N), [1], N, 2)
    reg = apply_gate(reg, gate("cz", N), [0, 1], N, 2)
    reg = apply_gate(reg, kfree_swap(N), [0, 1], N, 2)
    reg = apply_gate(reg, gate("qft", N), [1], N, 2)
    rec = measure(reg, 1, N, 2, outcome, rng)
    final = x_matrix(N, -rec.outcome) @ rec.state
    return MeasurementRecord(rec.outcome, rec.probability, final, rec.probabilities)


def inject_qft_reference(state: np.ndarray, outcome: int) -> MeasurementRecord:
    """Same protocol with a literal SWAP and QFT^dagger, for cross-checking."""
    psi = normalized(state)
    N = len(psi)
    reg = np.kron(psi, np.eye(N)[0])
    reg = apply_gate(reg, gate("qft", N), [1], N, 2)
    reg = apply_gate(reg, gate("cz", N), [0, 1], N, 2)
    reg = apply_gate(reg, swap_matrix(N), [0, 1], N, 2)
    reg = apply_gate(reg, gate("qft", N).conj().T, [1], N, 2)
    rec = measure(reg, 1, N, 2, outcome)
    final = x_matrix(N, -rec.outcome) @ rec.state
    return MeasurementRecord(rec.outcome, rec.probability, final, rec.probabilities)


def qft_correction(N: int, outcome: int) -> np.ndarray:
    return x_matrix(N, -outcome)


def diagonal_correction(u: np.ndarray, outcome: int) -> np.ndarray:
    N = len(u)
    return u @ x_matrix(N, outcome) @ u.conj().T


def inject_diagonal(u: np.ndarray, state: np.ndarray, outcome=None, rng=None) -> MeasurementRecord:
    """Apply a diagonal unitary U by consuming the ancilla U QFT |0>.

    SUM^dagger (ancilla controls the system), a SUM-built swap whose leftover K
    is undone in post-processing (L is minus the raw reading), measure, then
    apply U X^L U^dagger.
    """
    u = np.asarray(u, dtype=complex)
    if np.max(np.abs(u - np.diag(np.diag(u)))) > 1e-12:
        raise ValueError("inject_diagonal needs a diagonal unitary")
    _check_unitary(u)
    psi = normalized(state)
    N = len(psi)
    anc = u @ gate("qft", N) @ np.eye(N)[0]
    reg = np.kron(psi, anc)
    sum_dag_from_anc = reversed_pair(gate("sum", N), N).conj().T
    reg = apply_gate(reg, sum_dag_from_anc, [0, 1], N, 2)
    reg = apply_gate(reg, kfree_swap(N), [0, 1], N, 2)
    raw = None if outcome is None else (-int(outcome)) % N
    rec = measure(reg, 1, N, 2, raw, rng)
    L = (-rec.outcome) % N
    final = diagonal_correction(u, L) @ rec.state
    probs = rec.probabilities[(-np.arange(N)) % N]
    return MeasurementRecord(L, rec.probability, final, probs)


def injection_trials(gate_name: str, N: int, trials: int, seed: int = 0, outcome=None) -> dict:
    """Run an injection protocol on seeded random states; summary statistics only."""
    rng = np.random.default_rng(seed)
    target_u = gate("qft", N) if gate_name == "qft" else gate(gate_name, N)
    min_fid = 1.0
    max_prob_err = 0.0
    outcomes = []
    corrections_clifford = True
    for _ in range(trials):
        psi = random_state(N, rng=rng)
        if gate_name == "qft":
            rec = inject_qft(psi, outcome, rng)
            corr = qft_correction(N, rec.outcome)
        else:
            rec = inject_diagonal(target_u, psi, outcome, rng)
            corr = diagonal_correction(target_u, rec.outcome)
        min_fid = min(min_fid, fidelity(target_u @ psi, rec.state))
        max_prob_err = max(max_prob_err, float(np.max(np.abs(rec.probabilities - 1 / N))))
        corrections_clifford &= is_clifford(corr, N)
        outcomes.append(rec.outcome)
    return {
        "gate": gate_name,
        "N": N,
        "trials": trials,
        "seed": seed,
        "outcomes": outcomes,
        "min_fidelity": min_fid,
        "max_probability_error": max_prob_err,
        "corrections_clifford": bool(corrections_clifford),
    }


# ---------------------------------------------------------------------------
# phase-flip repetition code


def phase_flip_code(N: int) -> StabilizerCode:
    """[[3,1]]_N code with S1 = X1 X2^-1, S2 = X2 X3^-1, Xbar = X1, Zbar = Z1 Z2 Z3."""
    s1 = GenPauli(N, 0, (1, -1, 0), (0, 0, 0))
    s2 = GenPauli(N, 0, (0, 1, -1), (0, 0, 0))
    xbar = GenPauli(N, 0, (1, 0, 0), (0, 0, 0))
    zbar = GenPauli(N, 0, (0, 0, 0), (1, 1, 1))
    return new_code(N, 3, [s1, s2], [xbar], [zbar])


def phase_flip_codewords(N: int) -> list[np.ndarray]:
    code = phase_flip_code(N)
    zero = np.zeros(N**3, dtype=complex)
    zero[0] = 1
    for g in code.generators:
        gd = to_dense(g)
        acc = np.zeros_like(zero)
        v = zero
        for _ in range(N):
            acc = acc + v
            v = gd @ v
        zero = acc
    zero /= N
    xbar = to_dense(code.logical_x[0])
    words = [zero]
    for _ in range(N - 1):
        words.append(xbar @ words[-1])
    return words


def single_z_errors(N: int) -> list[GenPauli]:
    errs = []
    for q in range(3):
        for j in range(1, N):
            errs.append(GenPauli.single(N, 3, q, z=j))
    return errs


def phase_flip_decode(syndrome_vec, N: int) -> GenPauli:
    """Correction for a syndrome, assuming at most one single-qudit Z^j error."""
    code = phase_flip_code(N)
    s = tuple(int(v) % N for v in syndrome_vec)
    if not any(s):
        return GenPauli.identity(N, 3)
    for err in single_z_errors(N):
        if tuple(syndrome(code, err)) == s:
            return err.adjoint().with_phase(0)
    raise ValueError(f"syndrome {s} is uncorrectable under the single Z error assumption")


def parity_check_circuit(code: StabilizerCode, data_state: np.ndarray, error: GenPauli | None = None):
    """Measure each X-type stabilizer X_a X_b^-1 with a SUM-based parity check.

    The data is rotated so that X eigenvalues become computational digits,
    SUM and SUM^dagger write the digit difference onto a |0> ancilla,
    the ancilla is read out and the rotation is undone. Returns one record per
    stabilizer; each outcome is that stabilizer's syndrome component.
    """
    N, n = code.N, code.n
    psi = normalized(data_state)
    if error is not None:
        psi = to_dense(error) @ psi
    f = gate("qft", N)
    plus = gate("sum", N)
    minus = plus.conj().T
    records = []
    for g in code.generators:
        support = [q for q in range(n) if g.x[q]]
        if any(g.z) or len(support) != 2:
            raise ValueError("parity_check_circuit handles weight-2 X-type stabilizers only")
        a, b = support
        if (g.x[a] + g.x[b]) % N:
            raise ValueError("expected a stabilizer of the form X_a X_b^-1")
        # after the rotation X acts as omega^-k on digit k, so the syndrome is k_b - k_a
        ca, cb = (minus, plus) if g.x[a] == 1 else (plus, minus)
        reg = np.kron(psi, np.eye(N)[0])
        for q in range(n):
            reg = apply_gate(reg, f.conj().T, [q], N, n + 1)
        reg = apply_gate(reg, ca, [a, n], N, n + 1)
        reg = apply_gate(reg, cb, [b, n], N, n + 1)
        rec = measure(reg, n, N, n + 1)
        post = rec.state
        for q in range(n):
            post = apply_gate(post, f, [q], N, n)
        records.append(MeasurementRecord(rec.outcome, rec.probability, post, rec.probabilities))
        psi = post
    return records
