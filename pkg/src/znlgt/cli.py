"""Command-line entry point: ``znlgt <group> <action> [flags]``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
capacity errors. Reports go to stdout as a short summary; ``--json`` prints the
machine report instead, ``--json PATH`` writes it to a file.
"""

from __future__ import annotations

import argparse
import json
import struct
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bosonic import build_dual
from .circuits import (
    clifford_identities,
    fidelity,
    gate,
    injection_trials,
    is_clifford,
    parity_check_circuit,
    phase_flip_code,
    phase_flip_codewords,
    phase_flip_decode,
    qutrit_t_nogo,
    random_state,
    single_z_errors,
    x_matrix,
)
from .encoding import HamiltonianParams, TermList, build_hamiltonian
from .gauss_code import LatticeSpec, build_code, lattice_of
from .logical import rewrite_hamiltonian
from .stabilizer import EnumerationLimit, StabilizerCode, distance, syndrome
from .verify import MATRIX_TOL, SPECTRUM_TOL, duality_check
from .zn_algebra import CapacityError, DimensionError, check_capacity, to_dense

MAGIC = b"ZNDENSE1"
FIDELITY_TOL = 1e-12


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# binary matrix format


def write_matrix(path, m: np.ndarray) -> None:
    """8-byte magic, uint64 LE dimension, then complex128 LE entries in row-major order."""
    m = np.asarray(m, dtype="<c16")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("only square matrices can be written")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", m.shape[0]))
        fh.write(np.ascontiguousarray(m).tobytes())


def read_matrix(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if raw[:8] != MAGIC:
        raise ValueError(f"{path} is not a ZNDENSE1 file")
    (dim,) = struct.unpack("<Q", raw[8:16])
    body = raw[16:]
    if len(body) != dim * dim * 16:
        raise ValueError(f"{path} is truncated: expected {dim * dim * 16} payload bytes, got {len(body)}")
    return np.frombuffer(body, dtype="<c16").reshape(dim, dim).copy()


# ---------------------------------------------------------------------------
# run configuration


@dataclass
class RunConfig:
    subcommand: str
    dims: int | None = None
    extent: tuple[int, ...] | None = None
    boundary: str = "periodic"
    N: int | None = None
    m: float = 1.0
    eps: float = 1.0
    lambda_e: float = 1.0
    lambda_p: float = 0.0
    encoding: str = "projector"
    matrix_tol: float = MATRIX_TOL
    spectrum_tol: float = SPECTRUM_TOL
    seed: int = 0
    paths: dict = field(default_factory=dict)

    def validate(self) -> RunConfig:
        if self.matrix_tol <= 0 or self.spectrum_tol <= 0:
            raise UsageError("tolerances must be positive")
        if self.encoding not in ("projector", "compact"):
            raise UsageError("--encoding must be projector or compact")
        if self.seed < 0:
            raise UsageError("--seed must be non-negative")
        return self

    def lattice(self) -> LatticeSpec:
        if self.dims is None or self.extent is None or self.N is None:
            raise UsageError("--dims, --extent and --levels are required")
        return LatticeSpec(self.dims, self.extent, self.boundary, self.N)

    def params(self) -> HamiltonianParams:
        return HamiltonianParams(self.m, self.eps, self.lambda_e, self.lambda_p, self.encoding)

    def to_json(self) -> dict:
        out = asdict(self)
        out["extent"] = list(self.extent) if self.extent else None
        return out


def _extent(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad extent {text!r}; use a or a,b") from None


def _config(args, **extra) -> RunConfig:
    names = ("dims", "extent", "boundary", "m", "eps", "lambda_e", "lambda_p", "encoding",
             "matrix_tol", "spectrum_tol", "seed")
    kw = {k: getattr(args, k) for k in names if getattr(args, k, None) is not None}
    if getattr(args, "levels", None) is not None:
        kw["N"] = args.levels
    kw.update(extra)
    return RunConfig(subcommand=args.cmd, **kw).validate()


# ---------------------------------------------------------------------------
# io helpers


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write_json(path, obj) -> None:
    if path in (None, "-"):
        sys.stdout.write(_dump(obj))
    else:
        Path(path).write_text(_dump(obj))


def _report(args, report: dict, summary: list[str]) -> int:
    target = getattr(args, "json", None)
    if target == "-":
        sys.stdout.write(_dump(report))
    else:
        if target:
            Path(target).write_text(_dump(report))
        print("\n".join(summary))
    return 0 if report.get("pass", True) else 1


def _load_code(path) -> StabilizerCode:
    return StabilizerCode.from_json(_load_json(path))


# ---------------------------------------------------------------------------
# subcommands


def cmd_code_build(args) -> int:
    cfg = _config(args)
    code = build_code(cfg.lattice())
    data = code.to_json()
    if args.out:
        Path(args.out).write_text(_dump(data))
        print(f"code: n={code.n} k={code.k} generators={code.n_generators} -> {args.out}")
    else:
        sys.stdout.write(_dump(data))
    return 0


def cmd_code_distance(args) -> int:
    code = _load_code(args.code)
    d = distance(code, args.kind, args.max_weight)
    report = {"kind": args.kind, "max_weight": args.max_weight, "distance": d, "N": code.N, "n": code.n}
    line = f"d_{args.kind} = {d}" if d is not None else f"d_{args.kind}: none <= {args.max_weight}"
    return _report(args, report, [line])


def cmd_ham_build(args) -> int:
    cfg = _config(args)
    code = _load_code(args.code)
    h = build_hamiltonian(lattice_of(code), cfg.params())
    _write_json(args.out, h.to_json())
    if args.out not in (None, "-"):
        print(f"hamiltonian: {len(h)} terms on {h.n_qudits} qudits -> {args.out}")
    return 0


def cmd_ham_rewrite(args) -> int:
    code = _load_code(args.code)
    h = TermList.from_json(_load_json(args.ham))
    out = rewrite_hamiltonian(code, h)
    _write_json(args.out, out.to_json())
    if args.out not in (None, "-"):
        print(f"logical hamiltonian: {len(out)} terms on {out.n_qudits} qudits -> {args.out}")
    return 0


def cmd_duality_build(args) -> int:
    cfg = _config(args)
    code = _load_code(args.code)
    lat = lattice_of(code)
    check_capacity(lat.N**lat.n_links)
    params = cfg.params()
    if args.form == "bosonic":
        m = build_dual(lat, HamiltonianParams(params.m, params.eps, params.lambda_e, params.lambda_p), sparse=True)
        m = m.toarray()
    else:
        m = rewrite_hamiltonian(code, build_hamiltonian(lat, params)).to_dense()
    write_matrix(args.out, m)
    print(f"{args.form} matrix: dim {len(m)} -> {args.out}")
    return 0


def cmd_duality_check(args) -> int:
    cfg = _config(args)
    report = duality_check(cfg.lattice(), cfg.params(), cfg.matrix_tol, cfg.spectrum_tol,
                           full_spectrum=args.full_spectrum)
    report["config"] = cfg.to_json()
    dims = report["sector_dims"]
    lines = [
        f"sector dims: {dims}",
        f"max matrix diff: {report['max_matrix_diff']:.3e} ({report['matrix_diff_scope']})",
    ]
    if report["max_spectrum_diff"] is not None:
        lines.append(f"max spectrum diff: {report['max_spectrum_diff']:.3e}")
    lines.append("PASS" if report["pass"] else "FAIL")
    return _report(args, report, lines)


def cmd_inject(args) -> int:
    cfg = _config(args)
    if args.gate == "t" and cfg.N < 5:
        raise UsageError("the T gate needs a prime N >= 5")
    res = injection_trials(args.gate, cfg.N, args.trials, cfg.seed, args.outcome)
    res["pass"] = bool(res["min_fidelity"] > 1 - FIDELITY_TOL
                       and res["max_probability_error"] < FIDELITY_TOL
                       and res["corrections_clifford"])
    res["config"] = cfg.to_json()
    lines = [
        f"{args.gate} injection, N={cfg.N}, {args.trials} trials",
        f"min fidelity: {res['min_fidelity']:.15f}",
        f"max outcome-probability error: {res['max_probability_error']:.3e}",
        f"corrections Clifford: {res['corrections_clifford']}",
        "PASS" if res["pass"] else "FAIL",
    ]
    return _report(args, res, lines)


def cmd_clifford_verify(args) -> int:
    cfg = _config(args)
    N = cfg.N
    ids = clifford_identities(N)
    gates = {name: is_clifford(gate(name, N), N) for name in ("qft", "s", "cz", "sum", "cx_tilde")}
    t_info = {}
    if N >= 5:
        t = gate("t", N)
        x = x_matrix(N)
        t_info = {"t_clifford": is_clifford(t, N), "txt_clifford": is_clifford(t @ x @ t.conj().T, N)}
    tol = 1e-12
    stated = [ids["stated_s"]] + ([ids["stated_t"]] if "stated_t" in ids else [])
    ok = all(gates.values()) and all(v < tol for v in stated)
    if t_info:
        ok = ok and not t_info["t_clifford"] and t_info["txt_clifford"]
    report = {"N": N, "identities": ids, "gates_clifford": gates, **t_info, "pass": bool(ok)}
    lines = [f"N={N}", f"QFT, S, CZ, SUM, CX~ Clifford: {all(gates.values())}",
             f"S X S^+ = w Z^+ X: deviation {ids['stated_s']:.3e} (S X S^+ = Z X: {ids['exact_s']:.1e})"]
    if t_info:
        lines.append(f"T X T^+ = w^-[1/6] S^+ X: deviation {ids['stated_t']:.3e}"
                     f" (with X^+ as the shift: {ids['reversed_t']:.1e})")
        lines.append(f"T Clifford: {t_info['t_clifford']}, T X T^+ Clifford: {t_info['txt_clifford']}")
    lines.append("PASS" if ok else "FAIL")
    return _report(args, report, lines)


def cmd_nogo_qutrit(args) -> int:
    rep = qutrit_t_nogo()
    report = {
        "total": rep.total,
        "consistent": rep.consistent,
        "txt_clifford": rep.txt_clifford,
        "t_clifford": rep.t_clifford,
        "counterexamples": [dict(c, abc=list(c["abc"])) for c in rep.counterexamples[: args.show]],
        "n_counterexamples": len(rep.counterexamples),
        "pass": rep.consistent == rep.total,
    }
    lines = [
        f"{rep.consistent}/{rep.total} triples consistent",
        f"T X T^+ Clifford for {rep.txt_clifford} triples, T Clifford for {rep.t_clifford}",
    ]
    if rep.counterexamples:
        c = rep.counterexamples[0]
        lines.append(f"first counterexample: (a,b,c)={c['abc']}, TXT^+ Clifford={c['txt_clifford']}, "
                     f"T Clifford={c['t_clifford']}")
    lines.append("PASS" if report["pass"] else "FAIL")
    return _report(args, report, lines)


def cmd_phaseflip_demo(args) -> int:
    cfg = _config(args)
    N = cfg.N
    code = phase_flip_code(N)
    words = phase_flip_codewords(N)
    rng = np.random.default_rng(cfg.seed)
    rows = []
    syndromes_ok = True
    min_fid = 1.0
    for err in single_z_errors(N):
        alg = [int(v) for v in syndrome(code, err)]
        amps = random_state(N, rng=rng)
        psi = sum(a * w for a, w in zip(amps, words))
        recs = parity_check_circuit(code, psi, err)
        circ = [r.outcome for r in recs]
        corr = phase_flip_decode(circ, N)
        fixed = to_dense(corr) @ recs[-1].state
        f = fidelity(psi, fixed)
        syndromes_ok &= alg == circ
        min_fid = min(min_fid, f)
        q = next(i for i, z in enumerate(err.z) if z)
        rows.append({"error": f"Z{q + 1}^{err.z[q]}", "algebraic": alg, "circuit": circ,
                     "correction": str(corr), "fidelity": f})
    ok = syndromes_ok and min_fid > 1 - FIDELITY_TOL
    report = {"N": N, "seed": cfg.seed, "errors": rows, "syndromes_match": bool(syndromes_ok),
              "min_fidelity": min_fid, "pass": bool(ok)}
    lines = [f"{r['error']:>6}  syndrome {tuple(r['algebraic'])}  circuit {tuple(r['circuit'])}  "
             f"fidelity {r['fidelity']:.12f}" for r in rows]
    lines.append("PASS" if ok else "FAIL")
    return _report(args, report, lines)


# ---------------------------------------------------------------------------
# parser


def _lattice_flags(p, required=True):
    p.add_argument("--dims", type=int, choices=(1, 2), required=required)
    p.add_argument("--extent", type=_extent, required=required, help="a or a,b")
    p.add_argument("--levels", type=int, required=required, help="prime N")
    p.add_argument("--boundary", choices=("periodic", "open"), default="periodic")


def _coupling_flags(p):
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--lambda-e", dest="lambda_e", type=float, default=1.0)
    p.add_argument("--lambda-p", dest="lambda_p", type=float, default=0.0)
    p.add_argument("--encoding", choices=("projector", "compact"), default="projector")


def _json_flag(p):
    p.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                   help="print the JSON report, or write it to PATH")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="znlgt", description=__doc__.splitlines()[0])
    groups = ap.add_subparsers(dest="group", required=True)

    code = groups.add_parser("code").add_subparsers(dest="action", required=True)
    p = code.add_parser("build")
    _lattice_flags(p)
    p.add_argument("--out", help="write the code JSON here instead of stdout")
    p.set_defaults(func=cmd_code_build)
    p = code.add_parser("distance")
    p.add_argument("--code", required=True)
    p.add_argument("--kind", choices=("x", "z", "any"), default="any")
    p.add_argument("--max-weight", dest="max_weight", type=int, default=3)
    _json_flag(p)
    p.set_defaults(func=cmd_code_distance)

    ham = groups.add_parser("ham").add_subparsers(dest="action", required=True)
    p = ham.add_parser("build")
    p.add_argument("--code", required=True)
    _coupling_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ham_build)
    p = ham.add_parser("rewrite")
    p.add_argument("--code", required=True)
    p.add_argument("--ham", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ham_rewrite)

    dual = groups.add_parser("duality").add_subparsers(dest="action", required=True)
    p = dual.add_parser("build")
    p.add_argument("--code", required=True)
    _coupling_flags(p)
    p.add_argument("--form", choices=("bosonic", "logical"), default="bosonic")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_duality_build)
    p = dual.add_parser("check")
    _lattice_flags(p)
    _coupling_flags(p)
    p.add_argument("--matrix-tol", dest="matrix_tol", type=float, default=MATRIX_TOL)
    p.add_argument("--spectrum-tol", dest="spectrum_tol", type=float, default=SPECTRUM_TOL)
    p.add_argument("--full-spectrum", dest="full_spectrum", action="store_true", default=None,
                   help="also compare spectra in 2D")
    _json_flag(p)
    p.set_defaults(func=cmd_duality_check)

    p = groups.add_parser("inject")
    p.add_argument("--gate", choices=("qft", "t"), required=True)
    p.add_argument("--levels", type=int, required=True)
    sel = p.add_mutually_exclusive_group()
    sel.add_argument("--outcome", type=int)
    sel.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=50)
    _json_flag(p)
    p.set_defaults(func=cmd_inject, action=None)

    cl = groups.add_parser("clifford").add_subparsers(dest="action", required=True)
    p = cl.add_parser("verify")
    p.add_argument("--levels", type=int, required=True)
    _json_flag(p)
    p.set_defaults(func=cmd_clifford_verify)

    ng = groups.add_parser("nogo").add_subparsers(dest="action", required=True)
    p = ng.add_parser("qutrit")
    p.add_argument("--show", type=int, default=10, help="counterexamples kept in the report")
    _json_flag(p)
    p.set_defaults(func=cmd_nogo_qutrit)

    pf = groups.add_parser("phaseflip").add_subparsers(dest="action", required=True)
    p = pf.add_parser("demo")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _json_flag(p)
    p.set_defaults(func=cmd_phaseflip_demo)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    args.cmd = " ".join(v for v in (args.group, args.action) if v)
    try:
        return args.func(args)
    except (CapacityError, EnumerationLimit) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (UsageError, DimensionError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
