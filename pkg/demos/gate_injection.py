"""Inject QFT and T into random qudit states, one line per measurement outcome.

Run: python3 demos/gate_injection.py
"""

import numpy as np

from znlgt.circuits import fidelity, gate, inject_diagonal, inject_qft, random_state

rng = np.random.default_rng(7)
for name, N in (("qft", 3), ("t", 5)):
    psi = random_state(N, rng=rng)
    u = gate(name, N)
    for L in range(N):
        rec = inject_qft(psi, L) if name == "qft" else inject_diagonal(u, psi, L)
        print(f"{name} N={N} L={L}  p={rec.probability:.6f}  fidelity={fidelity(u @ psi, rec.state):.15f}")
