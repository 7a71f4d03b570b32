"""Ground energy of a 1D Z_N chain from the physical, logical and bosonic forms.

Run: python3 demos/duality_scan.py
"""

import numpy as np

from znlgt.bosonic import build_dual_1d
from znlgt.encoding import HamiltonianParams, build_hamiltonian
from znlgt.gauss_code import LatticeSpec, build_code
from znlgt.logical import rewrite_hamiltonian
from znlgt.verify import physical_projector, residual_projector, restricted_spectrum

lat = LatticeSpec(1, (4,), "periodic", 3)
code = build_code(lat)
res = residual_projector(lat)
phys = physical_projector(code)

print(f"{'eps':>5} {'physical':>12} {'logical':>12} {'bosonic':>12}")
for eps in np.linspace(0.0, 2.0, 9):
    params = HamiltonianParams(m=1.0, eps=eps, lambda_e=0.5)
    h = build_hamiltonian(lat, params)
    e_phys = restricted_spectrum(h, phys)[0]
    e_log = restricted_spectrum(rewrite_hamiltonian(code, h), res)[0]
    e_bos = restricted_spectrum(build_dual_1d(lat, params, sparse=True), res)[0]
    print(f"{eps:5.2f} {e_phys:12.8f} {e_log:12.8f} {e_bos:12.8f}")
