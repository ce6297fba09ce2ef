"""
Exact evolution and the reduced atom state
==========================================

Propagate the product state ``|g, g, n0>`` with the spectral propagator, trace
out the field, and read off the Wootters concurrence.  The reduced matrix only
ever has one coherence, between ``|eg>`` and ``|ge>``, so the X-state formula
gives the same number.
"""

import numpy as np

from cdsim import (
    SystemParams,
    build_hamiltonian,
    concurrence,
    concurrence_x_state,
    initial_state,
    propagate,
    propagate_expm,
    reduce_to_atoms,
)

p = SystemParams(omega=1.0, g=1.0, gamma=0.5, n0=3)
h = build_hamiltonian(p)
psi0 = initial_state(p)

for t in (0.0, 1.0, 2.0, 4.0, 8.0):
    psi = propagate(h, psi0, t)
    rho = reduce_to_atoms(psi)
    c = concurrence(rho).value
    cx = concurrence_x_state(rho).value
    drift = np.abs(psi.amplitudes - propagate_expm(h, psi0, t).amplitudes).max()
    print(f"t={t:4.1f}  |psi|={psi.norm:.15f}  C={c:.6f}  C_X={cx:.6f}  expm diff={drift:.1e}")

###############################################################################
# The reduced state at t = 2, in the order |ee>, |eg>, |ge>, |gg>.

np.set_printoptions(precision=4, suppress=True)
print(reduce_to_atoms(propagate(h, psi0, 2.0)).matrix)
