"""
Spectrum of the four-state sector
=================================

Starting from ``|g, g, n0>`` the dynamics stays in a block spanned by
``|g,g,n0>, |e,g,n0-1>, |g,e,n0-1>, |e,e,n0-2>``.  The block is tridiagonal
with a uniform diagonal, so its eigenvalues come in two +/- pairs around
``(n0 - 1) * omega``.
"""

import numpy as np

from cdsim import SystemParams, analytic_spectrum, build_basis, build_hamiltonian, numeric_eig

p = SystemParams(omega=1.0, g=5.0, gamma=0.5, n0=3)
print("basis:", ", ".join(str(k) for k in build_basis(p).labels))
print(build_hamiltonian(p).real)

###############################################################################
# Closed form next to the Jacobi eigensolver.

a = analytic_spectrum(p)
w = numeric_eig(build_hamiltonian(p)).eigenvalues
print(f"A = {a.A:.10f}  B = {a.B:.10f}  C = {a.C:.4f}  D = {a.D:.10f}")
for x, y in zip(a.eigenvalues, w):
    print(f"{x:+.12f}  {y:+.12f}  {abs(x - y):.1e}")

###############################################################################
# Without the dipole term the block splits into two Jaynes-Cummings doublets,
# with splittings g sqrt(n0) and g sqrt(n0 - 1).

a0 = analytic_spectrum(p.replace(gamma=0.0))
print(a0.A, p.g * np.sqrt(p.n0), a0.B, p.g * np.sqrt(p.n0 - 1))
