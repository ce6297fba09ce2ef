"""
Photon number as a switch at a fixed readout time
=================================================

Concurrence at t = 4 over a grid of initial photon numbers and dipole
strengths.  Along the photon-number axis the entanglement rises and falls, so
picking n0 selects near-maximal entanglement almost independently of gamma.
The field coupling is not fixed by the scenario; g = 1 is assumed here.
"""

import numpy as np

from cdsim import find_peaks, sweep_grid
from cdsim.experiments import uniform_axis
from cdsim.output import write_csv, write_svg

gammas = uniform_axis(0.0, 1.0, 101)
r = sweep_grid(range(0, 31), gammas, g=1.0, t=4.0)
write_csv(r, "photon_number_switch.csv")
write_svg(r, "photon_number_switch.svg", x_axis="n0", title="t = 4, g = 1")

###############################################################################
# Small gamma never entangles much; larger gamma works for the right n0.

for G in (0.0, 0.05, 0.4, 1.0):
    col = r.slice(gamma=gammas[int(round(G * 100))]).values
    print(f"gamma={G:4.2f}: max over n0 = {col.max():.4f} at n0 = {int(np.argmax(col))}")

###############################################################################
# Local maxima along n0 at gamma = 0.4.

for p in find_peaks(sweep_grid(range(0, 31), [0.4], g=1.0, t=4.0).slice(gamma=0.4)):
    print(f"n0 = {int(p.location):2d}  C = {p.height:.3f}")
