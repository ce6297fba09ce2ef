"""
Concurrence versus time
=======================

The three time-trace scenarios: two dipole strengths at strong field coupling,
two field couplings at fixed dipole strength, and two photon numbers.  Caption
values "n" are read as the sector label, so the initial photon number is
``n + 2``.  Charts are written as SVG next to this script's working directory.
"""

from cdsim import SystemParams, find_peaks, sweep_time
from cdsim.experiments import TimeGrid, stack_results
from cdsim.output import write_svg

grid = TimeGrid(0.0, 20.0, 2001)

###############################################################################
# Dipole strength: the stronger coupling reaches a higher peak.

traces = [sweep_time(SystemParams(omega=1.0, g=5.0, gamma=G, n0=3), grid) for G in (0.5, 0.1)]
for G, r in zip((0.5, 0.1), traces):
    print(f"gamma={G}: max C = {r.values.max():.4f}, {len(find_peaks(r))} local maxima")
write_svg(stack_results(traces, "gamma", [0.5, 0.1]), "time_traces_gamma.svg", title="g = 5, n0 = 3")

###############################################################################
# Field coupling: weaker coupling gives a taller and wider first packet.

traces = [sweep_time(SystemParams(omega=1.0, g=g, gamma=0.5, n0=3), grid) for g in (1.0, 0.5)]
for g, r in zip((1.0, 0.5), traces):
    first = find_peaks(r)[0]
    print(f"g={g}: first peak at t={first.location:.2f}, height {first.height:.4f}, width {first.width:.4f}")
write_svg(stack_results(traces, "g", [1.0, 0.5]), "time_traces_g.svg", title="gamma = 0.5, n0 = 3")

###############################################################################
# Photon number: peak heights barely move.

traces = [sweep_time(SystemParams(omega=1.0, g=5.0, gamma=0.5, n0=n0), grid) for n0 in (7, 8)]
for n0, r in zip((7, 8), traces):
    print(f"n0={n0}: max C = {r.values.max():.4f}")
write_svg(stack_results(traces, "n0", [7, 8]), "time_traces_n0.svg", title="g = 5, gamma = 0.5")
