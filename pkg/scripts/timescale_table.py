#!/usr/bin/env python3
"""Print the transfer-time table: bare 1/r coupling vs an optical system.

Shows why desk-scale experiments are impossible without optics: at one
meter the bare handshake needs ~40 ms, while a 1-steradian lens system
brings it to nanoseconds.
"""
from handshake.constants import transition_energy
from handshake.dynamics import transition_time
from handshake.paths import enhancement_factor

te = transition_energy()
print(f"transition: {te.rydberg_eV:.4f} eV, "
      f"omega0 = {te.omega0:.4e} rad/s, "
      f"wavelength = {te.wavelength_m:.4e} m")
print(f"{'r [m]':>10} {'free tau [s]':>14} {'1 sr gain':>12} "
      f"{'optical tau [s]':>16}")
for r in (0.01, 0.1, 1.0, 10.0, 1000.0):
    tau = transition_time(r)
    gain = enhancement_factor(r, te.wavelength_m, 1.0)
    tau_opt = transition_time(r, solid_angle=1.0)
    print(f"{r:10.2f} {tau:14.4e} {gain:12.4e} {tau_opt:16.4e}")
