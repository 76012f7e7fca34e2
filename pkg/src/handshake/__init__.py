"""Two-level-atom energy-transfer simulator.

Subpackages: ``states`` (eigenstates and quadratures), ``dynamics``
(transfer ODEs and timescales), ``fields`` (paired retarded/advanced
potential maps), ``paths`` (phasor path sums), ``experiments``
(coincidence-counting models), ``cli`` (command-line front end).
"""

from .constants import PhysicalConstants, TransitionEnergy, transition_energy

__version__ = "0.1.0"

__all__ = ["PhysicalConstants", "TransitionEnergy", "transition_energy",
           "__version__"]
