"""Relativistic central-field radial Green's functions of the Dirac equation.

Constructs the four radial components g^{TT'}(r, r') at bound energies
E < 0 for an arbitrary central-field effective nuclear charge Z(r), using
a piecewise-linear charge model with analytic Coulomb solutions on every
grid interval, and verifies the result against an independently integrated
bound-state solver.
"""

__version__ = "0.1.0"

from .constants import DEFAULT_CONSTANTS, HARTREE_EV, PhysicalConstants

__all__ = ["DEFAULT_CONSTANTS", "HARTREE_EV", "PhysicalConstants", "__version__"]
