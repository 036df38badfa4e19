"""Second-order radial matrix elements.

The quantity served here is the double radial integral coupling two bound
orbitals through one Green's function component with spherical Bessel
weights:

    U = int int g_beta(r) j_L(k r) g^{TT~}(r, r') j_L~(k~ r') g_alpha(r') dr dr'

with g_beta/g_alpha one of P or Q of the respective orbital, selected by the
component labels.  This is the radial kernel of two-photon processes; all
angular algebra is out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .dirac import RadialOrbital
from .errors import DomainError
from .greens import GreensFunction
from .specfun import sph_bessel_j

__all__ = ["MatrixElementSpec", "radial_matrix_element"]

Component = Literal["L", "S"]


@dataclass(frozen=True)
class MatrixElementSpec:
    """Photon wave numbers, multipole ranks and component selectors."""

    k: float
    ktilde: float
    Lambda: int
    LambdaTilde: int
    Tbeta: Component = "L"
    T: Component = "L"
    Ttilde: Component = "L"
    Talpha: Component = "L"

    def __post_init__(self):
        if not (0 <= self.Lambda <= 20 and 0 <= self.LambdaTilde <= 20):
            raise DomainError("multipole ranks must lie in [0, 20]")
        for tag in (self.Tbeta, self.T, self.Ttilde, self.Talpha):
            if tag not in ("L", "S"):
                raise DomainError(f"component selector must be 'L' or 'S', got {tag}")
        if self.k < 0 or self.ktilde < 0:
            raise DomainError("wave numbers must be non-negative")


def _orbital_component(orb: RadialOrbital, tag: Component, mtp: int) -> np.ndarray:
    return (orb.P if tag == "L" else orb.Q)[:mtp]


def _gf_component(gf: GreensFunction, t: Component, ttilde: Component) -> np.ndarray:
    gLL, gLS, gSL, gSS = gf.tabulate()
    return {("L", "L"): gLL, ("L", "S"): gLS, ("S", "L"): gSL, ("S", "S"): gSS}[
        (t, ttilde)
    ]


def radial_matrix_element(
    orb_beta: RadialOrbital,
    gf: GreensFunction,
    orb_alpha: RadialOrbital,
    spec: MatrixElementSpec,
) -> float:
    """Nested trapezoidal quadrature of the double radial integral.

    Diagonal cells of the discontinuous components carry the stored two-sided
    average.
    """
    mtp = gf.mtp
    if len(orb_beta.P) < mtp or len(orb_alpha.P) < mtp:
        raise DomainError("orbitals are not tabulated on the Green's function grid")
    rs = gf.grid.r[:mtp]
    w = gf.grid.weights
    jbeta = np.array([sph_bessel_j(spec.Lambda, spec.k * r) for r in rs])
    jalpha = np.array([sph_bessel_j(spec.LambdaTilde, spec.ktilde * r) for r in rs])
    left = w * _orbital_component(orb_beta, spec.Tbeta, mtp) * jbeta
    right = w * _orbital_component(orb_alpha, spec.Talpha, mtp) * jalpha
    G = _gf_component(gf, spec.T, spec.Ttilde)
    return float(left @ G @ right)
