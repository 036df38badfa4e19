"""Effective nuclear charge models and their piecewise-linear reduction.

The central-field potential is V(r) = -Z(r)/r.  Z(r) is either a constant
(pure Coulomb) or a tabulated function read from a ``.pot`` file; in both
cases the construction works with the straight-line interval model
Z_i(r) = z0[i] + z1[i] r through the node values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT_AU, PhysicalConstants
from .errors import DomainError, PotentialLoadError
from .grid import RadialGrid

__all__ = [
    "ChargeSpec",
    "CoulombCharge",
    "TabulatedCharge",
    "PiecewiseCharge",
    "ValidationReport",
    "coulomb_charge",
    "tabulated_charge",
    "linearize",
    "validate_for_energy",
]


class ChargeSpec:
    """Base class for effective nuclear charge models."""

    def z_origin(self) -> float:
        raise NotImplementedError

    def z_tail(self) -> float:
        raise NotImplementedError

    def r_last(self) -> float | None:
        """Last tabulated radius, or None for analytically defined charges."""
        raise NotImplementedError


@dataclass(frozen=True)
class CoulombCharge(ChargeSpec):
    zeff: float

    def z_origin(self) -> float:
        return self.zeff

    def z_tail(self) -> float:
        return self.zeff

    def r_last(self) -> None:
        return None


@dataclass(frozen=True)
class TabulatedCharge(ChargeSpec):
    r: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        self.r.setflags(write=False)
        self.z.setflags(write=False)

    def z_origin(self) -> float:
        return float(self.z[0])

    def z_tail(self) -> float:
        return float(self.z[-1])

    def r_last(self) -> float:
        return float(self.r[-1])


def coulomb_charge(zeff: float) -> CoulombCharge:
    """Constant charge Z(r) = zeff; zeff < c keeps s real for |kappa| = 1."""
    if not (0.0 < zeff < SPEED_OF_LIGHT_AU):
        raise DomainError(
            f"zeff must lie in (0, {SPEED_OF_LIGHT_AU}) so that alpha*Z < 1, got {zeff}"
        )
    return CoulombCharge(float(zeff))


def tabulated_charge(r, z) -> TabulatedCharge:
    """Tabulated charge with point-nucleus boundary behaviour enforced."""
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=float)
    if r.ndim != 1 or r.shape != z.shape or r.size < 2:
        raise PotentialLoadError("need matching 1-d r and z arrays with >= 2 points")
    if r[0] != 0.0:
        raise PotentialLoadError(f"radial table must start at r = 0, got {r[0]}")
    if not np.all(np.diff(r) > 0):
        raise PotentialLoadError("radial table must be strictly increasing")
    if not z[0] > 0.0:
        raise PotentialLoadError(
            f"Z(0) = {z[0]}: point nucleus requires a positive charge at the origin"
        )
    if z[-1] < 0.0:
        raise PotentialLoadError(
            f"Z(r_max) = {z[-1]}: tail charge Z_nuc - N_electrons must be >= 0"
        )
    return TabulatedCharge(r, z)


@dataclass(frozen=True)
class PiecewiseCharge:
    """Straight-line charge z0[i] + z1[i] r on each grid interval [r_i, r_i+1].

    Arrays have length mtp - 1; interval i spans grid nodes i and i+1
    (0-based).  Continuity at shared nodes holds by construction since the
    lines are chords through the node values.
    """

    z0: np.ndarray
    z1: np.ndarray
    grid: RadialGrid

    def __post_init__(self):
        self.z0.setflags(write=False)
        self.z1.setflags(write=False)

    @property
    def n_intervals(self) -> int:
        return len(self.z0)

    def charge_at(self, r: float) -> float:
        """Z(r) from the interval model (clamped to the covered range)."""
        rs = self.grid.r[: self.grid.mtp]
        i = int(np.searchsorted(rs, r, side="right")) - 1
        i = min(max(i, 0), self.n_intervals - 1)
        return float(self.z0[i] + self.z1[i] * r)

    def is_constant(self) -> bool:
        return bool(np.all(self.z1 == 0.0) and np.all(self.z0 == self.z0[0]))


def linearize(charge: ChargeSpec, grid: RadialGrid) -> PiecewiseCharge:
    """Reduce a charge model to chords through the grid-node values."""
    rs = grid.r[: grid.mtp]
    if isinstance(charge, CoulombCharge):
        n = grid.mtp - 1
        return PiecewiseCharge(
            z0=np.full(n, charge.zeff), z1=np.zeros(n), grid=grid
        )
    if isinstance(charge, TabulatedCharge):
        if charge.r[-1] < rs[-1]:
            raise DomainError(
                f"charge table ends at r = {charge.r[-1]:.6g} but the grid "
                f"tabulates to r = {rs[-1]:.6g}; truncate the grid first"
            )
        zn = np.interp(rs, charge.r, charge.z)
        z1 = np.diff(zn) / np.diff(rs)
        z0 = zn[:-1] - z1 * rs[:-1]
        return PiecewiseCharge(z0=z0, z1=z1, grid=grid)
    raise DomainError(f"unknown charge model {type(charge).__name__}")


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the per-interval energy restrictions."""

    ok: bool
    violations: tuple[tuple[int, str], ...]

    def message(self) -> str:
        if self.ok:
            return "all intervals admissible"
        head = "; ".join(f"interval {i}: {m}" for i, m in self.violations[:5])
        more = len(self.violations) - 5
        return head + (f"; ... {more} more" if more > 0 else "")


def validate_for_energy(
    pw: PiecewiseCharge, E: float, consts: PhysicalConstants | None = None
) -> ValidationReport:
    """Check the slope bound z1 < |E| and the q-reality window on every interval.

    The kappa-dependent condition alpha*|z0| < |kappa| is checked later,
    where kappa is known.
    """
    consts = consts or PhysicalConstants()
    if not E < 0.0:
        raise DomainError(f"bound-region construction requires E < 0, got {E}")
    two_c2 = 2.0 * consts.c**2
    violations: list[tuple[int, str]] = []
    for i in range(pw.n_intervals):
        z1 = pw.z1[i]
        if not z1 < -E:
            violations.append(
                (i, f"charge slope {z1:.6g} >= |E| = {-E:.6g}")
            )
        shifted = E + z1
        if not (-two_c2 < shifted < 0.0):
            violations.append(
                (i, f"E + z1 = {shifted:.6g} outside (-2c^2, 0): q would be complex")
            )
    return ValidationReport(ok=not violations, violations=tuple(violations))
