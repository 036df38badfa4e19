"""Physical constants in Hartree atomic units."""

from __future__ import annotations

from dataclasses import dataclass, field

#: CODATA-86 value used throughout atomic-structure codes of this family.
SPEED_OF_LIGHT_AU = 137.0359895

#: Hartree energy in electron volts, for energy unit conversion.
HARTREE_EV = 27.2113961


@dataclass(frozen=True)
class PhysicalConstants:
    """Speed of light c (a.u.) and the fine-structure constant alpha = 1/c."""

    c: float = SPEED_OF_LIGHT_AU
    alpha: float = field(init=False)

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"speed of light must be positive, got {self.c}")
        object.__setattr__(self, "alpha", 1.0 / self.c)


DEFAULT_CONSTANTS = PhysicalConstants()
