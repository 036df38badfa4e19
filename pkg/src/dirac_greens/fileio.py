"""On-disk formats, unit conversion and symmetry labels.

``.pot`` files tabulate the effective nuclear charge Z(r) = -r V(r):

    # POT
    <N>
    <r>  <Z(r)>          (N lines, r ascending from 0, atomic units)

``.rgf`` files carry tabulated radial Green's functions behind the ``# DCFGF``
signature:

    # DCFGF
    # <extension comments: grid provenance etc.>
    <interpolation_mode>                   (1 = linear)
    <count>
    <energy a.u.>  <kappa>  <mtp>          } repeated per function
    <r> <r'> <gLL> <gLS> <gSL> <gSS>       }   mtp^2 records, r-major

All numeric fields are written in scientific notation with 16 significant
digits; reading is the exact inverse.  Diagonal records of the discontinuous
components gLS/gSL hold the two-sided average.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from itertools import islice
from pathlib import Path

import numpy as np

from .constants import HARTREE_EV
from .errors import DomainError, FileFormatError
from .greens import GreensFunction
from .potential import ChargeSpec, CoulombCharge, TabulatedCharge, tabulated_charge

__all__ = [
    "RGF_SIGNATURE",
    "POT_SIGNATURE",
    "RgfFunction",
    "RgfFile",
    "RunRequest",
    "parse_symmetry",
    "symmetry_label",
    "convert_energy",
    "pot_text",
    "write_pot",
    "read_pot",
    "load_pot",
    "write_rgf",
    "read_rgf",
    "rgf_text",
]

RGF_SIGNATURE = "# DCFGF"
POT_SIGNATURE = "# POT"

_FMT = "%.15E"

_SYMMETRY_TO_KAPPA = {
    "s": -1,
    "p-": +1,
    "p": -2,
    "d-": +2,
    "d": -3,
    "f-": +3,
    "f": -4,
    "g-": +4,
    "g": -5,
}
_KAPPA_TO_SYMMETRY = {v: k for k, v in _SYMMETRY_TO_KAPPA.items()}


def parse_symmetry(label: str) -> int:
    """Spectroscopic symmetry label (s, p-, p, ..., g) to kappa."""
    key = label.strip()
    if key not in _SYMMETRY_TO_KAPPA:
        valid = ", ".join(_SYMMETRY_TO_KAPPA)
        raise DomainError(f"unknown symmetry label {label!r}; valid labels: {valid}")
    return _SYMMETRY_TO_KAPPA[key]


def symmetry_label(kappa: int) -> str:
    """Inverse of parse_symmetry for the supported kappa range."""
    if kappa not in _KAPPA_TO_SYMMETRY:
        raise DomainError(f"no symmetry label for kappa = {kappa}")
    return _KAPPA_TO_SYMMETRY[kappa]


def convert_energy(value: float, unit: str) -> float:
    """Energy to Hartree atomic units; accepted units: 'eV', 'Hartree'."""
    if unit == "eV":
        return value / HARTREE_EV
    if unit == "Hartree":
        return value
    raise DomainError(f"unsupported energy unit {unit!r}; use 'eV' or 'Hartree'")


# ----------------------------------------------------------------------------
# .pot
# ----------------------------------------------------------------------------


def pot_text(charge: ChargeSpec, r_max: float = 100.0) -> str:
    """A charge model as .pot payload; Coulomb becomes a two-point table."""
    if isinstance(charge, CoulombCharge):
        r = np.array([0.0, r_max])
        z = np.array([charge.zeff, charge.zeff])
    elif isinstance(charge, TabulatedCharge):
        r, z = charge.r, charge.z
    else:
        raise DomainError(f"unknown charge model {type(charge).__name__}")
    buf = io.StringIO()
    buf.write(POT_SIGNATURE + "\n")
    buf.write(f"{len(r)}\n")
    np.savetxt(buf, np.column_stack([r, z]), fmt=_FMT)
    return buf.getvalue()


def write_pot(path, charge: ChargeSpec, r_max: float = 100.0) -> None:
    """Write a charge model as a .pot table; Coulomb becomes two points."""
    with open(path, "w") as fh:
        fh.write(pot_text(charge, r_max=r_max))


def read_pot(path) -> TabulatedCharge:
    """Read a .pot table back into a validated charge model."""
    with open(path) as fh:
        first = fh.readline().rstrip("\n")
        if first != POT_SIGNATURE:
            raise FileFormatError(
                f"bad signature {first!r}, expected {POT_SIGNATURE!r}", line=1
            )
        count_line = fh.readline()
        try:
            count = int(count_line.strip())
        except ValueError:
            raise FileFormatError(
                f"expected point count, got {count_line.strip()!r}", line=2
            ) from None
        try:
            data = np.loadtxt(islice(fh, count), ndmin=2)
        except ValueError as exc:
            raise FileFormatError(f"malformed table: {exc}", line=3) from None
    if data.shape != (count, 2):
        raise FileFormatError(
            f"expected {count} 'r Z' rows, got shape {data.shape}", line=3
        )
    return tabulated_charge(data[:, 0], data[:, 1])


def load_pot(path) -> TabulatedCharge:
    """Alias for read_pot with charge validation (the potential-file loader)."""
    return read_pot(path)


# ----------------------------------------------------------------------------
# .rgf
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RgfFunction:
    energy: float
    kappa: int
    mtp: int
    r: np.ndarray  # (mtp,)
    gLL: np.ndarray  # (mtp, mtp), first index = r, second = r'
    gLS: np.ndarray
    gSL: np.ndarray
    gSS: np.ndarray


@dataclass(frozen=True)
class RgfFile:
    interpolation_mode: int
    functions: tuple[RgfFunction, ...] = field(default_factory=tuple)

    @property
    def count(self) -> int:
        return len(self.functions)


def _write_rgf_stream(fh, functions: list[GreensFunction]) -> None:
    first = functions[0]
    g = first.grid
    fh.write(RGF_SIGNATURE + "\n")
    # grid provenance comments are an extension; readers skip '#' lines
    fh.write(f"# grid rnt={g.rnt!r} h={g.h!r} n={g.n}\n")
    fh.write("# columns: r rp gLL gLS gSL gSS (diagonal of gLS/gSL averaged)\n")
    fh.write("1\n")
    fh.write(f"{len(functions)}\n")
    for gf in functions:
        mtp = gf.mtp
        fh.write((_FMT % gf.energy) + f" {gf.kappa} {mtp}\n")
        gLL, gLS, gSL, gSS = gf.tabulate()
        rr = gf.grid.r[:mtp]
        block = np.column_stack(
            [
                np.repeat(rr, mtp),
                np.tile(rr, mtp),
                gLL.ravel(),
                gLS.ravel(),
                gSL.ravel(),
                gSS.ravel(),
            ]
        )
        np.savetxt(fh, block, fmt=_FMT)


def write_rgf(path, functions: list[GreensFunction]) -> None:
    """Write tabulated Green's functions to a .rgf file."""
    if not functions:
        raise DomainError("need at least one Green's function to write")
    with open(path, "w") as fh:
        _write_rgf_stream(fh, functions)


def rgf_text(functions: list[GreensFunction]) -> str:
    """The .rgf payload as a string (service responses, tests)."""
    if not functions:
        raise DomainError("need at least one Green's function to write")
    buf = io.StringIO()
    _write_rgf_stream(buf, functions)
    return buf.getvalue()


def read_rgf(path) -> RgfFile:
    """Parse a .rgf file; exact inverse of write_rgf to the printed digits."""
    if isinstance(path, (str, Path)):
        fh = open(path)
        close = True
    else:
        fh = path
        close = False
    try:
        return _read_rgf_stream(fh)
    finally:
        if close:
            fh.close()


def _read_rgf_stream(fh) -> RgfFile:
    line = fh.readline().rstrip("\n")
    if line != RGF_SIGNATURE:
        raise FileFormatError(
            f"bad signature {line!r}, expected {RGF_SIGNATURE!r}", line=1
        )
    lineno = 1

    def next_content_line():
        nonlocal lineno
        while True:
            raw = fh.readline()
            lineno += 1
            if raw == "":
                raise FileFormatError("unexpected end of file", line=lineno)
            s = raw.strip()
            if s and not s.startswith("#"):
                return s

    try:
        mode = int(next_content_line())
    except ValueError:
        raise FileFormatError("expected integer interpolation mode", line=lineno)
    if mode != 1:
        raise FileFormatError(f"unsupported interpolation mode {mode}", line=lineno)
    try:
        count = int(next_content_line())
    except ValueError:
        raise FileFormatError("expected integer function count", line=lineno)
    functions = []
    for _ in range(count):
        header = next_content_line().split()
        if len(header) != 3:
            raise FileFormatError(
                f"expected 'energy kappa mtp' header, got {header}", line=lineno
            )
        try:
            energy = float(header[0])
            kappa = int(header[1])
            mtp = int(header[2])
        except ValueError:
            raise FileFormatError(f"malformed function header {header}", line=lineno)
        start = lineno
        try:
            data = np.loadtxt(islice(fh, mtp * mtp), ndmin=2)
        except ValueError as exc:
            raise FileFormatError(f"malformed record table: {exc}", line=start + 1)
        lineno += len(data)
        if data.shape != (mtp * mtp, 6):
            raise FileFormatError(
                f"expected {mtp * mtp} six-column records, got shape {data.shape}",
                line=start + 1,
            )
        r = data[: mtp * mtp : mtp, 0].copy()
        functions.append(
            RgfFunction(
                energy=energy,
                kappa=kappa,
                mtp=mtp,
                r=r,
                gLL=data[:, 2].reshape(mtp, mtp),
                gLS=data[:, 3].reshape(mtp, mtp),
                gSL=data[:, 4].reshape(mtp, mtp),
                gSS=data[:, 5].reshape(mtp, mtp),
            )
        )
    return RgfFile(interpolation_mode=mode, functions=tuple(functions))


# ----------------------------------------------------------------------------
# run request
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RunRequest:
    """A complete non-interactive generation request (the CLI's payload)."""

    potential: str  # "coulomb:<Z>" or "file:<path>"
    pairs: tuple[tuple[float, str], ...]  # (energy in `unit`, symmetry label)
    rnt: float = 2.177968408335618e-4
    h: float = 0.0625
    n: int = 390
    clight: float | None = None
    unit: str = "eV"
    check: bool = False
    check_tol: float = 1e-2
    out: str | None = None
    save_pot: str | None = None

    def __post_init__(self):
        if not self.pairs:
            raise DomainError("at least one (energy, symmetry) pair is required")
        for energy, label in self.pairs:
            parse_symmetry(label)
            if not convert_energy(energy, self.unit) < 0.0:
                raise DomainError(
                    f"energy {energy} {self.unit} is not in the bound region (E < 0)"
                )
