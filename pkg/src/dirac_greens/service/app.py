"""FastAPI application wrapping the Green's function pipeline.

Built Green's functions and solved orbitals are kept in an in-memory store
keyed by id so that evaluation, verification, matrix-element and export
requests can reuse them; computation runs synchronously in the request.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from .. import __version__
from ..constants import PhysicalConstants
from ..dirac import RadialOrbital, orbital_l, solve_bound
from ..errors import GreensError
from ..fileio import (
    convert_energy,
    parse_symmetry,
    pot_text,
    rgf_text,
    symmetry_label,
)
from ..grid import RadialGrid, build_grid
from ..greens import GreensFunction, build_greens
from ..matel import MatrixElementSpec, radial_matrix_element
from ..potential import (
    ChargeSpec,
    CoulombCharge,
    PiecewiseCharge,
    coulomb_charge,
    linearize,
    tabulated_charge,
)
from ..verify import check_greens_function
from . import models

__all__ = ["create_app", "app"]


@dataclass
class _BuiltGreens:
    gf: GreensFunction
    potential_id: str
    orbitals: dict[tuple[int, int], RadialOrbital] = field(default_factory=dict)


class _Store:
    def __init__(self):
        self.lock = threading.Lock()
        self.potentials: dict[str, ChargeSpec] = {}
        self.greens: dict[str, _BuiltGreens] = {}

    def new_id(self) -> str:
        return uuid.uuid4().hex[:12]


def _resolve_kappa(symmetry: str | None, kappa: int | None) -> int:
    if (symmetry is None) == (kappa is None):
        raise HTTPException(422, "specify exactly one of 'symmetry' or 'kappa'")
    if symmetry is not None:
        return parse_symmetry(symmetry)
    return int(kappa)


def _make_grid(spec: models.GridSpec, charge: ChargeSpec) -> RadialGrid:
    grid = build_grid(spec.rnt, spec.h, spec.n)
    r_last = charge.r_last()
    if r_last is not None and r_last < grid.r[grid.n - 1]:
        grid = grid.truncated_to(r_last)
    return grid


def _orbital_for(
    entry: _BuiltGreens, pw: PiecewiseCharge, kappa: int, n: int, consts
) -> RadialOrbital:
    key = (kappa, n)
    orb = entry.orbitals.get(key)
    if orb is None:
        orb = solve_bound(pw, kappa, n, consts)
        entry.orbitals[key] = orb
    return orb


def create_app() -> FastAPI:
    api = FastAPI(
        title="dirac-greens",
        version=__version__,
        description=(
            "Relativistic central-field radial Green's functions of the Dirac "
            "equation at bound energies E < 0, with verification against an "
            "independent bound-state solver."
        ),
    )
    store = _Store()

    @api.exception_handler(GreensError)
    async def _greens_error(_, exc: GreensError):
        from fastapi.responses import JSONResponse

        return JSONResponse(
            status_code=400, content={"detail": f"{type(exc).__name__}: {exc}"}
        )

    @api.get("/health", response_model=models.HealthResponse)
    def health():
        return models.HealthResponse(status="ok", version=__version__)

    @api.post("/potentials", response_model=models.PotentialInfo)
    def create_potential(req: models.PotentialCreate):
        if req.model == "coulomb":
            if req.zeff is None:
                raise HTTPException(422, "coulomb potential requires 'zeff'")
            charge = coulomb_charge(req.zeff)
        else:
            if req.r is None or req.z is None:
                raise HTTPException(422, "tabulated potential requires 'r' and 'z'")
            charge = tabulated_charge(req.r, req.z)
        pid = store.new_id()
        with store.lock:
            store.potentials[pid] = charge
        return _potential_info(pid, charge)

    def _potential_info(pid: str, charge: ChargeSpec) -> models.PotentialInfo:
        return models.PotentialInfo(
            id=pid,
            model="coulomb" if isinstance(charge, CoulombCharge) else "tabulated",
            z_origin=charge.z_origin(),
            z_tail=charge.z_tail(),
            r_last=charge.r_last(),
        )

    def _get_potential(pid: str) -> ChargeSpec:
        charge = store.potentials.get(pid)
        if charge is None:
            raise HTTPException(404, f"unknown potential id {pid!r}")
        return charge

    def _get_greens(gid: str) -> _BuiltGreens:
        entry = store.greens.get(gid)
        if entry is None:
            raise HTTPException(404, f"unknown Green's function id {gid!r}")
        return entry

    @api.get("/potentials/{pid}", response_model=models.PotentialInfo)
    def potential_info(pid: str):
        return _potential_info(pid, _get_potential(pid))

    @api.get("/potentials/{pid}/pot", response_class=PlainTextResponse)
    def potential_pot_file(pid: str):
        return pot_text(_get_potential(pid))

    @api.post("/greens", response_model=models.GreensInfo)
    def build(req: models.GreensBuildRequest):
        charge = _get_potential(req.potential_id)
        kappa = _resolve_kappa(req.symmetry, req.kappa)
        consts = PhysicalConstants(c=req.clight)
        grid = _make_grid(req.grid, charge)
        pw = linearize(charge, grid)
        E = convert_energy(req.energy, req.unit)
        gf = build_greens(E, kappa, pw, consts=consts)
        gid = store.new_id()
        with store.lock:
            store.greens[gid] = _BuiltGreens(gf=gf, potential_id=req.potential_id)
        return _greens_info(gid, store.greens[gid])

    def _greens_info(gid: str, entry: _BuiltGreens) -> models.GreensInfo:
        gf = entry.gf
        return models.GreensInfo(
            id=gid,
            potential_id=entry.potential_id,
            energy_au=gf.energy,
            kappa=gf.kappa,
            symmetry=symmetry_label(gf.kappa),
            mtp=gf.mtp,
            r_max=float(gf.grid.r[gf.mtp - 1]),
            wronskian_rel_spread=gf.wronskian_rel_spread,
        )

    @api.get("/greens/{gid}", response_model=models.GreensInfo)
    def greens_info(gid: str):
        return _greens_info(gid, _get_greens(gid))

    @api.get("/greens/{gid}/components", response_model=models.ComponentsResponse)
    def components(gid: str, r: float, rp: float):
        gf = _get_greens(gid).gf
        gll, gls, gsl, gss = gf.eval_components(r, rp)
        return models.ComponentsResponse(r=r, rp=rp, gll=gll, gls=gls, gsl=gsl, gss=gss)

    @api.post("/greens/{gid}/check", response_model=models.CheckResponse)
    def check(gid: str):
        entry = _get_greens(gid)
        gf = entry.gf
        kappa = gf.kappa
        n0 = orbital_l(kappa) + 1
        orbitals = [
            _orbital_for(entry, gf.pw, kappa, nn, gf.consts)
            for nn in (n0, n0 + 1)
        ]
        report = check_greens_function(gf, orbitals)
        rows = [
            models.OrbitalCheckRow(
                n=row.n,
                kappa=row.kappa,
                label=f"{row.n}{symmetry_label(row.kappa)}",
                overlap=row.overlap,
                normalization=row.normalization,
            )
            for row in report.orbitals
        ]
        return models.CheckResponse(
            greens_id=gid,
            rows=rows,
            jump_max_rel_dev=report.jump_max_rel_dev,
            wronskian_rel_spread=report.wronskian_rel_spread,
        )

    @api.post("/orbitals/solve", response_model=models.OrbitalInfo)
    def orbital_solve(req: models.OrbitalSolveRequest):
        charge = _get_potential(req.potential_id)
        kappa = _resolve_kappa(req.symmetry, req.kappa)
        consts = PhysicalConstants(c=req.clight)
        grid = _make_grid(req.grid, charge)
        pw = linearize(charge, grid)
        orb = solve_bound(pw, kappa, req.n, consts)
        return models.OrbitalInfo(
            n=orb.n,
            kappa=orb.kappa,
            symmetry=symmetry_label(orb.kappa),
            energy_au=orb.energy,
            nodes=orb.nodes,
        )

    @api.post("/greens/{gid}/matrix-element", response_model=models.MatrixElementResponse)
    def matrix_element(gid: str, req: models.MatrixElementRequest):
        entry = _get_greens(gid)
        gf = entry.gf
        kb = _resolve_kappa(req.beta.symmetry, req.beta.kappa)
        ka = _resolve_kappa(req.alpha.symmetry, req.alpha.kappa)
        orb_b = _orbital_for(entry, gf.pw, kb, req.beta.n, gf.consts)
        orb_a = _orbital_for(entry, gf.pw, ka, req.alpha.n, gf.consts)
        spec = MatrixElementSpec(
            k=req.k,
            ktilde=req.ktilde,
            Lambda=req.lam,
            LambdaTilde=req.lam_tilde,
            Tbeta=req.tbeta,
            T=req.t,
            Ttilde=req.ttilde,
            Talpha=req.talpha,
        )
        return models.MatrixElementResponse(
            value=radial_matrix_element(orb_b, gf, orb_a, spec)
        )

    @api.post("/rgf", response_class=PlainTextResponse)
    def rgf(req: models.RgfRequest):
        entries = [_get_greens(gid) for gid in req.greens_ids]
        return rgf_text([e.gf for e in entries])

    return api


app = create_app()
