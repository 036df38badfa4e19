"""Command-line driver.

A thin client of the HTTP service: by default the service runs in-process,
with ``--server`` the same requests go to a remote instance.  ``--serve``
starts the service under uvicorn instead of running a generation request.

Examples:

    dirac-greens --potential coulomb:79 --units eV \\
        --gf -10000:s --gf -15000:d- --check --out z79.rgf

    dirac-greens --potential file:gold.pot --grid 2.177968408335618e-4,0.0625,390 \\
        --gf -0.5:s --units Hartree --out gold.rgf

    dirac-greens --serve --port 8000
"""

from __future__ import annotations

import argparse
import sys

from .client import ApiClient, ServiceError
from .errors import GreensError
from .fileio import RunRequest, read_pot

__all__ = ["main", "run"]


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dirac-greens",
        description=(
            "Generate relativistic central-field radial Green's functions of "
            "the Dirac equation at bound energies E < 0."
        ),
    )
    p.add_argument(
        "--potential",
        help="potential source: 'coulomb:<Z>' or 'file:<path.pot>'",
    )
    p.add_argument(
        "--grid",
        default=None,
        help="radial grid as '<rnt>,<h>,<n>' (default 2.177968408335618e-4,0.0625,390)",
    )
    p.add_argument("--clight", type=float, default=None, help="speed of light (a.u.)")
    p.add_argument(
        "--units", choices=("eV", "Hartree"), default="eV", help="energy unit"
    )
    p.add_argument(
        "--gf",
        action="append",
        default=[],
        metavar="E:SYM",
        help="energy and symmetry of one function, e.g. '-10000:s' (repeatable)",
    )
    p.add_argument(
        "--check",
        action="store_true",
        help="verify each function against the independent bound-state solver",
    )
    p.add_argument(
        "--check-tol",
        type=float,
        default=1e-2,
        help="allowed |overlap - 1| when --check is given",
    )
    p.add_argument("--out", default=None, help="output .rgf path")
    p.add_argument("--save-pot", default=None, help="also save the potential here")
    p.add_argument("--server", default=None, help="remote service URL (default: in-process)")
    p.add_argument("--serve", action="store_true", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1", help="bind address for --serve")
    p.add_argument("--port", type=int, default=8000, help="port for --serve")
    return p


def _parse_grid(text: str | None) -> tuple[float, float, int]:
    if text is None:
        return 2.177968408335618e-4, 0.0625, 390
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"--grid expects '<rnt>,<h>,<n>', got {text!r}")
    return float(parts[0]), float(parts[1]), int(parts[2])


def _parse_pairs(specs: list[str]) -> tuple[tuple[float, str], ...]:
    pairs = []
    for spec in specs:
        if ":" not in spec:
            raise ValueError(f"--gf expects '<energy>:<symmetry>', got {spec!r}")
        energy, _, label = spec.rpartition(":")
        pairs.append((float(energy), label.strip()))
    return tuple(pairs)


def _request_from_args(args) -> RunRequest:
    rnt, h, n = _parse_grid(args.grid)
    return RunRequest(
        potential=args.potential,
        pairs=_parse_pairs(args.gf),
        rnt=rnt,
        h=h,
        n=n,
        clight=args.clight,
        unit=args.units,
        check=args.check,
        check_tol=args.check_tol,
        out=args.out,
        save_pot=args.save_pot,
    )


def run(request: RunRequest, client: ApiClient, out=sys.stdout) -> int:
    """Execute a generation request through the service; returns exit status."""
    kind, _, value = request.potential.partition(":")
    if kind == "coulomb":
        pot = client.create_coulomb_potential(float(value))
    elif kind == "file":
        charge = read_pot(value)
        pot = client.create_tabulated_potential(charge.r.tolist(), charge.z.tolist())
    else:
        raise ValueError(
            f"potential must be 'coulomb:<Z>' or 'file:<path>', got {request.potential!r}"
        )
    print(
        f"potential: Z(0) = {pot['z_origin']:.4g}, Z(tail) = {pot['z_tail']:.4g}"
        + (f", tabulated to r = {pot['r_last']:.4g} a.u." if pot["r_last"] else ""),
        file=out,
    )
    if request.save_pot:
        with open(request.save_pot, "w") as fh:
            fh.write(client.potential_pot_text(pot["id"]))
        print(f"potential written to {request.save_pot}", file=out)

    grid = {"rnt": request.rnt, "h": request.h, "n": request.n}
    total = len(request.pairs)
    print("\nGenerating radial Green's functions", file=out)
    print(f"   i   E ({request.unit:>7s})    sym   progress", file=out)
    ids = []
    for i, (energy, label) in enumerate(request.pairs, start=1):
        info = client.build_greens(
            pot["id"], energy, label, unit=request.unit, grid=grid,
            clight=request.clight,
        )
        ids.append(info["id"])
        print(
            f"  {i:2d}   {energy:14.7E}   {label:<3s}   {100 * i // total:3d}%",
            file=out,
        )

    ok = True
    if request.check:
        print(
            "\nAccuracy of the generated functions "
            "(overlap and normalization integrals):",
            file=out,
        )
        print(
            f"   i   E ({request.unit:>7s})    nj     overlap        normalization",
            file=out,
        )
        for i, gid in enumerate(ids, start=1):
            report = client.check(gid)
            energy = request.pairs[i - 1][0]
            for row in report["rows"]:
                print(
                    f"  {i:2d}   {energy:14.7E}   {row['label']:<5s}"
                    f"  {row['overlap']:.6E}   {row['normalization']:.6E}",
                    file=out,
                )
                if abs(row["overlap"] - 1.0) > request.check_tol:
                    ok = False

    if request.out:
        text = client.rgf_text(ids)
        with open(request.out, "w") as fh:
            fh.write(text)
        print(
            f"\nwrote {len(ids)} radial Green's function(s), "
            f"{len(text.encode())} bytes, to {request.out}",
            file=out,
        )
    if not ok:
        print("accuracy check FAILED (overlap deviation above tolerance)", file=out)
    return 0 if ok else 1


def _merge_negative_values(argv: list[str]) -> list[str]:
    """Join '--gf -10000:s' into '--gf=-10000:s' so argparse accepts it."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--gf" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--gf={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _merge_negative_values(sys.argv[1:] if argv is None else list(argv))
    args = _build_parser().parse_args(argv)
    if args.serve:
        import uvicorn

        uvicorn.run(
            "dirac_greens.service.app:app", host=args.host, port=args.port
        )
        return 0
    if not args.potential or not args.gf:
        _build_parser().error("--potential and at least one --gf are required")
    try:
        request = _request_from_args(args)
    except (ValueError, GreensError) as exc:
        _build_parser().error(str(exc))
    client = ApiClient.remote(args.server) if args.server else ApiClient.local()
    try:
        with client:
            return run(request, client)
    except (ServiceError, GreensError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
