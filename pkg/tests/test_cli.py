"""CLI driver: argument handling, run orchestration, exit codes."""

import io
import re

import numpy as np
import pytest

from dirac_greens.cli import main, run, _parse_pairs, _request_from_args, _build_parser
from dirac_greens.client import ApiClient
from dirac_greens.fileio import RunRequest, read_pot, read_rgf, write_pot
from dirac_greens.potential import tabulated_charge

GRID_SMALL = "2.177968408335618e-4,0.0625,220"


@pytest.fixture(scope="module")
def local_client():
    with ApiClient.local() as c:
        yield c


def test_pair_parsing():
    assert _parse_pairs(["-10000:s", "-15000:d-"]) == (
        (-10000.0, "s"),
        (-15000.0, "d-"),
    )
    with pytest.raises(ValueError):
        _parse_pairs(["nocolon"])


def test_usage_error_without_potential():
    with pytest.raises(SystemExit) as exc:
        main(["--gf", "-1:s"])
    assert exc.value.code == 2


def test_usage_error_without_pairs():
    with pytest.raises(SystemExit) as exc:
        main(["--potential", "coulomb:1"])
    assert exc.value.code == 2


def test_unknown_symmetry_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["--potential", "coulomb:1", "--gf", "-1:zz"])
    assert exc.value.code == 2


def test_full_run_writes_outputs(tmp_path, local_client):
    out = tmp_path / "h.rgf"
    pot = tmp_path / "h.pot"
    request = RunRequest(
        potential="coulomb:1",
        pairs=((-0.6, "s"),),
        rnt=2.177968408335618e-4,
        h=0.0625,
        n=220,
        unit="Hartree",
        check=True,
        out=str(out),
        save_pot=str(pot),
    )
    buf = io.StringIO()
    status = run(request, local_client, out=buf)
    assert status == 0
    text = buf.getvalue()
    assert "1s" in text and "2s" in text
    rgf = read_rgf(out)
    assert rgf.count == 1 and rgf.functions[0].kappa == -1
    assert read_pot(pot).z_origin() == 1.0


def test_check_failure_sets_exit_code(tmp_path, local_client):
    request = RunRequest(
        potential="coulomb:1",
        pairs=((-0.6, "s"),),
        n=220,
        unit="Hartree",
        check=True,
        check_tol=1e-12,  # unreachable: forces a reported failure
    )
    buf = io.StringIO()
    assert run(request, local_client, out=buf) == 1
    assert "FAILED" in buf.getvalue()


def test_run_from_pot_file(tmp_path, local_client):
    r = np.linspace(0.0, 60.0, 200)
    z = np.full_like(r, 2.0)
    pot_path = tmp_path / "const.pot"
    write_pot(pot_path, tabulated_charge(r, z))
    request = RunRequest(
        potential=f"file:{pot_path}",
        pairs=((-1.9, "s"),),
        n=300,
        unit="Hartree",
        check=True,
    )
    buf = io.StringIO()
    assert run(request, local_client, out=buf) == 0
    assert "tabulated to r = 60" in buf.getvalue()


def test_main_end_to_end(tmp_path):
    out = tmp_path / "out.rgf"
    code = main(
        [
            "--potential",
            "coulomb:1",
            "--grid",
            GRID_SMALL,
            "--units",
            "Hartree",
            "--gf",
            "-0.6:s",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert out.exists()


def test_six_function_run_reports_twelve_rows(local_client, tmp_path):
    # a six-function request over four symmetries completes and reports two
    # orbital rows per function
    request = RunRequest(
        potential="coulomb:79",
        pairs=(
            (-1000.0, "s"),
            (-10000.0, "s"),
            (-15000.0, "p"),
            (-10000.0, "p-"),
            (-15000.0, "d-"),
            (-10000.0, "d"),
        ),
        n=300,
        unit="eV",
        check=True,
    )
    buf = io.StringIO()
    status = run(request, local_client, out=buf)
    text = buf.getvalue()
    assert status == 0
    rows = [
        ln
        for ln in text.splitlines()
        if re.match(r"^\s*\d+\s+-\d\.\d+E[+-]\d+\s+\d[a-z]-?\s+\d\.\d+E", ln)
    ]
    assert len(rows) == 12
    labels = [ln.split()[2] for ln in rows]
    assert labels == [
        "1s", "2s", "1s", "2s", "2p", "3p", "2p-", "3p-", "3d-", "4d-", "3d", "4d",
    ]


def test_example_run_structure(local_client, tmp_path):
    # two functions; the report lists the two lowest shells per symmetry:
    # 1s, 2s for the s-wave and 3d-, 4d- for the d- wave
    out = tmp_path / "two.rgf"
    request = RunRequest(
        potential="coulomb:79",
        pairs=((-10000.0, "s"), (-15000.0, "d-")),
        n=300,
        unit="eV",
        check=True,
        out=str(out),
    )
    buf = io.StringIO()
    status = run(request, local_client, out=buf)
    text = buf.getvalue()
    assert status == 0
    for label in ("1s", "2s", "3d-", "4d-"):
        assert label in text
    assert "100%" in text
    rgf = read_rgf(out)
    assert rgf.count == 2
    assert [f.kappa for f in rgf.functions] == [-1, 2]
