"""HTTP service endpoints, driven in-process."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from dirac_greens.service.app import create_app

GRID_SMALL = {"rnt": 2.177968408335618e-4, "h": 0.0625, "n": 220}


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


@pytest.fixture(scope="module")
def coulomb_pid(client):
    resp = client.post("/potentials", json={"model": "coulomb", "zeff": 1.0})
    assert resp.status_code == 200
    return resp.json()["id"]


@pytest.fixture(scope="module")
def hydrogen_gid(client, coulomb_pid):
    resp = client.post(
        "/greens",
        json={
            "potential_id": coulomb_pid,
            "energy": -0.6,
            "unit": "Hartree",
            "symmetry": "s",
            "grid": GRID_SMALL,
        },
    )
    assert resp.status_code == 200, resp.text
    return resp.json()["id"]


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_potential_info(client, coulomb_pid):
    body = client.get(f"/potentials/{coulomb_pid}").json()
    assert body["model"] == "coulomb"
    assert body["z_origin"] == 1.0
    assert body["r_last"] is None


def test_potential_pot_file(client, coulomb_pid):
    text = client.get(f"/potentials/{coulomb_pid}/pot").text
    assert text.startswith("# POT\n2\n")


def test_tabulated_potential_roundtrip(client):
    r = list(np.linspace(0.0, 8.0, 30))
    z = list(10.0 * np.exp(-np.linspace(0.0, 8.0, 30)) + 1.0)
    resp = client.post("/potentials", json={"model": "tabulated", "r": r, "z": z})
    assert resp.status_code == 200
    body = resp.json()
    assert body["model"] == "tabulated"
    assert body["r_last"] == pytest.approx(8.0)


def test_greens_info(client, hydrogen_gid):
    body = client.get(f"/greens/{hydrogen_gid}").json()
    assert body["kappa"] == -1
    assert body["symmetry"] == "s"
    assert body["energy_au"] == -0.6
    assert body["mtp"] == 220
    assert body["wronskian_rel_spread"] <= 1e-6


def test_components_symmetry(client, hydrogen_gid):
    a = client.get(
        f"/greens/{hydrogen_gid}/components", params={"r": 0.5, "rp": 1.5}
    ).json()
    b = client.get(
        f"/greens/{hydrogen_gid}/components", params={"r": 1.5, "rp": 0.5}
    ).json()
    assert a["gll"] == b["gll"]
    assert a["gls"] == b["gsl"]


def test_check_rows(client, hydrogen_gid):
    body = client.post(f"/greens/{hydrogen_gid}/check").json()
    labels = [row["label"] for row in body["rows"]]
    assert labels == ["1s", "2s"]
    for row in body["rows"]:
        assert abs(row["overlap"] - 1.0) <= 1e-2
    assert body["jump_max_rel_dev"] <= 1e-2


def test_matrix_element(client, hydrogen_gid):
    body = client.post(
        f"/greens/{hydrogen_gid}/matrix-element",
        json={
            "beta": {"n": 1, "symmetry": "s"},
            "alpha": {"n": 1, "symmetry": "s"},
            "k": 0.0,
            "ktilde": 0.0,
            "lam": 0,
            "lam_tilde": 0,
        },
    ).json()
    assert np.isfinite(body["value"])
    assert body["value"] != 0.0


def test_rgf_payload(client, hydrogen_gid):
    text = client.post("/rgf", json={"greens_ids": [hydrogen_gid]}).text
    assert text.splitlines()[0] == "# DCFGF"
    assert f" -1 220" in text.splitlines()[5]


def test_unknown_ids(client):
    assert client.get("/potentials/nope").status_code == 404
    assert client.get("/greens/nope").status_code == 404
    assert client.post("/rgf", json={"greens_ids": ["nope"]}).status_code == 404


def test_domain_error_maps_to_400(client):
    resp = client.post("/potentials", json={"model": "coulomb", "zeff": 200.0})
    assert resp.status_code == 400
    assert "DomainError" in resp.json()["detail"]


def test_near_pole_maps_to_400(client, coulomb_pid):
    resp = client.post(
        "/greens",
        json={
            "potential_id": coulomb_pid,
            "energy": -0.50000665659,  # essentially the 1s eigenvalue
            "unit": "Hartree",
            "symmetry": "s",
            "grid": GRID_SMALL,
        },
    )
    assert resp.status_code == 400
    assert "NearPole" in resp.json()["detail"]


def test_symmetry_xor_kappa(client, coulomb_pid):
    resp = client.post(
        "/greens",
        json={
            "potential_id": coulomb_pid,
            "energy": -0.6,
            "unit": "Hartree",
            "symmetry": "s",
            "kappa": -1,
            "grid": GRID_SMALL,
        },
    )
    assert resp.status_code == 422


def test_grid_truncation_to_potential_range(client):
    r = list(np.linspace(0.0, 5.0, 40))
    z = [79.0 * np.exp(-rr) + 1.0 for rr in np.linspace(0.0, 5.0, 40)]
    pid = client.post(
        "/potentials", json={"model": "tabulated", "r": r, "z": z}
    ).json()["id"]
    body = client.post(
        "/greens",
        json={
            "potential_id": pid,
            "energy": -10000.0,
            "unit": "eV",
            "symmetry": "s",
            "grid": {"rnt": 2.177968408335618e-4, "h": 0.0625, "n": 390},
        },
    ).json()
    assert body["mtp"] < 390
    assert body["r_max"] <= 5.0
