"""HTTP client for the service; the CLI drives everything through this.

``ApiClient.local()`` runs the FastAPI application in-process (no server
needed), ``ApiClient.remote(url)`` talks to a running instance over HTTP.
Both expose the same thin wrappers around the documented endpoints.
"""

from __future__ import annotations

from typing import Any

import httpx

__all__ = ["ApiClient", "ServiceError"]


class ServiceError(RuntimeError):
    """Non-2xx response from the service, with the reported detail."""

    def __init__(self, status_code: int, detail: str):
        super().__init__(f"service returned {status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


class ApiClient:
    def __init__(self, http: httpx.Client):
        self._http = http

    @classmethod
    def local(cls) -> "ApiClient":
        from fastapi.testclient import TestClient

        from .service.app import create_app

        return cls(TestClient(create_app()))

    @classmethod
    def remote(cls, base_url: str, timeout: float = 600.0) -> "ApiClient":
        return cls(httpx.Client(base_url=base_url, timeout=timeout))

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "ApiClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- plumbing -------------------------------------------------------------

    def _unwrap(self, resp: httpx.Response) -> Any:
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except Exception:
                detail = resp.text
            raise ServiceError(resp.status_code, str(detail))
        ctype = resp.headers.get("content-type", "")
        if ctype.startswith("application/json"):
            return resp.json()
        return resp.text

    def _get(self, path: str, **params) -> Any:
        return self._unwrap(self._http.get(path, params=params or None))

    def _post(self, path: str, payload: dict | None = None) -> Any:
        return self._unwrap(self._http.post(path, json=payload))

    # -- endpoints ------------------------------------------------------------

    def health(self) -> dict:
        return self._get("/health")

    def create_coulomb_potential(self, zeff: float) -> dict:
        return self._post("/potentials", {"model": "coulomb", "zeff": zeff})

    def create_tabulated_potential(self, r, z) -> dict:
        return self._post(
            "/potentials", {"model": "tabulated", "r": list(r), "z": list(z)}
        )

    def potential_info(self, pid: str) -> dict:
        return self._get(f"/potentials/{pid}")

    def potential_pot_text(self, pid: str) -> str:
        return self._get(f"/potentials/{pid}/pot")

    def build_greens(
        self,
        potential_id: str,
        energy: float,
        symmetry: str,
        unit: str = "eV",
        grid: dict | None = None,
        clight: float | None = None,
    ) -> dict:
        payload: dict = {
            "potential_id": potential_id,
            "energy": energy,
            "unit": unit,
            "symmetry": symmetry,
        }
        if grid is not None:
            payload["grid"] = grid
        if clight is not None:
            payload["clight"] = clight
        return self._post("/greens", payload)

    def greens_info(self, gid: str) -> dict:
        return self._get(f"/greens/{gid}")

    def components(self, gid: str, r: float, rp: float) -> dict:
        return self._get(f"/greens/{gid}/components", r=r, rp=rp)

    def check(self, gid: str) -> dict:
        return self._post(f"/greens/{gid}/check")

    def solve_orbital(
        self,
        potential_id: str,
        n: int,
        symmetry: str,
        grid: dict | None = None,
        clight: float | None = None,
    ) -> dict:
        payload: dict = {"potential_id": potential_id, "n": n, "symmetry": symmetry}
        if grid is not None:
            payload["grid"] = grid
        if clight is not None:
            payload["clight"] = clight
        return self._post("/orbitals/solve", payload)

    def matrix_element(self, gid: str, payload: dict) -> dict:
        return self._post(f"/greens/{gid}/matrix-element", payload)

    def rgf_text(self, greens_ids: list[str]) -> str:
        return self._post("/rgf", {"greens_ids": greens_ids})
