"""Thin client for the HTTP service.

With no server URL the client mounts the ASGI app in-process, so the CLI
works without a running server while still exercising the exact wire
formats; pass a base URL to talk to a remote instance.
"""

from __future__ import annotations

import httpx


class ServiceClient:
    def __init__(self, server: str | None = None, timeout: float = 600.0):
        if server:
            self._client = httpx.Client(base_url=server.rstrip("/"), timeout=timeout)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from starlette.testclient import TestClient

            from .service import create_app

            # the starlette sync bridge runs the ASGI app in-process
            self._client = TestClient(create_app(), base_url="http://diskdyn.local")

    def post(self, path: str, payload: dict) -> tuple[int, dict]:
        resp = self._client.post(path, json=payload)
        try:
            body = resp.json()
        except ValueError:
            body = {"error": "BadResponse", "detail": resp.text}
        return resp.status_code, body

    def get(self, path: str) -> tuple[int, dict]:
        resp = self._client.get(path)
        return resp.status_code, resp.json()

    def close(self) -> None:
        self._client.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
