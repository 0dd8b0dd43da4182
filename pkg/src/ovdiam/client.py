"""Thin HTTP client for the service.

By default the client runs the FastAPI app in-process (no server or
network needed); pass a base URL to talk to a remote instance instead.
Either way the CLI goes through the same endpoint schemas.
"""

from __future__ import annotations

import warnings

import httpx


class ServiceClient:
    def __init__(self, base_url: str | None = None):
        if base_url:
            self._client = httpx.Client(base_url=base_url, timeout=600.0)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> tuple[int, dict]:
        response = self._client.post(path, json=payload)
        try:
            body = response.json()
        except ValueError:
            body = {"detail": response.text}
        return response.status_code, body

    def get(self, path: str) -> tuple[int, dict]:
        response = self._client.get(path)
        return response.status_code, response.json()

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "ServiceClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
