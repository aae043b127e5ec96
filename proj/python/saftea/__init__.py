"""Python interface to the saftea techno-economic engine for sustainable aviation fuel.

All results are plain dicts decoded from the same JSON the HTTP service returns.
"""

from __future__ import annotations

import json
from typing import Any, Mapping, Sequence

from . import _core
from ._core import BundleError

__version__ = _core.__version__

__all__ = [
    "ApiError",
    "BundleError",
    "Engine",
    "bundle",
    "demand",
    "evaluate",
    "history",
    "reproduce",
    "run_cli",
    "sweep",
]


class ApiError(ValueError):
    """A rejected request. Carries the HTTP-equivalent status, error code and field."""

    def __init__(self, status: int, code: str, message: str, field: str | None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.field = field


class Engine:
    """Evaluations against one immutable dataset bundle (the embedded one by default)."""

    def __init__(self, bundle_dir: str | None = None):
        self._service = _core.Service(bundle_dir)

    @property
    def etag(self) -> str:
        return self._service.etag

    def _call(self, method: str, path: str, body: Mapping[str, Any] | None = None,
              query: Mapping[str, str] | None = None) -> Any:
        status, text = self._service.handle(method, path, dict(query or {}),
                                            json.dumps(body) if body is not None else "")
        payload = json.loads(text)
        if status >= 400:
            raise ApiError(status, payload["code"], payload["message"], payload["field"])
        return payload

    def bundle(self) -> dict:
        return self._call("GET", "/v1/bundle")

    def evaluate(self, route: str, package: str | Mapping[str, float] = "base", *,
                 currency: str = "usd", price_basis: str = "reference") -> dict:
        body = {"route": route, "package": package, "currency": currency, "price_basis": price_basis}
        return self._call("POST", "/v1/evaluate", body)

    def sweep(self, route: str, lever: str, start: float, stop: float, steps: int, *,
              fixed: str | Mapping[str, float] | None = None, currency: str = "usd",
              price_basis: str = "reference") -> dict:
        spec: dict[str, Any] = {"lever": lever, "from": start, "to": stop, "steps": steps}
        if fixed is not None:
            spec["fixed"] = fixed
        body = {"route": route, "spec": spec, "currency": currency, "price_basis": price_basis}
        return self._call("POST", "/v1/sweep", body)

    def demand(self, year: int, policy: str | None = None, bound: str | None = None, *,
               interpolate: bool = False) -> list[dict]:
        query = {"year": str(year), "interpolate": "true" if interpolate else "false"}
        if policy is not None:
            query["policy"] = policy
        if bound is not None:
            query["bound"] = bound
        return self._call("GET", "/v1/demand", query=query)["records"]

    def reproduce(self) -> list[dict]:
        return json.loads(self._service.reproduce())

    def history(self, route: str, include_taxes: bool = True) -> list[dict]:
        return json.loads(self._service.history(route, include_taxes))


_default: Engine | None = None


def _engine() -> Engine:
    global _default
    if _default is None:
        _default = Engine()
    return _default


def bundle() -> dict:
    return _engine().bundle()


def evaluate(route: str, package: str | Mapping[str, float] = "base", **options: str) -> dict:
    return _engine().evaluate(route, package, **options)


def sweep(route: str, lever: str, start: float, stop: float, steps: int, **options: Any) -> dict:
    return _engine().sweep(route, lever, start, stop, steps, **options)


def demand(year: int, policy: str | None = None, bound: str | None = None, *, interpolate: bool = False) -> list[dict]:
    return _engine().demand(year, policy, bound, interpolate=interpolate)


def reproduce() -> list[dict]:
    return _engine().reproduce()


def history(route: str, include_taxes: bool = True) -> list[dict]:
    return _engine().history(route, include_taxes)


def run_cli(args: Sequence[str]) -> tuple[int, str, str]:
    """Runs the command-line interface in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli(list(args))
