from __future__ import annotations

import pytest

from iwasawa_gate.curve import WeierstrassCurve


@pytest.fixture(scope="session")
def E1() -> WeierstrassCurve:
    return WeierstrassCurve.from_label("15a1")


@pytest.fixture(scope="session")
def E2() -> WeierstrassCurve:
    return WeierstrassCurve.from_label("15a3")


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Keep every test away from the user's real cache directory."""
    monkeypatch.setenv("IWASAWA_GATE_CACHE_DIR", str(tmp_path / "cache"))
