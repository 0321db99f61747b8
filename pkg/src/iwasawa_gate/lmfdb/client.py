"""LMFDB-compatible data client with bundled fixtures and an on-disk cache.

Offline mode (the default) reads the in-repo fixtures before the cache and
never opens a socket.  Live mode queries an LMFDB-style JSON API and caches
the raw response text once its shape is validated.  Network failures fall
back to the cache before raising.
"""

from __future__ import annotations

import json
import os
import threading
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from ..arith.integers import is_squarefree
from ..external import FIXTURE, LIVE, SUPPORTED_LABELS, ExternalArithmeticData

FIXTURES_DIR = Path(__file__).parent / "fixtures"
DEFAULT_BASE_URL = "https://www.lmfdb.org"
DEFAULT_TIMEOUT = 10.0
OFFLINE, LIVE_MODE = "offline", "live"

AINVS = {"15a1": "1,1,1,-10,-10", "15a3": "1,1,1,-5,2"}


class DataUnavailable(LookupError):
    """Neither the local data nor a reachable endpoint can answer the request."""


class NetworkError(ConnectionError):
    pass


class MalformedResponseError(ValueError):
    """A live response did not have the expected shape; ``raw`` keeps the payload."""

    def __init__(self, message: str, raw: str):
        super().__init__(message)
        self.raw = raw


@dataclass(frozen=True)
class DataRequest:
    label: str
    d: int = 1
    fields: tuple[str, ...] = ("torsion", "rank", "tamagawa_product", "sha_analytic")

    def __post_init__(self):
        label = self.label.lower()
        if label not in SUPPORTED_LABELS:
            raise ValueError(f"unsupported curve label {self.label!r}; supported: {', '.join(SUPPORTED_LABELS)}")
        object.__setattr__(self, "label", label)
        if self.d != 1 and (self.d < 2 or not is_squarefree(self.d)):
            raise ValueError(f"d must be 1 (for Q) or a squarefree integer > 1, got {self.d}")

    @property
    def key(self) -> str:
        return f"{self.label}_d{self.d}"

    @property
    def field_label(self) -> str:
        if self.d == 1:
            return "1.1.1.1"
        disc = self.d if self.d % 4 == 1 else 4 * self.d
        return f"2.2.{disc}.1"


@dataclass(frozen=True)
class CacheEntry:
    key: str
    document: str
    fetched_at: str
    source: str


class Cache:
    """One JSON file per request key; writes go through a single lock."""

    _lock = threading.Lock()

    def __init__(self, directory: Optional[os.PathLike] = None):
        if directory is None:
            directory = os.environ.get("IWASAWA_GATE_CACHE_DIR") or Path.home() / ".cache" / "iwasawa_gate"
        self.directory = Path(directory)

    def path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> Optional[CacheEntry]:
        path = self.path(key)
        if not path.exists():
            return None
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        return CacheEntry(raw["key"], raw["document"], raw["fetched_at"], raw["source"])

    def put(self, entry: CacheEntry, refresh: bool = False) -> bool:
        """Store ``entry``; an existing fixture-sourced entry survives unless ``refresh``."""
        with self._lock:
            old = self.get(entry.key)
            if old is not None and old.source == FIXTURE and entry.source != FIXTURE and not refresh:
                return False
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = self.path(entry.key).with_suffix(".tmp")
            with open(tmp, "w", encoding="utf-8") as f:
                json.dump(entry.__dict__, f, sort_keys=True)
            os.replace(tmp, self.path(entry.key))
            return True


# fixtures

def _fixture_path(request: DataRequest, fixtures_dir: Path) -> Path:
    return Path(fixtures_dir) / f"{request.key}.json"


def _from_fixture(doc: dict) -> ExternalArithmeticData:
    return ExternalArithmeticData(
        label=doc["label"],
        d=int(doc["d"]),
        provenance=FIXTURE,
        torsion=tuple(doc["torsion"]) if doc.get("torsion") is not None else None,
        rank=doc.get("rank"),
        tamagawa_product=doc.get("tamagawa_product"),
        sha_analytic=doc.get("sha_analytic"),
    )


def load_fixture(request: DataRequest, fixtures_dir: Optional[os.PathLike] = None) -> Optional[ExternalArithmeticData]:
    path = _fixture_path(request, Path(fixtures_dir or FIXTURES_DIR))
    if not path.exists():
        return None
    with open(path, encoding="utf-8") as f:
        return _from_fixture(json.load(f))


# live documents

def query_url(request: DataRequest, base_url: str) -> str:
    base = base_url.rstrip("/")
    if request.d == 1:
        params = {"Clabel": request.label, "_format": "json"}
        return f"{base}/api/ec_curvedata/?{urllib.parse.urlencode(params)}"
    params = {"field_label": request.field_label, "ainvs": AINVS[request.label], "_format": "json"}
    return f"{base}/api/ec_nfcurves/?{urllib.parse.urlencode(params)}"


def _as_int(value, name: str, raw: str) -> Optional[int]:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedResponseError(f"field {name!r} is not numeric", raw)
    n = round(value)
    if abs(value - n) > 1e-6:
        raise MalformedResponseError(f"field {name!r} = {value} is not an integer", raw)
    return int(n)


def parse_document(raw: str, request: DataRequest) -> ExternalArithmeticData:
    """Validate an LMFDB API document ({"data": [record, ...]}) and normalize it."""
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedResponseError(f"response is not JSON: {exc}", raw) from None
    records = doc.get("data") if isinstance(doc, dict) else None
    if not isinstance(records, list) or not records:
        raise MalformedResponseError("expected a non-empty 'data' list", raw)
    rec = records[0]
    if not isinstance(rec, dict):
        raise MalformedResponseError("record is not an object", raw)
    torsion = rec.get("torsion_structure")
    if torsion is not None and (not isinstance(torsion, list) or not all(isinstance(n, int) for n in torsion)):
        raise MalformedResponseError("torsion_structure must be a list of integers", raw)
    sha = _as_int(rec.get("sha", rec.get("analytic_sha")), "sha", raw)
    try:
        return ExternalArithmeticData(
            label=request.label,
            d=request.d,
            provenance=LIVE,
            torsion=tuple(torsion) if torsion is not None else None,
            rank=_as_int(rec.get("rank"), "rank", raw),
            tamagawa_product=_as_int(rec.get("tamagawa_product"), "tamagawa_product", raw),
            sha_analytic=sha,
        )
    except ValueError as exc:
        raise MalformedResponseError(str(exc), raw) from None


def _http_get(url: str, timeout: float) -> str:
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return resp.read().decode("utf-8")
    except (urllib.error.URLError, OSError) as exc:
        raise NetworkError(f"GET {url} failed: {exc}") from exc


def fetch(request: DataRequest, mode: str = OFFLINE, *, cache: Optional[Cache] = None,
          fixtures_dir: Optional[os.PathLike] = None, base_url: Optional[str] = None,
          timeout: float = DEFAULT_TIMEOUT, refresh: bool = False) -> ExternalArithmeticData:
    if mode not in (OFFLINE, LIVE_MODE):
        raise ValueError(f"mode must be {OFFLINE!r} or {LIVE_MODE!r}")
    cache = cache or Cache()
    if mode == OFFLINE:
        fixture = load_fixture(request, fixtures_dir)
        if fixture is not None:
            return fixture
        entry = cache.get(request.key)
        if entry is not None:
            return parse_document(entry.document, request)
        raise DataUnavailable(f"no fixture or cache entry for {request.key} (offline)")
    url = query_url(request, base_url or os.environ.get("LMFDB_BASE_URL") or DEFAULT_BASE_URL)
    try:
        raw = _http_get(url, timeout)
    except NetworkError:
        entry = cache.get(request.key)
        if entry is not None:
            return parse_document(entry.document, request)
        raise
    data = parse_document(raw, request)
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    cache.put(CacheEntry(request.key, raw, stamp, "live"), refresh=refresh)
    return data


# consistency against recomputation

@dataclass(frozen=True)
class Mismatch:
    key: str
    column: str
    fixture_value: object
    computed_value: object


@dataclass(frozen=True)
class FixtureReport:
    checked: tuple[str, ...]
    mismatches: tuple[Mismatch, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_fixture_consistency(fixtures_dir: Optional[os.PathLike] = None) -> FixtureReport:
    """Recompute the Tamagawa and torsion columns of every fixture and list disagreements."""
    from ..curve.torsion import torsion_subgroup
    from ..curve.weierstrass import WeierstrassCurve
    from ..localred import tamagawa_product

    directory = Path(fixtures_dir or FIXTURES_DIR)
    checked, mismatches = [], []
    for path in sorted(directory.glob("*.json")):
        with open(path, encoding="utf-8") as f:
            data = _from_fixture(json.load(f))
        E = WeierstrassCurve.from_label(data.label)
        K = None if data.d == 1 else data.d
        key = path.stem
        checked.append(key)
        if data.tamagawa_product is not None:
            got = tamagawa_product(E, K).product
            if got != data.tamagawa_product:
                mismatches.append(Mismatch(key, "tamagawa_product", data.tamagawa_product, got))
        if data.torsion is not None:
            got = torsion_subgroup(E, K).invariants
            if got != data.torsion:
                mismatches.append(Mismatch(key, "torsion", data.torsion, got))
    return FixtureReport(tuple(checked), tuple(mismatches))


__all__ = [
    "Cache",
    "CacheEntry",
    "DataRequest",
    "DataUnavailable",
    "FixtureReport",
    "MalformedResponseError",
    "Mismatch",
    "NetworkError",
    "fetch",
    "load_fixture",
    "parse_document",
    "query_url",
    "verify_fixture_consistency",
]
