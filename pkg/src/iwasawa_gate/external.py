"""External arithmetic data such as ranks and analytic Sha orders, with provenance."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

LIVE, FIXTURE, USER = "lmfdb-live", "fixture", "user-supplied"
PROVENANCES = (LIVE, FIXTURE, USER)
SUPPORTED_LABELS = ("15a1", "15a3")


@dataclass(frozen=True)
class ExternalArithmeticData:
    """Claims about E over Q(sqrt d) (d = 1 for Q) that this package does not compute.

    ``sha_analytic`` is the analytic order of Sha, which is what the data
    sources publish; it is not a proven order.
    """

    label: str
    d: int
    provenance: str
    torsion: Optional[tuple[int, ...]] = None
    rank: Optional[int] = None
    tamagawa_product: Optional[int] = None
    sha_analytic: Optional[int] = None

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.sha_analytic is not None and (not isinstance(self.sha_analytic, int) or self.sha_analytic < 1):
            raise ValueError(f"analytic Sha order must be a positive integer, got {self.sha_analytic!r}")
        if self.torsion is not None:
            object.__setattr__(self, "torsion", tuple(int(n) for n in self.torsion if int(n) > 1))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["torsion"] = list(self.torsion) if self.torsion is not None else None
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "ExternalArithmeticData":
        torsion = doc.get("torsion")
        return cls(
            label=doc["label"],
            d=int(doc["d"]),
            provenance=doc["provenance"],
            torsion=tuple(torsion) if torsion is not None else None,
            rank=doc.get("rank"),
            tamagawa_product=doc.get("tamagawa_product"),
            sha_analytic=doc.get("sha_analytic"),
        )
