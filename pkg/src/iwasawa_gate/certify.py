"""Assumption checks and end-to-end certificates for (K, p), plus the field scanner.

A certificate covers both curves 15a1 and 15a3.  Its verdict is

* ``theorem-applies`` when all four assumptions pass and, for both curves,
  the case analysis ends in v_p(f(0)) = 0 (Cases 1, 2) or a_p = 0 (Case 3);
* ``assumption-failed`` listing the failed assumption numbers;
* ``incomplete`` when external data are missing or a step could not finish.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping, Optional, Sequence, Union

from .arith.integers import is_prime, is_squarefree, kronecker_symbol
from .arith.padic import DEFAULT_PRECISION
from .curve.counting import count_points
from .curve.torsion import TorsionStructure, torsion_subgroup
from .curve.weierstrass import WeierstrassCurve
from .external import SUPPORTED_LABELS, USER, ExternalArithmeticData
from .iwasawa import (
    INCOMPLETE,
    LAMBDA_ZERO,
    ORDINARY_CASE,
    SUPERSINGULAR_CASE,
    AssumptionViolation,
    CaseClassification,
    GreenbergInputs,
    GreenbergResult,
    classify_case,
    greenberg_multiplicative,
    greenberg_ordinary,
    lv_factor,
    torsion_stability,
)
from .localred import local_data, tamagawa_product
from .lmfdb.client import OFFLINE, DataRequest, DataUnavailable, fetch
from .quadfield import QuadraticField, splitting_type

SCHEMA_VERSION = "1.0"

PASS, FAIL, NEEDS_DATA = "pass", "fail", "external-data-needed"
THEOREM_APPLIES, ASSUMPTION_FAILED = "theorem-applies", "assumption-failed"


def default_precision() -> int:
    return int(os.environ.get("IWASAWA_GATE_PRECISION", DEFAULT_PRECISION))


# assumptions

@dataclass(frozen=True)
class AssumptionCheck:
    number: int
    status: str
    detail: str
    provenance: str


@dataclass(frozen=True)
class AssumptionReport:
    d: int
    p: int
    checks: tuple[AssumptionCheck, ...]

    @property
    def failed(self) -> tuple[int, ...]:
        return tuple(c.number for c in self.checks if c.status == FAIL)

    @property
    def needs_data(self) -> tuple[int, ...]:
        return tuple(c.number for c in self.checks if c.status == NEEDS_DATA)

    @property
    def all_pass(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    def __getitem__(self, number: int) -> AssumptionCheck:
        return self.checks[number - 1]


DataMap = Mapping[str, Optional[ExternalArithmeticData]]


def _validate(d: int, p: int) -> None:
    if d < 2 or not is_squarefree(d):
        raise ValueError(f"d must be a squarefree integer > 1, got {d}")
    if p == 2:
        raise AssumptionViolation("p must be an odd prime, got 2")
    if not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


def _as_map(data) -> dict:
    if data is None:
        return {label: None for label in SUPPORTED_LABELS}
    if isinstance(data, ExternalArithmeticData):
        return {label: (data if data.label == label else None) for label in SUPPORTED_LABELS}
    return {label: data.get(label) for label in SUPPORTED_LABELS}


def check_assumptions(d: int, p: int, data: Union[DataMap, ExternalArithmeticData, None],
                      torsion_k: Optional[Mapping[str, TorsionStructure]] = None) -> AssumptionReport:
    """Check the four assumptions for Q(sqrt d) and p against both curves' external data."""
    _validate(d, p)
    data = _as_map(data)
    checks = [AssumptionCheck(1, FAIL if d == 5 else PASS, f"d = {d}", "computed")]

    # 2: rank 0 from external data, torsion claim cross-checked against our computation
    status, notes, sources = PASS, [], set()
    for label in SUPPORTED_LABELS:
        item = data[label]
        if item is None or item.rank is None:
            status = FAIL if status == FAIL else NEEDS_DATA
            notes.append(f"{label}: rank unknown")
            continue
        sources.add(item.provenance)
        computed = (torsion_k or {}).get(label) or torsion_subgroup(WeierstrassCurve.from_label(label), d)
        if item.rank != 0:
            status = FAIL
            notes.append(f"{label}: rank {item.rank}")
        elif item.torsion is not None and item.torsion != computed.invariants:
            status = FAIL
            notes.append(f"{label}: claimed torsion {item.torsion} but computed {computed}")
        else:
            notes.append(f"{label}: rank 0, torsion {computed}")
    checks.append(AssumptionCheck(2, status, "; ".join(notes), ",".join(sorted(sources)) or "none"))

    # 3: p does not divide the analytic order of Sha (analytic, not proven)
    status, notes, sources = PASS, [], set()
    for label in SUPPORTED_LABELS:
        item = data[label]
        if item is None or item.sha_analytic is None:
            status = FAIL if status == FAIL else NEEDS_DATA
            notes.append(f"{label}: Sha unknown")
            continue
        sources.add(item.provenance)
        if item.sha_analytic % p == 0:
            status = FAIL
            notes.append(f"{label}: {p} | analytic Sha {item.sha_analytic}")
        else:
            notes.append(f"{label}: {p} does not divide analytic Sha {item.sha_analytic}")
    checks.append(AssumptionCheck(3, status, "; ".join(notes) + " [analytic order, not proven]",
                                  ",".join(sorted(sources)) or "none"))

    k = kronecker_symbol(QuadraticField(d).discriminant, p)
    checks.append(AssumptionCheck(4, PASS if k == 1 else FAIL,
                                  f"kronecker({QuadraticField(d).discriminant}, {p}) = {k}", "computed"))
    return AssumptionReport(d, p, tuple(checks))


# certificates

@dataclass
class CurveReport:
    label: str
    torsion_q: Optional[TorsionStructure] = None
    torsion_k: Optional[TorsionStructure] = None
    tamagawa_product: Optional[int] = None
    tamagawa_power_of_two: Optional[bool] = None
    classification: Optional[CaseClassification] = None
    greenberg: Optional[GreenbergResult] = None
    stability_certified: Optional[bool] = None
    errors: list[str] = field(default_factory=list)

    @property
    def concluded(self) -> bool:
        if self.errors or self.classification is None:
            return False
        if self.classification.case == SUPERSINGULAR_CASE:
            return self.classification.a_p == 0
        return self.greenberg is not None and self.greenberg.lambda_conclusion == LAMBDA_ZERO


@dataclass
class ModularityCertificate:
    d: int
    p: int
    verdict: str
    failed_assumptions: tuple[int, ...]
    missing: tuple[str, ...]
    assumptions: AssumptionReport
    curves: dict[str, CurveReport]
    evidence: list[str]
    precision: int
    generated_at: str = ""
    data_provenance: dict = field(default_factory=dict)

    @property
    def verdict_text(self) -> str:
        if self.verdict == ASSUMPTION_FAILED:
            return f"{ASSUMPTION_FAILED}({','.join(map(str, self.failed_assumptions))})"
        if self.verdict == INCOMPLETE:
            return f"{INCOMPLETE}({'; '.join(self.missing)})"
        return self.verdict

    def to_dict(self, include_timestamp: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "d": self.d,
            "p": self.p,
            "verdict": self.verdict,
            "verdict_text": self.verdict_text,
            "failed_assumptions": list(self.failed_assumptions),
            "missing": list(self.missing),
            "precision": {"padic_digits": self.precision, "doubling_check": 2 * self.precision},
            "assumptions": [
                {"number": c.number, "status": c.status, "detail": c.detail, "provenance": c.provenance}
                for c in self.assumptions.checks
            ],
            "data_provenance": dict(self.data_provenance),
            "curves": {label: _curve_dict(r) for label, r in sorted(self.curves.items())},
            "evidence": list(self.evidence),
        }
        if include_timestamp:
            out["generated_at"] = self.generated_at
        return out

    def to_json(self, include_timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(include_timestamp), indent=2, sort_keys=True)


def _torsion_dict(T: Optional[TorsionStructure]):
    if T is None:
        return None
    return {"invariants": list(T.invariants), "order": T.order, "text": str(T), "provenance": "computed"}


def _curve_dict(r: CurveReport) -> dict:
    out = {
        "torsion_q": _torsion_dict(r.torsion_q),
        "torsion_k": _torsion_dict(r.torsion_k),
        "tamagawa_product": {"value": r.tamagawa_product, "power_of_two": r.tamagawa_power_of_two,
                             "provenance": "computed"},
        "stability_certified": r.stability_certified,
        "errors": list(r.errors),
        "concluded": r.concluded,
    }
    c = r.classification
    if c is not None:
        out["case"] = {"number": c.case, "name": c.name, "a_p": c.a_p,
                       "places": [{"place": repr(v.place), "kind": v.kind, "c_v": v.tamagawa,
                                   "v_disc": v.disc_valuation} for v in c.places],
                       "provenance": "computed"}
        if c.case == SUPERSINGULAR_CASE:
            out["case"]["hypothesis"] = {"a_p_is_zero": c.a_p == 0, "provenance": "computed",
                                         "conclusion": "imported from the supersingular theory (not recomputed)"}
    g = r.greenberg
    if g is not None:
        out["greenberg"] = {
            "valuation": g.valuation,
            "lambda_conclusion": g.lambda_conclusion,
            "implication": g.implication,
            "missing": list(g.missing),
            "precision": {k: list(v) for k, v in g.precision.items()},
            "terms": [{"label": t.label, "value": t.value, "valuation": t.valuation, "weight": t.weight,
                       "source": t.source} for t in g.terms],
        }
    return out


def _fetch_all(d: int, source: str) -> dict:
    out = {}
    for label in SUPPORTED_LABELS:
        try:
            out[label] = fetch(DataRequest(label, d), mode=source)
        except (DataUnavailable, ConnectionError, ValueError):
            out[label] = None
    return out


def _selmer_order(assumptions: AssumptionReport) -> Optional[int]:
    # finite E(K) and trivial Sha_p give a trivial p-Selmer group
    if assumptions[2].status == PASS and assumptions[3].status == PASS:
        return 1
    return None


def _run_curve(label: str, d: int, p: int, assumptions: AssumptionReport, precision: int,
               evidence: list[str]) -> CurveReport:
    E = WeierstrassCurve.from_label(label)
    K = QuadraticField(d)
    report = CurveReport(label)
    try:
        report.torsion_q = torsion_subgroup(E)
        report.torsion_k = torsion_subgroup(E, K)
        evidence.append(f"{label}: torsion over Q {report.torsion_q}, over Q(sqrt {d}) {report.torsion_k} [computed]")
        tam = tamagawa_product(E, K)
        report.tamagawa_product, report.tamagawa_power_of_two = tam.product, tam.is_power_of_two
        evidence.append(f"{label}: Tamagawa product over Q(sqrt {d}) = {tam.product}, power of 2: {tam.is_power_of_two} [computed]")
    except Exception as exc:  # itemized, never fatal
        report.errors.append(f"local data: {type(exc).__name__}: {exc}")
        return report
    if assumptions[4].status != PASS:
        return report
    try:
        stab = torsion_stability(E, K, p, report.torsion_q, report.torsion_k)
        report.stability_certified = stab.certified
        evidence.append(f"{label}: torsion stability in the Z_{p}-tower certified: {stab.certified} "
                        f"(odd l <= {stab.odd_primes_checked[-1]}; group theory imported)")
        c = classify_case(E, K, p)
        report.classification = c
        evidence.append(f"{label}: case {c.case} ({c.name}) at p = {p}, a_p = {c.a_p} [computed]")
        if c.case == SUPERSINGULAR_CASE:
            evidence.append(f"{label}: hypothesis a_p = 0 {'holds' if c.a_p == 0 else 'FAILS'}")
            return report
        bad = [r.tamagawa for r in local_data(E, K)]
        selmer = _selmer_order(assumptions)
        torsion_order = report.torsion_k.order
        if c.case == ORDINARY_CASE:
            counts = [count_points(E, p) for _ in splitting_type(K, p)]
            inputs = GreenbergInputs(bad, torsion_order, selmer, reduction_counts=counts)
            g = greenberg_ordinary(inputs, p)
        else:
            lvs = [lv_factor(E, K, p, v, precision) for v in splitting_type(K, p)]
            inputs = GreenbergInputs(bad, torsion_order, selmer, lv_factors=lvs)
            g = greenberg_multiplicative(inputs, p)
        report.greenberg = g
        for t in g.terms:
            shown = f" = {t.value}" if t.value is not None else ""
            evidence.append(f"{label}:   {t.label}{shown}, v_{p} = {t.valuation}, weight {t.weight} [{t.source}]")
        evidence.append(f"{label}: v_{p}(f(0)) = {g.valuation}, conclusion {g.lambda_conclusion}")
    except Exception as exc:
        report.errors.append(f"case analysis: {type(exc).__name__}: {exc}")
        evidence.append(f"{label}: ERROR {type(exc).__name__}: {exc}")
    return report


def certify(d: int, p: int, data: Union[DataMap, ExternalArithmeticData, None] = None, *,
            source: str = OFFLINE, precision: Optional[int] = None) -> ModularityCertificate:
    """Run the full pipeline for both curves over Q(sqrt d) at p."""
    _validate(d, p)
    precision = precision or default_precision()
    data = _fetch_all(d, source) if data is None else _as_map(data)
    evidence: list[str] = []
    curves = {}
    assumptions = check_assumptions(d, p, data)
    for c in assumptions.checks:
        evidence.append(f"assumption {c.number}: {c.status} ({c.detail}) [{c.provenance}]")
    for label in SUPPORTED_LABELS:
        curves[label] = _run_curve(label, d, p, assumptions, precision, evidence)

    missing = []
    for n in assumptions.needs_data:
        missing.append(f"external data for assumption {n}")
    for label, r in curves.items():
        missing.extend(f"{label}: {e}" for e in r.errors)
        if not r.errors and r.classification is not None and not r.concluded:
            if r.greenberg is not None and r.greenberg.valuation is None:
                missing.append(f"{label}: Selmer order")
            else:
                missing.append(f"{label}: case analysis inconclusive")

    if assumptions.failed:
        verdict = ASSUMPTION_FAILED
    elif missing or not all(r.concluded for r in curves.values()):
        verdict = INCOMPLETE
    else:
        verdict = THEOREM_APPLIES
    provenance = {label: (item.provenance if item else None) for label, item in data.items()}
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return ModularityCertificate(d, p, verdict, assumptions.failed, tuple(missing), assumptions, curves,
                                 evidence, precision, stamp, provenance)


def render_text(cert: ModularityCertificate) -> str:
    lines = [f"Q(sqrt {cert.d}), p = {cert.p}: {cert.verdict_text}",
             f"precision: {cert.precision} p-adic digits (checked again at {2 * cert.precision})"]
    lines += [f"  {e}" for e in cert.evidence]
    return "\n".join(lines)


# scanning

@dataclass(frozen=True)
class ScanPrime:
    p: int
    cases: dict


@dataclass(frozen=True)
class ScanRow:
    d: int
    torsion: dict
    tamagawa: dict
    sha: dict
    primes: tuple[ScanPrime, ...]
    complete: bool
    excluded: bool

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "torsion": self.torsion,
            "tamagawa": self.tamagawa,
            "sha_analytic": self.sha,
            "split_primes": [{"p": s.p, "cases": s.cases} for s in self.primes],
            "complete": self.complete,
            "assumption1_excluded": self.excluded,
        }


@dataclass(frozen=True)
class ScanReport:
    rows: tuple[ScanRow, ...]
    p_values: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "p_values": list(self.p_values),
                "rows": [r.to_dict() for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _scan_row(d: int, p_values: tuple[int, ...], source: str) -> ScanRow:
    K = QuadraticField(d)
    data = _fetch_all(d, source)
    torsion, tam, sha = {}, {}, {}
    for label in SUPPORTED_LABELS:
        E = WeierstrassCurve.from_label(label)
        torsion[label] = str(torsion_subgroup(E, K))
        tam[label] = tamagawa_product(E, K).product
        item = data[label]
        sha[label] = item.sha_analytic if item else None
    primes = []
    for p in p_values:
        if p == 2 or not is_prime(p) or kronecker_symbol(K.discriminant, p) != 1:
            continue
        cases = {}
        for label in SUPPORTED_LABELS:
            try:
                cases[label] = classify_case(WeierstrassCurve.from_label(label), K, p).name
            except Exception as exc:
                cases[label] = f"error: {exc}"
        primes.append(ScanPrime(p, cases))
    complete = all(v is not None for v in sha.values())
    return ScanRow(d, torsion, tam, sha, tuple(primes), complete, d == 5)


def scan(d_values: Sequence[int], p_values: Sequence[int] = (), source: str = OFFLINE,
         workers: int = 1) -> ScanReport:
    """A Table-2-shaped report over squarefree d > 1 and the split odd primes in ``p_values``."""
    ds = [d for d in d_values if d > 1 and is_squarefree(d)]
    ps = tuple(sorted(set(p_values)))
    if workers > 1 and len(ds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_row, ds, [ps] * len(ds), [source] * len(ds)))
    else:
        rows = [_scan_row(d, ps, source) for d in ds]
    return ScanReport(tuple(rows), ps)


__all__ = [
    "ASSUMPTION_FAILED",
    "AssumptionCheck",
    "AssumptionReport",
    "CurveReport",
    "ExternalArithmeticData",
    "FAIL",
    "INCOMPLETE",
    "ModularityCertificate",
    "NEEDS_DATA",
    "PASS",
    "SCHEMA_VERSION",
    "ScanReport",
    "ScanRow",
    "THEOREM_APPLIES",
    "USER",
    "check_assumptions",
    "certify",
    "default_precision",
    "render_text",
    "scan",
]
