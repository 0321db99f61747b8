"""Command-line front end: inspect, certify, scan, tate-period.

Exit status for ``certify``: 0 theorem-applies, 1 assumption-failed,
2 incomplete.  Invalid arguments exit with status 3 on every subcommand.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arith.integers import factorize, int_valuation, is_prime, is_squarefree, primes_up_to
from .arith.padic import padic_log
from .certify import ASSUMPTION_FAILED, THEOREM_APPLIES, certify, default_precision, render_text, scan
from .curve.torsion import torsion_subgroup
from .curve.weierstrass import CURVES, WeierstrassCurve
from .external import SUPPORTED_LABELS
from .lmfdb.client import LIVE_MODE, OFFLINE, DataRequest, DataUnavailable, fetch
from .localred import (
    AdditiveReductionError,
    NotSplitMultiplicativeError,
    conductor,
    local_data,
    tamagawa_product,
    tate_period,
)

EXIT_THEOREM, EXIT_ASSUMPTION, EXIT_INCOMPLETE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class CliConfig:
    command: str
    curve: Optional[str] = None
    d: Optional[int] = None
    p: Optional[int] = None
    d_values: tuple[int, ...] = ()
    p_values: tuple[int, ...] = ()
    precision: int = 40
    mode: str = OFFLINE
    output: Optional[str] = None
    fmt: str = "human"
    workers: int = 1


def _parse_field(text: str) -> Optional[int]:
    if text.upper() == "Q":
        return None
    try:
        d = int(text)
    except ValueError:
        raise UsageError(f"field must be Q or a squarefree integer d > 1, got {text!r}") from None
    if d < 2 or not is_squarefree(d):
        raise UsageError(f"d = {d} is not a squarefree integer > 1")
    return d


def _parse_curve(text: str) -> str:
    label = text.lower()
    if label not in CURVES:
        raise UsageError(f"unknown curve {text!r}; choose from {', '.join(sorted(CURVES))}")
    return label


def _parse_prime(p: int, odd: bool = True) -> int:
    if not is_prime(p) or (odd and p == 2):
        raise UsageError(f"p = {p} must be an odd prime")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="iwasawa-gate", description=__doc__.splitlines()[0])
    parser.add_argument("--mode", choices=[OFFLINE, LIVE_MODE], default=OFFLINE,
                        help="external data source (default: offline fixtures and cache)")
    parser.add_argument("--base-url", help="LMFDB-compatible API base URL (env LMFDB_BASE_URL)")
    parser.add_argument("--cache-dir", help="cache directory (env IWASAWA_GATE_CACHE_DIR)")
    parser.add_argument("--precision", type=int, default=None,
                        help="p-adic digits (env IWASAWA_GATE_PRECISION, default 40)")
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    parser.add_argument("--output", "-o", help="write the report to this file as well")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("inspect", help="invariants, reduction data and torsion of a curve")
    p.add_argument("curve", help="15a1 or 15a3")
    p.add_argument("--field", default="Q", help="Q or a squarefree d > 1 for Q(sqrt d)")

    p = sub.add_parser("certify", help="certificate for Q(sqrt d) and p (exit 0/1/2)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("scan", help="table of torsion, Tamagawa products, Sha and split primes")
    p.add_argument("--fields", help="comma-separated list of d")
    p.add_argument("--d-max", type=int, help="all squarefree 1 < d <= D-MAX")
    p.add_argument("--p-max", type=int, default=0, help="list split odd primes p <= P-MAX")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("tate-period", help="Tate period at a split multiplicative prime")
    p.add_argument("curve")
    p.add_argument("--p", type=int, required=True)
    return parser


def make_config(args: argparse.Namespace) -> CliConfig:
    env = os.environ.get("IWASAWA_GATE_PRECISION")
    precision = args.precision if args.precision is not None else default_precision()
    if precision < 4:
        raise UsageError(f"precision must be at least 4, got {precision}" + (" (from env)" if env else ""))
    common = dict(precision=precision, mode=args.mode, output=args.output, fmt="json" if args.json else "human")
    if args.command == "inspect":
        return CliConfig("inspect", curve=_parse_curve(args.curve), d=_parse_field(args.field), **common)
    if args.command == "certify":
        if args.d < 2 or not is_squarefree(args.d):
            raise UsageError(f"d = {args.d} is not a squarefree integer > 1")
        return CliConfig("certify", d=args.d, p=_parse_prime(args.p), **common)
    if args.command == "scan":
        if args.fields:
            try:
                ds = tuple(int(x) for x in args.fields.split(",") if x.strip())
            except ValueError:
                raise UsageError(f"--fields must be comma-separated integers, got {args.fields!r}") from None
            bad = [d for d in ds if d < 2 or not is_squarefree(d)]
            if bad:
                raise UsageError(f"not squarefree integers > 1: {bad}")
        elif args.d_max is not None:
            ds = tuple(d for d in range(2, args.d_max + 1) if is_squarefree(d))
        else:
            raise UsageError("scan needs --fields or --d-max")
        ps = tuple(p for p in primes_up_to(max(args.p_max, 0)) if p != 2)
        return CliConfig("scan", d_values=ds, p_values=ps, workers=max(1, args.workers), **common)
    return CliConfig("tate-period", curve=_parse_curve(args.curve), p=_parse_prime(args.p), **common)


# commands

def _factorization_text(x) -> str:
    x = Fraction(x)
    return "1" if abs(x) == 1 else str(factorize(x))


def cmd_inspect(cfg: CliConfig) -> tuple[dict, str, int]:
    E = WeierstrassCurve.from_label(cfg.curve)
    K = cfg.d
    field_name = "Q" if K is None else f"Q(sqrt {K})"
    tors = torsion_subgroup(E, K)
    tam = tamagawa_product(E, K)
    places = local_data(E, K)
    doc = {
        "curve": cfg.curve,
        "ainvs": [int(a) for a in E.ainvs],
        "field": field_name,
        "conductor": conductor(E),
        "discriminant": int(E.discriminant),
        "j_invariant": str(Fraction(E.j)),
        "j_factorization": _factorization_text(E.j),
        "torsion": str(tors),
        "torsion_invariants": list(tors.invariants),
        "reduction": [{"place": str(r.place), "type": r.kind, "c_v": r.tamagawa, "v_disc": r.disc_valuation}
                      for r in places],
        "tamagawa_product": tam.product,
        "tamagawa_power_of_two": tam.is_power_of_two,
    }
    try:
        ext = fetch(DataRequest(cfg.curve, K or 1), mode=cfg.mode)
        doc["sha_analytic"] = ext.sha_analytic
        doc["external_provenance"] = ext.provenance
    except (DataUnavailable, ConnectionError, ValueError):
        doc["sha_analytic"] = None
        doc["external_provenance"] = None
    lines = [
        f"{cfg.curve} over {field_name}",
        f"  a-invariants:       {doc['ainvs']}",
        f"  conductor:          {doc['conductor']}",
        f"  discriminant:       {doc['discriminant']}",
        f"  j-invariant:        {doc['j_invariant']} = {doc['j_factorization']}",
        f"  torsion:            {doc['torsion']}",
    ]
    lines += [f"  reduction at {r['place']}: {r['type']}, c_v = {r['c_v']}, v(Delta) = {r['v_disc']}"
              for r in doc["reduction"]]
    lines.append(f"  Tamagawa product:   {tam.product} (power of 2: {tam.is_power_of_two})")
    sha = doc["sha_analytic"]
    lines.append(f"  analytic Sha:       {sha if sha is not None else 'unavailable'}"
                 + (f" [{doc['external_provenance']}]" if sha is not None else ""))
    return doc, "\n".join(lines), 0


def cmd_certify(cfg: CliConfig) -> tuple[dict, str, int]:
    cert = certify(cfg.d, cfg.p, source=cfg.mode, precision=cfg.precision)
    code = {THEOREM_APPLIES: EXIT_THEOREM, ASSUMPTION_FAILED: EXIT_ASSUMPTION}.get(cert.verdict, EXIT_INCOMPLETE)
    return cert.to_dict(), render_text(cert), code


def cmd_scan(cfg: CliConfig) -> tuple[dict, str, int]:
    report = scan(cfg.d_values, cfg.p_values, source=cfg.mode, workers=cfg.workers)
    lines = []
    if report.rows:
        lines.append(f"{'d':>5}  {'torsion (15a1 / 15a3)':<24} {'Tam 15a1':>9} {'Tam 15a3':>9} {'Sha':>8}  split p")
    for row in report.rows:
        tors = " / ".join(row.torsion[l] for l in SUPPORTED_LABELS)
        sha = "/".join("?" if row.sha[l] is None else str(row.sha[l]) for l in SUPPORTED_LABELS)
        primes = ", ".join(f"{s.p}:{'/'.join(s.cases[l][:3] for l in SUPPORTED_LABELS)}" for s in row.primes)
        flag = "" if row.complete else "  [incomplete]"
        if row.excluded:
            flag += "  [excluded by assumption 1]"
        lines.append(f"{row.d:>5}  {tors:<24} {row.tamagawa['15a1']:>9} {row.tamagawa['15a3']:>9} {sha:>8}  "
                     f"{primes or '-'}{flag}")
    if not report.rows:
        lines.append("(no fields)")
    return report.to_dict(), "\n".join(lines), 0


def cmd_tate_period(cfg: CliConfig) -> tuple[dict, str, int]:
    E = WeierstrassCurve.from_label(cfg.curve)
    results = {}
    for N in (cfg.precision, 2 * cfg.precision):
        T = tate_period(E, cfg.p, N)
        log_q = padic_log(T.q)
        results[N] = (T, log_q, int(log_q.valuation) - int_valuation(T.valuation, cfg.p))
    T, log_q, ratio = results[cfg.precision]
    agree = len({r[2] for r in results.values()}) == 1
    doc = {
        "curve": cfg.curve,
        "p": cfg.p,
        "precision": cfg.precision,
        "q": str(T.q),
        "q_digits": T.q.digits(),
        "v_q": T.valuation,
        "j_agreement_digits": T.j_digits,
        "log_q_valuation": int(log_q.valuation),
        "ratio_valuation": ratio,
        "ratio_valuation_by_precision": {str(N): r[2] for N, r in results.items()},
        "precision_stable": agree,
    }
    lines = [
        f"Tate period of {cfg.curve} at p = {cfg.p} ({cfg.precision} digits)",
        f"  q = {T.q}",
        f"  v_p(q) = {T.valuation}",
        f"  j(q) reproduces j(E) to {T.j_digits} digits",
        f"  v_p(log_p q) = {int(log_q.valuation)}",
        f"  v_p(log_p q / ord_p q) = {ratio} (same at {2 * cfg.precision} digits: {agree})",
    ]
    return doc, "\n".join(lines), 0


COMMANDS = {"inspect": cmd_inspect, "certify": cmd_certify, "scan": cmd_scan, "tate-period": cmd_tate_period}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.base_url:
        os.environ["LMFDB_BASE_URL"] = args.base_url
    if args.cache_dir:
        os.environ["IWASAWA_GATE_CACHE_DIR"] = args.cache_dir
    try:
        cfg = make_config(args)
        doc, text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"iwasawa-gate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotSplitMultiplicativeError, AdditiveReductionError) as exc:
        print(f"iwasawa-gate: rejected: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = json.dumps(doc, indent=2, sort_keys=True) if cfg.fmt == "json" else text
    print(out)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as f:
            f.write(out + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
