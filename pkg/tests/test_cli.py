from __future__ import annotations

import json

import pytest

from iwasawa_gate.certify import certify
from iwasawa_gate.cli import EXIT_USAGE, build_parser, main, make_config


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code, out = run(capsys, "--json", *argv)
    return code, json.loads(out)


def test_inspect_over_q(capsys):
    code, doc = run_json(capsys, "inspect", "15a1", "--field", "Q")
    assert code == 0
    assert doc["conductor"] == 15
    assert doc["j_factorization"] == "3^-4 * 5^-4 * 13^3 * 37^3"
    assert doc["torsion"] == "Z/2 x Z/4" and doc["tamagawa_product"] == 8


def test_inspect_over_sqrt2(capsys):
    code, doc = run_json(capsys, "inspect", "15a3", "--field", "2")
    assert code == 0 and doc["tamagawa_product"] == 4


def test_inspect_text_mentions_the_same_facts(capsys):
    code, out = run(capsys, "inspect", "15a1")
    assert code == 0
    for fact in ("15", "3^-4 * 5^-4 * 13^3 * 37^3", "Z/2 x Z/4", "8"):
        assert fact in out


@pytest.mark.parametrize("argv", [
    ("inspect", "15a1", "--field", "4"),
    ("inspect", "11a1"),
    ("certify", "--d", "4", "--p", "7"),
    ("certify", "--d", "2", "--p", "9"),
    ("scan",),
    ("scan", "--fields", "2,x"),
    ("--precision", "2", "certify", "--d", "2", "--p", "7"),
])
def test_invalid_arguments_exit_with_usage_code(capsys, argv):
    assert main(list(argv)) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_argparse_errors_use_usage_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["certify", "--d", "2"])
    assert info.value.code == EXIT_USAGE


@pytest.mark.parametrize("d,p,code", [(2, 7, 0), (5, 7, 1), (163, 3, 2)])
def test_certify_exit_codes(capsys, d, p, code):
    got, doc = run_json(capsys, "certify", "--d", str(d), "--p", str(p))
    assert got == code
    assert doc["d"] == d and doc["p"] == p


def test_certify_json_is_reproducible(capsys):
    docs = []
    for _ in range(2):
        _, doc = run_json(capsys, "certify", "--d", "21", "--p", "5")
        doc.pop("generated_at")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]
    assert json.loads(docs[0]) == certify(21, 5).to_dict(include_timestamp=False)


def test_certify_text_contains_every_evidence_line(capsys):
    _, doc = run_json(capsys, "certify", "--d", "2", "--p", "17")
    _, text = run(capsys, "certify", "--d", "2", "--p", "17")
    for line in doc["evidence"]:
        assert line in text


def test_scan_table_fields(capsys):
    code, doc = run_json(capsys, "scan", "--fields", "2,6,17,21,53,61,65,69,77")
    assert code == 0
    assert [r["d"] for r in doc["rows"]] == [2, 6, 17, 21, 53, 61, 65, 69, 77]
    assert all(r["torsion"] == {"15a1": "Z/2 x Z/4", "15a3": "Z/2 x Z/4"} for r in doc["rows"])


def test_scan_empty_range(capsys):
    code, doc = run_json(capsys, "scan", "--d-max", "1")
    assert code == 0 and doc["rows"] == []


def test_scan_d_max(capsys):
    code, doc = run_json(capsys, "scan", "--d-max", "30", "--p-max", "20")
    expected = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30]
    assert code == 0 and [r["d"] for r in doc["rows"]] == expected


def test_tate_period(capsys):
    code, doc = run_json(capsys, "tate-period", "15a1", "--p", "5")
    assert code == 0
    assert doc["v_q"] == 4 and doc["ratio_valuation"] == 1 and doc["precision_stable"]


@pytest.mark.parametrize("p", ["3", "7"])
def test_tate_period_rejections(capsys, p):
    assert main(["tate-period", "15a1", "--p", p]) == EXIT_USAGE


def test_output_file(capsys, tmp_path):
    target = tmp_path / "cert.json"
    code, out = run(capsys, "--json", "--output", str(target), "certify", "--d", "2", "--p", "7")
    assert code == 0 and json.loads(target.read_text()) == json.loads(out)


def test_precision_from_environment(monkeypatch):
    monkeypatch.setenv("IWASAWA_GATE_PRECISION", "60")
    cfg = make_config(build_parser().parse_args(["certify", "--d", "2", "--p", "7"]))
    assert cfg.precision == 60
    cfg = make_config(build_parser().parse_args(["--precision", "20", "certify", "--d", "2", "--p", "7"]))
    assert cfg.precision == 20
