import json

import pytest

from modular_congruences.utils.cache import CACHE_ENV
from modular_congruences.utils.commands import (
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_USAGE,
    build_sequence,
    run,
)
from modular_congruences.utils.errors import BadParameter
from modular_congruences.utils.report import VerificationReport
from modular_congruences.utils.utils import FAMILIES


def passing_report(family: str = "demo") -> VerificationReport:
    report = VerificationReport(family, {})
    report.add("ok", True)
    return report


@pytest.fixture
def calls(monkeypatch):
    recorded = []

    def mock_run_family(family, params):
        recorded.append((family, params))
        return [passing_report(family)]

    monkeypatch.setattr(
        "modular_congruences.utils.commands.run_family", mock_run_family
    )
    return recorded


def test_expand_f1_csv(capsys):
    assert run(["expand", "--form", "f1", "--terms", "10", "--format", "csv"]) == 0
    assert capsys.readouterr().out == "1,-4,0,16,-14,0,0,-64,81\n"


def test_expand_lambda_text(capsys):
    assert run(["expand", "--form", "lambda", "--terms", "5"]) == EXIT_PASS
    assert capsys.readouterr().out == "q - 8q^2 + 44q^3 - 192q^4 + O(q^5)\n"


def test_expand_reduced(capsys):
    args = ["expand", "--form", "f1", "--terms", "5", "--mod", "3", "--format", "csv"]
    assert run(args) == EXIT_PASS
    assert capsys.readouterr().out == "1,2,0,1\n"


def test_expand_json(capsys):
    assert run(["expand", "--form", "h:1", "--terms", "4", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {"name": "h", "n": 1, "prec": 4, "coeffs": ["0", "0", "1", "-4"]}


def test_expand_sequence(capsys):
    args = ["expand", "--sequence", "A:3", "--terms", "5", "--format", "csv"]
    assert run(args) == EXIT_PASS
    assert capsys.readouterr().out == "1,12,156,2128,29916\n"


def test_expand_sequence_text(capsys):
    assert run(["expand", "--sequence", "aperyB", "--terms", "3"]) == EXIT_PASS
    assert capsys.readouterr().out.splitlines() == [
        "aperyB(0) = 1",
        "aperyB(1) = 3",
        "aperyB(2) = 19",
    ]


@pytest.mark.parametrize(
    "args",
    [
        ["expand", "--form", "bogus", "--terms", "5"],
        ["expand", "--form", "f:1", "--terms", "5"],
        ["expand", "--form", "f1", "--terms", "auto"],
        ["expand", "--sequence", "Q:1", "--terms", "5"],
        ["expand", "--form", "f1", "--terms", "0"],
        ["expand", "--form", "f1"],
        ["verify", "theorem9"],
        ["verify", "theorem1", "--prime-max", "50", "--terms", "10"],
        ["verify", "intro-apery", "--m-max", "2", "--prime-max", "10"],
        ["cornacchia", "7"],
        ["cornacchia", "15"],
    ],
)
def test_usage_errors(args):
    assert run(args) == EXIT_USAGE


def test_help_exits_cleanly():
    assert run(["--help"]) == EXIT_PASS


def test_build_sequence():
    assert build_sequence("C:1", 4).values == (1, 12, 156, 2128)
    assert build_sequence("D3", 3).values == (0, 1, -4)
    with pytest.raises(BadParameter):
        build_sequence("A:x", 4)


def test_cornacchia(capsys):
    assert run(["cornacchia", "13"]) == EXIT_PASS
    assert capsys.readouterr().out == "13 = 2^2 + 3^2\n"


def test_verify_identity(capsys):
    assert run(["verify", "identity.lemma5", "--terms", "50"]) == EXIT_PASS
    assert capsys.readouterr().out == "identity.lemma5: pass=1 fail=0\n"


def test_verify_json(capsys):
    args = ["verify", "theorem2b", "--prime-max", "20", "--format", "json"]
    assert run(args) == EXIT_PASS
    payload = json.loads(capsys.readouterr().out)
    assert payload["family"] == "theorem2b"
    assert payload["summary"] == {"pass": 18, "fail": 0}


def test_verify_several_n(capsys):
    args = ["verify", "cor2", "--n", "1", "2", "--prime-max", "30"]
    assert run(args) == EXIT_PASS
    assert capsys.readouterr().out.splitlines() == [
        "cor2: pass=9 fail=0",
        "cor2: pass=9 fail=0",
    ]


def test_verify_csv(capsys):
    args = ["verify", "example", "--prime-max", "7", "--format", "csv"]
    assert run(args) == EXIT_PASS
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "family,desc,status,witness,modulus"
    assert len(lines) == 1 + 3 * 3


def test_verify_failure_exit_code(monkeypatch, capsys):
    failing = VerificationReport("theorem1", {"n": 1})
    failing.add("a_1(5) = 0", False, (5, 1))
    monkeypatch.setattr(
        "modular_congruences.utils.commands.run_family",
        lambda family, params: [failing],
    )
    assert run(["verify", "theorem1"]) == EXIT_FAIL
    assert "[FAIL] a_1(5) = 0 witness=(5 1) mod 0" in capsys.readouterr().out


def test_verify_all(calls):
    assert run(["verify", "all"]) == EXIT_PASS
    assert [family for family, _ in calls] == list(FAMILIES)
    params = dict(calls)
    assert params["theorem2a"]["prime_max"] == 300
    assert params["cor1.eq3"]["prime_max"] == 50
    assert params["theorem1"]["n"] == [1, 2, 3, 4]


def test_verify_overrides(calls):
    args = ["verify", "cor1.eq3", "--prime-max", "13", "--m-max", "1", "--r-max", "1"]
    assert run(args) == EXIT_PASS
    assert calls == [
        ("cor1.eq3", {"prime_min": 5, "prime_max": 13, "m_max": 1, "r_max": 1})
    ]


def test_verify_identity_terms(calls):
    assert run(["verify", "identity.eq1", "--terms", "30"]) == EXIT_PASS
    assert calls == [("identity.eq1", {"terms": 30})]


def test_verify_config_file(calls, tmp_path):
    config = tmp_path / "bounds.yaml"
    config.write_text("families:\n  theorem2a:\n    prime_max: 11\n")
    assert run(["--config", str(config), "verify", "theorem2a"]) == EXIT_PASS
    assert calls == [("theorem2a", {"prime_max": 11})]


def test_missing_config_file(calls, tmp_path):
    args = ["--config", str(tmp_path / "missing.yaml"), "verify", "theorem2a"]
    assert run(args) == EXIT_USAGE


def test_hecke(capsys):
    args = ["hecke", "--form", "psi", "--prime-max", "7", "--range", "3"]
    assert run(args) == EXIT_PASS
    assert capsys.readouterr().out == "hecke.psi: pass=12 fail=0\n"


def test_hecke_empty_range(capsys):
    args = ["hecke", "--form", "f1", "--prime-max", "3", "--range", "0"]
    assert run(args) == EXIT_PASS
    assert capsys.readouterr().out == "hecke.f1: pass=0 fail=0\n"


def test_verify_output_is_repeatable(capsys):
    args = ["verify", "cor1.eq1", "--prime-max", "60", "--format", "json"]
    assert run(args) == EXIT_PASS
    first = capsys.readouterr().out
    assert run(args) == EXIT_PASS
    assert capsys.readouterr().out == first
    assert json.loads(first)["family"] == "cor1.eq1"


def test_cache_roundtrip(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    (tmp_path / "notes.txt").write_text("keep me")

    assert run(["cache", "write", "--form", "h:1", "--terms", "20"]) == EXIT_PASS
    assert (tmp_path / "h-1.json").exists()

    assert run(["cache", "read", "--form", "h:1", "--terms", "4"]) == EXIT_PASS
    assert run(["cache", "read", "--form", "h:1", "--terms", "30"]) == EXIT_USAGE
    assert run(["cache", "read", "--form", "f1"]) == EXIT_USAGE

    assert run(["cache", "clear"]) == EXIT_PASS
    assert not (tmp_path / "h-1.json").exists()
    assert (tmp_path / "notes.txt").exists()

    out = capsys.readouterr().out.splitlines()
    assert out[0] == str(tmp_path / "h-1.json")
    assert out[1] == "q^2 - 4q^3 + O(q^4)"
    assert out[-1] == f"removed 1 files from {tmp_path}"


def test_cache_dir_flag_wins(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "env"))
    args = ["cache", "write", "--dir", str(tmp_path), "--form", "psi", "--terms", "8"]
    assert run(args) == EXIT_PASS
    assert (tmp_path / "psi.json").exists()
    assert not (tmp_path / "env").exists()


def test_cache_needs_a_directory(monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)
    assert run(["cache", "clear"]) == EXIT_USAGE


def test_cache_write_needs_terms(tmp_path):
    assert run(["cache", "write", "--dir", str(tmp_path), "--form", "f1"]) == 2


def test_corrupt_cache_entry(tmp_path, capsys):
    (tmp_path / "f1.json").write_text("{not json")
    args = ["expand", "--form", "f1", "--terms", "10", "--cache", str(tmp_path)]
    assert run(args + ["--format", "csv"]) == EXIT_PASS
    assert capsys.readouterr().out == "1,-4,0,16,-14,0,0,-64,81\n"
    assert run(["cache", "read", "--dir", str(tmp_path), "--form", "f1"]) == EXIT_USAGE


def test_expand_reads_the_cache(tmp_path, monkeypatch, mocker, capsys):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert run(["cache", "write", "--form", "f1", "--terms", "12"]) == EXIT_PASS
    build = mocker.patch("modular_congruences.utils.cache.build_form")
    args = ["expand", "--form", "f1", "--terms", "10", "--format", "csv"]
    assert run(args) == EXIT_PASS
    build.assert_not_called()
    assert capsys.readouterr().out.splitlines()[-1] == "1,-4,0,16,-14,0,0,-64,81"


def test_audit_is_committed(mocker):
    audit = mocker.MagicMock()
    mocker.patch("modular_congruences.utils.commands.create_audit", return_value=audit)
    assert run(["-ap", "audits", "verify", "identity.lemma5", "--terms", "20"]) == 0
    assert audit.add.call_count == 2
    audit.commit_audit.assert_called_once()


def test_audit_records_errors(mocker):
    audit = mocker.MagicMock()
    mocker.patch("modular_congruences.utils.commands.create_audit", return_value=audit)
    assert run(["-ap", "audits", "cornacchia", "7"]) == EXIT_USAGE
    audit.add_important.assert_called_once()
    audit.commit_audit.assert_called_once()


def test_audit_files_written(tmp_path):
    args = ["-ap", str(tmp_path), "verify", "theorem2b", "--prime-max", "10"]
    assert run(args) == EXIT_PASS
    assert len(list(tmp_path.glob("modcongLog-*.docx"))) == 1
    assert len(list(tmp_path.glob("modcongLog-*.xlsx"))) == 1
