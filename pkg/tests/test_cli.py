import json
import pytest
from click.testing import CliRunner
from main import build_cli
from plugins.harness.plugin import Plugin as HarnessPlugin


@pytest.fixture
def cli(monkeypatch):
    monkeypatch.setattr(HarnessPlugin, "_config", None)
    return build_cli()


def run(cli, *args):
    return CliRunner().invoke(cli, list(args))


def test_commands_are_registered(cli):
    assert {
        "verify", "census", "all-fixtures", "run-checks", "groupoid", "res", "ext",
        "transport", "adjunction", "recoverable", "identities", "globalize", "skew",
        "invariants", "trace", "galois", "morita", "equivalence",
    } <= set(cli.commands)
    result = run(cli, "--help")
    assert result.exit_code == 0
    assert "default_p = 3" in result.output


def test_recoverable_answers_negatively(cli):
    result = run(cli, "recoverable", "--fixture", "FX-B2")
    assert result.exit_code == 0
    assert "not recoverable; 4/4 (base,transversal) pairs fail" in result.output


def test_verify_gamma(cli):
    result = run(cli, "verify", "--fixture", "FX-GAMMA")
    assert result.exit_code == 0
    assert result.output.startswith("FX-GAMMA: pass")


def test_equivalence_json(cli):
    result = run(cli, "equivalence", "--fixture", "FX-GAMMA", "--format", "json")
    assert result.exit_code == 0
    out = json.loads(result.stdout)
    assert out["schema"] == "partial-actions/1"
    assert out["command"] == "equivalence"
    assert out["facts"]["agree"] is True


def test_galois_without_certificate_exits_zero(cli):
    result = run(cli, "galois", "--fixture", "FX-DAT")
    assert result.exit_code == 0
    assert "exists: False" in result.output


def test_unknown_fixture(cli):
    result = run(cli, "verify", "--fixture", "FX-NOPE")
    assert result.exit_code == 2
    assert "UnknownFixture" in result.output


def test_subject_must_be_given_once(cli, tmp_path):
    assert run(cli, "verify").exit_code == 2
    path = tmp_path / "a.scn"
    path.write_text("name a\n", encoding="utf-8")
    assert run(cli, "verify", "--fixture", "FX-DAT", "--file", str(path)).exit_code == 2


def test_bad_files(cli, tmp_path):
    assert run(cli, "verify", "--file", str(tmp_path / "missing.scn")).exit_code == 2
    path = tmp_path / "bad.scn"
    path.write_text("name a$\n", encoding="utf-8")
    result = run(cli, "verify", "--file", str(path), "--format", "json")
    assert result.exit_code == 2
    out = json.loads(result.stdout)
    assert out["error"] == "ParseError"
    assert out["witness"] == {"line": 1, "column": 7}


def test_hypotheses_failure_exits_one(cli):
    result = run(cli, "equivalence", "--fixture", "FX-B2")
    assert result.exit_code == 1
    assert "HypothesesNotMet" in result.output


def test_all_fixtures(cli):
    result = run(cli, "all-fixtures")
    assert result.exit_code == 0, result.output
    assert "[xx]" not in result.output


def test_census_actions_capped(cli):
    result = run(cli, "census", "--fixture", "FX-DAT", "--actions", "--max-census", "50")
    assert result.exit_code == 0
    assert "truncated: True" in result.output
    assert "cap: 50" in result.output


@pytest.mark.parametrize("fixture", ["FX-DAT", "FX-GAMMA", "FX-GLOB"])
def test_run_checks(cli, fixture):
    result = run(cli, "run-checks", "--fixture", fixture)
    assert result.exit_code == 0, result.output


def test_run_checks_needs_checks(cli, tmp_path):
    path = tmp_path / "plain.scn"
    path.write_text("ring atoms=[u]; groupoid cyclic n=1\n", encoding="utf-8")
    result = run(cli, "run-checks", "--file", str(path))
    assert result.exit_code == 2
    assert "lists no checks" in result.output


def test_file_uses_configured_prime(monkeypatch, tmp_path):
    from framework.plugin import BasePlugin

    config_dir = BasePlugin.config_dir
    config_dir.mkdir(parents=True)
    (config_dir / "harness.yaml").write_text("default_p: 5\noutput_format: json\n", encoding="utf-8")
    monkeypatch.setattr(HarnessPlugin, "_config", None)
    cli = build_cli()
    path = tmp_path / "swap.scn"
    path.write_text(
        "ring atoms=[u, v]; groupoid cyclic n=2; action { e = [u, v]; s : [u |-> v, v |-> u] }\n",
        encoding="utf-8",
    )
    result = run(cli, "verify", "--file", str(path))
    assert result.exit_code == 0
    assert json.loads(result.stdout)["ok"] is True


def test_invalid_config_is_rejected(monkeypatch):
    from framework.plugin import BasePlugin

    BasePlugin.config_dir.mkdir(parents=True)
    (BasePlugin.config_dir / "harness.yaml").write_text("output_format: xml\n", encoding="utf-8")
    monkeypatch.setattr(HarnessPlugin, "_config", None)
    with pytest.raises(ValueError, match="output_format"):
        build_cli()


def test_equivalence_over_all_transversals(cli):
    result = run(cli, "equivalence", "--fixture", "FX-DAT", "--all-transversals")
    assert result.exit_code == 0, result.output
    assert "hypotheses-not-met: gd" in result.output
    assert "[ok] transversal-independent" in result.output
