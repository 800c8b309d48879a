import json
from pathlib import Path

from click.testing import CliRunner

from talknotes.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
LONG = str(FIXTURES / "session_long.events.jsonl")


def test_analyze_stats_table():
    result = CliRunner().invoke(main, ["analyze", "stats", LONG])
    assert result.exit_code == 0, result.output
    assert "notes_created" in result.output


def test_analyze_stats_json():
    result = CliRunner().invoke(main, ["analyze", "stats", LONG, "--json"])
    assert result.exit_code == 0
    stats = json.loads(result.output)
    assert stats["notes_created"] == 52
    assert stats["notes_merged"] == 27


def test_analyze_wpm():
    result = CliRunner().invoke(main, ["analyze", "wpm", LONG, "--json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["wpm"] > 0


def test_analyze_classify_both_activities():
    thinkaloud = CliRunner().invoke(main, ["analyze", "classify", LONG, "--activity=thinkaloud"])
    assert thinkaloud.exit_code == 0 and thinkaloud.output.strip() in {
        "note_explorer",
        "tip_driven_elaborator",
        "heavy_integrator",
        "documentation_only",
    }
    recap = CliRunner().invoke(main, ["analyze", "classify", LONG, "--activity=recap"])
    assert recap.exit_code == 0 and "recap" in recap.output


def test_analyze_timeline(tmp_path):
    out = tmp_path / "timeline.csv"
    result = CliRunner().invoke(main, ["analyze", "timeline", LONG, "-o", str(out)])
    assert result.exit_code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t,event_kind,detail"
    assert len(lines) > 50


def test_replay_verifies_fixture(tmp_path):
    out = tmp_path / "regen.jsonl"
    result = CliRunner().invoke(main, ["replay", LONG, "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert "byte-identical" in result.output
    assert out.read_bytes() == Path(LONG).read_bytes()


def test_replay_detects_tampering(tmp_path):
    tampered = tmp_path / "tampered.events.jsonl"
    lines = Path(LONG).read_text().splitlines(keepends=True)
    index, victim = next(
        (i, record)
        for i, record in enumerate(map(json.loads, lines))
        if record["kind"] == "note_created"
    )
    victim["payload"]["transcript"] = "something else entirely"
    lines[index] = json.dumps(victim, sort_keys=True, separators=(",", ":")) + "\n"
    tampered.write_text("".join(lines))
    result = CliRunner().invoke(main, ["replay", str(tampered)])
    assert result.exit_code == 1


def test_corrupt_log_reports_line():
    result = CliRunner().invoke(main, ["analyze", "stats", __file__])
    assert result.exit_code != 0
    assert "line 1" in result.output
