"""Command-line entry points: server, offline log analysis, replay checks,
and a thin client for driving a live session from a script file."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from talknotes import analyzer
from talknotes.events import LogDecodeError, read_log
from talknotes.replay import ReplayError, replay_file


@click.group()
def main() -> None:
    """Think-aloud session engine tools."""


# -- server -------------------------------------------------------------------


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True, type=int)
@click.option(
    "--oracle",
    type=click.Choice(["deterministic", "remote"]),
    default="deterministic",
    show_default=True,
    help="Semantic judgment provider; 'remote' reads TALKNOTES_ORACLE_URL / _API_KEY.",
)
@click.option("--rules", "rules_path", type=click.Path(exists=True, path_type=Path), default=None,
              help="JSON file overriding the deterministic rule tables.")
@click.option("--log-dir", type=click.Path(path_type=Path), default=Path("./session-logs"),
              show_default=True, help="Directory for per-session event logs.")
@click.option("--token", default=None, help="Static auth token required from clients.")
def serve(host: str, port: int, oracle: str, rules_path: Path | None, log_dir: Path, token: str | None) -> None:
    """Run the session service."""
    import uvicorn

    from talknotes.service.app import ServiceSettings, create_app

    settings = ServiceSettings(
        log_dir=log_dir, oracle=oracle, rules_path=rules_path, token=token
    )
    uvicorn.run(create_app(settings), host=host, port=port)


# -- offline analysis ------------------------------------------------------------


@main.group()
def analyze() -> None:
    """Offline statistics over a recorded session log."""


def _load(log: Path):
    try:
        return read_log(log)
    except LogDecodeError as exc:
        raise click.ClickException(str(exc))


@analyze.command()
@click.argument("log", type=click.Path(exists=True, path_type=Path))
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of a table.")
def stats(log: Path, as_json: bool) -> None:
    """Per-session process statistics."""
    result = analyzer.session_stats(_load(log))
    record = {
        "duration_ms": result.duration_ms,
        "notes_created": result.notes_created,
        "notes_merged": result.notes_merged,
        "notes_checked": result.notes_checked,
        "tips_shown": result.tips_shown,
        "tip_responses": result.tip_responses,
        "reminders_shown": result.reminders_shown,
        "filter_applications": result.filter_applications,
    }
    if as_json:
        click.echo(json.dumps(record, indent=2))
        return
    minutes, seconds = divmod(result.duration_ms // 1000, 60)
    click.echo(f"duration             {minutes:02d}:{seconds:02d}")
    for key in list(record)[1:]:
        click.echo(f"{key:<20} {record[key]}")


@analyze.command()
@click.argument("log", type=click.Path(exists=True, path_type=Path))
@click.option("--json", "as_json", is_flag=True)
def wpm(log: Path, as_json: bool) -> None:
    """Words per minute of the final transcript."""
    events = _load(log)
    stats_ = analyzer.session_stats(events)
    if stats_.duration_ms <= 0:
        raise click.ClickException("log has no duration")
    value = analyzer.log_wpm(events)
    if as_json:
        click.echo(json.dumps({"wpm": value, "duration_ms": stats_.duration_ms}))
    else:
        click.echo(f"{value:.1f}")


@analyze.command()
@click.argument("log", type=click.Path(exists=True, path_type=Path))
@click.option(
    "--activity",
    type=click.Choice(["thinkaloud", "recap"]),
    default="thinkaloud",
    show_default=True,
)
@click.option("--json", "as_json", is_flag=True)
def classify(log: Path, activity: str, as_json: bool) -> None:
    """Engagement (think-aloud) or usage (recap) pattern for a session."""
    stats_ = analyzer.session_stats(_load(log))
    if activity == "thinkaloud":
        pattern = analyzer.classify_engagement(stats_).value
    else:
        pattern = analyzer.classify_recap(stats_).value
    if as_json:
        click.echo(json.dumps({"activity": activity, "pattern": pattern}))
    else:
        click.echo(pattern)


@analyze.command()
@click.argument("log", type=click.Path(exists=True, path_type=Path))
@click.option("-o", "--output", type=click.Path(path_type=Path), default=None,
              help="Write CSV here instead of stdout.")
def timeline(log: Path, output: Path | None) -> None:
    """CSV timeline of note/tip/reminder events."""
    csv_text = analyzer.timeline_export(_load(log))
    if output is None:
        click.echo(csv_text, nl=False)
    else:
        output.write_text(csv_text, encoding="utf-8")
        click.echo(f"wrote {output}")


# -- replay ------------------------------------------------------------------------


@main.command()
@click.argument("log", type=click.Path(exists=True, path_type=Path))
@click.option("-o", "--output", type=click.Path(path_type=Path), default=None,
              help="Write the regenerated log here.")
@click.option("--rules", "rules_path", type=click.Path(exists=True, path_type=Path), default=None)
def replay(log: Path, output: Path | None, rules_path: Path | None) -> None:
    """Re-run a recorded log through the engine with the deterministic
    oracle and verify the regenerated log matches byte-for-byte."""
    from talknotes.oracle import RuleConfig

    rules = RuleConfig.from_json_file(rules_path) if rules_path else None
    try:
        engine, regenerated = replay_file(log, rules=rules)
    except (LogDecodeError, ReplayError) as exc:
        raise click.ClickException(str(exc))
    if output is not None:
        output.write_bytes(regenerated)
    original = Path(log).read_bytes()
    if regenerated == original:
        click.echo(f"ok: {len(engine.events)} events, byte-identical")
    else:
        click.echo("MISMATCH: regenerated log differs from the recording", err=True)
        sys.exit(1)


# -- thin client ---------------------------------------------------------------------


@main.command("run-script")
@click.argument("script", type=click.Path(exists=True, path_type=Path))
@click.option("--url", default="http://127.0.0.1:8765", show_default=True)
@click.option("--token", default=None)
@click.option("--realtime/--fast", default=False, show_default=True,
              help="Sleep between messages to mimic live timing.")
def run_script(script: Path, url: str, token: str | None, realtime: bool) -> None:
    """Drive a live session from a JSONL script.

    The first line must be the session config request body; every other
    line is one websocket client message. Prints the new session id and the
    server's log export path hint when done.
    """
    import time as _time

    import httpx

    lines = [json.loads(line) for line in script.read_text(encoding="utf-8").splitlines() if line.strip()]
    if not lines:
        raise click.ClickException("empty script")
    config_body, messages = lines[0], lines[1:]
    params = {"token": token} if token else {}
    with httpx.Client(base_url=url, params=params, timeout=10.0) as client:
        response = client.post("/session", json=config_body)
        if response.status_code != 200:
            raise click.ClickException(f"open failed: {response.status_code} {response.text}")
        session_id = response.json()["session_id"]
        click.echo(f"session {session_id}")
        from websockets.sync.client import connect as ws_connect  # type: ignore[import]

        ws_url = url.replace("http", "ws", 1) + f"/session/{session_id}/stream"
        if token:
            ws_url += f"?token={token}"
        previous_t = 0
        last_fragment_text = next(
            (m["text"] for m in reversed(messages) if m.get("kind") == "fragment"), None
        )
        with ws_connect(ws_url) as ws:
            for message in messages:
                if realtime:
                    t = int(message.get("t", message.get("t_start", previous_t)))
                    _time.sleep(max(0, (t - previous_t)) / 1000.0)
                    previous_t = t
                ws.send(json.dumps(message))
            # Drain until the server has echoed the last fragment, so the
            # close below cannot race frames still being dispatched.
            if last_fragment_text is not None:
                deadline = _time.monotonic() + 5.0
                while _time.monotonic() < deadline:
                    try:
                        frame = json.loads(ws.recv(timeout=deadline - _time.monotonic()))
                    except TimeoutError:
                        break
                    if frame.get("kind") == "talktext" and frame.get("text") == last_fragment_text:
                        break
            _time.sleep(0.3)  # grace for trailing non-fragment frames
        client.post(f"/session/{session_id}/close")
        click.echo(f"closed; export: GET {url}/session/{session_id}/log")


if __name__ == "__main__":
    main()
