from __future__ import annotations

import io
import json
from datetime import date

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from metricnav.cli import cli, repl_loop
from metricnav.datastore import generate_fixture, load_dataset
from metricnav.server import create_app
from metricnav.session import Session
from metricnav.timeparse import DateRange, ReferenceFrame

REF = "2020-08-27"
SPAN = "2020-06-01..2020-08-27"


@pytest.fixture(scope="module")
def client():
    dataset = generate_fixture(
        42, DateRange(date(2020, 6, 1), date(2020, 8, 27))
    )
    app = create_app(dataset, ReferenceFrame(date(2020, 8, 27)))
    return TestClient(app)


def new_session(client) -> str:
    return client.post("/api/sessions").json()["session_id"]


# -- CLI ----------------------------------------------------------------------

def test_generate_deterministic_and_reingestable(tmp_path):
    runner = CliRunner()
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        result = runner.invoke(
            cli,
            ["generate", "--seed", "42", "--span", SPAN, "--out-dir", str(out)],
        )
        assert result.exit_code == 0, result.output
    for path in sorted(out_a.iterdir()):
        assert path.read_bytes() == (out_b / path.name).read_bytes()
    dataset = load_dataset(out_a)
    assert dataset.profile.step_goal == 10000
    result = runner.invoke(cli, ["ingest", "--data-dir", str(out_a)])
    assert result.exit_code == 0
    assert "steps.csv" in result.output


def test_generate_distinct_seeds_differ(tmp_path):
    runner = CliRunner()
    runner.invoke(cli, ["generate", "--seed", "1", "--span", SPAN, "--out-dir", str(tmp_path / "s1")])
    runner.invoke(cli, ["generate", "--seed", "2", "--span", SPAN, "--out-dir", str(tmp_path / "s2")])
    assert (tmp_path / "s1/steps.csv").read_bytes() != (tmp_path / "s2/steps.csv").read_bytes()


def test_ingest_reports_data_error(tmp_path):
    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "steps.csv").write_text("date,value\n2020-08-27,notanumber\n")
    runner = CliRunner()
    result = runner.invoke(cli, ["ingest", "--data-dir", str(bad)], standalone_mode=False)
    assert result.exit_code != 0


def test_repl_start_date_flow():
    runner = CliRunner()
    script = "@start January 1\nDays I met my step goal\n:state\n:quit\n"
    result = runner.invoke(
        cli,
        ["repl", "--seed", "42", "--span", SPAN, "--ref-date", REF],
        input=script,
    )
    assert result.exit_code == 0, result.output
    assert "Start date set to 2020-01-01" in result.output
    state_line = [l for l in result.output.splitlines() if l.startswith("{")][-1]
    view = json.loads(state_line)
    assert view["range"]["start"] == "2020-01-01"
    assert view["query"]["aspect"] == "goal_ref"


def test_repl_query_bar_line(scenario_dataset):
    session = Session(scenario_dataset, ReferenceFrame(date(2020, 8, 27)))
    lines: list[str] = []
    script = io.StringIO(
        "Sleep range of this month\nDays I woke up earlier than 7:30 AM\n:quit\n"
    )
    repl_loop(session, script, lines.append)
    joined = "\n".join(lines)
    assert "Sleep Range | wake_time | lt | 07:30 | 5 days" in joined


def test_repl_builtins_undo_swipe(scenario_dataset):
    session = Session(scenario_dataset, ReferenceFrame(date(2020, 8, 27)))
    lines: list[str] = []
    script = io.StringIO(
        "Go to July 2020\n:swipe back\n:undo\n:home\n:dismiss\n:badcmd\n:quit\n"
    )
    repl_loop(session, script, lines.append)
    joined = "\n".join(lines)
    assert "Range set to 2020-07-01 to 2020-07-31" in joined
    assert "Range moved to 2020-06-01 to 2020-06-30" in joined
    assert "Undid:" in joined
    assert "unknown command" in joined


# -- HTTP ---------------------------------------------------------------------

def test_create_session_returns_state(client):
    body = client.post("/api/sessions").json()
    assert body["state"]["page"] == "home"
    assert body["state"]["reference_date"] == REF
    assert set(body["state"]["charts"]) == {
        "step_count", "resting_heart_rate", "sleep_range", "hours_slept", "weight",
    }


def test_command_endpoint_two_range(client):
    sid = new_session(client)
    body = client.post(
        f"/api/sessions/{sid}/command",
        json={"utterance": "Compare January 2018 with January 2019"},
    ).json()
    assert body["feedback"]["kind"] == "executed"
    assert body["state"]["page"] == "two_range"
    assert body["state"]["comparison"]["range_a"]["start"] == "2018-01-01"


def test_intent_endpoint_swipe(client):
    sid = new_session(client)
    client.post(
        f"/api/sessions/{sid}/intent",
        json={"type": "set_range", "range": {"start": "2020-07-01", "end": "2020-07-31"}},
    )
    body = client.post(
        f"/api/sessions/{sid}/intent", json={"type": "swipe", "direction": "back"}
    ).json()
    assert body["state"]["range"] == {"start": "2020-06-01", "end": "2020-06-30"}


def test_intent_endpoint_invalid_is_application_level(client):
    sid = new_session(client)
    body = client.post(
        f"/api/sessions/{sid}/intent",
        json={"type": "set_end_date", "date": "2020-01-01"},
    )
    assert body.status_code == 200
    assert body.json()["feedback"]["kind"] == "invalid"


def test_unknown_session_404(client):
    assert client.get("/api/sessions/deadbeef/state").status_code == 404


def test_malformed_body_400(client):
    sid = new_session(client)
    assert (
        client.post(f"/api/sessions/{sid}/command", json={"nope": 1}).status_code
        == 400
    )
    assert (
        client.post(
            f"/api/sessions/{sid}/intent", json={"type": "set_range", "range": {}}
        ).status_code
        == 400
    )
    assert (
        client.post(f"/api/sessions/{sid}/intent", json={"type": "warp"}).status_code
        == 400
    )


def test_get_endpoints_do_not_mutate(client):
    sid = new_session(client)
    before = client.get(f"/api/sessions/{sid}/state").json()
    client.get("/api/data/step_count", params={"start": "2020-06-01", "end": "2020-06-30"})
    client.get("/api/meta")
    after = client.get(f"/api/sessions/{sid}/state").json()
    assert before == after


def test_data_endpoint_matches_source_csv(client, tmp_path):
    runner = CliRunner()
    runner.invoke(cli, ["generate", "--seed", "42", "--span", SPAN, "--out-dir", str(tmp_path)])
    rows = (tmp_path / "steps.csv").read_text().splitlines()[1:]
    week_rows = [r for r in rows if "2020-08-21" <= r.split(",")[0] <= "2020-08-27"]
    body = client.get(
        "/api/data/step_count", params={"start": "2020-08-21", "end": "2020-08-27"}
    ).json()
    assert len(body["records"]) == len(week_rows)
    for record, row in zip(body["records"], week_rows):
        day, value = row.split(",")
        assert record["date"] == day
        assert record["value"] == float(value)


def test_meta_endpoint(client):
    body = client.get("/api/meta").json()
    assert body["profile"]["step_goal"] == 10000
    assert body["coverage"]["step_count"]["start"] >= "2020-06-01"


def test_session_eviction_after_idle():
    dataset = generate_fixture(5, DateRange(date(2020, 8, 1), date(2020, 8, 27)))
    now = [0.0]
    app = create_app(
        dataset,
        ReferenceFrame(date(2020, 8, 27)),
        session_ttl=1800,
        clock=lambda: now[0],
    )
    local = TestClient(app)
    sid = new_session(local)
    now[0] = 1799.0
    assert local.get(f"/api/sessions/{sid}/state").status_code == 200
    now[0] = 1799.0 + 1801.0
    assert local.get(f"/api/sessions/{sid}/state").status_code == 404
