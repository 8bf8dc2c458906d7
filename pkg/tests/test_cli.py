import hashlib
import json
import socket
import threading
import time

import pytest
from click.testing import CliRunner

from chaintrace.cli import main
from chaintrace.corpus import GroundTruthManifest


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def cli_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("clicorpus")
    result = CliRunner().invoke(
        main, ["gen-corpus", "--seed", "5", "--out", str(out), "--addresses", "15"]
    )
    assert result.exit_code == 0, result.output
    return out


@pytest.fixture(scope="module")
def run_dir(cli_corpus, tmp_path_factory):
    out = tmp_path_factory.mktemp("cli-run")
    result = CliRunner().invoke(
        main, ["run-all", "--fixtures", str(cli_corpus), "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    return out


class TestCorpusAndRunAll:
    def test_gen_corpus_layout(self, cli_corpus):
        assert (cli_corpus / "manifest.json").is_file()
        assert (cli_corpus / "queries.txt").is_file()
        assert (cli_corpus / "fixtures" / "reddit").is_dir()
        manifest = GroundTruthManifest.load(cli_corpus / "manifest.json")
        assert len(manifest.records) == 15

    def test_run_all_outputs(self, run_dir):
        assert (run_dir / "records.jsonl").is_file()
        assert "Scraping from Reddit" in (run_dir / "stats.txt").read_text()
        summary = json.loads((run_dir / "summary.json").read_text())
        assert summary["stage_counts"]["build"] == 15

    def test_run_all_deterministic(self, cli_corpus, run_dir, tmp_path, runner):
        result = runner.invoke(
            main, ["run-all", "--fixtures", str(cli_corpus), "--out", str(tmp_path)]
        )
        assert result.exit_code == 0, result.output
        first = hashlib.sha256((run_dir / "records.jsonl").read_bytes()).hexdigest()
        second = hashlib.sha256((tmp_path / "records.jsonl").read_bytes()).hexdigest()
        assert first == second

    def test_run_all_requires_queries(self, tmp_path, runner):
        fixtures = tmp_path / "bare"
        fixtures.mkdir()
        result = runner.invoke(main, ["run-all", "--fixtures", str(fixtures), "--out", str(tmp_path)])
        assert result.exit_code != 0
        assert "queries" in result.output

    def test_empty_scrape_exits_nonzero(self, tmp_path, runner):
        corpus_dir = tmp_path / "empty"
        result = runner.invoke(
            main, ["gen-corpus", "--seed", "1", "--out", str(corpus_dir), "--addresses", "0"]
        )
        assert result.exit_code == 0
        result = runner.invoke(main, [
            "scrape", "--queries", str(corpus_dir / "queries.txt"),
            "--fixtures", str(corpus_dir), "--out", str(tmp_path / "s.json"),
        ])
        assert result.exit_code == 1
        assert "no successful sightings" in result.output


class TestStagedPipeline:
    def test_staged_equals_run_all(self, cli_corpus, run_dir, tmp_path, runner):
        sightings = tmp_path / "sightings.json"
        matches = tmp_path / "matches.json"
        activity = tmp_path / "activity.json"
        records = tmp_path / "records.jsonl"
        for args in (
            ["scrape", "--queries", str(cli_corpus / "queries.txt"),
             "--fixtures", str(cli_corpus), "--out", str(sightings)],
            ["match", "--sightings", str(sightings), "--fixtures", str(cli_corpus),
             "--out", str(matches)],
            ["enrich", "--sightings", str(sightings), "--fixtures", str(cli_corpus),
             "--out", str(activity)],
            ["build", "--sightings", str(sightings), "--matches", str(matches),
             "--activity", str(activity), "--out", str(records)],
        ):
            result = runner.invoke(main, args)
            assert result.exit_code == 0, (args, result.output)
        assert records.read_bytes() == (run_dir / "records.jsonl").read_bytes()

    def test_stats_command(self, run_dir, runner):
        result = runner.invoke(main, ["stats", "--store", str(run_dir / "records.jsonl")])
        assert result.exit_code == 0
        assert "Matches of Twitter" in result.output


class TestVault:
    def test_init_seal_verify(self, tmp_path, runner):
        key_file = str(tmp_path / "vault.key")
        creds_file = str(tmp_path / "credentials.sealed")
        assert runner.invoke(main, ["vault", "init", "--key-file", key_file,
                                    "--credentials-file", creds_file]).exit_code == 0
        result = runner.invoke(main, ["vault", "seal", "reddit", "--key-file", key_file,
                                      "--credentials-file", creds_file],
                               input="super-secret-token\n")
        assert result.exit_code == 0, result.output
        assert "super-secret-token" not in (tmp_path / "credentials.sealed").read_text()
        result = runner.invoke(main, ["vault", "verify", "--key-file", key_file,
                                      "--credentials-file", creds_file])
        assert result.exit_code == 0
        assert "reddit: ok" in result.output

    def test_verify_detects_tampering(self, tmp_path, runner):
        key_file = str(tmp_path / "vault.key")
        creds_file = str(tmp_path / "credentials.sealed")
        runner.invoke(main, ["vault", "init", "--key-file", key_file,
                             "--credentials-file", creds_file])
        runner.invoke(main, ["vault", "seal", "twitter", "--key-file", key_file,
                             "--credentials-file", creds_file], input="secret\n")
        content = (tmp_path / "credentials.sealed").read_text()
        prefix, token = content.strip().split(":", 1)
        mid = len(token) // 2
        flipped = token[:mid] + ("A" if token[mid] != "A" else "B") + token[mid + 1:]
        (tmp_path / "credentials.sealed").write_text(f"{prefix}:{flipped}\n")
        result = runner.invoke(main, ["vault", "verify", "--key-file", key_file,
                                      "--credentials-file", creds_file])
        assert result.exit_code == 1

    def test_init_refuses_overwrite(self, tmp_path, runner):
        key_file = str(tmp_path / "vault.key")
        creds = str(tmp_path / "c.sealed")
        assert runner.invoke(main, ["vault", "init", "--key-file", key_file,
                                    "--credentials-file", creds]).exit_code == 0
        assert runner.invoke(main, ["vault", "init", "--key-file", key_file,
                                    "--credentials-file", creds]).exit_code != 0

    def test_seal_without_key_file(self, tmp_path, runner):
        result = runner.invoke(main, ["vault", "seal", "reddit",
                                      "--key-file", str(tmp_path / "none.key"),
                                      "--credentials-file", str(tmp_path / "c")],
                               input="x\n")
        assert result.exit_code != 0
        assert "vault init" in result.output


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="module")
def live_service(run_dir):
    import uvicorn

    from chaintrace.service import create_app
    from chaintrace.store import load

    port = _free_port()
    config = uvicorn.Config(
        create_app(load(run_dir / "records.jsonl")),
        host="127.0.0.1", port=port, log_level="error",
    )
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("service did not start")
        time.sleep(0.05)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


class TestQueryClient:
    def test_profile_round_trip(self, live_service, run_dir, runner):
        line = (run_dir / "records.jsonl").read_text().splitlines()[0]
        address = json.loads(line)["address"]
        result = runner.invoke(main, ["query", "profile", address, "--api", live_service])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["address"] == address

    def test_top_and_random(self, live_service, runner):
        result = runner.invoke(main, ["query", "top", "-n", "2", "--api", live_service])
        assert result.exit_code == 0
        assert len(json.loads(result.output)["profiles"]) == 2
        result = runner.invoke(main, ["query", "random", "-n", "2", "--seed", "4",
                                      "--api", live_service])
        assert result.exit_code == 0
        assert json.loads(result.output)["seed"] == 4

    def test_unknown_address_maps_to_error(self, live_service, runner):
        result = runner.invoke(main, ["query", "profile", "0x" + "9" * 40,
                                      "--api", live_service])
        assert result.exit_code != 0
        assert "404" in result.output

    def test_malformed_address_blocked_client_side(self, runner):
        result = runner.invoke(main, ["query", "profile", "0xZZ", "--api", "http://127.0.0.1:1"])
        assert result.exit_code != 0
        assert "malformed" in result.output
