"""Command-line interface.

Pipeline commands (gen-corpus, scrape, match, enrich, build, run-all,
stats) operate on local fixtures and files. ``serve`` starts the query
API; the ``query`` group is a thin HTTP client for a running service.
Stage commands exit nonzero when they produce zero successful items.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click
import requests

from . import __version__
from .address import AddressError, parse_address
from .config import AppConfig
from .corpus import CorpusParams, gen_corpus
from .pipeline import (
    AccountActivity,
    AddressSighting,
    MatchedTwitter,
    TwitterMatch,
    build_records,
    compute_stats,
    enrich_activity,
    extract_pii,
    match_twitter,
    render_stats,
    run_pipeline,
    scrape_reddit,
)
from .sources import EtherscanClient, RedditClient, TwitterClient
from .store import commit, load
from .vault import CredentialSet, MissingKeyFile, VaultError, VaultKey, unseal

DEFAULT_KEY_FILE = "vault.key"
DEFAULT_CREDENTIALS_FILE = "credentials.sealed"


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def _read_queries(path: Path) -> list[str]:
    return [line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def _load_config(config_path: str | None, fixtures: str | None) -> AppConfig:
    config = AppConfig.load(config_path)
    if fixtures:
        root = Path(fixtures)
        config.transport_mode = "replay"
        config.fixture_root = root / "fixtures" if (root / "fixtures").is_dir() else root
    return config


def _fail_if_empty(count: int, what: str) -> None:
    if count == 0:
        click.echo(f"error: no successful {what}", err=True)
        sys.exit(1)


@click.group()
@click.version_option(version=__version__, prog_name="chaintrace")
def main() -> None:
    """Trace crypto addresses from social posts to linked identities."""


# --- corpus ------------------------------------------------------------------

@main.command("gen-corpus")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--params", "params_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--addresses", "n_addresses", type=int, default=None,
              help="Override the number of planted addresses.")
def gen_corpus_cmd(seed: int, out_dir: str, params_file: str | None, n_addresses: int | None) -> None:
    """Generate a synthetic fixture corpus with a ground-truth manifest."""
    data = {}
    if params_file:
        data = json.loads(Path(params_file).read_text(encoding="utf-8"))
    data["seed"] = seed
    if n_addresses is not None:
        data["n_addresses"] = n_addresses
    params = CorpusParams.from_json_dict(data)
    manifest = gen_corpus(params, out_dir)
    matched = sum(1 for r in manifest.records if r["twitter"])
    dead = sum(1 for r in manifest.records if r["status"] == "dead")
    click.echo(
        f"wrote corpus to {out_dir}: {len(manifest.records)} addresses, "
        f"{matched} twitter-matched, {dead} dead"
    )


# --- pipeline stages ----------------------------------------------------------

@main.command()
@click.option("--queries", "queries_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--fixtures", type=click.Path(exists=True, file_okay=False),
              help="Replay fixtures directory (corpus dir or fixture root).")
@click.option("--out", "out_file", default="sightings.json", show_default=True)
@click.option("--limit", type=int, default=None, help="Posts per query.")
@click.option("--skip-post-bodies", is_flag=True, help="Scan comments only.")
def scrape(queries_file: str, config_path: str | None, fixtures: str | None,
           out_file: str, limit: int | None, skip_post_bodies: bool) -> None:
    """Search Reddit and collect address sightings."""
    config = _load_config(config_path, fixtures)
    transport = config.build_transport()
    outcome = scrape_reddit(
        _read_queries(Path(queries_file)),
        RedditClient(transport),
        limit if limit is not None else config.scrape_limit,
        include_post_bodies=config.include_post_bodies and not skip_post_bodies,
    )
    _write_json(Path(out_file), {
        "sightings": [s.to_json_dict() for s in outcome.sightings],
        "reddit_users": sorted(outcome.reddit_users),
        "errors": [e.to_json_dict() for e in outcome.errors],
    })
    click.echo(f"{len(outcome.sightings)} sightings from {len(outcome.reddit_users)} users "
               f"({len(outcome.errors)} errors) -> {out_file}")
    _fail_if_empty(len(outcome.sightings), "sightings")


def _addresses_from_sightings(path: Path) -> list:
    data = json.loads(path.read_text(encoding="utf-8"))
    return sorted({parse_address(s["address"]) for s in data["sightings"]})


@main.command()
@click.option("--sightings", "sightings_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--fixtures", type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_file", default="matches.json", show_default=True)
def match(sightings_file: str, config_path: str | None, fixtures: str | None, out_file: str) -> None:
    """Find Twitter posts carrying the scraped addresses."""
    config = _load_config(config_path, fixtures)
    transport = config.build_transport()
    outcome = match_twitter(
        _addresses_from_sightings(Path(sightings_file)),
        TwitterClient(transport),
        config.build_governor(),
    )
    _write_json(Path(out_file), {
        "matches": {
            addr.canonical: MatchedTwitter(
                m.profile, extract_pii(m.profile.description), m.post_id
            ).to_json_dict()
            for addr, m in sorted(outcome.matches.items())
        },
        "errors": [e.to_json_dict() for e in outcome.errors],
    })
    click.echo(f"{len(outcome.matches)} matches ({len(outcome.errors)} errors) -> {out_file}")
    _fail_if_empty(len(outcome.matches), "matches")


@main.command()
@click.option("--sightings", "sightings_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--fixtures", type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_file", default="activity.json", show_default=True)
def enrich(sightings_file: str, config_path: str | None, fixtures: str | None, out_file: str) -> None:
    """Fetch balances and transaction history for scraped addresses."""
    config = _load_config(config_path, fixtures)
    transport = config.build_transport()
    activity, errors = enrich_activity(
        _addresses_from_sightings(Path(sightings_file)),
        EtherscanClient(transport),
    )
    _write_json(Path(out_file), {
        "activity": {addr.canonical: act.to_json_dict() for addr, act in sorted(activity.items())},
        "errors": [e.to_json_dict() for e in errors],
    })
    click.echo(f"{len(activity)} accounts enriched ({len(errors)} errors) -> {out_file}")
    _fail_if_empty(len(activity), "enrichments")


@main.command()
@click.option("--sightings", "sightings_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--matches", "matches_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--activity", "activity_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_file", default="records.jsonl", show_default=True)
def build(sightings_file: str, matches_file: str, activity_file: str, out_file: str) -> None:
    """Join staged outputs into the record store."""
    sightings = [
        AddressSighting.from_json_dict(s)
        for s in json.loads(Path(sightings_file).read_text(encoding="utf-8"))["sightings"]
    ]
    matches_data = json.loads(Path(matches_file).read_text(encoding="utf-8"))["matches"]
    twitter_map = {}
    for canonical, doc in matches_data.items():
        matched = MatchedTwitter.from_json_dict(doc)
        twitter_map[parse_address(canonical)] = TwitterMatch(matched.profile, matched.post_id)
    activity_data = json.loads(Path(activity_file).read_text(encoding="utf-8"))["activity"]
    activity_map = {
        parse_address(canonical): AccountActivity.from_json_dict(doc)
        for canonical, doc in activity_data.items()
    }
    records = build_records(sightings, twitter_map, activity_map)
    commit(records, out_file)
    click.echo(f"{len(records)} records -> {out_file}")
    _fail_if_empty(len(records), "records")


@main.command()
@click.option("--store", "store_file", required=True, type=click.Path(exists=True, dir_okay=False))
def stats(store_file: str) -> None:
    """Print the summary tables for a committed record store."""
    records = load(store_file).records
    click.echo(render_stats(compute_stats(records)), nl=False)


@main.command("run-all")
@click.option("--fixtures", required=True, type=click.Path(exists=True, file_okay=False),
              help="Corpus directory (with fixtures/ and queries.txt) or a bare fixture root.")
@click.option("--out", "out_dir", default=".", show_default=True, type=click.Path(file_okay=False))
@click.option("--queries", "queries_file", type=click.Path(exists=True, dir_okay=False),
              help="Defaults to queries.txt inside the fixtures directory.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--limit", type=int, default=None, help="Posts per query.")
def run_all(fixtures: str, out_dir: str, queries_file: str | None,
            config_path: str | None, limit: int | None) -> None:
    """Scrape, match, enrich, build the store, and report stats in one go."""
    config = _load_config(config_path, fixtures)
    if queries_file is None:
        candidate = Path(fixtures) / "queries.txt"
        if not candidate.is_file():
            raise click.UsageError("no --queries given and no queries.txt in the fixtures directory")
        queries_file = str(candidate)
    transport = config.build_transport()
    result = run_pipeline(
        _read_queries(Path(queries_file)),
        RedditClient(transport),
        TwitterClient(transport),
        EtherscanClient(transport),
        config.build_governor(),
        limit_per_query=limit if limit is not None else config.scrape_limit,
        include_post_bodies=config.include_post_bodies,
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    commit(result.records, out / "records.jsonl")
    rendered = render_stats(result.stats)
    (out / "stats.txt").write_text(rendered, encoding="utf-8")
    _write_json(out / "summary.json", {
        "stage_counts": result.stage_counts,
        "stats": result.stats.to_json_dict(),
        "reddit_users": sorted(result.reddit_users),
        "errors": [e.to_json_dict() for e in result.errors],
    })
    click.echo(rendered, nl=False)
    click.echo(f"wrote {out / 'records.jsonl'}")
    if result.failed_stages:
        click.echo(f"error: stages with zero successful items: {', '.join(result.failed_stages)}", err=True)
        sys.exit(1)


# --- service -------------------------------------------------------------------

@main.command()
@click.option("--store", "store_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--redact", is_flag=True, help="Mask counterparty addresses and PII in responses.")
@click.option("--tail-mask-len", type=int, default=2, show_default=True)
@click.option("--cors-origin", "cors_origins", multiple=True,
              help="Allowed CORS origin (repeatable; default *).")
def serve(store_file: str, host: str, port: int, redact: bool,
          tail_mask_len: int, cors_origins: tuple[str, ...]) -> None:
    """Serve the query API over a committed record store."""
    import uvicorn

    from .service import RedactionPolicy, create_app

    app = create_app(
        load(store_file),
        RedactionPolicy(enabled=redact, tail_mask_len=tail_mask_len),
        cors_origins=list(cors_origins) or None,
    )
    uvicorn.run(app, host=host, port=port, log_level="info")


# --- vault ----------------------------------------------------------------------

@main.group()
def vault() -> None:
    """Manage sealed API credentials."""


def _key_option(func):
    return click.option(
        "--key-file", default=DEFAULT_KEY_FILE, show_default=True,
        envvar="CHAINTRACE_KEY_FILE",
    )(func)


def _credentials_option(func):
    return click.option(
        "--credentials-file", default=DEFAULT_CREDENTIALS_FILE, show_default=True,
    )(func)


@vault.command("init")
@_key_option
@_credentials_option
@click.option("--force", is_flag=True, help="Overwrite an existing key file.")
def vault_init(key_file: str, credentials_file: str, force: bool) -> None:
    """Generate a fresh key file and an empty credentials file."""
    key_path = Path(key_file)
    if key_path.exists() and not force:
        raise click.UsageError(f"{key_file} exists; pass --force to overwrite")
    VaultKey.generate().save(key_path)
    Path(credentials_file).write_text("", encoding="ascii")
    click.echo(f"wrote {key_file} and {credentials_file}")


@vault.command("seal")
@click.argument("source_id")
@_key_option
@_credentials_option
def vault_seal(source_id: str, key_file: str, credentials_file: str) -> None:
    """Seal a secret (read from stdin) for SOURCE_ID."""
    try:
        key = VaultKey.load(key_file)
    except MissingKeyFile as exc:
        raise click.ClickException(str(exc))
    secret = click.get_text_stream("stdin").read().rstrip("\n")
    if not secret:
        raise click.UsageError("empty secret on stdin")
    creds_path = Path(credentials_file)
    creds = CredentialSet.load(creds_path, key) if creds_path.is_file() else CredentialSet()
    creds.set(source_id, secret)
    creds.save(creds_path, key, now=int(time.time()))
    click.echo(f"sealed secret for {source_id!r} -> {credentials_file}")


@vault.command("verify")
@_key_option
@_credentials_option
def vault_verify(key_file: str, credentials_file: str) -> None:
    """Check that every sealed credential unseals under the key file."""
    try:
        key = VaultKey.load(key_file)
    except MissingKeyFile as exc:
        raise click.ClickException(str(exc))
    creds_path = Path(credentials_file)
    if not creds_path.is_file():
        raise click.ClickException(f"{credentials_file} not found")
    failures = 0
    for lineno, line in enumerate(creds_path.read_text(encoding="ascii").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        source_id, _, token = line.partition(":")
        try:
            unseal(token, key)
            click.echo(f"{source_id}: ok")
        except VaultError as exc:
            failures += 1
            click.echo(f"{source_id}: FAILED ({exc})", err=True)
    if failures:
        sys.exit(1)


# --- thin query client ------------------------------------------------------------

@main.group()
def query() -> None:
    """Query a running chaintrace service."""


_api_option = click.option("--api", default="http://127.0.0.1:8000", show_default=True,
                           help="Base URL of the running service.")


def _client_get(url: str, params: dict | None = None) -> None:
    try:
        response = requests.get(url, params=params, timeout=30)
    except requests.RequestException as exc:
        raise click.ClickException(f"request failed: {exc}")
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise click.ClickException(f"HTTP {response.status_code}: {detail}")
    click.echo(json.dumps(response.json(), indent=2, sort_keys=True))


@query.command("profile")
@click.argument("address")
@_api_option
def query_profile(address: str, api: str) -> None:
    try:
        parse_address(address.lower())
    except AddressError as exc:
        raise click.ClickException(f"malformed address: {exc}")
    _client_get(f"{api}/api/address/{address}")


@query.command("transactions")
@click.argument("address")
@_api_option
def query_transactions(address: str, api: str) -> None:
    _client_get(f"{api}/api/address/{address}/transactions")


@query.command("top")
@click.option("-n", type=int, default=3, show_default=True)
@_api_option
def query_top(n: int, api: str) -> None:
    _client_get(f"{api}/api/top", {"n": n})


@query.command("random")
@click.option("-n", type=int, default=4, show_default=True)
@click.option("--seed", type=int, default=None)
@_api_option
def query_random(n: int, seed: int | None, api: str) -> None:
    params = {"n": n}
    if seed is not None:
        params["seed"] = seed
    _client_get(f"{api}/api/random", params)


if __name__ == "__main__":
    main()
