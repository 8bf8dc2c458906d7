"""The transport seam between connectors and the outside world.

Every logical request has one canonical string form (method, path,
sorted query params — credentials excluded). The replay transport keys
on-disk fixtures by the SHA-256 of exactly that form, so everything
above this seam is identical in live and replay mode. Replay mode never
opens a socket.

Fixture layout: ``<root>/<source>/<sha256(canonical)>.json``, one JSON
document per request, human-diffable. Live mode translates the
canonical request into the platform's real endpoint, injects
credentials, and normalizes the platform payload into the same document
shape the fixtures use.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Callable
from urllib.parse import quote, urlencode

import requests

__all__ = [
    "AuthFailure",
    "CanonicalRequest",
    "ConnectorError",
    "LiveTransport",
    "MalformedFixture",
    "MissingFixture",
    "NetworkError",
    "RateLimited",
    "ReplayTransport",
    "Transport",
]


class ConnectorError(Exception):
    """Base class for connector/transport failures."""


class AuthFailure(ConnectorError):
    pass


class NetworkError(ConnectorError):
    pass


class RateLimited(ConnectorError):
    pass


class MissingFixture(ConnectorError):
    pass


class MalformedFixture(ConnectorError):
    pass


class CanonicalRequest:
    """Method + path + sorted query params; the replay fixture key.

    Credentials are never part of a canonical request: live transports
    inject them at send time, so fixture names, logs, and error
    messages cannot leak them.
    """

    def __init__(self, method: str, path: str, params: dict[str, str] | None = None) -> None:
        self.method = method.upper()
        self.path = path
        self.params = tuple(sorted((params or {}).items()))

    def canonical(self) -> str:
        if not self.params:
            return f"{self.method} {self.path}"
        query = urlencode(self.params, quote_via=quote)
        return f"{self.method} {self.path}?{query}"

    def fixture_name(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest() + ".json"

    def __repr__(self) -> str:
        return f"CanonicalRequest({self.canonical()!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CanonicalRequest):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())


class Transport:
    """Interface: resolve a canonical request to a response document."""

    mode: str

    def get(self, source: str, request: CanonicalRequest) -> dict[str, Any]:
        raise NotImplementedError


class ReplayTransport(Transport):
    """Answers requests from on-disk fixtures; fully deterministic."""

    mode = "replay"

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)

    def fixture_path(self, source: str, request: CanonicalRequest) -> Path:
        return self.root / source / request.fixture_name()

    def get(self, source: str, request: CanonicalRequest) -> dict[str, Any]:
        path = self.fixture_path(source, request)
        if not path.is_file():
            raise MissingFixture(f"no fixture for {request.canonical()!r} (expected {path})")
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise MalformedFixture(f"{path}: not valid JSON: {exc}") from exc
        if not isinstance(document, dict):
            raise MalformedFixture(f"{path}: fixture must be a JSON object")
        return document


def write_fixture(root: str | Path, source: str, request: CanonicalRequest, document: dict[str, Any]) -> Path:
    """Write one replay fixture; used by the corpus generator."""
    path = Path(root) / source / request.fixture_name()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return path


# --- live mode -------------------------------------------------------------

REDDIT_DEFAULT_BASE = "https://www.reddit.com"
TWITTER_DEFAULT_BASE = "https://api.twitter.com"
ETHERSCAN_DEFAULT_BASE = "https://api.etherscan.io"


def _epoch(value: Any) -> int:
    if isinstance(value, (int, float)):
        return int(value)
    if isinstance(value, str):
        if value.isdigit():  # etherscan-style decimal epoch
            return int(value)
        # Twitter v2 style: 2022-01-01T00:00:00.000Z
        from datetime import datetime, timezone

        text = value.replace("Z", "+00:00")
        dt = datetime.fromisoformat(text)
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return int(dt.timestamp())
    raise ValueError(f"cannot interpret timestamp {value!r}")


def normalize_reddit_search(payload: dict[str, Any], request: CanonicalRequest) -> dict[str, Any]:
    posts = []
    for child in payload.get("data", {}).get("children", []):
        if child.get("kind") != "t3":
            continue
        d = child["data"]
        posts.append(
            {
                "id": f"t3_{d['id']}" if not str(d["id"]).startswith("t3_") else d["id"],
                "author": d.get("author") or "[deleted]",
                "title": d.get("title") or "",
                "body": d.get("selftext") or "",
                "created_at": _epoch(d.get("created_utc", 0)),
            }
        )
    return {"kind": "reddit.search", "request": request.canonical(), "posts": posts}


def _normalize_reddit_comment_tree(children: list[dict[str, Any]]) -> list[dict[str, Any]]:
    out = []
    for child in children:
        if child.get("kind") != "t1":
            continue
        d = child["data"]
        replies = d.get("replies")
        nested = (
            _normalize_reddit_comment_tree(replies.get("data", {}).get("children", []))
            if isinstance(replies, dict)
            else []
        )
        out.append(
            {
                "id": f"t1_{d['id']}" if not str(d["id"]).startswith("t1_") else d["id"],
                "author": d.get("author") or "[deleted]",
                "body": d.get("body") or "",
                "created_at": _epoch(d.get("created_utc", 0)),
                "replies": nested,
            }
        )
    return out


def normalize_reddit_comments(payload: Any, request: CanonicalRequest) -> dict[str, Any]:
    # /comments/<id>.json returns [post listing, comment listing]
    if isinstance(payload, list) and len(payload) >= 2:
        children = payload[1].get("data", {}).get("children", [])
    else:
        children = payload.get("data", {}).get("children", [])
    return {
        "kind": "reddit.comments",
        "request": request.canonical(),
        "comments": _normalize_reddit_comment_tree(children),
    }


def normalize_twitter_search(payload: dict[str, Any], request: CanonicalRequest) -> dict[str, Any]:
    users = {u["id"]: u for u in payload.get("includes", {}).get("users", [])}
    results = []
    for tweet in payload.get("data", []) or []:
        user = users.get(tweet.get("author_id"), {})
        results.append(
            {
                "post": {
                    "id": tweet["id"],
                    "author": user.get("username", ""),
                    "body": tweet.get("text", ""),
                    "created_at": _epoch(tweet.get("created_at", 0)),
                },
                "profile": {
                    "handle": user.get("username", ""),
                    "display_name": user.get("name", ""),
                    "description": user.get("description", ""),
                    "location": user.get("location"),
                    "profile_url": user.get("url"),
                    "avatar_url": user.get("profile_image_url"),
                },
            }
        )
    return {"kind": "twitter.search", "request": request.canonical(), "results": results}


def normalize_etherscan_balance(payload: dict[str, Any], request: CanonicalRequest) -> dict[str, Any]:
    result = payload.get("result")
    if not isinstance(result, str) or not result.isdigit():
        raise NetworkError(f"unexpected balance payload: {payload.get('message', payload)!r}")
    params = dict(request.params)
    return {
        "kind": "etherscan.balance",
        "request": request.canonical(),
        "address": params.get("address", ""),
        "balance_wei": result,
    }


def normalize_etherscan_txlist(payload: dict[str, Any], request: CanonicalRequest) -> dict[str, Any]:
    result = payload.get("result")
    if result is None or isinstance(result, str):
        result = []
    transactions = [
        {
            "hash": tx["hash"],
            "from": tx["from"],
            "to": tx.get("to") or None,
            "value_wei": str(int(tx["value"])),
            "timestamp": _epoch(tx.get("timeStamp", tx.get("timestamp", 0))),
        }
        for tx in result
    ]
    params = dict(request.params)
    return {
        "kind": "etherscan.txlist",
        "request": request.canonical(),
        "address": params.get("address", ""),
        "transactions": transactions,
    }


class LiveTransport(Transport):
    """Talks to the real platform APIs.

    Translates each canonical request to the platform endpoint, injects
    credentials (never present in the canonical form), follows cursor
    pagination up to ``max_pages``, and normalizes responses into the
    fixture document shape.
    """

    mode = "live"

    def __init__(
        self,
        base_urls: dict[str, str] | None = None,
        credentials: Any = None,
        session: requests.Session | None = None,
        timeout: float = 30.0,
        max_pages: int = 4,
        page_size: int = 100,
    ) -> None:
        defaults = {
            "reddit": REDDIT_DEFAULT_BASE,
            "twitter": TWITTER_DEFAULT_BASE,
            "etherscan": ETHERSCAN_DEFAULT_BASE,
        }
        self.base_urls = {**defaults, **(base_urls or {})}
        self.credentials = credentials
        self.session = session or requests.Session()
        self.timeout = timeout
        self.max_pages = max_pages
        self.page_size = page_size

    def _secret(self, source: str) -> str | None:
        if self.credentials is None:
            return None
        return self.credentials.get(source)

    def _send(self, url: str, params: dict[str, str], headers: dict[str, str]) -> Any:
        try:
            response = self.session.get(url, params=params, headers=headers, timeout=self.timeout)
        except requests.RequestException as exc:
            raise NetworkError(f"request to {url} failed: {exc.__class__.__name__}") from exc
        if response.status_code in (401, 403):
            raise AuthFailure(f"{url} returned {response.status_code}")
        if response.status_code == 429:
            raise RateLimited(f"{url} returned 429")
        if response.status_code >= 400:
            raise NetworkError(f"{url} returned {response.status_code}")
        try:
            return response.json()
        except ValueError as exc:
            raise NetworkError(f"{url} returned non-JSON body") from exc

    def get(self, source: str, request: CanonicalRequest) -> dict[str, Any]:
        params = dict(request.params)
        if source == "reddit" and request.path == "/reddit/search":
            return self._reddit_search(params["q"], request)
        if source == "reddit" and request.path == "/reddit/comments":
            return self._reddit_comments(params["post_id"], request)
        if source == "twitter" and request.path == "/twitter/search":
            return self._twitter_search(params["q"], request)
        if source == "etherscan" and request.path == "/etherscan/balance":
            return self._etherscan(request, "balance", normalize_etherscan_balance)
        if source == "etherscan" and request.path == "/etherscan/txlist":
            return self._etherscan(request, "txlist", normalize_etherscan_txlist)
        raise NetworkError(f"no live adapter for {request.canonical()!r}")

    def _reddit_headers(self) -> dict[str, str]:
        headers = {"User-Agent": "chaintrace/0.1"}
        token = self._secret("reddit")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def _reddit_search(self, query: str, request: CanonicalRequest) -> dict[str, Any]:
        url = f"{self.base_urls['reddit']}/search.json"
        merged: dict[str, Any] = {"kind": "reddit.search", "request": request.canonical(), "posts": []}
        after: str | None = None
        for _ in range(self.max_pages):
            params = {"q": query, "limit": str(self.page_size), "raw_json": "1"}
            if after:
                params["after"] = after
            payload = self._send(url, params, self._reddit_headers())
            page = normalize_reddit_search(payload, request)
            merged["posts"].extend(page["posts"])
            after = payload.get("data", {}).get("after")
            if not after:
                break
        return merged

    def _reddit_comments(self, post_id: str, request: CanonicalRequest) -> dict[str, Any]:
        id36 = post_id.split("_", 1)[1] if post_id.startswith("t3_") else post_id
        url = f"{self.base_urls['reddit']}/comments/{id36}.json"
        payload = self._send(url, {"raw_json": "1"}, self._reddit_headers())
        return normalize_reddit_comments(payload, request)

    def _twitter_search(self, query: str, request: CanonicalRequest) -> dict[str, Any]:
        url = f"{self.base_urls['twitter']}/2/tweets/search/recent"
        headers = {}
        token = self._secret("twitter")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        merged: dict[str, Any] = {"kind": "twitter.search", "request": request.canonical(), "results": []}
        next_token: str | None = None
        for _ in range(self.max_pages):
            params = {
                "query": f'"{query}"',
                "max_results": str(min(self.page_size, 100)),
                "tweet.fields": "created_at,author_id",
                "expansions": "author_id",
                "user.fields": "description,location,url,profile_image_url,name,username",
            }
            if next_token:
                params["next_token"] = next_token
            payload = self._send(url, params, headers)
            page = normalize_twitter_search(payload, request)
            merged["results"].extend(page["results"])
            next_token = payload.get("meta", {}).get("next_token")
            if not next_token:
                break
        return merged

    def _etherscan(
        self,
        request: CanonicalRequest,
        action: str,
        normalize: Callable[[dict[str, Any], CanonicalRequest], dict[str, Any]],
    ) -> dict[str, Any]:
        params = dict(request.params)
        url = f"{self.base_urls['etherscan']}/api"
        query = {"module": "account", "action": action, "address": params["address"]}
        if action == "balance":
            query["tag"] = "latest"
        else:
            query.update({"startblock": "0", "endblock": "99999999", "sort": "asc"})
        key = self._secret("etherscan")
        if key:
            query["apikey"] = key
        payload = self._send(url, query, {})
        return normalize(payload, request)
