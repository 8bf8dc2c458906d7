"""Clients for the three data sources, working over either transport.

Each client turns a logical operation into a canonical request, hands
it to the transport, validates the returned document, and produces
domain objects. Replay and live mode share everything above the
transport seam.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from .address import EthAddress, extract_addresses, parse_address
from .transport import CanonicalRequest, MalformedFixture, Transport

__all__ = [
    "Comment",
    "EtherscanClient",
    "Platform",
    "RedditClient",
    "SocialPost",
    "Transaction",
    "TwitterClient",
    "TwitterProfileRaw",
]


class Platform(str, Enum):
    REDDIT = "reddit"
    TWITTER = "twitter"


@dataclass(frozen=True)
class SocialPost:
    id: str
    platform: Platform
    author: str
    title: str | None
    body: str
    created_at: int


@dataclass(frozen=True)
class Comment:
    id: str
    post_id: str
    author: str
    body: str
    created_at: int


@dataclass(frozen=True)
class TwitterProfileRaw:
    handle: str
    display_name: str
    description: str = ""
    location: str | None = None
    profile_url: str | None = None
    avatar_url: str | None = None


@dataclass(frozen=True)
class Transaction:
    hash: str
    from_addr: EthAddress
    to_addr: EthAddress | None
    value_wei: int
    timestamp: int


def _expect(document: dict[str, Any], kind: str) -> dict[str, Any]:
    if document.get("kind") != kind:
        raise MalformedFixture(
            f"expected a {kind!r} document, got kind={document.get('kind')!r}"
        )
    return document


def _field(entry: dict[str, Any], name: str, context: str) -> Any:
    try:
        return entry[name]
    except KeyError:
        raise MalformedFixture(f"{context}: missing field {name!r}") from None
    except TypeError:
        raise MalformedFixture(f"{context}: expected an object") from None


class RedditClient:
    def __init__(self, transport: Transport) -> None:
        self.transport = transport

    def search(self, query: str, limit: int) -> list[SocialPost]:
        """At most ``limit`` posts for ``query``, in source order."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        request = CanonicalRequest("GET", "/reddit/search", {"q": query})
        document = _expect(self.transport.get("reddit", request), "reddit.search")
        posts = []
        for entry in _field(document, "posts", "reddit.search")[:limit]:
            posts.append(
                SocialPost(
                    id=str(_field(entry, "id", "reddit post")),
                    platform=Platform.REDDIT,
                    author=str(_field(entry, "author", "reddit post")),
                    title=entry.get("title"),
                    body=str(_field(entry, "body", "reddit post")),
                    created_at=int(_field(entry, "created_at", "reddit post")),
                )
            )
        return posts

    def comments(self, post: SocialPost) -> list[Comment]:
        """All comments under ``post``, nested replies flattened depth-first."""
        request = CanonicalRequest("GET", "/reddit/comments", {"post_id": post.id})
        document = _expect(self.transport.get("reddit", request), "reddit.comments")
        out: list[Comment] = []

        def walk(entries: list[dict[str, Any]]) -> None:
            for entry in entries:
                out.append(
                    Comment(
                        id=str(_field(entry, "id", "reddit comment")),
                        post_id=post.id,
                        author=str(_field(entry, "author", "reddit comment")),
                        body=str(_field(entry, "body", "reddit comment")),
                        created_at=int(_field(entry, "created_at", "reddit comment")),
                    )
                )
                walk(entry.get("replies", []))

        walk(_field(document, "comments", "reddit.comments"))
        return out


class TwitterClient:
    def __init__(self, transport: Transport) -> None:
        self.transport = transport

    def search_address(self, addr: EthAddress) -> list[tuple[SocialPost, TwitterProfileRaw]]:
        """Posts whose body actually contains ``addr``, paired with their
        author's profile. Entries not containing the address are dropped."""
        request = CanonicalRequest("GET", "/twitter/search", {"q": addr.canonical})
        document = _expect(self.transport.get("twitter", request), "twitter.search")
        pairs = []
        for entry in _field(document, "results", "twitter.search"):
            post_doc = _field(entry, "post", "twitter result")
            body = str(_field(post_doc, "body", "tweet"))
            if addr not in {found for found, _ in extract_addresses(body)}:
                continue
            profile_doc = _field(entry, "profile", "twitter result")
            post = SocialPost(
                id=str(_field(post_doc, "id", "tweet")),
                platform=Platform.TWITTER,
                author=str(_field(post_doc, "author", "tweet")),
                title=None,
                body=body,
                created_at=int(_field(post_doc, "created_at", "tweet")),
            )
            profile = TwitterProfileRaw(
                handle=str(_field(profile_doc, "handle", "twitter profile")),
                display_name=str(profile_doc.get("display_name", "")),
                description=str(profile_doc.get("description") or ""),
                location=profile_doc.get("location"),
                profile_url=profile_doc.get("profile_url"),
                avatar_url=profile_doc.get("avatar_url"),
            )
            if not profile.handle:
                raise MalformedFixture("twitter profile with empty handle")
            pairs.append((post, profile))
        return pairs


class EtherscanClient:
    def __init__(self, transport: Transport) -> None:
        self.transport = transport

    def balance(self, addr: EthAddress) -> int:
        """Current balance in wei (arbitrary precision)."""
        request = CanonicalRequest("GET", "/etherscan/balance", {"address": addr.canonical})
        document = _expect(self.transport.get("etherscan", request), "etherscan.balance")
        raw = _field(document, "balance_wei", "etherscan.balance")
        if not isinstance(raw, str) or not raw.isdigit():
            raise MalformedFixture(f"balance_wei must be a decimal string, got {raw!r}")
        return int(raw)

    def transactions(self, addr: EthAddress) -> list[Transaction]:
        """Transaction history for ``addr``, ascending by timestamp."""
        request = CanonicalRequest("GET", "/etherscan/txlist", {"address": addr.canonical})
        document = _expect(self.transport.get("etherscan", request), "etherscan.txlist")
        transactions = []
        for entry in _field(document, "transactions", "etherscan.txlist"):
            value = _field(entry, "value_wei", "transaction")
            if not isinstance(value, str) or not value.isdigit():
                raise MalformedFixture(f"value_wei must be a decimal string, got {value!r}")
            tx_hash = str(_field(entry, "hash", "transaction"))
            if not (tx_hash.startswith("0x") and len(tx_hash) == 66):
                raise MalformedFixture(f"transaction hash {tx_hash!r} is not 32 bytes of hex")
            to_raw = _field(entry, "to", "transaction")
            try:
                from_addr = parse_address(str(_field(entry, "from", "transaction")).lower())
                to_addr = parse_address(str(to_raw).lower()) if to_raw is not None else None
            except ValueError as exc:
                raise MalformedFixture(f"transaction has invalid address: {exc}") from exc
            transactions.append(
                Transaction(
                    hash=tx_hash,
                    from_addr=from_addr,
                    to_addr=to_addr,
                    value_wei=int(value),
                    timestamp=int(_field(entry, "timestamp", "transaction")),
                )
            )
        transactions.sort(key=lambda tx: (tx.timestamp, tx.hash))
        return transactions
