"""End-to-end correlation: scrape address sightings from Reddit, match
them on Twitter under rate limiting, mine PII from profile descriptions,
enrich with chain activity, and aggregate linked-identity records and
summary statistics.

Failures are isolated per item: a bad query or address is reported in
the outcome's error list and the run continues. The canonical lowercase
address is the join key everywhere; checksummed display happens at the
presentation layer only.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from .address import EthAddress, TextSpan, extract_addresses, parse_address
from .ratelimit import RateLimitGovernor
from .sources import (
    EtherscanClient,
    Platform,
    RedditClient,
    Transaction,
    TwitterClient,
    TwitterProfileRaw,
)
from .transport import ConnectorError

__all__ = [
    "AccountActivity",
    "ActivityStatus",
    "AddressSighting",
    "ExtractedPII",
    "LinkedIdentity",
    "MatchOutcome",
    "MatchedTwitter",
    "RunResult",
    "ScrapeOutcome",
    "StageError",
    "StatsTable",
    "TwitterMatch",
    "build_records",
    "classify_activity",
    "compute_stats",
    "enrich_activity",
    "extract_pii",
    "match_twitter",
    "render_stats",
    "run_pipeline",
    "scrape_reddit",
]


# --- domain types -----------------------------------------------------------

@dataclass(frozen=True)
class AddressSighting:
    """One occurrence of an address in a post or comment body."""

    address: EthAddress
    platform: Platform
    author: str
    post_id: str
    comment_id: str | None
    span: TextSpan
    seen_at: int

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "address": self.address.canonical,
            "platform": self.platform.value,
            "author": self.author,
            "post_id": self.post_id,
            "comment_id": self.comment_id,
            "span": {"start": self.span.start, "end": self.span.end},
            "seen_at": self.seen_at,
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "AddressSighting":
        return cls(
            address=parse_address(data["address"]),
            platform=Platform(data["platform"]),
            author=data["author"],
            post_id=data["post_id"],
            comment_id=data.get("comment_id"),
            span=TextSpan(data["span"]["start"], data["span"]["end"]),
            seen_at=data["seen_at"],
        )


@dataclass(frozen=True)
class ExtractedPII:
    emails: tuple[str, ...] = ()
    links: tuple[str, ...] = ()
    discord_handles: tuple[str, ...] = ()

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "emails": list(self.emails),
            "links": list(self.links),
            "discord_handles": list(self.discord_handles),
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "ExtractedPII":
        return cls(
            emails=tuple(data.get("emails", [])),
            links=tuple(data.get("links", [])),
            discord_handles=tuple(data.get("discord_handles", [])),
        )


class ActivityStatus(str, Enum):
    DEAD = "dead"
    ACTIVE = "active"


@dataclass(frozen=True)
class AccountActivity:
    balance_wei: int
    transactions: tuple[Transaction, ...]
    status: ActivityStatus

    def __post_init__(self) -> None:
        if self.status != classify_activity(self.balance_wei, self.transactions):
            raise ValueError("status inconsistent with balance/transactions")

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "balance_wei": str(self.balance_wei),
            "status": self.status.value,
            "transactions": [
                {
                    "hash": tx.hash,
                    "from": tx.from_addr.canonical,
                    "to": tx.to_addr.canonical if tx.to_addr else None,
                    "value_wei": str(tx.value_wei),
                    "timestamp": tx.timestamp,
                }
                for tx in self.transactions
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "AccountActivity":
        transactions = tuple(
            Transaction(
                hash=tx["hash"],
                from_addr=parse_address(tx["from"]),
                to_addr=parse_address(tx["to"]) if tx.get("to") else None,
                value_wei=int(tx["value_wei"]),
                timestamp=tx["timestamp"],
            )
            for tx in data.get("transactions", [])
        )
        return cls(
            balance_wei=int(data["balance_wei"]),
            transactions=transactions,
            status=ActivityStatus(data["status"]),
        )


@dataclass(frozen=True)
class MatchedTwitter:
    profile: TwitterProfileRaw
    pii: ExtractedPII
    post_id: str

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "profile": {
                "handle": self.profile.handle,
                "display_name": self.profile.display_name,
                "description": self.profile.description,
                "location": self.profile.location,
                "profile_url": self.profile.profile_url,
                "avatar_url": self.profile.avatar_url,
            },
            "pii": self.pii.to_json_dict(),
            "post_id": self.post_id,
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "MatchedTwitter":
        p = data["profile"]
        return cls(
            profile=TwitterProfileRaw(
                handle=p["handle"],
                display_name=p.get("display_name", ""),
                description=p.get("description", ""),
                location=p.get("location"),
                profile_url=p.get("profile_url"),
                avatar_url=p.get("avatar_url"),
            ),
            pii=ExtractedPII.from_json_dict(data["pii"]),
            post_id=data["post_id"],
        )


@dataclass(frozen=True)
class LinkedIdentity:
    """The joined record for one address."""

    address: EthAddress
    reddit_author: str
    reddit_sightings: tuple[AddressSighting, ...]
    twitter: MatchedTwitter | None = None
    activity: AccountActivity | None = None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "address": self.address.canonical,
            "reddit_author": self.reddit_author,
            "reddit_sightings": [s.to_json_dict() for s in self.reddit_sightings],
            "twitter": self.twitter.to_json_dict() if self.twitter else None,
            "activity": self.activity.to_json_dict() if self.activity else None,
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "LinkedIdentity":
        return cls(
            address=parse_address(data["address"]),
            reddit_author=data["reddit_author"],
            reddit_sightings=tuple(
                AddressSighting.from_json_dict(s) for s in data["reddit_sightings"]
            ),
            twitter=MatchedTwitter.from_json_dict(data["twitter"]) if data.get("twitter") else None,
            activity=AccountActivity.from_json_dict(data["activity"]) if data.get("activity") else None,
        )


@dataclass(frozen=True)
class StatsTable:
    scraped_addresses: int
    dead: int
    active: int
    twitter_matches: int
    with_description: int
    with_links: int
    with_emails: int
    with_discord: int
    active_among_matches: int

    def to_json_dict(self) -> dict[str, int]:
        return {
            "scraped_addresses": self.scraped_addresses,
            "dead": self.dead,
            "active": self.active,
            "twitter_matches": self.twitter_matches,
            "with_description": self.with_description,
            "with_links": self.with_links,
            "with_emails": self.with_emails,
            "with_discord": self.with_discord,
            "active_among_matches": self.active_among_matches,
        }


@dataclass(frozen=True)
class StageError:
    stage: str
    item: str
    message: str

    def to_json_dict(self) -> dict[str, str]:
        return {"stage": self.stage, "item": self.item, "message": self.message}


@dataclass
class ScrapeOutcome:
    sightings: list[AddressSighting]
    reddit_users: set[str]
    errors: list[StageError]


@dataclass(frozen=True)
class TwitterMatch:
    profile: TwitterProfileRaw
    post_id: str


@dataclass
class MatchOutcome:
    matches: dict[EthAddress, TwitterMatch]
    errors: list[StageError]


# --- operations ---------------------------------------------------------------

def scrape_reddit(
    queries: Sequence[str],
    client: RedditClient,
    limit_per_query: int = 100,
    include_post_bodies: bool = True,
) -> ScrapeOutcome:
    """Search every query, scan post bodies (optional) and all comments,
    and record one sighting per address occurrence.

    A post returned by several queries is scanned once. A failing query
    or comment fetch is reported and the run continues.
    """
    sightings: list[AddressSighting] = []
    users: set[str] = set()
    errors: list[StageError] = []
    seen_posts: set[str] = set()

    for query in queries:
        try:
            posts = client.search(query, limit_per_query)
        except ConnectorError as exc:
            errors.append(StageError("scrape", query, str(exc)))
            continue
        for post in posts:
            if post.id in seen_posts:
                continue
            seen_posts.add(post.id)
            if include_post_bodies:
                for addr, span in extract_addresses(post.body):
                    sightings.append(AddressSighting(
                        address=addr,
                        platform=Platform.REDDIT,
                        author=post.author,
                        post_id=post.id,
                        comment_id=None,
                        span=span,
                        seen_at=post.created_at,
                    ))
                    users.add(post.author)
            try:
                comments = client.comments(post)
            except ConnectorError as exc:
                errors.append(StageError("scrape", f"{query}/{post.id}", str(exc)))
                continue
            for comment in comments:
                for addr, span in extract_addresses(comment.body):
                    sightings.append(AddressSighting(
                        address=addr,
                        platform=Platform.REDDIT,
                        author=comment.author,
                        post_id=post.id,
                        comment_id=comment.id,
                        span=span,
                        seen_at=comment.created_at,
                    ))
                    users.add(comment.author)
    return ScrapeOutcome(sightings, users, errors)


def match_twitter(
    addresses: Sequence[EthAddress],
    client: TwitterClient,
    governor: RateLimitGovernor,
) -> MatchOutcome:
    """Search each (already deduplicated) address once, under a permit.

    When several tweets carry the address, the profile of the earliest
    post wins; ties break on lexicographic post id.
    """
    matches: dict[EthAddress, TwitterMatch] = {}
    errors: list[StageError] = []
    for addr in addresses:
        governor.acquire("twitter")
        try:
            pairs = client.search_address(addr)
        except ConnectorError as exc:
            errors.append(StageError("match", addr.canonical, str(exc)))
            continue
        if not pairs:
            continue
        post, profile = min(pairs, key=lambda pair: (pair[0].created_at, pair[0].id))
        matches[addr] = TwitterMatch(profile=profile, post_id=post.id)
    return MatchOutcome(matches, errors)


_EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@(?:[A-Za-z0-9-]+\.)+[A-Za-z]{2,}")
_LINK_RE = re.compile(r"https?://[^\s|]+")
_DISCORD_TAG_RE = re.compile(r"(?<![A-Za-z0-9_.#])[A-Za-z0-9_.]{2,32}#\d{4}(?!\d)")
_DISCORD_INVITE_RE = re.compile(r"(?:https?://)?(?:www\.)?discord\.gg/([A-Za-z0-9-]+)")
_TRAILING_PUNCT = ".,;:!?)\"'"


def _dedup(values: Iterable[str]) -> tuple[str, ...]:
    seen: set[str] = set()
    out: list[str] = []
    for value in values:
        if value not in seen:
            seen.add(value)
            out.append(value)
    return tuple(out)


def extract_pii(description: str) -> ExtractedPII:
    """Mine emails, http(s) links, and Discord handles from a profile
    description. Each list is deduplicated in order of first appearance.

    Discord handles cover legacy ``name#NNNN`` tags and ``discord.gg``
    invite codes (the invite code alone is reported). A schemeful
    ``https://discord.gg/...`` also counts as a link.
    """
    emails = _dedup(m.group() for m in _EMAIL_RE.finditer(description))
    links = _dedup(
        m.group().rstrip(_TRAILING_PUNCT) for m in _LINK_RE.finditer(description)
    )
    discord = _dedup(
        found
        for _, found in sorted(
            [(m.start(), m.group()) for m in _DISCORD_TAG_RE.finditer(description)]
            + [(m.start(), m.group(1)) for m in _DISCORD_INVITE_RE.finditer(description)]
        )
    )
    return ExtractedPII(emails=emails, links=links, discord_handles=discord)


def classify_activity(balance_wei: int, transactions: Sequence[Transaction]) -> ActivityStatus:
    """Dead means zero balance and no transaction history; anything else
    is active."""
    if balance_wei == 0 and len(transactions) == 0:
        return ActivityStatus.DEAD
    return ActivityStatus.ACTIVE


def enrich_activity(
    addresses: Sequence[EthAddress],
    client: EtherscanClient,
) -> tuple[dict[EthAddress, AccountActivity], list[StageError]]:
    """Fetch balance and history for each address; per-address failures
    are collected, not raised."""
    activity: dict[EthAddress, AccountActivity] = {}
    errors: list[StageError] = []
    for addr in addresses:
        try:
            balance = client.balance(addr)
            transactions = client.transactions(addr)
        except ConnectorError as exc:
            errors.append(StageError("enrich", addr.canonical, str(exc)))
            continue
        activity[addr] = AccountActivity(
            balance_wei=balance,
            transactions=tuple(transactions),
            status=classify_activity(balance, transactions),
        )
    return activity, errors


def _sighting_order(s: AddressSighting) -> tuple:
    return (s.seen_at, s.comment_id or "", s.post_id, s.span.start)


def build_records(
    sightings: Sequence[AddressSighting],
    twitter_map: Mapping[EthAddress, TwitterMatch],
    activity_map: Mapping[EthAddress, AccountActivity],
) -> list[LinkedIdentity]:
    """One record per distinct address, ascending by canonical address.

    The record's author is the author of the earliest sighting (ties:
    lexicographic comment id). PII comes solely from the matched Twitter
    profile's description.
    """
    grouped: dict[EthAddress, list[AddressSighting]] = defaultdict(list)
    for sighting in sightings:
        grouped[sighting.address].append(sighting)

    records = []
    for addr in sorted(grouped):
        group = sorted(grouped[addr], key=_sighting_order)
        match = twitter_map.get(addr)
        twitter = (
            MatchedTwitter(
                profile=match.profile,
                pii=extract_pii(match.profile.description),
                post_id=match.post_id,
            )
            if match
            else None
        )
        records.append(LinkedIdentity(
            address=addr,
            reddit_author=group[0].author,
            reddit_sightings=tuple(group),
            twitter=twitter,
            activity=activity_map.get(addr),
        ))
    return records


def compute_stats(records: Sequence[LinkedIdentity]) -> StatsTable:
    dead = sum(1 for r in records if r.activity and r.activity.status is ActivityStatus.DEAD)
    active = sum(1 for r in records if r.activity and r.activity.status is ActivityStatus.ACTIVE)
    matched = [r for r in records if r.twitter]
    with_description = [r for r in matched if r.twitter.profile.description]
    return StatsTable(
        scraped_addresses=len(records),
        dead=dead,
        active=active,
        twitter_matches=len(matched),
        with_description=len(with_description),
        with_links=sum(1 for r in with_description if r.twitter.pii.links),
        with_emails=sum(1 for r in with_description if r.twitter.pii.emails),
        with_discord=sum(1 for r in with_description if r.twitter.pii.discord_handles),
        active_among_matches=sum(
            1 for r in matched if r.activity and r.activity.status is ActivityStatus.ACTIVE
        ),
    )


def render_stats(stats: StatsTable) -> str:
    """Two summary tables (record counts; description details) plus the
    active-among-matches ratio."""

    def table(title: str, headers: list[str], values: list[int]) -> str:
        cells = [str(v) for v in values]
        widths = [max(len(h), len(c)) for h, c in zip(headers, cells)]
        head = " | ".join(h.ljust(w) for h, w in zip(headers, widths))
        rule = "-+-".join("-" * w for w in widths)
        row = " | ".join(c.ljust(w) for c, w in zip(cells, widths))
        return f"{title}\n{head}\n{rule}\n{row}\n"

    first = table(
        "Number of records",
        ["Scraping from Reddit", "Dead Addresses", "Active Addresses", "Matches of Twitter"],
        [stats.scraped_addresses, stats.dead, stats.active, stats.twitter_matches],
    )
    second = table(
        "Details of records with descriptions",
        ["Matches of Twitter", "with Descriptions", "with Links", "with Emails", "with Discord"],
        [stats.twitter_matches, stats.with_description, stats.with_links,
         stats.with_emails, stats.with_discord],
    )
    if stats.twitter_matches:
        pct = 100.0 * stats.active_among_matches / stats.twitter_matches
        ratio = f"Active among Twitter matches: {stats.active_among_matches} ({pct:.1f}%)\n"
    else:
        ratio = "Active among Twitter matches: 0\n"
    return f"{first}\n{second}\n{ratio}"


@dataclass
class RunResult:
    records: list[LinkedIdentity]
    stats: StatsTable
    reddit_users: set[str]
    stage_counts: dict[str, int]
    errors: list[StageError]

    @property
    def failed_stages(self) -> list[str]:
        return [stage for stage, count in self.stage_counts.items() if count == 0]


def run_pipeline(
    queries: Sequence[str],
    reddit: RedditClient,
    twitter: TwitterClient,
    etherscan: EtherscanClient,
    governor: RateLimitGovernor,
    limit_per_query: int = 100,
    include_post_bodies: bool = True,
) -> RunResult:
    """Scrape, match, enrich, and aggregate in one pass."""
    scrape = scrape_reddit(queries, reddit, limit_per_query, include_post_bodies)
    unique_addresses = sorted({s.address for s in scrape.sightings})
    match = match_twitter(unique_addresses, twitter, governor)
    activity, enrich_errors = enrich_activity(unique_addresses, etherscan)
    records = build_records(scrape.sightings, match.matches, activity)
    stats = compute_stats(records)
    return RunResult(
        records=records,
        stats=stats,
        reddit_users=scrape.reddit_users,
        stage_counts={
            "scrape": len(scrape.sightings),
            "match": len(match.matches),
            "enrich": len(activity),
            "build": len(records),
        },
        errors=[*scrape.errors, *match.errors, *enrich_errors],
    )
