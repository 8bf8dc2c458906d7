"""Synthetic fixture corpora with an exact ground-truth manifest.

Everything the generator plants (addresses, sightings, tweet matches,
PII, balances) is recorded in a manifest, so a pipeline run over the
corpus can be checked for exact precision and recall. Generation is a
pure function of the seed: same seed, byte-identical fixtures and
manifest. Planted PII uses reserved example.* namespaces only, so no
generated datum can point at a real person.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .address import EthAddress, extract_addresses, to_checksummed
from .pipeline import extract_pii
from .transport import CanonicalRequest, write_fixture

__all__ = ["CorpusError", "CorpusParams", "GroundTruthManifest", "gen_corpus"]

EPOCH_BASE = 1_640_995_200  # 2022-01-01T00:00:00Z


class CorpusError(Exception):
    """Internal consistency failure during generation."""


@dataclass(frozen=True)
class CorpusParams:
    seed: int = 0
    n_reddit_users: int = 12
    n_addresses: int = 40
    p_twitter_match: float = 0.4
    p_has_description: float = 0.7
    p_email: float = 0.2
    p_link: float = 0.35
    p_discord: float = 0.2
    p_active_account: float = 0.45
    max_tx_per_account: int = 6
    queries: tuple[str, ...] = ("eth giveaway", "nft airdrop", "free eth promo")
    posts_per_query: int = 4
    p_post_body_sighting: float = 0.15
    p_second_sighting: float = 0.12
    p_competing_tweet: float = 0.12
    p_double_tweet: float = 0.1
    p_display_checksummed: float = 0.45
    p_display_broken: float = 0.1
    p_nested_comment: float = 0.3
    p_emoji_leadin: float = 0.15

    def __post_init__(self) -> None:
        for name in (
            "p_twitter_match", "p_has_description", "p_email", "p_link", "p_discord",
            "p_active_account", "p_post_body_sighting", "p_second_sighting",
            "p_competing_tweet", "p_double_tweet", "p_display_checksummed",
            "p_display_broken", "p_nested_comment", "p_emoji_leadin",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0,1], got {value}")
        for name in ("n_reddit_users", "n_addresses", "max_tx_per_account", "posts_per_query"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.p_display_checksummed + self.p_display_broken > 1.0:
            raise ValueError("display-form fractions exceed 1")
        if not self.queries:
            raise ValueError("at least one query is required")
        if self.n_addresses > 0 and (self.n_reddit_users < 1 or self.posts_per_query < 1):
            raise ValueError("planting addresses requires users and posts")

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "CorpusParams":
        known = dict(data)
        if "queries" in known:
            known["queries"] = tuple(known["queries"])
        return cls(**known)

    def to_json_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["queries"] = list(self.queries)
        return out


@dataclass
class GroundTruthManifest:
    """Machine-readable statement of every planted fact."""

    seed: int
    params: CorpusParams
    queries: list[str]
    reddit_users: list[str]
    records: list[dict[str, Any]]
    schema_version: int = 1

    def record_for(self, canonical: str) -> dict[str, Any] | None:
        for record in self.records:
            if record["address"] == canonical:
                return record
        return None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "seed": self.seed,
            "params": self.params.to_json_dict(),
            "queries": self.queries,
            "reddit_users": self.reddit_users,
            "records": self.records,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "GroundTruthManifest":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if data.get("schema_version") != 1:
            raise CorpusError(f"unsupported manifest schema_version {data.get('schema_version')!r}")
        return cls(
            seed=data["seed"],
            params=CorpusParams.from_json_dict(data["params"]),
            queries=list(data["queries"]),
            reddit_users=list(data["reddit_users"]),
            records=list(data["records"]),
        )


_WORDS = (
    "ledger wallet promo bounty airdrop mint stake gas fee swap bridge token "
    "chain block nonce layer node validator faucet reward claim drop moon "
    "hodl diamond paper hands chart candle pump dip rally bull bear whale "
    "fren anon degen alpha rug shill bag flip gwei"
).split()

_GREETINGS = (
    "crypto enjoyer", "nft collector", "defi curious", "chain watcher",
    "casual minter", "block explorer", "weekend trader",
)

_LEAD_INS = ("send to", "my wallet:", "drop it here:", "tips welcome at", "eth:")
_TRAILERS = (" thanks!", " much appreciated", " \U0001f64f", "", " good luck all")


def _sentence(rng: random.Random) -> str:
    words = [rng.choice(_WORDS) for _ in range(rng.randint(4, 9))]
    return " ".join(words) + "."


def _paragraph(rng: random.Random) -> str:
    return " ".join(_sentence(rng) for _ in range(rng.randint(1, 3)))


def _byte_len(text: str) -> int:
    return len(text.encode("utf-8"))


class _TextBuilder:
    """Assembles a body string while recording planted address spans."""

    def __init__(self) -> None:
        self._parts: list[str] = []
        self._bytes = 0
        self.spans: list[tuple[EthAddress, int, int]] = []

    def text(self, chunk: str) -> None:
        self._parts.append(chunk)
        self._bytes += _byte_len(chunk)

    def address(self, addr: EthAddress, display: str) -> None:
        start = self._bytes
        self.text(display)
        self.spans.append((addr, start, start + 42))

    def build(self) -> str:
        return "".join(self._parts)


@dataclass
class _CommentDraft:
    id: str
    author: str
    created_at: int
    builder: _TextBuilder = field(default_factory=_TextBuilder)
    replies: list["_CommentDraft"] = field(default_factory=list)

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "author": self.author,
            "body": self.builder.build(),
            "created_at": self.created_at,
            "replies": [reply.to_doc() for reply in self.replies],
        }

    def walk(self):
        yield self
        for reply in self.replies:
            yield from reply.walk()


@dataclass
class _PostDraft:
    id: str
    query: str
    author: str
    title: str
    created_at: int
    builder: _TextBuilder = field(default_factory=_TextBuilder)
    comments: list[_CommentDraft] = field(default_factory=list)

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "author": self.author,
            "title": self.title,
            "body": self.builder.build(),
            "created_at": self.created_at,
        }


@dataclass
class _TweetDraft:
    id: str
    author: str
    created_at: int
    body: str
    profile: dict[str, Any]

    def to_result(self) -> dict[str, Any]:
        return {
            "post": {
                "id": self.id,
                "author": self.author,
                "body": self.body,
                "created_at": self.created_at,
            },
            "profile": self.profile,
        }


def _display_form(rng: random.Random, addr: EthAddress, params: CorpusParams) -> str:
    roll = rng.random()
    if roll < params.p_display_checksummed:
        return to_checksummed(addr)
    if roll < params.p_display_checksummed + params.p_display_broken:
        checksummed = to_checksummed(addr)
        body = list(checksummed[2:])
        alpha_positions = [i for i, ch in enumerate(body) if ch.isalpha()]
        rng.shuffle(alpha_positions)
        for pos in alpha_positions:
            flipped = body.copy()
            flipped[pos] = flipped[pos].swapcase()
            joined = "".join(flipped)
            if joined != joined.lower() and joined != joined.upper():
                return "0x" + joined
        # fewer than two usable letters; broken form impossible
        return addr.canonical
    return addr.canonical


def _sighting_sort_key(s: dict[str, Any]) -> tuple:
    return (s["created_at"], s["comment_id"] or "", s["post_id"], s["span"]["start"])


def gen_corpus(params: CorpusParams, out_dir: str | Path) -> GroundTruthManifest:
    """Generate fixtures + manifest under ``out_dir``.

    Layout: ``out_dir/fixtures/<source>/<sha>.json``, ``out_dir/manifest.json``,
    ``out_dir/queries.txt``.
    """
    rng = random.Random(params.seed)
    out_dir = Path(out_dir)
    fixture_root = out_dir / "fixtures"

    users = [
        f"{rng.choice(_WORDS)}_{rng.choice(_WORDS)}_{i:02d}"
        for i in range(params.n_reddit_users)
    ]

    addresses: list[EthAddress] = []
    seen = set()
    while len(addresses) < params.n_addresses:
        candidate = EthAddress(rng.randbytes(20))
        if candidate.raw in seen:
            continue
        seen.add(candidate.raw)
        addresses.append(candidate)

    tick = 0

    def next_ts() -> int:
        nonlocal tick
        tick += 1
        return EPOCH_BASE + 600 * tick

    # --- reddit skeleton: posts plus noise comments ------------------------
    post_seq = 0
    comment_seq = 0

    def new_comment(author: str, created_at: int) -> _CommentDraft:
        nonlocal comment_seq
        comment_seq += 1
        draft = _CommentDraft(id=f"t1_{comment_seq:06d}", author=author, created_at=created_at)
        return draft

    posts_by_query: dict[str, list[_PostDraft]] = {}
    for query in params.queries:
        drafts = []
        for _ in range(params.posts_per_query):
            post_seq += 1
            draft = _PostDraft(
                id=f"t3_{post_seq:06d}",
                query=query,
                author=rng.choice(users) if users else "op",
                title=f"{rng.choice(_WORDS)} {rng.choice(_WORDS)} megathread {post_seq}",
                created_at=next_ts(),
            )
            draft.builder.text(_paragraph(rng))
            for _ in range(rng.randint(1, 3)):
                noise = new_comment(rng.choice(users) if users else "op", next_ts())
                noise.builder.text(_sentence(rng))
                if rng.random() < 0.4:
                    nested = new_comment(rng.choice(users) if users else "op", next_ts())
                    nested.builder.text(_sentence(rng))
                    noise.replies.append(nested)
                draft.comments.append(noise)
            drafts.append(draft)
        posts_by_query[query] = drafts

    all_posts = [post for query in params.queries for post in posts_by_query[query]]

    # --- plant addresses ----------------------------------------------------
    def plant_in_builder(builder: _TextBuilder, addr: EthAddress, display: str) -> None:
        lead = rng.choice(_LEAD_INS)
        if rng.random() < params.p_emoji_leadin:
            lead = "\U0001f680 " + lead
        builder.text("\n" + lead + " ")
        builder.address(addr, display)
        builder.text(rng.choice(_TRAILERS))

    def plant_comment(addr: EthAddress, display: str, created_at: int) -> tuple[_PostDraft, _CommentDraft]:
        post = rng.choice(all_posts)
        comment = new_comment(rng.choice(users), created_at)
        comment.builder.text(_sentence(rng))
        plant_in_builder(comment.builder, addr, display)
        depth_roll = rng.random()
        if depth_roll < params.p_nested_comment and post.comments:
            parent = rng.choice(post.comments)
            if parent.replies and rng.random() < 0.5:
                rng.choice(parent.replies).replies.append(comment)
            else:
                parent.replies.append(comment)
        else:
            post.comments.append(comment)
        return post, comment

    records: list[dict[str, Any]] = []
    tweet_seq = 0
    planted_tweet_spans: list[tuple[str, str, int]] = []

    for addr in addresses:
        display = _display_form(rng, addr, params)
        sightings: list[dict[str, Any]] = []

        primary_ts = next_ts()
        if rng.random() < params.p_post_body_sighting:
            post = rng.choice(all_posts)
            before = len(post.builder.spans)
            plant_in_builder(post.builder, addr, display)
            _, start, end = post.builder.spans[before]
            sightings.append({
                "post_id": post.id,
                "comment_id": None,
                "author": post.author,
                "created_at": post.created_at,
                "span": {"start": start, "end": end},
            })
            primary_is_comment = False
            primary_comment_ts = post.created_at
        else:
            post, comment = plant_comment(addr, display, primary_ts)
            _, start, end = comment.builder.spans[0]
            sightings.append({
                "post_id": post.id,
                "comment_id": comment.id,
                "author": comment.author,
                "created_at": comment.created_at,
                "span": {"start": start, "end": end},
            })
            primary_is_comment = True
            primary_comment_ts = primary_ts

        if rng.random() < params.p_second_sighting:
            roll = rng.random()
            if roll < 0.3:
                second_ts = primary_comment_ts - rng.randint(1, 599)
            elif roll < 0.5 and primary_is_comment:
                second_ts = primary_comment_ts
            else:
                second_ts = next_ts()
            post2, comment2 = plant_comment(addr, display, second_ts)
            _, start, end = comment2.builder.spans[0]
            sightings.append({
                "post_id": post2.id,
                "comment_id": comment2.id,
                "author": comment2.author,
                "created_at": comment2.created_at,
                "span": {"start": start, "end": end},
            })

        sightings.sort(key=_sighting_sort_key)

        # --- twitter --------------------------------------------------------
        twitter: dict[str, Any] | None = None
        tweets: list[_TweetDraft] = []
        if rng.random() < params.p_twitter_match:
            def new_tweet(author: str, created_at: int, profile: dict[str, Any]) -> _TweetDraft:
                nonlocal tweet_seq
                tweet_seq += 1
                builder = _TextBuilder()
                builder.text(_sentence(rng) + " " + rng.choice(_LEAD_INS) + " ")
                builder.address(addr, display)
                builder.text(rng.choice(_TRAILERS))
                draft = _TweetDraft(
                    id=f"tw_{tweet_seq:06d}",
                    author=author,
                    created_at=created_at,
                    body=builder.build(),
                    profile=profile,
                )
                _, start, _end = builder.spans[0]
                planted_tweet_spans.append((draft.id, addr.canonical, start))
                return draft

            def noise_profile(handle: str) -> dict[str, Any]:
                return {
                    "handle": handle,
                    "display_name": handle.replace("_", " ").title(),
                    "description": "",
                    "location": None,
                    "profile_url": f"https://social.example.org/{handle}",
                    "avatar_url": None,
                }

            if rng.random() < 0.5 and sightings:
                handle = sightings[0]["author"]
            else:
                handle = f"{rng.choice(_WORDS)}{rng.randint(10, 99)}"

            description = ""
            pii = {"emails": [], "links": [], "discord_handles": []}
            if rng.random() < params.p_has_description:
                phrases: list[str] = [rng.choice(_GREETINGS)]
                if rng.random() < params.p_email:
                    email = f"{rng.choice(_WORDS)}{rng.randint(1, 99)}@example.{rng.choice(['com', 'org'])}"
                    phrases.append(f"contact {email}")
                    pii["emails"].append(email)
                if rng.random() < params.p_link:
                    n_links = 2 if rng.random() < 0.2 else 1
                    for _ in range(n_links):
                        link = f"https://example.net/{rng.choice(_WORDS)}{rng.randint(1, 999)}"
                        phrases.append(f"more at {link}")
                        pii["links"].append(link)
                if rng.random() < params.p_discord:
                    if rng.random() < 0.5:
                        tag = f"{rng.choice(_WORDS).title()}#{rng.randint(0, 9999):04d}"
                        phrases.append(f"ping {tag}")
                        pii["discord_handles"].append(tag)
                    else:
                        code = "".join(rng.choice("abcdefghjkmnpqrstuvwxyz23456789") for _ in range(8))
                        phrases.append(f"join discord.gg/{code}")
                        pii["discord_handles"].append(code)
                description = " | ".join(phrases)

            winner_profile = {
                "handle": handle,
                "display_name": handle.replace("_", " ").title(),
                "description": description,
                "location": rng.choice([None, "metaverse", "the mempool"]),
                "profile_url": f"https://social.example.org/{handle}",
                "avatar_url": f"https://img.example.org/{handle}.png",
            }
            primary_tweet_ts = next_ts()
            tweets.append(new_tweet(handle, primary_tweet_ts, winner_profile))

            if rng.random() < params.p_double_tweet:
                tweets.append(new_tweet(handle, next_ts(), winner_profile))

            if rng.random() < params.p_competing_tweet:
                rival = f"{rng.choice(_WORDS)}{rng.randint(100, 999)}"
                roll = rng.random()
                if roll < 0.4:
                    rival_ts = primary_tweet_ts - rng.randint(1, 599)
                elif roll < 0.6:
                    rival_ts = primary_tweet_ts
                else:
                    rival_ts = next_ts()
                tweets.append(new_tweet(rival, rival_ts, noise_profile(rival)))

            winner = min(tweets, key=lambda t: (t.created_at, t.id))
            twitter = {
                "handle": winner.author,
                "post_id": winner.id,
                "created_at": winner.created_at,
                "profile": dict(winner.profile),
                "description": winner.profile["description"],
                "pii": pii if winner.author == handle else {"emails": [], "links": [], "discord_handles": []},
                "posts": [
                    {"id": t.id, "author": t.author, "created_at": t.created_at}
                    for t in tweets
                ],
            }

        # --- chain activity ---------------------------------------------------
        active = rng.random() < params.p_active_account
        balance = 0
        transactions: list[dict[str, Any]] = []
        if active:
            shape = rng.random()
            has_balance = shape < 0.8
            has_txs = shape >= 0.2 and params.max_tx_per_account > 0
            if not has_balance and not has_txs:
                has_balance = True
            if has_balance:
                balance = rng.randint(1, 200 * 10**18)
            if has_txs:
                tx_ts = EPOCH_BASE - rng.randint(10_000, 100_000)
                for _ in range(rng.randint(1, params.max_tx_per_account)):
                    tx_ts += rng.randint(60, 9_000)
                    if len(addresses) > 1 and rng.random() < 0.5:
                        j = rng.randrange(len(addresses) - 1)
                        counterparty = addresses[j if addresses[j] != addr else len(addresses) - 1]
                    else:
                        counterparty = EthAddress(rng.randbytes(20))
                    outgoing = rng.random() < 0.5
                    transactions.append({
                        "hash": "0x" + rng.randbytes(32).hex(),
                        "from": addr.canonical if outgoing else counterparty.canonical,
                        "to": counterparty.canonical if outgoing else addr.canonical,
                        "value_wei": str(rng.randint(1, 10**19)),
                        "timestamp": tx_ts,
                    })

        status = "dead" if balance == 0 and not transactions else "active"
        if active != (status == "active"):
            raise CorpusError("activity bookkeeping out of sync")

        records.append({
            "address": addr.canonical,
            "display_form": display,
            "reddit_author": sightings[0]["author"],
            "sightings": sightings,
            "twitter": twitter,
            "balance_wei": str(balance),
            "transactions": transactions,
            "status": status,
            "_tweets": tweets,  # stripped before save
        })

    # --- assemble fixture documents -----------------------------------------
    twitter_docs: list[dict[str, Any]] = []
    for record, addr in zip(records, addresses):
        request = CanonicalRequest("GET", "/twitter/search", {"q": addr.canonical})
        tweets = record.pop("_tweets")
        twitter_docs.append({
            "kind": "twitter.search",
            "request": request.canonical(),
            "results": [t.to_result() for t in tweets],
        })

    # --- self-check: planted occurrences are exactly what extraction finds ---
    expected_occurrences: set[tuple[str, str, int]] = set()
    for record in records:
        for sighting in record["sightings"]:
            container = sighting["comment_id"] or sighting["post_id"]
            expected_occurrences.add((container, record["address"], sighting["span"]["start"]))
    expected_occurrences.update(planted_tweet_spans)

    found_occurrences: set[tuple[str, str, int]] = set()

    def scan(container: str, text: str) -> None:
        for found, span in extract_addresses(text):
            found_occurrences.add((container, found.canonical, span.start))

    for post in all_posts:
        scan(post.id, post.builder.build())
        scan(post.id, post.title)
        for comment in post.comments:
            for node in comment.walk():
                scan(node.id, node.builder.build())
    for doc in twitter_docs:
        for result in doc["results"]:
            scan(result["post"]["id"], result["post"]["body"])
            scan(result["post"]["id"] + "/profile", result["profile"]["description"])
            scan(result["post"]["id"] + "/name", result["profile"]["display_name"])

    if found_occurrences != expected_occurrences:
        raise CorpusError(
            f"address screening failed: {found_occurrences ^ expected_occurrences}"
        )

    for record in records:
        if record["twitter"]:
            found_pii = extract_pii(record["twitter"]["description"])
            planted = record["twitter"]["pii"]
            extracted = found_pii.to_json_dict()
            if extracted != planted:
                raise CorpusError(
                    f"PII screening failed for {record['address']}: "
                    f"planted {planted}, extracted {extracted} "
                    f"from {record['twitter']['description']!r}"
                )

    # --- write fixtures -------------------------------------------------------
    for query in params.queries:
        request = CanonicalRequest("GET", "/reddit/search", {"q": query})
        write_fixture(fixture_root, "reddit", request, {
            "kind": "reddit.search",
            "request": request.canonical(),
            "posts": [post.to_doc() for post in posts_by_query[query]],
        })
    for post in all_posts:
        request = CanonicalRequest("GET", "/reddit/comments", {"post_id": post.id})
        write_fixture(fixture_root, "reddit", request, {
            "kind": "reddit.comments",
            "request": request.canonical(),
            "comments": [comment.to_doc() for comment in post.comments],
        })
    for record, addr, twitter_doc in zip(records, addresses, twitter_docs):
        request = CanonicalRequest("GET", "/twitter/search", {"q": addr.canonical})
        write_fixture(fixture_root, "twitter", request, twitter_doc)

        balance_request = CanonicalRequest("GET", "/etherscan/balance", {"address": addr.canonical})
        write_fixture(fixture_root, "etherscan", balance_request, {
            "kind": "etherscan.balance",
            "request": balance_request.canonical(),
            "address": addr.canonical,
            "balance_wei": record["balance_wei"],
        })
        txlist_request = CanonicalRequest("GET", "/etherscan/txlist", {"address": addr.canonical})
        write_fixture(fixture_root, "etherscan", txlist_request, {
            "kind": "etherscan.txlist",
            "request": txlist_request.canonical(),
            "address": addr.canonical,
            "transactions": record["transactions"],
        })

    records.sort(key=lambda r: r["address"])
    manifest = GroundTruthManifest(
        seed=params.seed,
        params=params,
        queries=list(params.queries),
        reddit_users=users,
        records=records,
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest.save(out_dir / "manifest.json")
    (out_dir / "queries.txt").write_text(
        "".join(q + "\n" for q in params.queries), encoding="utf-8"
    )
    return manifest
