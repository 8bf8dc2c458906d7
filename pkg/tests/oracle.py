"""Manifest-derived expectations, independent of the pipeline under test.

Everything here maps planted facts straight out of the ground-truth
manifest into the record/stats shapes, so equality against pipeline
output is an exact precision/recall check.
"""

from __future__ import annotations

from chaintrace.address import TextSpan, parse_address, to_checksummed
from chaintrace.corpus import GroundTruthManifest
from chaintrace.pipeline import (
    AccountActivity,
    ActivityStatus,
    AddressSighting,
    ExtractedPII,
    LinkedIdentity,
    MatchedTwitter,
    StatsTable,
)
from chaintrace.sources import Platform, Transaction, TwitterProfileRaw

WEI_PER_ETH = 10**18


def expected_records(manifest: GroundTruthManifest) -> list[LinkedIdentity]:
    records = []
    for rec in manifest.records:
        addr = parse_address(rec["address"])
        sightings = tuple(
            AddressSighting(
                address=addr,
                platform=Platform.REDDIT,
                author=s["author"],
                post_id=s["post_id"],
                comment_id=s["comment_id"],
                span=TextSpan(s["span"]["start"], s["span"]["end"]),
                seen_at=s["created_at"],
            )
            for s in rec["sightings"]
        )
        twitter = None
        if rec["twitter"]:
            t = rec["twitter"]
            profile = t["profile"]
            twitter = MatchedTwitter(
                profile=TwitterProfileRaw(
                    handle=profile["handle"],
                    display_name=profile["display_name"],
                    description=profile["description"],
                    location=profile["location"],
                    profile_url=profile["profile_url"],
                    avatar_url=profile["avatar_url"],
                ),
                pii=ExtractedPII(
                    emails=tuple(t["pii"]["emails"]),
                    links=tuple(t["pii"]["links"]),
                    discord_handles=tuple(t["pii"]["discord_handles"]),
                ),
                post_id=t["post_id"],
            )
        activity = AccountActivity(
            balance_wei=int(rec["balance_wei"]),
            transactions=tuple(
                Transaction(
                    hash=tx["hash"],
                    from_addr=parse_address(tx["from"]),
                    to_addr=parse_address(tx["to"]) if tx["to"] else None,
                    value_wei=int(tx["value_wei"]),
                    timestamp=tx["timestamp"],
                )
                for tx in rec["transactions"]
            ),
            status=ActivityStatus(rec["status"]),
        )
        records.append(LinkedIdentity(
            address=addr,
            reddit_author=rec["reddit_author"],
            reddit_sightings=sightings,
            twitter=twitter,
            activity=activity,
        ))
    records.sort(key=lambda r: r.address)
    return records


def expected_stats(manifest: GroundTruthManifest) -> StatsTable:
    records = manifest.records
    matched = [r for r in records if r["twitter"]]
    described = [r for r in matched if r["twitter"]["description"]]

    def has(rec, kind):
        return bool(rec["twitter"]["pii"][kind])

    return StatsTable(
        scraped_addresses=len(records),
        dead=sum(1 for r in records if r["status"] == "dead"),
        active=sum(1 for r in records if r["status"] == "active"),
        twitter_matches=len(matched),
        with_description=len(described),
        with_links=sum(1 for r in described if has(r, "links")),
        with_emails=sum(1 for r in described if has(r, "emails")),
        with_discord=sum(1 for r in described if has(r, "discord_handles")),
        active_among_matches=sum(1 for r in matched if r["status"] == "active"),
    )


def eth_fixed_point(wei: int) -> str:
    return f"{wei // WEI_PER_ETH}.{wei % WEI_PER_ETH:018d}"


def expected_profile_response(rec: dict) -> dict:
    """The exact /api/address/{addr} body for a manifest record, redaction off."""
    addr = parse_address(rec["address"])
    twitter = None
    if rec["twitter"]:
        t = rec["twitter"]
        twitter = {
            "handle": t["profile"]["handle"],
            "display_name": t["profile"]["display_name"],
            "description": t["profile"]["description"],
            "location": t["profile"]["location"],
            "profile_url": t["profile"]["profile_url"],
            "avatar_url": t["profile"]["avatar_url"],
            "post_id": t["post_id"],
            "pii": t["pii"],
        }
    balance = int(rec["balance_wei"])
    return {
        "address": rec["address"],
        "address_checksummed": to_checksummed(addr),
        "reddit_author": rec["reddit_author"],
        "reddit_sightings": [
            {
                "platform": "reddit",
                "author": s["author"],
                "post_id": s["post_id"],
                "comment_id": s["comment_id"],
                "span": dict(s["span"]),
                "seen_at": s["created_at"],
            }
            for s in rec["sightings"]
        ],
        "twitter": twitter,
        "activity": {
            "balance_wei": rec["balance_wei"],
            "balance_eth": eth_fixed_point(balance),
            "status": rec["status"],
            "transaction_count": len(rec["transactions"]),
        },
    }


def expected_transactions_response(rec: dict) -> dict:
    rows = [
        {
            "hash": tx["hash"],
            "from": tx["from"],
            "to": tx["to"],
            "value_wei": tx["value_wei"],
            "value_eth": eth_fixed_point(int(tx["value_wei"])),
            "timestamp": tx["timestamp"],
        }
        for tx in sorted(rec["transactions"], key=lambda t: (t["timestamp"], t["hash"]))
    ]
    return {"address": rec["address"], "transactions": rows}
