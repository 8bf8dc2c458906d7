"""HTTP query API over a loaded record store.

Read-only and stateless: handlers share one immutable store, so any
request concurrency is safe. Reloading the store means restarting the
service.
"""

from __future__ import annotations

import secrets as _secrets

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware

from .. import __version__
from ..address import AddressError, EthAddress, parse_address, to_checksummed
from ..pipeline import LinkedIdentity
from ..store import RecordStore
from .redaction import RedactionPolicy
from .schemas import (
    ProfileResponse,
    ProfileSummary,
    RandomResponse,
    TopResponse,
    TransactionsResponse,
    wei_to_eth_str,
)

__all__ = ["create_app"]

DEFAULT_TOP_N = 3
DEFAULT_RANDOM_N = 4


def profile_document(record: LinkedIdentity, policy: RedactionPolicy) -> dict:
    twitter = None
    if record.twitter:
        pii = record.twitter.pii
        profile = record.twitter.profile
        twitter = {
            "handle": profile.handle,
            "display_name": profile.display_name,
            "description": policy.mask_description(profile.description, pii),
            "location": profile.location,
            "profile_url": profile.profile_url,
            "avatar_url": profile.avatar_url,
            "post_id": record.twitter.post_id,
            "pii": policy.mask_pii(pii).to_json_dict(),
        }
    activity = None
    if record.activity:
        activity = {
            "balance_wei": str(record.activity.balance_wei),
            "balance_eth": wei_to_eth_str(record.activity.balance_wei),
            "status": record.activity.status.value,
            "transaction_count": len(record.activity.transactions),
        }
    return {
        "address": record.address.canonical,
        "address_checksummed": to_checksummed(record.address),
        "reddit_author": record.reddit_author,
        "reddit_sightings": [s.to_json_dict() for s in record.reddit_sightings],
        "twitter": twitter,
        "activity": activity,
    }


def transactions_document(record: LinkedIdentity, policy: RedactionPolicy) -> dict:
    queried = record.address
    rows = []
    if record.activity:
        for tx in sorted(record.activity.transactions, key=lambda t: (t.timestamp, t.hash)):
            from_c = tx.from_addr.canonical
            to_c = tx.to_addr.canonical if tx.to_addr else None
            rows.append({
                "hash": tx.hash,
                "from": from_c if tx.from_addr == queried else policy.mask_counterparty(from_c),
                "to": to_c if tx.to_addr == queried else policy.mask_counterparty(to_c),
                "value_wei": str(tx.value_wei),
                "value_eth": wei_to_eth_str(tx.value_wei),
                "timestamp": tx.timestamp,
            })
    return {"address": queried.canonical, "transactions": rows}


def summary_document(record: LinkedIdentity) -> dict:
    balance = record.activity.balance_wei if record.activity else 0
    return {
        "address": record.address.canonical,
        "address_checksummed": to_checksummed(record.address),
        "reddit_author": record.reddit_author,
        "twitter_handle": record.twitter.profile.handle if record.twitter else None,
        "balance_wei": str(balance),
        "balance_eth": wei_to_eth_str(balance),
        "status": record.activity.status.value if record.activity else None,
    }


def create_app(
    store: RecordStore,
    redaction: RedactionPolicy | None = None,
    cors_origins: list[str] | None = None,
) -> FastAPI:
    policy = redaction or RedactionPolicy()
    app = FastAPI(
        title="chaintrace query service",
        version=__version__,
        description="Lookup API over correlated address/identity records.",
    )
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    def parse_or_400(addr: str) -> EthAddress:
        try:
            return parse_address(addr.lower())
        except AddressError as exc:
            raise HTTPException(status_code=400, detail=f"malformed address: {exc}")

    def record_or_404(addr: str) -> LinkedIdentity:
        record = store.get(parse_or_400(addr))
        if record is None:
            raise HTTPException(status_code=404, detail="address not found")
        return record

    @app.get("/api/address/{addr}", response_model=ProfileResponse)
    def get_profile(addr: str):
        return profile_document(record_or_404(addr), policy)

    @app.get("/api/address/{addr}/transactions", response_model=TransactionsResponse)
    def get_transactions(addr: str):
        return transactions_document(record_or_404(addr), policy)

    @app.get("/api/top", response_model=TopResponse)
    def get_top(n: int = Query(DEFAULT_TOP_N, ge=0)):
        return {"profiles": [summary_document(r) for r in store.top_by_balance(n)]}

    @app.get("/api/random", response_model=RandomResponse)
    def get_random(n: int = Query(DEFAULT_RANDOM_N, ge=0), seed: int | None = None):
        if seed is None:
            seed = _secrets.randbits(32)
        count = min(n, len(store))
        addresses = store.sample_random(count, seed)
        return {"seed": seed, "addresses": [a.canonical for a in addresses]}

    return app
