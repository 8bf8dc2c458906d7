"""Response models for the query API."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

WEI_PER_ETH = 10**18


def wei_to_eth_str(wei: int) -> str:
    """Fixed-point ETH rendering with the full 18 fractional digits.

    Done server-side so clients never touch big integers or floats.
    """
    whole, frac = divmod(wei, WEI_PER_ETH)
    return f"{whole}.{frac:018d}"


class SpanModel(BaseModel):
    start: int
    end: int


class SightingModel(BaseModel):
    platform: str
    author: str
    post_id: str
    comment_id: str | None
    span: SpanModel
    seen_at: int


class PiiModel(BaseModel):
    emails: list[str]
    links: list[str]
    discord_handles: list[str]


class TwitterModel(BaseModel):
    handle: str
    display_name: str
    description: str
    location: str | None
    profile_url: str | None
    avatar_url: str | None
    post_id: str
    pii: PiiModel


class ActivitySummaryModel(BaseModel):
    balance_wei: str
    balance_eth: str
    status: str
    transaction_count: int


class ProfileResponse(BaseModel):
    address: str
    address_checksummed: str
    reddit_author: str
    reddit_sightings: list[SightingModel]
    twitter: TwitterModel | None
    activity: ActivitySummaryModel | None


class TransactionRow(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    hash: str
    from_addr: str = Field(alias="from")
    to_addr: str | None = Field(alias="to")
    value_wei: str
    value_eth: str
    timestamp: int


class TransactionsResponse(BaseModel):
    address: str
    transactions: list[TransactionRow]


class ProfileSummary(BaseModel):
    address: str
    address_checksummed: str
    reddit_author: str
    twitter_handle: str | None
    balance_wei: str
    balance_eth: str
    status: str | None


class TopResponse(BaseModel):
    profiles: list[ProfileSummary]


class RandomResponse(BaseModel):
    seed: int
    addresses: list[str]
