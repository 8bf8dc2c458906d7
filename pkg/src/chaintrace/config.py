"""Runtime configuration: transport mode, fixture root, per-source
endpoints and rate-limit policies, vault file locations.

Loaded from a JSON file (see docs/schemas.md for the layout), with
environment overrides for the transport mode (CHAINTRACE_TRANSPORT_MODE)
and the key file (CHAINTRACE_KEY_FILE).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .ratelimit import (
    Clock,
    RateLimitGovernor,
    RateLimitPolicy,
    SystemClock,
    VirtualClock,
)
from .transport import LiveTransport, ReplayTransport, Transport
from .vault import CredentialSet, VaultKey

__all__ = ["AppConfig", "DEFAULT_POLICIES"]

DEFAULT_POLICIES: dict[str, RateLimitPolicy] = {
    "reddit": RateLimitPolicy(max_requests=60, window=60.0, backoff=60.0),
    "twitter": RateLimitPolicy(max_requests=180, window=900.0, backoff=960.0),
    "etherscan": RateLimitPolicy(max_requests=5, window=1.0, backoff=1.0),
}


@dataclass
class AppConfig:
    transport_mode: str = "replay"
    fixture_root: Path = Path("fixtures")
    base_urls: dict[str, str] = field(default_factory=dict)
    policies: dict[str, RateLimitPolicy] = field(default_factory=lambda: dict(DEFAULT_POLICIES))
    key_file: Path | None = None
    credentials_file: Path | None = None
    scrape_limit: int = 100
    include_post_bodies: bool = True
    max_pages: int = 4
    redact: bool = False
    tail_mask_len: int = 2
    cors_origins: list[str] = field(default_factory=lambda: ["*"])

    def __post_init__(self) -> None:
        if self.transport_mode not in ("replay", "live"):
            raise ValueError(f"transport_mode must be 'replay' or 'live', got {self.transport_mode!r}")

    @classmethod
    def load(
        cls,
        path: str | Path | None = None,
        env: Mapping[str, str] | None = None,
    ) -> "AppConfig":
        env = os.environ if env is None else env
        data: dict[str, Any] = {}
        if path is not None:
            data = json.loads(Path(path).read_text(encoding="utf-8"))

        policies = dict(DEFAULT_POLICIES)
        for source, fields in data.get("policies", {}).items():
            policies[source] = RateLimitPolicy(
                max_requests=int(fields["max_requests"]),
                window=float(fields["window"]),
                backoff=float(fields.get("backoff", DEFAULT_POLICIES.get(
                    source, RateLimitPolicy(1, 1.0)
                ).backoff)),
            )

        key_file = env.get("CHAINTRACE_KEY_FILE") or data.get("key_file")
        return cls(
            transport_mode=env.get("CHAINTRACE_TRANSPORT_MODE") or data.get("transport_mode", "replay"),
            fixture_root=Path(data.get("fixture_root", "fixtures")),
            base_urls=dict(data.get("base_urls", {})),
            policies=policies,
            key_file=Path(key_file) if key_file else None,
            credentials_file=Path(data["credentials_file"]) if data.get("credentials_file") else None,
            scrape_limit=int(data.get("scrape_limit", 100)),
            include_post_bodies=bool(data.get("include_post_bodies", True)),
            max_pages=int(data.get("max_pages", 4)),
            redact=bool(data.get("redact", False)),
            tail_mask_len=int(data.get("tail_mask_len", 2)),
            cors_origins=list(data.get("cors_origins", ["*"])),
        )

    def load_credentials(self) -> CredentialSet | None:
        if self.key_file is None or self.credentials_file is None:
            return None
        key = VaultKey.load(self.key_file)
        return CredentialSet.load(self.credentials_file, key)

    def build_transport(self) -> Transport:
        if self.transport_mode == "replay":
            return ReplayTransport(self.fixture_root)
        return LiveTransport(
            base_urls=self.base_urls,
            credentials=self.load_credentials(),
            max_pages=self.max_pages,
        )

    def build_clock(self) -> Clock:
        # Replay runs must be deterministic and must not actually sleep.
        return VirtualClock() if self.transport_mode == "replay" else SystemClock()

    def build_governor(self, clock: Clock | None = None) -> RateLimitGovernor:
        return RateLimitGovernor(self.policies, clock or self.build_clock())
