"""Response-layer masking of third-party data.

Masking never touches stored data. The queried address itself stays
readable (the requester already typed it); counterparty addresses in
transaction rows and mined PII are what get masked.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..pipeline import ExtractedPII

__all__ = ["RedactionPolicy"]


@dataclass(frozen=True)
class RedactionPolicy:
    enabled: bool = False
    tail_mask_len: int = 2
    pii_mask: bool = True

    def __post_init__(self) -> None:
        if self.tail_mask_len < 1:
            raise ValueError("tail_mask_len must be >= 1")

    def mask_counterparty(self, canonical: str | None) -> str | None:
        if canonical is None or not self.enabled:
            return canonical
        return "…" + canonical[-self.tail_mask_len:]

    def mask_email(self, email: str) -> str:
        local, _, domain = email.partition("@")
        return f"{local[:1]}…@{domain}"

    def mask_link(self, link: str) -> str:
        scheme, sep, rest = link.partition("://")
        if not sep:
            return link[:8] + "…"
        host, slash, _path = rest.partition("/")
        return f"{scheme}{sep}{host}{slash}…" if slash else link

    def mask_discord(self, handle: str) -> str:
        name, sep, _tag = handle.partition("#")
        if sep:
            return f"{name}#…"
        return handle[:2] + "…"

    def mask_pii(self, pii: ExtractedPII) -> ExtractedPII:
        if not self.enabled or not self.pii_mask:
            return pii
        return ExtractedPII(
            emails=tuple(self.mask_email(e) for e in pii.emails),
            links=tuple(self.mask_link(l) for l in pii.links),
            discord_handles=tuple(self.mask_discord(d) for d in pii.discord_handles),
        )

    def mask_description(self, description: str, pii: ExtractedPII) -> str:
        """Replace every mined PII occurrence inside the free text."""
        if not self.enabled or not self.pii_mask:
            return description
        out = description
        for email in pii.emails:
            out = out.replace(email, self.mask_email(email))
        for link in pii.links:
            out = out.replace(link, self.mask_link(link))
        for handle in pii.discord_handles:
            out = out.replace(handle, self.mask_discord(handle))
        return out
