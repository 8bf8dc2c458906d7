"""Ethereum address parsing, checksummed display, and free-text extraction.

An address is 20 raw bytes. The canonical text form is ``0x`` plus 40
lowercase hex characters; the display form carries the keccak-derived
mixed-case checksum. Extraction from scraped text is deliberately
permissive (bad-checksum mixed case is still a find); strict validation
lives in :func:`parse_address`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .keccak import keccak_256

__all__ = [
    "AddressError",
    "BadChecksum",
    "EthAddress",
    "MissingPrefix",
    "NonHexCharacter",
    "TextSpan",
    "WrongLength",
    "extract_addresses",
    "parse_address",
    "to_checksummed",
]

_HEX_DIGITS = frozenset("0123456789abcdefABCDEF")
_CANDIDATE = re.compile(r"0x[0-9a-fA-F]{40}")


class AddressError(ValueError):
    """Base class for address validation failures."""


class MissingPrefix(AddressError):
    pass


class WrongLength(AddressError):
    pass


class NonHexCharacter(AddressError):
    pass


class BadChecksum(AddressError):
    pass


@dataclass(frozen=True, order=True)
class EthAddress:
    """A 20-byte Ethereum address. Equality and order are over the raw bytes."""

    raw: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.raw, bytes):
            raise TypeError(f"EthAddress takes bytes, got {type(self.raw).__name__}")
        if len(self.raw) != 20:
            raise WrongLength(f"address must be 20 bytes, got {len(self.raw)}")

    @property
    def canonical(self) -> str:
        return "0x" + self.raw.hex()

    @property
    def checksummed(self) -> str:
        return to_checksummed(self)

    def __str__(self) -> str:
        return self.canonical

    def __repr__(self) -> str:
        return f"EthAddress({self.canonical!r})"


@dataclass(frozen=True)
class TextSpan:
    """Half-open byte range [start, end) into the UTF-8 encoding of a text."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.start >= self.end:
            raise ValueError(f"invalid span [{self.start}, {self.end})")


def parse_address(text: str) -> EthAddress:
    """Parse ``0x``-prefixed hex into an address, enforcing the checksum.

    All-lowercase and all-uppercase bodies carry no checksum and are
    accepted as-is; a mixed-case body must match its checksummed form.

    Raises:
        MissingPrefix: no leading ``0x``.
        WrongLength: hex run after the prefix is not 40 characters.
        NonHexCharacter: a character outside [0-9a-fA-F].
        BadChecksum: mixed-case body disagreeing with the checksum.
    """
    if not text.startswith("0x"):
        raise MissingPrefix(f"expected 0x prefix: {text[:16]!r}")
    body = text[2:]
    if len(body) != 40:
        raise WrongLength(f"expected 40 hex characters after 0x, got {len(body)}")
    for ch in body:
        if ch not in _HEX_DIGITS:
            raise NonHexCharacter(f"invalid hex character {ch!r}")
    addr = EthAddress(bytes.fromhex(body))
    if body != body.lower() and body != body.upper():
        if text != to_checksummed(addr):
            raise BadChecksum(f"mixed-case address fails checksum: {text}")
    return addr


def to_checksummed(addr: EthAddress) -> str:
    """Render the mixed-case checksum form.

    Hex letter i is uppercased iff nibble i of keccak-256 of the
    lowercase hex body (as ASCII) is >= 8.
    """
    body = addr.raw.hex()
    digest = keccak_256(body.encode("ascii")).hex()
    out = [
        ch.upper() if ch >= "a" and int(digest[i], 16) >= 8 else ch
        for i, ch in enumerate(body)
    ]
    return "0x" + "".join(out)


def _byte_offset(text: str, char_index: int) -> int:
    # surrogatepass keeps this total on garbage input (lone surrogates).
    return len(text[:char_index].encode("utf-8", "surrogatepass"))


def extract_addresses(text: str) -> list[tuple[EthAddress, TextSpan]]:
    """Find every address-shaped run in ``text``, in ascending span order.

    A match is ``0x`` plus exactly 40 hex characters whose neighbours
    (if any) are non-alphanumeric, so 41+ hex runs and identifiers do
    not produce spurious hits. Mixed case is accepted regardless of
    checksum and canonicalized by lowercasing. Duplicates are kept;
    deduplication is the caller's concern. Spans are UTF-8 byte offsets.
    """
    found: list[tuple[EthAddress, TextSpan]] = []
    ascii_text = text.isascii()
    for m in _CANDIDATE.finditer(text):
        start, end = m.span()
        if start > 0 and text[start - 1].isalnum():
            continue
        if end < len(text) and text[end].isalnum():
            continue
        addr = EthAddress(bytes.fromhex(m.group()[2:].lower()))
        byte_start = start if ascii_text else _byte_offset(text, start)
        found.append((addr, TextSpan(byte_start, byte_start + 42)))
    return found
