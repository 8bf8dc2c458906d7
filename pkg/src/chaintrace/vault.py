"""Authenticated encryption for API credentials at rest.

Sealed tokens use the published Fernet layout: a 0x80 version byte, a
big-endian 64-bit timestamp, a 16-byte IV, AES-128-CBC ciphertext over
PKCS7-padded plaintext, and an HMAC-SHA256 over everything preceding
it, the whole thing url-safe base64. The 32-byte key splits into a
16-byte signing half and a 16-byte encryption half, and lives in its
own single-line key file so the repository never holds plaintext
secrets. Timestamps come from an injected clock, never the wall clock.
"""

from __future__ import annotations

import base64
import binascii
import hmac as _hmac
import os
import secrets
from dataclasses import dataclass
from hashlib import sha256
from pathlib import Path

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

__all__ = [
    "CredentialSet",
    "Expired",
    "InvalidMac",
    "MalformedEncoding",
    "MissingKeyFile",
    "SealedToken",
    "VaultError",
    "VaultKey",
    "WrongVersion",
    "parse_token",
    "seal",
    "unseal",
]

VERSION = 0x80
_HEADER_LEN = 1 + 8 + 16  # version + timestamp + iv
_MAC_LEN = 32
_BLOCK = 16


class VaultError(Exception):
    """Base class for vault failures."""


class MalformedEncoding(VaultError):
    pass


class InvalidMac(VaultError):
    pass


class WrongVersion(VaultError):
    pass


class Expired(VaultError):
    pass


class MissingKeyFile(VaultError):
    pass


@dataclass(frozen=True)
class VaultKey:
    signing_key: bytes
    encryption_key: bytes

    def __post_init__(self) -> None:
        if len(self.signing_key) != 16 or len(self.encryption_key) != 16:
            raise ValueError("vault key halves must be 16 bytes each")

    @classmethod
    def generate(cls) -> "VaultKey":
        raw = secrets.token_bytes(32)
        return cls(raw[:16], raw[16:])

    @classmethod
    def from_base64(cls, text: str) -> "VaultKey":
        try:
            raw = base64.urlsafe_b64decode(text.strip().encode("ascii"))
        except (binascii.Error, UnicodeEncodeError) as exc:
            raise MalformedEncoding(f"key is not url-safe base64: {exc}") from exc
        if len(raw) != 32:
            raise MalformedEncoding(f"key must decode to 32 bytes, got {len(raw)}")
        return cls(raw[:16], raw[16:])

    def to_base64(self) -> str:
        return base64.urlsafe_b64encode(self.signing_key + self.encryption_key).decode("ascii")

    @classmethod
    def load(cls, path: str | Path) -> "VaultKey":
        path = Path(path)
        if not path.is_file():
            raise MissingKeyFile(
                f"key file {path} not found; run 'chaintrace vault init' or set CHAINTRACE_KEY_FILE"
            )
        return cls.from_base64(path.read_text(encoding="ascii"))

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.write_text(self.to_base64() + "\n", encoding="ascii")
        try:
            os.chmod(path, 0o600)
        except OSError:
            pass  # platform without POSIX modes


@dataclass(frozen=True)
class SealedToken:
    """Decoded token structure; produced by :func:`parse_token`."""

    version: int
    timestamp: int
    iv: bytes
    ciphertext: bytes
    mac: bytes


def _decode(token: str | bytes) -> bytes:
    if isinstance(token, str):
        token = token.encode("ascii", errors="strict")
    try:
        return base64.urlsafe_b64decode(token)
    except (binascii.Error, ValueError) as exc:
        raise MalformedEncoding(f"token is not url-safe base64: {exc}") from exc


def parse_token(token: str | bytes) -> SealedToken:
    raw = _decode(token)
    if len(raw) < _HEADER_LEN + _BLOCK + _MAC_LEN:
        raise MalformedEncoding(f"token too short ({len(raw)} bytes)")
    ciphertext = raw[_HEADER_LEN:-_MAC_LEN]
    if len(ciphertext) % _BLOCK != 0:
        raise MalformedEncoding("ciphertext is not a whole number of blocks")
    return SealedToken(
        version=raw[0],
        timestamp=int.from_bytes(raw[1:9], "big"),
        iv=raw[9:25],
        ciphertext=ciphertext,
        mac=raw[-_MAC_LEN:],
    )


def seal(plaintext: bytes, key: VaultKey, now: int, iv: bytes | None = None) -> str:
    """Seal ``plaintext`` into a token embedding the injected time ``now``."""
    if iv is None:
        iv = secrets.token_bytes(16)
    pad = _BLOCK - (len(plaintext) % _BLOCK)
    padded = plaintext + bytes([pad]) * pad
    enc = Cipher(algorithms.AES(key.encryption_key), modes.CBC(iv)).encryptor()
    ciphertext = enc.update(padded) + enc.finalize()
    body = bytes([VERSION]) + int(now).to_bytes(8, "big") + iv + ciphertext
    mac = _hmac.new(key.signing_key, body, sha256).digest()
    return base64.urlsafe_b64encode(body + mac).decode("ascii")


def unseal(
    token: str | bytes,
    key: VaultKey,
    max_age: int | None = None,
    *,
    now: int = 0,
) -> bytes:
    """Recover the plaintext, verifying the MAC before anything else.

    Raises:
        MalformedEncoding: token does not decode to a plausible layout.
        InvalidMac: any corruption anywhere in the token, or wrong key.
        WrongVersion: authenticated version byte is not 0x80.
        Expired: ``max_age`` given and the token is older than it.
    """
    raw = _decode(token)
    if len(raw) < _HEADER_LEN + _BLOCK + _MAC_LEN:
        raise MalformedEncoding(f"token too short ({len(raw)} bytes)")
    body, mac = raw[:-_MAC_LEN], raw[-_MAC_LEN:]
    expected = _hmac.new(key.signing_key, body, sha256).digest()
    if not _hmac.compare_digest(mac, expected):
        raise InvalidMac("token failed authentication")
    if body[0] != VERSION:
        raise WrongVersion(f"unsupported token version 0x{body[0]:02x}")
    timestamp = int.from_bytes(body[1:9], "big")
    if max_age is not None and now - timestamp > max_age:
        raise Expired(f"token is {now - timestamp}s old, max_age={max_age}s")
    iv, ciphertext = body[9:25], body[25:]
    if len(ciphertext) == 0 or len(ciphertext) % _BLOCK != 0:
        raise MalformedEncoding("ciphertext is not a whole number of blocks")
    dec = Cipher(algorithms.AES(key.encryption_key), modes.CBC(iv)).decryptor()
    padded = dec.update(ciphertext) + dec.finalize()
    pad = padded[-1]
    if pad < 1 or pad > _BLOCK or padded[-pad:] != bytes([pad]) * pad:
        raise InvalidMac("authenticated ciphertext has invalid padding")
    return padded[:-pad]


class CredentialSet:
    """Per-source API secrets, only ever persisted sealed.

    File format: one ``source_id:token`` line per source.
    """

    def __init__(self, secrets_by_source: dict[str, str] | None = None) -> None:
        self._secrets: dict[str, str] = dict(secrets_by_source or {})

    def get(self, source_id: str) -> str | None:
        return self._secrets.get(source_id)

    def set(self, source_id: str, secret: str) -> None:
        if not source_id or ":" in source_id:
            raise ValueError(f"bad source id {source_id!r}")
        self._secrets[source_id] = secret

    def sources(self) -> list[str]:
        return sorted(self._secrets)

    def __len__(self) -> int:
        return len(self._secrets)

    def __contains__(self, source_id: str) -> bool:
        return source_id in self._secrets

    @classmethod
    def load(cls, path: str | Path, key: VaultKey) -> "CredentialSet":
        out: dict[str, str] = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="ascii").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            source_id, _, token = line.partition(":")
            if not token:
                raise MalformedEncoding(f"{path}:{lineno}: expected 'source_id:token'")
            out[source_id] = unseal(token, key).decode("utf-8")
        return cls(out)

    def save(self, path: str | Path, key: VaultKey, now: int) -> None:
        lines = [
            f"{source_id}:{seal(self._secrets[source_id].encode('utf-8'), key, now)}"
            for source_id in sorted(self._secrets)
        ]
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="ascii")
