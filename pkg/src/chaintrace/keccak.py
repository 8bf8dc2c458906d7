"""Keccak-256 in pure Python.

This is the original Keccak sponge (0x01 domain padding) as used by
Ethereum, not the NIST SHA-3 variant shipped in hashlib (0x06 padding).
No package on our index provides it, so we carry our own. Inputs here
are tiny (40-byte address bodies), so pure Python is plenty fast.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1

_ROUND_CONSTANTS = (
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
)

# Rho rotation offsets, indexed by lane (x + 5*y).
_RHO = (
    0, 1, 62, 28, 27,
    36, 44, 6, 55, 20,
    3, 10, 43, 25, 39,
    41, 45, 15, 21, 8,
    18, 2, 61, 56, 14,
)

# Pi step: target lane (x', y') = (y, 2x + 3y) takes the rotated source
# lane (x, y). Inverting gives source index for each target.
_PI_SOURCE = tuple(
    ((3 * (yp - 3 * xp)) % 5) + 5 * xp for yp in range(5) for xp in range(5)
)

_RATE = 136  # bytes absorbed per permutation at capacity 512


def _keccak_f(state: list[int]) -> None:
    for rc in _ROUND_CONSTANTS:
        # theta
        c = [
            state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20]
            for x in range(5)
        ]
        for x in range(5):
            cx = c[(x + 1) % 5]
            d = c[(x - 1) % 5] ^ (((cx << 1) | (cx >> 63)) & _MASK)
            for y in range(0, 25, 5):
                state[x + y] ^= d
        # rho + pi
        b = [0] * 25
        for j in range(25):
            src = _PI_SOURCE[j]
            v = state[src]
            r = _RHO[src]
            b[j] = ((v << r) | (v >> (64 - r))) & _MASK if r else v
        # chi
        for y in range(0, 25, 5):
            row = b[y:y + 5]
            for x in range(5):
                state[x + y] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5])
        # iota
        state[0] ^= rc


def keccak_256(data: bytes) -> bytes:
    """Return the 32-byte Keccak-256 digest of ``data``."""
    padded = bytearray(data)
    pad_len = _RATE - (len(padded) % _RATE)
    if pad_len == 1:
        padded.append(0x81)
    else:
        padded.append(0x01)
        padded.extend(b"\x00" * (pad_len - 2))
        padded.append(0x80)

    state = [0] * 25
    for offset in range(0, len(padded), _RATE):
        block = padded[offset:offset + _RATE]
        for i in range(17):
            state[i] ^= int.from_bytes(block[i * 8:i * 8 + 8], "little")
        _keccak_f(state)

    return b"".join(state[i].to_bytes(8, "little") for i in range(4))
