"""chaintrace: correlate crypto addresses posted on social platforms with
identity records and on-chain activity."""

__version__ = "0.1.0"

from .address import EthAddress, TextSpan, extract_addresses, parse_address, to_checksummed

__all__ = [
    "EthAddress",
    "TextSpan",
    "extract_addresses",
    "parse_address",
    "to_checksummed",
    "__version__",
]
