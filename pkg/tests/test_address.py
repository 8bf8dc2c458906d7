import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaintrace.address import (
    BadChecksum,
    EthAddress,
    MissingPrefix,
    NonHexCharacter,
    TextSpan,
    WrongLength,
    extract_addresses,
    parse_address,
    to_checksummed,
)

ZERO = "0x" + "0" * 40

# Reference checksummed forms published with the checksum standard.
CHECKSUM_VECTORS = [
    "0x5aAeb6053F3E94C9b9A09f33669435E7Ef1BeAed",
    "0xfB6916095ca1df60bB79Ce92cE3Ea74c37c5d359",
    "0xdbF03B407c01E7cD3CBea99509d93f8DDDC8C6FB",
    "0xD1220A0cf47c7B9Be7A2E6BA89F429762e7b9aDb",
]


class TestParse:
    def test_zero_address(self):
        assert parse_address(ZERO).raw == b"\x00" * 20

    def test_wrong_length(self):
        with pytest.raises(WrongLength):
            parse_address("0x" + "a" * 39)
        with pytest.raises(WrongLength):
            parse_address("0x" + "a" * 41)

    def test_missing_prefix(self):
        with pytest.raises(MissingPrefix):
            parse_address("a" * 42)

    def test_non_hex(self):
        with pytest.raises(NonHexCharacter):
            parse_address("0x" + "g" * 40)

    def test_all_lowercase_accepted_without_checksum(self):
        for vector in CHECKSUM_VECTORS:
            assert parse_address(vector.lower()).canonical == vector.lower()

    def test_all_uppercase_accepted_without_checksum(self):
        body = CHECKSUM_VECTORS[0][2:].upper()
        assert parse_address("0x" + body).canonical == "0x" + body.lower()

    def test_valid_checksum_accepted(self):
        for vector in CHECKSUM_VECTORS:
            assert parse_address(vector).canonical == vector.lower()

    def test_flipped_case_rejected(self):
        # flip one alphabetic character of a known-good checksummed form
        for vector in CHECKSUM_VECTORS:
            chars = list(vector)
            flip_at = next(i for i in range(2, len(chars)) if chars[i].isalpha())
            chars[flip_at] = chars[flip_at].swapcase()
            mangled = "".join(chars)
            assert mangled != mangled.lower() and mangled != mangled.upper()
            with pytest.raises(BadChecksum):
                parse_address(mangled)


class TestChecksum:
    def test_zero_address_unchanged(self):
        assert to_checksummed(parse_address(ZERO)) == ZERO

    def test_reference_vectors(self):
        for vector in CHECKSUM_VECTORS:
            assert to_checksummed(parse_address(vector.lower())) == vector

    @given(st.binary(min_size=20, max_size=20))
    def test_round_trip(self, raw):
        addr = EthAddress(raw)
        assert parse_address(to_checksummed(addr)) == addr

    def test_eth_address_validation(self):
        with pytest.raises(WrongLength):
            EthAddress(b"\x00" * 19)
        with pytest.raises(TypeError):
            EthAddress("0x" + "0" * 40)

    def test_equality_ignores_source_case(self):
        checksummed = parse_address(CHECKSUM_VECTORS[0])
        lower = parse_address(CHECKSUM_VECTORS[0].lower())
        assert checksummed == lower
        assert hash(checksummed) == hash(lower)


class TestExtract:
    def test_embedded_match(self):
        addr = "0x" + "ab" * 20
        found = extract_addresses(f"send to {addr} thanks")
        assert len(found) == 1
        entry, span = found[0]
        assert entry.canonical == addr
        assert (span.start, span.end) == (8, 50)

    def test_no_prefix_no_match(self):
        assert extract_addresses("deadbeef no prefix here") == []

    def test_over_long_hex_run_rejected(self):
        assert extract_addresses("0x" + "a" * 41) == []

    def test_preceding_alnum_rejected(self):
        addr = "0x" + "ab" * 20
        assert extract_addresses(f"x{addr}") == []
        assert extract_addresses(f"7{addr}") == []

    def test_duplicates_preserved_in_span_order(self):
        addr = "0x" + "ab" * 20
        found = extract_addresses(f"{addr} and {addr}")
        assert len(found) == 2
        assert found[0][0] == found[1][0]
        assert found[0][1].start < found[1][1].start

    def test_bad_checksum_still_extracted_lowercased(self):
        vector = CHECKSUM_VECTORS[0]
        chars = list(vector)
        flip_at = next(i for i in range(2, len(chars)) if chars[i].isalpha())
        chars[flip_at] = chars[flip_at].swapcase()
        mangled = "".join(chars)
        found = extract_addresses(f"pay {mangled} now")
        assert [entry.canonical for entry, _ in found] == [vector.lower()]

    def test_spans_are_byte_offsets(self):
        addr = "0x" + "ab" * 20
        text = f"éé {addr}"  # 2-byte chars before the match
        ((_, span),) = extract_addresses(text)
        assert span.start == 5
        assert text.encode("utf-8")[span.start:span.end].decode() == addr

    def test_adjacent_addresses_both_rejected_as_one_run(self):
        a = "0x" + "ab" * 20
        b = "0x" + "cd" * 20
        # no separator: the first match is followed by an alphanumeric char
        assert extract_addresses(a + b) == []
        assert len(extract_addresses(f"{a} {b}")) == 2

    @given(st.binary(min_size=20, max_size=20), st.sampled_from(" .,()|\n\t-— "))
    @settings(max_examples=100)
    def test_embedding_property(self, raw, sep):
        addr = EthAddress(raw)
        text = f"{sep}{addr.canonical}{sep}"
        found = extract_addresses(text)
        assert [entry for entry, _ in found] == [addr]

    @given(st.text(max_size=200))
    @settings(max_examples=200)
    def test_never_raises_on_arbitrary_text(self, text):
        for entry, span in extract_addresses(text):
            assert span.end - span.start == 42


class TestTextSpan:
    def test_rejects_empty_or_negative(self):
        with pytest.raises(ValueError):
            TextSpan(3, 3)
        with pytest.raises(ValueError):
            TextSpan(-1, 5)
