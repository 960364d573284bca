import pytest
from hypothesis import given, strategies as st

from locert import codec
from locert.codec import Bits, MalformedCertificate

values = st.recursive(
    st.none() | st.integers(-(10**6), 10**6) | st.text("01", max_size=12).map(Bits),
    lambda inner: st.lists(inner, max_size=5).map(tuple),
    max_leaves=20,
)


@given(values)
def test_round_trip_and_size(v):
    bits = codec.encode(v)
    assert codec.decode(bits) == v
    assert codec.encoded_size(v) == len(bits)


@given(values)
def test_hex_round_trip(v):
    bits = codec.encode(v)
    assert codec.hex_to_bits(codec.bits_to_hex(bits), len(bits)) == bits


def test_deterministic():
    rec = (3, None, (Bits("101"), -2))
    assert codec.encode(rec) == codec.encode(rec)


def test_small_values():
    assert codec.encode(None) == "00"
    assert codec.encode(0) == "011"
    assert codec.encode(()) == "101"


@pytest.mark.parametrize("bits", ["0", "01", "0100", "10010", "1110000"])
def test_malformed(bits):
    with pytest.raises(MalformedCertificate):
        codec.decode(bits)


def test_bits_alphabet():
    with pytest.raises(ValueError):
        Bits("012")
