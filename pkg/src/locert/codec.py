"""Self-delimiting bit encoding for certificate values.

Values are built from ``None``, ``bool``, integers, raw bitstrings and
tuples. Each value is a 2-bit tag followed by its payload; integers use Elias
gamma codes, so an identifier of magnitude ``x`` costs about ``2 log2 x``
bits. The fourth tag is followed by one more bit selecting a negative integer
or a raw bitstring (gamma-coded length, then the bits verbatim).
"""

from __future__ import annotations

from typing import Any

_NONE, _NAT, _TUPLE, _EXT = "00", "01", "10", "11"
_NEG, _BITS = _EXT + "0", _EXT + "1"


class Bits(str):
    """A raw bitstring value: a ``str`` over ``0`` and ``1``."""

    __slots__ = ()

    def __new__(cls, value: str = "") -> "Bits":
        if value.strip("01"):
            raise ValueError("bitstring must contain only 0 and 1")
        return super().__new__(cls, value)


class MalformedCertificate(ValueError):
    """A bitstring that does not decode to a well-formed value."""


def _gamma(x: int) -> str:
    # x >= 1
    b = bin(x)[2:]
    return "0" * (len(b) - 1) + b


def _gamma_size(x: int) -> int:
    return 2 * x.bit_length() - 1


def encode(value: Any) -> str:
    out: list[str] = []
    _encode(value, out)
    return "".join(out)


def _encode(value: Any, out: list[str]) -> None:
    if value is None:
        out.append(_NONE)
    elif isinstance(value, Bits):
        out.append(_BITS)
        out.append(_gamma(len(value) + 1))
        out.append(str(value))
    elif isinstance(value, bool):
        # booleans travel as the naturals 0 and 1
        out.append(_NAT)
        out.append(_gamma(int(value) + 1))
    elif isinstance(value, int):
        if value >= 0:
            out.append(_NAT)
            out.append(_gamma(value + 1))
        else:
            out.append(_NEG)
            out.append(_gamma(-value))
    elif isinstance(value, (tuple, list)):
        out.append(_TUPLE)
        out.append(_gamma(len(value) + 1))
        for item in value:
            _encode(item, out)
    else:
        raise TypeError(f"cannot encode {type(value).__name__}")


def encoded_size(value: Any, _memo: dict[int, int] | None = None) -> int:
    """Length of ``encode(value)`` without building the string."""
    if value is None:
        return 2
    if isinstance(value, Bits):
        return 3 + _gamma_size(len(value) + 1) + len(value)
    if isinstance(value, bool):
        return 2 + _gamma_size(int(value) + 1)
    if isinstance(value, int):
        return 2 + _gamma_size(value + 1) if value >= 0 else 3 + _gamma_size(-value)
    if isinstance(value, (tuple, list)):
        if _memo is not None:
            hit = _memo.get(id(value))
            if hit is not None:
                return hit
        total = 2 + _gamma_size(len(value) + 1)
        for item in value:
            total += encoded_size(item, _memo)
        if _memo is not None:
            _memo[id(value)] = total
        return total
    raise TypeError(f"cannot encode {type(value).__name__}")


def decode(bits: str) -> Any:
    value, pos = _decode(bits, 0, 0)
    if pos != len(bits):
        raise MalformedCertificate("trailing bits")
    return value


def _read_gamma(bits: str, pos: int) -> tuple[int, int]:
    zeros = 0
    n = len(bits)
    while pos < n and bits[pos] == "0":
        zeros += 1
        pos += 1
    end = pos + zeros + 1
    if end > n or zeros > 64:
        raise MalformedCertificate("truncated integer")
    return int(bits[pos:end], 2), end


def _decode(bits: str, pos: int, depth: int) -> tuple[Any, int]:
    if depth > 32:
        raise MalformedCertificate("nesting too deep")
    tag = bits[pos : pos + 2]
    pos += 2
    if tag == _NONE:
        return None, pos
    if tag == _NAT:
        x, pos = _read_gamma(bits, pos)
        return x - 1, pos
    if tag == _EXT:
        sub = bits[pos : pos + 1]
        pos += 1
        if sub == "0":
            x, pos = _read_gamma(bits, pos)
            return -x, pos
        if sub == "1":
            length, pos = _read_gamma(bits, pos)
            end = pos + length - 1
            if end > len(bits):
                raise MalformedCertificate("truncated bitstring")
            return Bits(bits[pos:end]), end
        raise MalformedCertificate("truncated tag")
    if tag == _TUPLE:
        length, pos = _read_gamma(bits, pos)
        length -= 1
        if length > len(bits):
            raise MalformedCertificate("impossible length")
        items = []
        for _ in range(length):
            item, pos = _decode(bits, pos, depth + 1)
            items.append(item)
        return tuple(items), pos
    raise MalformedCertificate("truncated tag")


def bits_to_hex(bits: str) -> str:
    if not bits:
        return ""
    pad = (-len(bits)) % 4
    return format(int(bits + "0" * pad, 2), f"0{(len(bits) + pad) // 4}x")


def hex_to_bits(hexstr: str, nbits: int) -> str:
    if nbits == 0:
        return ""
    width = len(hexstr) * 4
    bits = format(int(hexstr, 16), f"0{width}b")
    if len(bits) < nbits:
        raise MalformedCertificate("hex payload shorter than announced")
    return bits[:nbits]
