import math
from collections.abc import Sequence

import numpy as np

from sfec.errors import BadLength, BadSymbol


def symbols_to_bits(symbols: Sequence[int], m: int) -> np.ndarray:
    """Serialize m-bit symbols MSB-first."""
    values = np.asarray(symbols, dtype=np.int64).ravel()
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((values[:, None] >> shifts[None, :]) & 1).astype(np.uint8).ravel()


def bits_to_symbols(bits: Sequence[int], m: int) -> np.ndarray:
    values = np.asarray(bits, dtype=np.int64).ravel()
    if values.size % m:
        raise BadLength(f"{values.size} bits is not a whole number of {m}-bit symbols")
    weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
    return values.reshape(-1, m) @ weights


def pack_bits(bits: Sequence[int]) -> bytes:
    """MSB-first, zero-padded to a whole byte."""
    return np.packbits(np.asarray(bits, dtype=np.uint8).ravel()).tobytes()


def unpack_bits(data: bytes, count: int | None = None) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    if count is not None:
        if count > bits.size:
            raise BadLength(f"need {count} bits, only {bits.size} available")
        bits = bits[:count]
    return bits


def bytes_to_symbols(data: bytes, m: int) -> np.ndarray:
    if m == 8:
        return np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    return bits_to_symbols(unpack_bits(data), m)


def symbols_to_bytes(symbols: Sequence[int], m: int) -> bytes:
    if m == 8:
        return np.asarray(symbols, dtype=np.uint8).tobytes()
    return pack_bits(symbols_to_bits(symbols, m))


def hex_digits(m: int) -> int:
    return math.ceil(m / 4)


def symbols_to_hex(symbols: Sequence[int], m: int) -> str:
    width = hex_digits(m)
    return "".join(format(int(s), f"0{width}X") for s in symbols)


def hex_to_symbols(text: str, m: int) -> np.ndarray:
    """Parse fixed-width hex symbols; whitespace and newlines are ignored."""
    digits = "".join(text.split())
    width = hex_digits(m)
    if len(digits) % width:
        raise BadLength(f"{len(digits)} hex digits is not a multiple of {width}")
    try:
        values = [int(digits[i : i + width], 16) for i in range(0, len(digits), width)]
    except ValueError:
        raise BadSymbol("input is not hexadecimal") from None
    if any(v >> m for v in values):
        raise BadSymbol(f"hex symbol exceeds {m} bits")
    return np.array(values, dtype=np.int64)
