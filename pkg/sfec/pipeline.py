"""Concatenated chain: RS outer code, block symbol interleaver, convolutional inner code."""

import logging
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from sfec.conv import ccsds_conv_spec, conv_encode, viterbi_decode
from sfec.errors import BadLength
from sfec.rs import ccsds_rs_spec, rs_encoder
from sfec.utils.bits import bits_to_symbols, symbols_to_bits
from sfec.utils.typing import (
    ConcatSpec,
    DecodeReport,
    InterleaverSpec,
    ViterbiConfig,
)

logger = logging.getLogger(__name__)


class OuterDecodeResult(NamedTuple):
    messages: np.ndarray  # (depth, k)
    reports: list[DecodeReport]


def ccsds_concat_spec(depth: int = 5, soft: bool = True) -> ConcatSpec:
    return ConcatSpec(
        outer=ccsds_rs_spec(),
        inner=ccsds_conv_spec(),
        interleaver=InterleaverSpec(depth=depth, row_len=ccsds_rs_spec().n),
        viterbi=ViterbiConfig(metric="soft" if soft else "hard"),
    )


def _block(symbols: Sequence[int], spec: InterleaverSpec) -> np.ndarray:
    block = np.asarray(symbols).ravel()
    expected = spec.depth * spec.row_len
    if block.size != expected:
        raise BadLength(f"interleaver block needs {expected} symbols, got {block.size}")
    return block


def interleave(symbols: Sequence[int], spec: InterleaverSpec) -> np.ndarray:
    """Write D codewords row by row, read column by column."""
    return _block(symbols, spec).reshape(spec.depth, spec.row_len).T.ravel()


def deinterleave(symbols: Sequence[int], spec: InterleaverSpec) -> np.ndarray:
    return _block(symbols, spec).reshape(spec.row_len, spec.depth).T.ravel()


def _messages(spec: ConcatSpec, messages: Sequence[Sequence[int]]) -> np.ndarray:
    rows = np.asarray(messages, dtype=np.int64)
    depth, k = spec.interleaver.depth, spec.outer.k
    if rows.size != depth * k:
        raise BadLength(f"a block takes {depth} messages of {k} symbols, got {rows.size} symbols")
    return rows.reshape(depth, k)


def outer_encode(spec: ConcatSpec, messages: Sequence[Sequence[int]]) -> np.ndarray:
    """RS-encode D messages, interleave and serialize MSB-first."""
    enc = rs_encoder(spec.outer)
    codewords = np.stack([enc.encode(row) for row in _messages(spec, messages)])
    return symbols_to_bits(interleave(codewords, spec.interleaver), spec.outer.field_spec.m)


def outer_decode(spec: ConcatSpec, bits: Sequence[int]) -> OuterDecodeResult:
    """Inverse of outer_encode; failed rows fall back to their systematic symbols."""
    enc = rs_encoder(spec.outer)
    symbols = bits_to_symbols(bits, spec.outer.field_spec.m)
    rows = deinterleave(symbols, spec.interleaver).reshape(spec.interleaver.depth, enc.n)
    messages = np.empty((spec.interleaver.depth, enc.k), dtype=np.int64)
    reports = []
    for i, row in enumerate(rows):
        report = enc.decode(row)
        reports.append(report)
        messages[i] = report.message if report.ok else row[: enc.k]
    failures = sum(not r.ok for r in reports)
    if failures:
        logger.info(f"{failures} of {len(reports)} RS codewords in the block failed to decode")
    return OuterDecodeResult(messages=messages, reports=reports)


def concat_block_bits(spec: ConcatSpec) -> int:
    """Channel bits produced by one block of D codewords."""
    info = spec.interleaver.depth * spec.outer.n * spec.outer.field_spec.m
    return (info + spec.inner.constraint_length - 1) * spec.inner.n


def _inner_config(spec: ConcatSpec) -> ViterbiConfig:
    return spec.viterbi.model_copy(update={"terminate": True, "keep_tail": False})


def concat_encode(spec: ConcatSpec, messages: Sequence[Sequence[int]]) -> np.ndarray:
    return conv_encode(spec.inner, outer_encode(spec, messages), terminate=True)


def concat_decode(spec: ConcatSpec, channel_output: Sequence[float]) -> OuterDecodeResult:
    """Viterbi-decode (soft samples or hard bits per spec.viterbi), then the outer chain."""
    received = np.asarray(channel_output).ravel()
    expected = concat_block_bits(spec)
    if received.size != expected:
        raise BadLength(f"a block is {expected} channel values, got {received.size}")
    bits = viterbi_decode(spec.inner, _inner_config(spec), received)
    return outer_decode(spec, bits)
