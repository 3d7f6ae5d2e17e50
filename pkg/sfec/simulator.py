"""Seeded Monte-Carlo BER measurement over a BPSK/AWGN channel.

Every grid point is simulated in chunks of whole frames. Chunk c of point p
draws all of its randomness from ``channel_rng(seed, p, c)`` and chunks are
reduced strictly in index order, so a sweep gives the same numbers whatever
the number of worker processes.
"""

import csv
import hashlib
import json
import logging
import math
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple, TextIO

import numpy as np
from scipy.stats import norm

from sfec import config
from sfec.conv import ccsds_conv_spec, conv_encode, viterbi_decode
from sfec.errors import ConfigError
from sfec.pipeline import concat_block_bits, concat_decode, concat_encode
from sfec.rs import ccsds_rs_spec, rs_encoder
from sfec.utils.bits import bits_to_symbols, symbols_to_bits
from sfec.utils.typing import (
    BerPoint,
    ChannelConfig,
    CodecSpecs,
    ConcatSpec,
    InterleaverSpec,
    Scheme,
    SweepConfig,
    ViterbiConfig,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("scheme", "ebn0_db", "info_bits", "bit_errors", "frame_errors", "ber")


def bpsk_modulate(bits: Iterable[int]) -> np.ndarray:
    """0 -> +1.0, 1 -> -1.0."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def hard_slice(samples: Iterable[float]) -> np.ndarray:
    """Negative samples become 1; zero slices to 0."""
    return (np.asarray(samples, dtype=np.float64) < 0.0).astype(np.uint8)


def noise_sigma(ebn0_db: float, code_rate: float = 1.0) -> float:
    """Per-sample noise deviation for unit-energy symbols: sigma^2 = 1 / (2 R Eb/N0)."""
    if math.isinf(ebn0_db) and ebn0_db > 0:
        return 0.0
    return math.sqrt(1.0 / (2.0 * code_rate * 10.0 ** (ebn0_db / 10.0)))


def channel_rng(*keys: int) -> np.random.Generator:
    """Counter-based stream addressed by (seed, point, chunk, ...)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(keys))))


def awgn_apply(
    samples: Iterable[float],
    cfg: ChannelConfig,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64)
    sigma = noise_sigma(cfg.ebn0_db, cfg.code_rate)
    if sigma == 0.0:
        return x.copy()
    rng = rng if rng is not None else channel_rng(cfg.seed)
    return x + sigma * rng.standard_normal(x.shape)


def theoretical_uncoded_ber(ebn0_db: float) -> float:
    """Q(sqrt(2 Eb/N0)) for coherent BPSK."""
    return float(norm.sf(math.sqrt(2.0 * 10.0 ** (ebn0_db / 10.0))))


def default_specs() -> CodecSpecs:
    return CodecSpecs(rs=ccsds_rs_spec(), conv=ccsds_conv_spec())


class ChunkCounts(NamedTuple):
    info_bits: int
    bit_errors: int
    frame_errors: int


# one frame: (sweep, specs, ebn0_db, rng) -> counts
FrameFn = Callable[[SweepConfig, CodecSpecs, float, np.random.Generator], ChunkCounts]


def _transmit(bits: np.ndarray, ebn0_db: float, rate: float, rng: np.random.Generator) -> np.ndarray:
    channel = ChannelConfig(ebn0_db=ebn0_db, code_rate=rate)
    return awgn_apply(bpsk_modulate(bits), channel, rng)


def _uncoded_frame(sweep, specs, ebn0_db, rng) -> ChunkCounts:
    bits = rng.integers(0, 2, sweep.frame_bits, dtype=np.uint8)
    errors = int(np.count_nonzero(hard_slice(_transmit(bits, ebn0_db, 1.0, rng)) != bits))
    return ChunkCounts(bits.size, errors, int(errors > 0))


def _rs_frame(sweep, specs, ebn0_db, rng) -> ChunkCounts:
    enc = rs_encoder(specs.rs)
    m = specs.rs.field_spec.m
    message = rng.integers(0, enc.field.size, enc.k, dtype=np.int64)
    channel_bits = symbols_to_bits(enc.encode(message), m)
    received = bits_to_symbols(hard_slice(_transmit(channel_bits, ebn0_db, enc.k / enc.n, rng)), m)
    report = enc.decode(received)
    decoded = np.asarray(report.message) if report.ok else received[: enc.k]
    errors = int(np.count_nonzero(symbols_to_bits(decoded, m) != symbols_to_bits(message, m)))
    return ChunkCounts(enc.k * m, errors, int(errors > 0))


def _conv_frame(sweep, specs, ebn0_db, rng, soft: bool) -> ChunkCounts:
    spec = specs.conv
    base = specs.viterbi or ViterbiConfig()
    cfg = base.model_copy(
        update={"metric": "soft" if soft else "hard", "terminate": True, "keep_tail": False}
    )
    bits = rng.integers(0, 2, sweep.frame_bits, dtype=np.uint8)
    coded = conv_encode(spec, bits, terminate=True)
    samples = _transmit(coded, ebn0_db, bits.size / coded.size, rng)
    decoded = viterbi_decode(spec, cfg, samples if soft else hard_slice(samples))
    errors = int(np.count_nonzero(decoded != bits))
    return ChunkCounts(bits.size, errors, int(errors > 0))


def _conv_hard_frame(sweep, specs, ebn0_db, rng) -> ChunkCounts:
    return _conv_frame(sweep, specs, ebn0_db, rng, soft=False)


def _conv_soft_frame(sweep, specs, ebn0_db, rng) -> ChunkCounts:
    return _conv_frame(sweep, specs, ebn0_db, rng, soft=True)


def concat_spec_for(sweep: SweepConfig, specs: CodecSpecs) -> ConcatSpec:
    base = specs.viterbi or ViterbiConfig()
    return ConcatSpec(
        outer=specs.rs,
        inner=specs.conv,
        interleaver=InterleaverSpec(depth=sweep.depth, row_len=specs.rs.n),
        viterbi=base.model_copy(update={"metric": "soft" if sweep.soft_inner else "hard"}),
    )


def _concat_frame(sweep, specs, ebn0_db, rng) -> ChunkCounts:
    spec = concat_spec_for(sweep, specs)
    depth, k, m = sweep.depth, specs.rs.k, specs.rs.field_spec.m
    messages = rng.integers(0, 1 << m, (depth, k), dtype=np.int64)
    coded = concat_encode(spec, messages)
    info_bits = depth * k * m
    samples = _transmit(coded, ebn0_db, info_bits / concat_block_bits(spec), rng)
    result = concat_decode(spec, samples if sweep.soft_inner else hard_slice(samples))
    bit_errors = 0
    frame_errors = 0
    # a frame is one RS codeword
    for sent, got in zip(messages, result.messages):
        errors = int(np.count_nonzero(symbols_to_bits(sent, m) != symbols_to_bits(got, m)))
        bit_errors += errors
        frame_errors += int(errors > 0)
    return ChunkCounts(info_bits, bit_errors, frame_errors)


FRAME_FUNCTIONS: dict[Scheme, FrameFn] = {
    Scheme.UNCODED: _uncoded_frame,
    Scheme.RS_ONLY: _rs_frame,
    Scheme.CONV_HARD: _conv_hard_frame,
    Scheme.CONV_SOFT: _conv_soft_frame,
    Scheme.CONCAT: _concat_frame,
}


def info_bits_per_frame(sweep: SweepConfig, specs: CodecSpecs) -> int:
    if sweep.scheme is Scheme.RS_ONLY:
        return specs.rs.k * specs.rs.field_spec.m
    if sweep.scheme is Scheme.CONCAT:
        return sweep.depth * specs.rs.k * specs.rs.field_spec.m
    return sweep.frame_bits


def check_specs(sweep: SweepConfig, specs: CodecSpecs) -> None:
    needs_rs = sweep.scheme in (Scheme.RS_ONLY, Scheme.CONCAT)
    needs_conv = sweep.scheme in (Scheme.CONV_HARD, Scheme.CONV_SOFT, Scheme.CONCAT)
    if needs_rs and specs.rs is None:
        raise ConfigError(f"scheme '{sweep.scheme.value}' needs an RS spec")
    if needs_conv and specs.conv is None:
        raise ConfigError(f"scheme '{sweep.scheme.value}' needs a convolutional spec")
    if sweep.depth != 1 and sweep.scheme is not Scheme.CONCAT:
        raise ConfigError("interleaving depth only applies to the concat scheme")


def simulate_chunk(
    sweep: SweepConfig,
    specs: CodecSpecs,
    point_index: int,
    chunk_index: int,
    frames: int,
) -> ChunkCounts:
    """Run ``frames`` frames of one grid point from its own random stream."""
    rng = channel_rng(sweep.seed, point_index, chunk_index)
    frame_fn = FRAME_FUNCTIONS[sweep.scheme]
    ebn0_db = sweep.ebn0_grid[point_index]
    totals = [0, 0, 0]
    for _ in range(frames):
        counts = frame_fn(sweep, specs, ebn0_db, rng)
        totals = [a + b for a, b in zip(totals, counts)]
    return ChunkCounts(*totals)


def _stop(sweep: SweepConfig, bits: int, errors: int) -> bool:
    return (bits >= sweep.min_bits and errors >= sweep.min_errors) or bits >= sweep.max_bits


def _simulate_point(
    sweep: SweepConfig,
    specs: CodecSpecs,
    point_index: int,
    frames: int,
    workers: int,
    pool: ProcessPoolExecutor | None,
) -> BerPoint:
    bits = errors = frame_errors = 0
    chunk = 0
    done = False
    while not done:
        indices = range(chunk, chunk + workers)
        if pool is None:
            results = (simulate_chunk(sweep, specs, point_index, c, frames) for c in indices)
        else:
            futures = [
                pool.submit(simulate_chunk, sweep, specs, point_index, c, frames)
                for c in indices
            ]
            results = (f.result() for f in futures)
        for counts in results:
            bits += counts.info_bits
            errors += counts.bit_errors
            frame_errors += counts.frame_errors
            chunk += 1
            if _stop(sweep, bits, errors):
                done = True
                break
    point = BerPoint(
        scheme=sweep.scheme,
        ebn0_db=sweep.ebn0_grid[point_index],
        info_bits=bits,
        bit_errors=errors,
        frame_errors=frame_errors,
    )
    logger.info(
        f"{sweep.scheme.value} @ {point.ebn0_db:g} dB: {errors} errors in {bits} bits "
        f"(BER {point.ber:.3e}, {chunk} chunks)"
    )
    return point


def run_ber_sweep(
    sweep: SweepConfig,
    specs: CodecSpecs | None = None,
    workers: int | None = None,
    chunk_bits: int | None = None,
) -> list[BerPoint]:
    """Measure one BerPoint per Eb/N0 grid value."""
    specs = specs if specs is not None else default_specs()
    check_specs(sweep, specs)
    workers = workers or config.sim_threads()
    chunk_bits = chunk_bits or config.chunk_bits()
    frames = max(1, chunk_bits // info_bits_per_frame(sweep, specs))
    logger.info(
        f"Sweeping {sweep.scheme.value} over {len(sweep.ebn0_grid)} points "
        f"with {workers} worker(s), {frames} frame(s) per chunk"
    )
    if workers == 1:
        return [
            _simulate_point(sweep, specs, p, frames, 1, None)
            for p in range(len(sweep.ebn0_grid))
        ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [
            _simulate_point(sweep, specs, p, frames, workers, pool)
            for p in range(len(sweep.ebn0_grid))
        ]


def ebn0_at_ber(points: Iterable[BerPoint], target: float) -> float | None:
    """Eb/N0 where the measured curve crosses ``target``, interpolating log10(BER) linearly."""
    curve = sorted((p.ebn0_db, p.ber) for p in points if p.ber > 0)
    for (x0, y0), (x1, y1) in zip(curve, curve[1:]):
        if y0 >= target >= y1 and y0 != y1:
            frac = (math.log10(y0) - math.log10(target)) / (math.log10(y0) - math.log10(y1))
            return x0 + frac * (x1 - x0)
    return None


def config_hash(sweep: SweepConfig, specs: CodecSpecs) -> str:
    payload = json.dumps(
        {"sweep": sweep.model_dump(mode="json"), "specs": specs.model_dump(mode="json")},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def write_csv(
    points: Iterable[BerPoint],
    sweep: SweepConfig,
    stream: TextIO,
    specs: CodecSpecs | None = None,
) -> None:
    specs = specs if specs is not None else default_specs()
    stream.write(f"# seed={sweep.seed} config={config_hash(sweep, specs)}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p in points:
        writer.writerow(
            [p.scheme.value, f"{p.ebn0_db:g}", p.info_bits, p.bit_errors, p.frame_errors, f"{p.ber:.6e}"]
        )
