import functools
import logging
import math
import sys
from collections.abc import Callable, Sequence
from typing import BinaryIO, TextIO

import click
import numpy as np
from pydantic import ValidationError

from sfec import config
from sfec.conv import (
    build_trellis,
    ccsds_conv_spec,
    conv_encode,
    example_conv_2_1_4_spec,
    viterbi_decode,
)
from sfec.errors import FecError, FramingError
from sfec.galois import build_field
from sfec.pipeline import (
    ccsds_concat_spec,
    concat_block_bits,
    concat_encode,
)
from sfec.pipeline import concat_decode as concat_decode_block
from sfec.rs import ccsds_rs_spec, rs_15_9_spec, rs_encoder
from sfec.simulator import run_ber_sweep, write_csv
from sfec.utils import framing
from sfec.utils.bits import (
    bytes_to_symbols,
    hex_to_symbols,
    pack_bits,
    symbols_to_bytes,
    symbols_to_hex,
    unpack_bits,
)
from sfec.utils.tracing import DecodeTrace
from sfec.utils.typing import (
    DecodeReport,
    FieldSpec,
    Scheme,
    SweepConfig,
    ViterbiConfig,
)

logger = logging.getLogger(__name__)

RS_CODES = {"15.9": rs_15_9_spec, "ccsds": ccsds_rs_spec}
CONV_CODES = {"ex214": example_conv_2_1_4_spec, "ccsds": ccsds_conv_spec}
HEX_LINE = 64


class InputError(click.ClickException):
    """Malformed input or configuration; exit status 2."""

    exit_code = 2


class DecodeFailed(click.ClickException):
    """At least one codeword was detected as uncorrectable; exit status 1."""

    exit_code = 1


def surface_errors(fn: Callable) -> Callable:
    """Turn library and validation errors into clean CLI exits."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (FecError, ValidationError, OSError) as exc:
            logger.debug("command failed", exc_info=True)
            raise InputError(str(exc)) from exc

    return wrapper


def _hex_bytes(text: str) -> bytes:
    try:
        return bytes.fromhex("".join(text.split()))
    except ValueError:
        raise FramingError("input is not hexadecimal") from None


def _read_container(stream: BinaryIO, binary: bool) -> bytes:
    data = stream.read()
    return data if binary else _hex_bytes(data.decode("ascii", errors="replace"))


def _write_container(stream: BinaryIO, data: bytes, binary: bool) -> None:
    if binary:
        stream.write(data)
        return
    text = data.hex().upper()
    lines = [text[i : i + HEX_LINE] for i in range(0, len(text), HEX_LINE)]
    stream.write(("\n".join(lines) + "\n").encode())


def _report_line(report: DecodeReport) -> str:
    if not report.ok:
        return f"decode failure: {report.reason}"
    if report.num_errors == 0:
        return "no errors"
    positions = ",".join(str(p) for p in report.positions)
    if report.num_errors == 1:
        return f"1 error at position {positions}"
    return f"{report.num_errors} errors at positions {positions}"


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level.")
@surface_errors
def cli(verbose: bool) -> None:
    """Reed-Solomon, convolutional and concatenated channel coding."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else config.log_level(),
        format=config.LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


# --- gf ---------------------------------------------------------------------


@cli.group()
def gf() -> None:
    """Galois field inspection."""


@gf.command("table")
@click.option("--m", "m", type=int, default=4, show_default=True)
@click.option("--poly", default="0x13", show_default=True, help="Field polynomial, hex or decimal.")
@click.option("--kind", type=click.Choice(["elements", "add", "mul"]), default="elements")
@surface_errors
def gf_table(m: int, poly: str, kind: str) -> None:
    try:
        prim_poly = int(poly, 0)
    except ValueError:
        raise click.BadParameter(f"'{poly}' is not an integer", param_hint="--poly") from None
    field = build_field(FieldSpec(m=m, prim_poly=prim_poly))
    if kind == "elements":
        click.echo("decimal\tbinary\tpower")
        for decimal, binary, power in field.element_table():
            click.echo(f"{decimal}\t{binary}\t{power}")
        return
    grid = field.add_table() if kind == "add" else field.mul_table()
    labels = [field.power_str(field.exp(i)) for i in range(field.n)]
    click.echo("\t".join([kind] + labels))
    for label, row in zip(labels, grid):
        click.echo("\t".join([label] + [field.power_str(v) for v in row]))


# --- rs ---------------------------------------------------------------------


@cli.group()
def rs() -> None:
    """Reed-Solomon encode/decode."""


def _code_option(codes: dict) -> Callable:
    return click.option(
        "--code", type=click.Choice(sorted(codes)), default="ccsds", show_default=True
    )


_in_option = click.option("--in", "input_file", type=click.File("rb"), default="-")
_out_option = click.option("--out", "output_file", type=click.File("wb"), default="-")
_binary_option = click.option("--binary", is_flag=True, help="Raw bytes instead of hex text.")


@rs.command("encode")
@_code_option(RS_CODES)
@_in_option
@_out_option
@_binary_option
@surface_errors
def rs_encode_cmd(code: str, input_file: BinaryIO, output_file: BinaryIO, binary: bool) -> None:
    """Encode a file into framed RS codewords."""
    enc = rs_encoder(RS_CODES[code]())
    m = enc.field.m
    data = input_file.read()
    symbols = bytes_to_symbols(data, m)
    blocks = math.ceil(symbols.size / enc.k)
    padded = np.zeros(blocks * enc.k, dtype=np.int64)
    padded[: symbols.size] = symbols
    codewords = [enc.encode(msg) for msg in padded.reshape(blocks, enc.k)]
    payload = symbols_to_bytes(np.concatenate(codewords) if codewords else [], m)
    logger.info(f"Encoded {len(data)} bytes into {blocks} RS({enc.n},{enc.k}) codewords")
    _write_container(output_file, framing.wrap(payload, depth=1, length=len(data)), binary)


def _rs_payload_bytes(enc, length: int) -> int:
    """Payload size written by ``rs encode`` for an input of ``length`` bytes."""
    blocks = math.ceil(length * 8 // enc.field.m / enc.k)
    return math.ceil(blocks * enc.n * enc.field.m / 8)


def _sniff_rs_frame(enc, text: str) -> framing.Frame | None:
    """The container spelled by hex ``text``, or None when it reads as bare codewords."""
    try:
        data = bytes.fromhex(text)
    except ValueError:
        return None
    if not framing.is_framed(data):
        return None
    try:
        frame = framing.unwrap(data)
    except FramingError:
        return None
    if frame.depth != 1 or len(frame.payload) != _rs_payload_bytes(enc, frame.length):
        return None
    return frame


def _rs_decode_framed(enc, frame: framing.Frame, output_file: BinaryIO) -> list[DecodeReport]:
    m = enc.field.m
    message_symbols = frame.length * 8 // m
    blocks = math.ceil(message_symbols / enc.k)
    symbols = bytes_to_symbols(frame.payload, m)
    if symbols.size < blocks * enc.n:
        raise FramingError(f"payload holds {symbols.size} symbols, expected {blocks * enc.n}")
    reports = []
    messages = []
    for row in symbols[: blocks * enc.n].reshape(blocks, enc.n):
        report = enc.decode(row)
        reports.append(report)
        messages.append(np.asarray(report.message) if report.ok else row[: enc.k])
    recovered = np.concatenate(messages)[:message_symbols] if messages else []
    output_file.write(symbols_to_bytes(recovered, m))
    return reports


@rs.command("decode")
@_code_option(RS_CODES)
@_in_option
@_out_option
@_binary_option
@surface_errors
def rs_decode_cmd(code: str, input_file: BinaryIO, output_file: BinaryIO, binary: bool) -> None:
    """Decode framed codewords back to the file, or bare hex codewords in place.

    Hex input is read as a container only when it carries a complete, consistent
    SFEC header; anything else is decoded as bare codewords.
    """
    enc = rs_encoder(RS_CODES[code]())
    raw = input_file.read()
    text = "" if binary else "".join(raw.decode("ascii", errors="replace").split())
    frame = framing.unwrap(raw) if binary else _sniff_rs_frame(enc, text)
    if frame is not None:
        reports = _rs_decode_framed(enc, frame, output_file)
    else:
        symbols = hex_to_symbols(text, enc.field.m)
        if symbols.size % enc.n:
            raise FramingError(f"{symbols.size} symbols is not a whole number of codewords")
        reports = []
        for row in symbols.reshape(-1, enc.n):
            report = enc.decode(row)
            reports.append(report)
            fixed = report.corrected if report.ok else row
            output_file.write((symbols_to_hex(fixed, enc.field.m) + "\n").encode())
            click.echo(_report_line(report), err=True)
    failed = sum(not r.ok for r in reports)
    if failed:
        raise DecodeFailed(f"{failed} of {len(reports)} codewords could not be corrected")


@rs.command("trace")
@_code_option(RS_CODES)
@click.option("--solver", type=click.Choice(["eea", "bm"]), default="eea", show_default=True)
@click.option("--magnitudes", type=click.Choice(["forney", "direct"]), default="forney", show_default=True)
@_in_option
@surface_errors
def rs_trace_cmd(code: str, solver: str, magnitudes: str, input_file: BinaryIO) -> None:
    """Print every intermediate value of decoding bare hex codewords."""
    enc = rs_encoder(RS_CODES[code]())
    text = input_file.read().decode("ascii", errors="replace")
    symbols = hex_to_symbols(text, enc.field.m)
    if symbols.size == 0 or symbols.size % enc.n:
        raise FramingError(f"{symbols.size} symbols is not a whole number of codewords")
    failed = 0
    for row in symbols.reshape(-1, enc.n):
        trace = DecodeTrace(enc.field, root_label="a" if enc.spec.g_exp == 1 else "a_g")
        report = enc.decode(row, solver=solver, magnitudes=magnitudes, trace=trace)
        click.echo(trace.render(), nl=False)
        if report.ok:
            click.echo(f"Corrected: {symbols_to_hex(report.corrected, enc.field.m)}")
        failed += not report.ok
    if failed:
        raise DecodeFailed(f"{failed} codewords could not be corrected")


# --- conv -------------------------------------------------------------------


@cli.group()
def conv() -> None:
    """Convolutional encode/decode.

    Coded bits are packed MSB-first and wrapped in an SFEC container, written
    as hex text unless --binary is given. Soft decode reads whitespace-separated
    BPSK samples (bit 0 -> +1) and writes the packed decoded bits, hex or
    --binary, without a container.
    """


@conv.command("encode")
@_code_option(CONV_CODES)
@_in_option
@_out_option
@_binary_option
@surface_errors
def conv_encode_cmd(code: str, input_file: BinaryIO, output_file: BinaryIO, binary: bool) -> None:
    """Encode a file into a container of packed coded bits, zero-tail terminated."""
    spec = CONV_CODES[code]()
    data = input_file.read()
    coded = conv_encode(spec, unpack_bits(data), terminate=True)
    _write_container(output_file, framing.wrap(pack_bits(coded), 1, len(data)), binary)


def _parse_samples(text: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in text.split()], dtype=np.float64)
    except ValueError as exc:
        raise FramingError(f"soft input must be decimal numbers: {exc}") from None


@conv.command("decode")
@_code_option(CONV_CODES)
@click.option("--soft", is_flag=True, help="Input is whitespace-separated channel samples.")
@click.option("--trunc", type=int, default=None, help="Truncation depth in bits.")
@_in_option
@_out_option
@_binary_option
@surface_errors
def conv_decode_cmd(
    code: str,
    soft: bool,
    trunc: int | None,
    input_file: BinaryIO,
    output_file: BinaryIO,
    binary: bool,
) -> None:
    """Viterbi-decode a container from conv encode, or soft samples with --soft."""
    spec = CONV_CODES[code]()
    cfg = ViterbiConfig(metric="soft" if soft else "hard", truncation_depth=trunc)
    if soft:
        samples = _parse_samples(input_file.read().decode("ascii", errors="replace"))
        decoded = viterbi_decode(spec, cfg, samples)
        _write_plain(output_file, pack_bits(decoded), binary)
        return
    frame = framing.unwrap(_read_container(input_file, binary))
    count = (frame.length * 8 + spec.constraint_length - 1) * spec.n
    decoded = viterbi_decode(spec, cfg, unpack_bits(frame.payload, count))
    output_file.write(pack_bits(decoded[: frame.length * 8]))


def _write_plain(stream: BinaryIO, data: bytes, binary: bool) -> None:
    stream.write(data if binary else (data.hex().upper() + "\n").encode())


@conv.command("table")
@_code_option(CONV_CODES)
@surface_errors
def conv_table_cmd(code: str) -> None:
    """Transition table: input, current state, output, next state."""
    click.echo("u\tstate\toutput\tnext")
    for bit, state, out, nxt in build_trellis(CONV_CODES[code]()).rows():
        click.echo(f"{bit}\t{state}\t{out}\t{nxt}")


# --- concat -----------------------------------------------------------------


@cli.group()
def concat() -> None:
    """CCSDS concatenated RS(255,223) + (2,1,7) chain with block interleaving."""


@concat.command("encode")
@click.option("--depth", type=click.IntRange(1, 0xFFFF), default=5, show_default=True)
@_in_option
@_out_option
@_binary_option
@surface_errors
def concat_encode_cmd(depth: int, input_file: BinaryIO, output_file: BinaryIO, binary: bool) -> None:
    spec = ccsds_concat_spec(depth, soft=False)
    k = spec.outer.k
    data = input_file.read()
    block_symbols = depth * k
    blocks = math.ceil(len(data) / block_symbols)
    padded = np.zeros(blocks * block_symbols, dtype=np.int64)
    padded[: len(data)] = bytes_to_symbols(data, 8)
    coded = [concat_encode(spec, padded[i * block_symbols : (i + 1) * block_symbols]) for i in range(blocks)]
    bits = np.concatenate(coded) if coded else np.zeros(0, dtype=np.uint8)
    logger.info(f"Encoded {len(data)} bytes into {blocks} block(s) at depth {depth}")
    _write_container(output_file, framing.wrap(pack_bits(bits), depth, len(data)), binary)


@concat.command("decode")
@_in_option
@_out_option
@_binary_option
@surface_errors
def concat_decode_cmd(input_file: BinaryIO, output_file: BinaryIO, binary: bool) -> None:
    """Hard-decision decode of a framed concat stream; depth comes from the header."""
    frame = framing.unwrap(_read_container(input_file, binary))
    spec = ccsds_concat_spec(frame.depth, soft=False)
    block_symbols = frame.depth * spec.outer.k
    blocks = math.ceil(frame.length / block_symbols)
    block_bits = concat_block_bits(spec)
    bits = unpack_bits(frame.payload, blocks * block_bits)
    messages = []
    failed = 0
    for i in range(blocks):
        result = concat_decode_block(spec, bits[i * block_bits : (i + 1) * block_bits])
        messages.append(result.messages.ravel())
        failed += sum(not r.ok for r in result.reports)
    recovered = np.concatenate(messages)[: frame.length] if messages else []
    output_file.write(symbols_to_bytes(recovered, 8))
    if failed:
        raise DecodeFailed(f"{failed} RS codewords could not be corrected")


# --- sim --------------------------------------------------------------------


def parse_grid(text: str) -> tuple[float, ...]:
    """'start:step:stop' (inclusive), 'a,b,c' or a single value, in dB."""
    try:
        if ":" in text:
            start, step, stop = (float(v) for v in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = math.floor((stop - start) / step + 1e-9) + 1
            return tuple(round(start + i * step, 10) for i in range(count))
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise click.BadParameter(
            f"'{text}' is not start:step:stop, a comma list or a number", param_hint="--ebn0"
        ) from None


@cli.group()
def sim() -> None:
    """Monte-Carlo BER sweeps."""


@sim.command("sweep")
@click.option("--scheme", type=click.Choice([s.value for s in Scheme]), required=True)
@click.option("--depth", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--ebn0", "ebn0", required=True, help="Eb/N0 grid in dB, start:step:stop.")
@click.option("--seed", type=click.IntRange(0, (1 << 64) - 1), default=0, show_default=True)
@click.option("--min-bits", type=click.IntRange(min=1), default=10**6, show_default=True)
@click.option("--min-errors", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--max-bits", type=click.IntRange(min=1), default=10**8, show_default=True)
@click.option("--frame-bits", type=click.IntRange(min=1), default=1024, show_default=True)
@click.option("--hard-inner", is_flag=True, help="Hard-decision inner Viterbi for concat.")
@click.option("--out", "output_file", type=click.File("w"), default="-")
@surface_errors
def sim_sweep(
    scheme: str,
    depth: int,
    ebn0: str,
    seed: int,
    min_bits: int,
    min_errors: int,
    max_bits: int,
    frame_bits: int,
    hard_inner: bool,
    output_file: TextIO,
) -> None:
    """Write one CSV row per Eb/N0 point."""
    if depth != 1 and scheme != Scheme.CONCAT.value:
        raise click.UsageError("--depth only applies to --scheme concat")
    sweep = SweepConfig(
        scheme=Scheme(scheme),
        ebn0_grid=parse_grid(ebn0),
        depth=depth,
        soft_inner=not hard_inner,
        min_bits=min_bits,
        min_errors=min_errors,
        max_bits=max_bits,
        frame_bits=frame_bits,
        seed=seed,
    )
    points = run_ber_sweep(sweep)
    write_csv(points, sweep, output_file)


def run(argv: Sequence[str] | None = None) -> int:
    """Entry point returning the process exit status."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return rv if isinstance(rv, int) else 0
