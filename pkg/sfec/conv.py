"""Rate 1/n convolutional codes: encoder, trellis and Viterbi decoding.

States are integers with S1 (the most recent input bit) as the most
significant bit, so state 0b100 is "S1=1, S2=0, S3=0".
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from sfec.errors import BadLength, ConfigError, TooLarge
from sfec.utils.typing import ConvSpec, ViterbiConfig

logger = logging.getLogger(__name__)

# trellis tables are materialised for every state
MAX_TRELLIS_L = 16
# branch metrics are computed this many stages at a time
COST_CHUNK_STAGES = 4096


def example_conv_2_1_4_spec() -> ConvSpec:
    return ConvSpec(constraint_length=4, generators=("1111", "1101"))


def ccsds_conv_spec() -> ConvSpec:
    """CCSDS (2,1,7): G1 = 1111001, inverted G2 = 1011011, 60-bit window."""
    return ConvSpec(
        constraint_length=7,
        generators=("1111001", "1011011"),
        invert_mask=(False, True),
        truncation_hint=60,
    )


def _parity(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values.astype(np.uint64)).astype(np.uint8) & 1


@dataclass(frozen=True)
class Trellis:
    """Transition tables indexed by [state, input bit]."""

    spec: ConvSpec
    next_state: np.ndarray
    outputs: np.ndarray  # (states, 2, n) channel bits, inversion applied

    @property
    def num_states(self) -> int:
        return self.spec.num_states

    def rows(self) -> list[tuple[int, str, str, str]]:
        """(input, current state, output, next state) ordered by state then input."""
        width = self.spec.constraint_length - 1
        rows = []
        for state in range(self.num_states):
            for bit in (0, 1):
                out = "".join(str(b) for b in self.outputs[state, bit])
                rows.append(
                    (
                        bit,
                        format(state, f"0{width}b"),
                        out,
                        format(int(self.next_state[state, bit]), f"0{width}b"),
                    )
                )
        return rows


def build_trellis(spec: ConvSpec) -> Trellis:
    if spec.constraint_length > MAX_TRELLIS_L:
        raise TooLarge(f"trellis tables are limited to L <= {MAX_TRELLIS_L}")
    memory = spec.constraint_length - 1
    states = np.arange(spec.num_states, dtype=np.int64)
    bits = np.arange(2, dtype=np.int64)
    registers = (bits[None, :] << memory) | states[:, None]
    gens = np.array(spec.generators, dtype=np.int64)
    outputs = _parity(registers[:, :, None] & gens[None, None, :])
    outputs ^= np.array(spec.invert_mask, dtype=np.uint8)
    trellis = Trellis(spec=spec, next_state=registers >> 1, outputs=outputs)
    trellis.next_state.setflags(write=False)
    trellis.outputs.setflags(write=False)
    return trellis


def _taps(spec: ConvSpec) -> list[np.ndarray]:
    length = spec.constraint_length
    return [
        np.array([(g >> (length - 1 - i)) & 1 for i in range(length)], dtype=np.int64)
        for g in spec.generators
    ]


def conv_encode(spec: ConvSpec, bits: Sequence[int], terminate: bool = True) -> np.ndarray:
    """c_j = u * g_j (mod 2) per branch, interleaved c1, c2, ... per input bit."""
    u = np.asarray(bits, dtype=np.int64).ravel()
    if terminate:
        u = np.concatenate((u, np.zeros(spec.constraint_length - 1, dtype=np.int64)))
    if u.size == 0:
        return np.zeros(0, dtype=np.uint8)
    branches = [np.convolve(u, taps)[: u.size] & 1 for taps in _taps(spec)]
    out = np.stack(branches, axis=1).astype(np.uint8)
    out ^= np.array(spec.invert_mask, dtype=np.uint8)
    return out.ravel()


def free_distance(spec: ConvSpec, max_message_len: int = 12) -> int:
    """Minimum weight over terminated codewords of nonzero messages up to max_message_len bits."""
    linear = spec.model_copy(update={"invert_mask": (False,) * spec.n})
    best = None
    # messages start with a 1; shorter ones are covered by trailing zeros
    for tail in range(1 << (max_message_len - 1)):
        bits = [1] + [(tail >> i) & 1 for i in range(max_message_len - 2, -1, -1)]
        weight = int(conv_encode(linear, bits).sum())
        best = weight if best is None else min(best, weight)
    return best


def resolve_truncation_depth(spec: ConvSpec, cfg: ViterbiConfig) -> int:
    depth = cfg.truncation_depth or spec.truncation_hint or 6 * spec.constraint_length
    if depth < spec.constraint_length:
        raise ConfigError(
            f"truncation depth {depth} is shorter than the constraint length "
            f"{spec.constraint_length}"
        )
    return depth


class _Survivors:
    """Predecessor and reference tables laid out per destination state."""

    def __init__(self, trellis: Trellis):
        spec = trellis.spec
        states = np.arange(spec.num_states, dtype=np.int64)
        base = (states << 1) & (spec.num_states - 1)
        self.pred = np.stack((base, base | 1), axis=1)  # (states, 2)
        self.input_bit = (states >> (spec.constraint_length - 2)).astype(np.uint8)
        # bit emitted when entering each state from each predecessor
        self.ref = trellis.outputs[self.pred, self.input_bit[:, None]]  # (states, 2, n)


def _branch_costs(survivors: _Survivors, received: np.ndarray, soft: bool) -> np.ndarray:
    """(stages, states, 2) branch metric, lower is better."""
    stages, n = received.shape
    ref = survivors.ref.reshape(-1, n).astype(np.float64)
    if soft:
        symbols = 1.0 - 2.0 * ref
        costs = (received**2).sum(axis=1, keepdims=True) - 2.0 * received @ symbols.T + n
    else:
        costs = received.sum(axis=1, keepdims=True) + ref.sum(axis=1) - 2.0 * received @ ref.T
    return costs.reshape(stages, -1, 2)


def _stage_costs(
    survivors: _Survivors, received: np.ndarray, soft: bool
) -> Iterator[np.ndarray]:
    """Per-stage (states, 2) branch metrics, computed in bounded chunks."""
    for start in range(0, received.shape[0], COST_CHUNK_STAGES):
        yield from _branch_costs(survivors, received[start : start + COST_CHUNK_STAGES], soft)


def _viterbi(spec: ConvSpec, cfg: ViterbiConfig, received: np.ndarray, soft: bool) -> np.ndarray:
    n = spec.n
    if received.size % n:
        raise BadLength(f"{received.size} channel values is not a multiple of n={n}")
    depth = resolve_truncation_depth(spec, cfg)
    stages = received.size // n
    memory = spec.constraint_length - 1
    if stages == 0:
        return np.zeros(0, dtype=np.uint8)

    survivors = _Survivors(build_trellis(spec))
    costs = _stage_costs(survivors, received.reshape(stages, n), soft)
    pred = survivors.pred
    num_states = spec.num_states
    rows = np.arange(num_states)

    metric = np.full(num_states, np.inf)
    metric[0] = 0.0
    decoded = np.zeros(stages, dtype=np.uint8)

    if cfg.full_traceback:
        decisions = np.zeros((stages, num_states), dtype=np.uint8)
        for t, cost in enumerate(costs):
            candidates = metric[pred] + cost
            choice = np.argmin(candidates, axis=1)
            decisions[t] = choice
            metric = candidates[rows, choice]
            metric -= metric.min()
        state = 0 if cfg.terminate else int(np.argmin(metric))
        for t in range(stages - 1, -1, -1):
            decoded[t] = survivors.input_bit[state]
            state = int(pred[state, decisions[t, state]])
    else:
        history = np.zeros((num_states, depth), dtype=np.uint8)
        for t, cost in enumerate(costs):
            candidates = metric[pred] + cost
            choice = np.argmin(candidates, axis=1)
            metric = candidates[rows, choice]
            metric -= metric.min()
            history = history[pred[rows, choice]]
            slot = t % depth
            if t >= depth:
                decoded[t - depth] = history[int(np.argmin(metric)), slot]
            history[:, slot] = survivors.input_bit
        state = 0 if cfg.terminate else int(np.argmin(metric))
        for t in range(max(0, stages - depth), stages):
            decoded[t] = history[state, t % depth]

    if cfg.terminate and not cfg.keep_tail:
        decoded = decoded[: max(0, stages - memory)]
    return decoded


def viterbi_decode_hard(spec: ConvSpec, cfg: ViterbiConfig, bits: Sequence[int]) -> np.ndarray:
    """Maximum Hamming-agreement path; ties go to the lower predecessor state."""
    received = np.asarray(bits, dtype=np.float64).ravel()
    return _viterbi(spec, cfg, received, soft=False)


def viterbi_decode_soft(
    spec: ConvSpec, cfg: ViterbiConfig, samples: Sequence[float]
) -> np.ndarray:
    """Minimum squared Euclidean distance to the BPSK reference (0 -> +1, 1 -> -1)."""
    received = np.asarray(samples, dtype=np.float64).ravel()
    return _viterbi(spec, cfg, received, soft=True)


def viterbi_decode(
    spec: ConvSpec, cfg: ViterbiConfig, received: Sequence[float]
) -> np.ndarray:
    if cfg.metric == "soft":
        return viterbi_decode_soft(spec, cfg, received)
    return viterbi_decode_hard(spec, cfg, received)
