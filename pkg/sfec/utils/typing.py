# Copyright 2025 Google LLC
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import math
from enum import Enum
from fractions import Fraction
from typing import Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_validator,
    model_validator,
)

GfElement = int


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class FieldSpec(_Frozen):
    """Parameters of a binary extension field GF(2^m)."""

    m: int = Field(ge=2, le=16)
    prim_poly: int
    generator_element: Literal[2] = 2

    @model_validator(mode="after")
    def _check_poly(self) -> "FieldSpec":
        if self.prim_poly >> self.m != 1:
            raise ValueError(
                f"prim_poly {self.prim_poly:#x} must have degree exactly m={self.m}"
            )
        if not self.prim_poly & 1:
            raise ValueError(f"prim_poly {self.prim_poly:#x} has no constant term")
        return self


class RsSpec(_Frozen):
    """Reed-Solomon code parameters; the generator roots are a_g^FR ... a_g^(FR+2t-1) with a_g = alpha^g_exp."""

    field_spec: FieldSpec
    n: int
    k: int
    fr: int = 1
    g_exp: int = 1

    @property
    def t(self) -> int:
        return (self.n - self.k) // 2

    @property
    def d_min(self) -> int:
        return 2 * self.t + 1

    @model_validator(mode="after")
    def _check_code(self) -> "RsSpec":
        expected_n = (1 << self.field_spec.m) - 1
        if self.n != expected_n:
            raise ValueError(f"n must be 2^m - 1 = {expected_n}, got {self.n}")
        if not 0 < self.k < self.n:
            raise ValueError(f"k must lie in (0, n), got {self.k}")
        if (self.n - self.k) % 2:
            raise ValueError(f"n - k must be even, got {self.n - self.k}")
        if self.g_exp < 1 or math.gcd(self.g_exp, self.n) != 1:
            raise ValueError(f"g_exp={self.g_exp} is not coprime with n={self.n}")
        return self


class DecodeStatus(str, Enum):
    NO_ERROR = "NoError"
    CORRECTED = "Corrected"
    FAILURE = "Failure"


class DecodeReport(_Frozen):
    """Outcome of one Reed-Solomon decode attempt.

    Positions are exponents of x in E(x); ``corrected`` and ``message`` are in
    transmission order (highest power first) and absent on failure.
    """

    status: DecodeStatus
    corrected: tuple[int, ...] | None = None
    message: tuple[int, ...] | None = None
    num_errors: int = 0
    positions: tuple[int, ...] = ()
    magnitudes: tuple[int, ...] = ()
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status is not DecodeStatus.FAILURE


class ConvSpec(_Frozen):
    """Rate 1/n convolutional code.

    Generators are L-bit tap masks whose most significant bit taps the newest
    input bit, so "1111" and 0b1111 are the same generator.
    """

    constraint_length: int = Field(ge=2, le=32)
    generators: tuple[int, ...] = Field(min_length=1)
    invert_mask: tuple[bool, ...] = Field(default=(), validate_default=True)
    truncation_hint: int | None = Field(default=None, ge=1)

    @field_validator("generators", mode="before")
    @classmethod
    def _parse_generators(cls, value, info):
        length = info.data.get("constraint_length")
        parsed = []
        for g in value:
            if isinstance(g, str):
                if length is not None and len(g) != length:
                    raise ValueError(f"generator '{g}' must have {length} taps")
                g = int(g, 2)
            parsed.append(g)
        return tuple(parsed)

    @field_validator("invert_mask")
    @classmethod
    def _fill_invert_mask(cls, value, info):
        generators = info.data.get("generators") or ()
        if not value:
            return (False,) * len(generators)
        if len(value) != len(generators):
            raise ValueError("invert_mask needs one entry per generator")
        return value

    @model_validator(mode="after")
    def _check_taps(self) -> "ConvSpec":
        for g in self.generators:
            if not 0 < g < (1 << self.constraint_length):
                raise ValueError(
                    f"generator {g:b} is empty or longer than L={self.constraint_length}"
                )
        return self

    @property
    def n(self) -> int:
        return len(self.generators)

    @property
    def rate(self) -> Fraction:
        return Fraction(1, self.n)

    @property
    def num_states(self) -> int:
        return 1 << (self.constraint_length - 1)


class ViterbiConfig(_Frozen):
    metric: Literal["hard", "soft"] = "hard"
    # None picks the code's hint, else six constraint lengths.
    truncation_depth: int | None = Field(default=None, ge=1)
    full_traceback: bool = False
    terminate: bool = True
    keep_tail: bool = False


class InterleaverSpec(_Frozen):
    depth: int = Field(default=1, ge=1)
    row_len: int = Field(ge=1)


class ConcatSpec(_Frozen):
    """RS outer code, symbol interleaver and convolutional inner code."""

    outer: RsSpec
    inner: ConvSpec
    interleaver: InterleaverSpec
    viterbi: ViterbiConfig = ViterbiConfig(metric="soft")

    @model_validator(mode="after")
    def _check_rows(self) -> "ConcatSpec":
        if self.interleaver.row_len != self.outer.n:
            raise ValueError(
                f"interleaver row_len {self.interleaver.row_len} != outer n {self.outer.n}"
            )
        return self


class ChannelConfig(_Frozen):
    ebn0_db: float
    code_rate: float = Field(default=1.0, gt=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, lt=1 << 64)


class Scheme(str, Enum):
    UNCODED = "uncoded"
    RS_ONLY = "rs"
    CONV_HARD = "conv-hard"
    CONV_SOFT = "conv-soft"
    CONCAT = "concat"


class SweepConfig(_Frozen):
    scheme: Scheme
    ebn0_grid: tuple[float, ...] = Field(min_length=1)
    depth: int = Field(default=1, ge=1)
    soft_inner: bool = True
    min_bits: int = Field(default=10**6, gt=0)
    min_errors: int = Field(default=100, gt=0)
    max_bits: int = Field(default=10**8, gt=0)
    frame_bits: int = Field(default=1024, gt=0)
    seed: int = Field(default=0, ge=0, lt=1 << 64)

    @model_validator(mode="after")
    def _check_stop_rule(self) -> "SweepConfig":
        if self.max_bits < self.min_bits:
            raise ValueError("max_bits must be >= min_bits")
        return self


class CodecSpecs(_Frozen):
    rs: RsSpec | None = None
    conv: ConvSpec | None = None
    viterbi: ViterbiConfig | None = None


class BerPoint(_Frozen):
    scheme: Scheme
    ebn0_db: float
    info_bits: int = Field(ge=0)
    bit_errors: int = Field(ge=0)
    frame_errors: int = Field(ge=0)

    @computed_field
    @property
    def ber(self) -> float:
        return self.bit_errors / self.info_bits if self.info_bits else 0.0

    @model_validator(mode="after")
    def _check_counts(self) -> "BerPoint":
        if self.bit_errors > self.info_bits:
            raise ValueError("bit_errors cannot exceed info_bits")
        return self
