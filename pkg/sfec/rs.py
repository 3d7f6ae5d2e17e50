"""Systematic Reed-Solomon encoder and decoder over GF(2^m).

Words are handled in transmission order: symbol 0 is the coefficient of
x^(n-1). An error "position" p is the exponent of x, i.e. symbol n-1-p.
"""

import functools
import logging
from collections.abc import Sequence
from typing import Literal

import numpy as np

from sfec.errors import (
    BadLength,
    BadSymbol,
    DecodeFailure,
    DegenerateInput,
    DivideByZero,
    SingularSystem,
)
from sfec.galois import Field, build_field
from sfec.gfpoly import GfPoly
from sfec.utils.tracing import DecodeTrace
from sfec.utils.typing import (
    DecodeReport,
    DecodeStatus,
    FieldSpec,
    GfElement,
    RsSpec,
)

logger = logging.getLogger(__name__)

Solver = Literal["eea", "bm"]
MagnitudeMethod = Literal["forney", "direct"]


def rs_15_9_spec() -> RsSpec:
    return RsSpec(field_spec=FieldSpec(m=4, prim_poly=0x13), n=15, k=9, fr=1, g_exp=1)


def ccsds_rs_spec() -> RsSpec:
    """CCSDS RS(255,223): F(x) = x^8+x^7+x^2+x+1, a_g = a^11, FR = 112."""
    return RsSpec(
        field_spec=FieldSpec(m=8, prim_poly=0x187), n=255, k=223, fr=112, g_exp=11
    )


def build_generator(spec: RsSpec) -> GfPoly:
    """g(x) = (x + a_g^FR)(x + a_g^(FR+1)) ... (x + a_g^(FR+2t-1))."""
    field = build_field(spec.field_spec)
    a_g = field.exp(spec.g_exp)
    gen = GfPoly.one(field)
    for i in range(spec.fr, spec.fr + 2 * spec.t):
        gen = gen * GfPoly(field, (field.pow(a_g, i), 1))
    return gen


def solve_key_eea(
    field: Field,
    syndromes: Sequence[GfElement],
    t: int,
    trace: DecodeTrace | None = None,
) -> tuple[GfPoly, GfPoly]:
    """Partial extended Euclid on (x^2t, S(x)); stops at the first remainder of degree < t."""
    s_poly = GfPoly(field, syndromes)
    if s_poly.is_zero:
        raise DegenerateInput("all syndromes are zero")
    r_prev, r = GfPoly.monomial(field, 1, 2 * t), s_poly
    v_prev, v = GfPoly.zero(field), GfPoly.one(field)
    step = 0
    while r.degree >= t:
        quotient, remainder = divmod(r_prev, r)
        r_prev, r = r, remainder
        v_prev, v = v, v_prev + quotient * v
        step += 1
        if trace is not None:
            trace.record(
                "eea_step",
                step=step,
                quotient=str(quotient),
                remainder=str(remainder),
                locator=str(v),
            )
    lam0 = v.coeff(0)
    if lam0 == 0:
        raise DegenerateInput("error locator has a zero constant term")
    scale = field.inv(lam0)
    return v.scale(scale), r.scale(scale)


def solve_key_bm(
    field: Field,
    syndromes: Sequence[GfElement],
    t: int,
    trace: DecodeTrace | None = None,
) -> tuple[GfPoly, GfPoly]:
    """Berlekamp-Massey: shortest LFSR that generates the syndrome sequence."""
    s = [int(x) for x in syndromes]
    if not any(s):
        raise DegenerateInput("all syndromes are zero")
    locator = [1]
    backup = [1]
    length = 0
    gap = 1
    last_discrepancy = 1
    for i in range(2 * t):
        d = s[i]
        for j in range(1, min(length, len(locator) - 1) + 1):
            d ^= field.mul(locator[j], s[i - j])
        if d == 0:
            gap += 1
        else:
            coef = field.div(d, last_discrepancy)
            update = [0] * gap + [field.mul(coef, b) for b in backup]
            size = max(len(locator), len(update))
            candidate = [
                (locator[j] if j < len(locator) else 0)
                ^ (update[j] if j < len(update) else 0)
                for j in range(size)
            ]
            if 2 * length <= i:
                backup = locator
                length = i + 1 - length
                last_discrepancy = d
                gap = 1
            else:
                gap += 1
            locator = candidate
        if trace is not None:
            trace.record(
                "bm_step", step=i + 1, discrepancy=d, locator=str(GfPoly(field, locator))
            )
    lam = GfPoly(field, locator)
    omega = (lam * GfPoly(field, s)).mod_xn(2 * t)
    return lam, omega


def error_values_forney(
    field: Field,
    lam: GfPoly,
    omega: GfPoly,
    locators: Sequence[GfElement],
    fr: int,
) -> list[GfElement]:
    """y_i = z_i^(1-FR) * Omega(z_i^-1) / Lambda'(z_i^-1)."""
    dlam = lam.derivative()
    values = []
    for z in locators:
        z_inv = field.inv(z)
        den = dlam(z_inv)
        if den == 0:
            raise DivideByZero(f"Lambda' vanishes at the locator {field.power_str(z)}")
        values.append(field.mul(field.pow(z, 1 - fr), field.div(omega(z_inv), den)))
    return values


def error_values_direct(
    field: Field,
    syndromes: Sequence[GfElement],
    locators: Sequence[GfElement],
    fr: int,
) -> list[GfElement]:
    """Solve S_(FR+j) = sum_i y_i z_i^(FR+j), j < T, by Gaussian elimination."""
    count = len(locators)
    if count == 0:
        return []
    if count > len(syndromes):
        raise SingularSystem(f"{count} unknowns but only {len(syndromes)} syndromes")
    rows = [
        [field.pow(z, fr + j) for z in locators] + [int(syndromes[j])]
        for j in range(count)
    ]
    for col in range(count):
        pivot = next((r for r in range(col, count) if rows[r][col]), None)
        if pivot is None:
            raise SingularSystem("error locators do not give an invertible system")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = field.inv(rows[col][col])
        rows[col] = [field.mul(inv, v) for v in rows[col]]
        for r in range(count):
            factor = rows[r][col]
            if r != col and factor:
                rows[r] = [a ^ field.mul(factor, b) for a, b in zip(rows[r], rows[col])]
    return [rows[i][count] for i in range(count)]


class RsEncoder:
    """Encoder/decoder for one RS code; immutable once built."""

    def __init__(self, spec: RsSpec):
        self.spec = spec
        self.field = build_field(spec.field_spec)
        self.n = spec.n
        self.k = spec.k
        self.t = spec.t
        self.gen = build_generator(spec)
        self.a_g = self.field.exp(spec.g_exp)
        self._root_logs = np.array(
            [(spec.g_exp * (spec.fr + j)) % self.field.n for j in range(2 * self.t)],
            dtype=np.int64,
        )
        self._feedback = self._feedback_table()

    def __repr__(self) -> str:
        return f"RsEncoder(RS({self.n},{self.k}), fr={self.spec.fr}, g_exp={self.spec.g_exp})"

    def _feedback_table(self) -> np.ndarray:
        """Row v holds v * (g_(2t-1), ..., g_0), the division register taps."""
        field = self.field
        taps = np.array(self.gen.coeffs[: 2 * self.t][::-1], dtype=np.int64)
        values = np.arange(field.size, dtype=np.int64)
        table = np.zeros((field.size, taps.size), dtype=np.int64)
        nz_v = values[1:]
        nz_t = taps != 0
        logs = field.log_table[nz_v][:, None] + field.log_table[taps[nz_t]][None, :]
        table[1:, nz_t] = field.exp_table[logs]
        return table

    def _check_word(self, symbols: Sequence[GfElement], length: int) -> np.ndarray:
        word = np.asarray(symbols, dtype=np.int64).ravel()
        if word.size != length:
            raise BadLength(f"expected {length} symbols, got {word.size}")
        if word.size and (word.min() < 0 or word.max() >= self.field.size):
            raise BadSymbol(f"symbols must lie in [0, {self.field.size})")
        return word

    def encode(self, message: Sequence[GfElement]) -> np.ndarray:
        """Systematic codeword: message followed by CK = x^2t M(x) mod g(x)."""
        msg = self._check_word(message, self.k)
        reg = np.zeros(2 * self.t, dtype=np.int64)
        for symbol in msg.tolist():
            feedback = symbol ^ int(reg[0])
            reg = np.concatenate((reg[1:], [0])) ^ self._feedback[feedback]
        return np.concatenate((msg, reg))

    def syndromes(self, received: Sequence[GfElement]) -> np.ndarray:
        """S_j = R(a_g^(FR+j)) for j = 0 .. 2t-1."""
        word = self._check_word(received, self.n)
        nz = np.flatnonzero(word)
        if nz.size == 0:
            return np.zeros(2 * self.t, dtype=np.int64)
        field = self.field
        positions = self.n - 1 - nz
        logs = field.log_table[word[nz]]
        exponents = (logs[None, :] + self._root_logs[:, None] * positions[None, :]) % field.n
        return np.bitwise_xor.reduce(field.exp_table[exponents], axis=1)

    def syndromes_via_remainder(self, received: Sequence[GfElement]) -> np.ndarray:
        """Same syndromes, evaluated on R(x) mod g(x) instead of R(x)."""
        word = self._check_word(received, self.n)
        remainder = GfPoly.from_descending(self.field, word.tolist()) % self.gen
        roots = [self.field.exp(int(e)) for e in self._root_logs]
        return np.array([remainder(x) for x in roots], dtype=np.int64)

    def chien_values(self, lam: GfPoly) -> np.ndarray:
        """Lambda(a_g^-p) for every position p = 0 .. n-1."""
        field = self.field
        p = np.arange(self.n, dtype=np.int64)
        values = np.zeros(self.n, dtype=np.int64)
        for i, c in enumerate(lam.coeffs):
            if c:
                exponent = (field.log(c) - self.spec.g_exp * i * p) % field.n
                values ^= field.exp_table[exponent]
        return values

    def chien_search(self, lam: GfPoly) -> list[tuple[GfElement, int]]:
        """(locator z, position) for each root a_g^-p of Lambda, ascending by position."""
        roots = np.flatnonzero(self.chien_values(lam) == 0).tolist()
        return [(self.field.pow(self.a_g, p), p) for p in roots]

    def decode(
        self,
        received: Sequence[GfElement],
        solver: Solver = "eea",
        magnitudes: MagnitudeMethod = "forney",
        trace: DecodeTrace | None = None,
    ) -> DecodeReport:
        word = self._check_word(received, self.n)
        field = self.field
        synd = self.syndromes(word)
        if trace is not None:
            trace.record(
                "syndromes",
                values=synd.tolist(),
                fr=self.spec.fr,
                poly=str(GfPoly(field, synd.tolist())),
            )
        if not synd.any():
            report = DecodeReport(
                status=DecodeStatus.NO_ERROR,
                corrected=tuple(word.tolist()),
                message=tuple(word[: self.k].tolist()),
            )
            return self._finish(report, trace)

        try:
            solve = solve_key_bm if solver == "bm" else solve_key_eea
            lam, omega = solve(field, synd.tolist(), self.t, trace)
            if trace is not None:
                trace.record("key_equation", locator=str(lam), evaluator=str(omega))
            if not 1 <= lam.degree <= self.t:
                raise DecodeFailure(f"locator degree {lam.degree} outside [1, {self.t}]")
            if trace is not None:
                values = self.chien_values(lam)
                trace.record("chien", rows=list(enumerate(values.tolist())))
            found = self.chien_search(lam)
            if len(found) != lam.degree:
                raise DecodeFailure(
                    f"Chien search found {len(found)} roots for a degree {lam.degree} locator"
                )
            locators = [z for z, _ in found]
            positions = [p for _, p in found]
            if magnitudes == "direct":
                values = error_values_direct(field, synd.tolist(), locators, self.spec.fr)
            else:
                values = error_values_forney(field, lam, omega, locators, self.spec.fr)
            if trace is not None:
                trace.record(
                    "magnitudes",
                    method=magnitudes,
                    values=list(zip(positions, locators, values)),
                )
        except (DecodeFailure, DegenerateInput, SingularSystem, DivideByZero) as exc:
            logger.info(f"RS({self.n},{self.k}) decode failure: {exc}")
            return self._finish(
                DecodeReport(status=DecodeStatus.FAILURE, reason=str(exc)), trace
            )

        corrected = word.copy()
        for position, y in zip(positions, values):
            corrected[self.n - 1 - position] ^= y
        if self.syndromes(corrected).any():
            logger.info(f"RS({self.n},{self.k}) decode failure: nonzero re-syndromes")
            return self._finish(
                DecodeReport(
                    status=DecodeStatus.FAILURE, reason="corrected word has nonzero syndromes"
                ),
                trace,
            )
        report = DecodeReport(
            status=DecodeStatus.CORRECTED,
            corrected=tuple(corrected.tolist()),
            message=tuple(corrected[: self.k].tolist()),
            num_errors=len(positions),
            positions=tuple(positions),
            magnitudes=tuple(values),
        )
        return self._finish(report, trace)

    @staticmethod
    def _finish(report: DecodeReport, trace: DecodeTrace | None) -> DecodeReport:
        if trace is not None:
            trace.record("result", status=report.status.value, reason=report.reason)
        return report


@functools.lru_cache(maxsize=16)
def rs_encoder(spec: RsSpec) -> RsEncoder:
    return RsEncoder(spec)


def rs_encode(enc: RsEncoder, message: Sequence[GfElement]) -> np.ndarray:
    return enc.encode(message)


def rs_decode(
    enc: RsEncoder,
    received: Sequence[GfElement],
    solver: Solver = "eea",
    magnitudes: MagnitudeMethod = "forney",
    trace: DecodeTrace | None = None,
) -> DecodeReport:
    return enc.decode(received, solver=solver, magnitudes=magnitudes, trace=trace)
