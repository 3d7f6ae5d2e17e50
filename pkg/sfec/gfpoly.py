"""Dense polynomials over a GF(2^m) field.

Coefficients are stored ascending (index i is the coefficient of x^i) and
rendered descending, the way the codewords are written out by hand.
"""

import math
from collections.abc import Iterable, Mapping, Sequence

from sfec.errors import ConfigError, DivideByZero
from sfec.galois import Field
from sfec.utils.typing import GfElement

# degree of the zero polynomial; compares below every integer degree
ZERO_DEGREE = -math.inf


class GfPoly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable[GfElement] = ()):
        trimmed = [int(c) for c in coeffs]
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        self.field = field
        self.coeffs: tuple[GfElement, ...] = tuple(trimmed)

    @classmethod
    def zero(cls, field: Field) -> "GfPoly":
        return cls(field)

    @classmethod
    def one(cls, field: Field) -> "GfPoly":
        return cls(field, (1,))

    @classmethod
    def monomial(cls, field: Field, coeff: GfElement, degree: int) -> "GfPoly":
        return cls(field, [0] * degree + [coeff])

    @classmethod
    def from_powers(cls, field: Field, terms: Mapping[int, int]) -> "GfPoly":
        """Build from {degree: k} meaning a^k x^degree."""
        if not terms:
            return cls.zero(field)
        coeffs = [0] * (max(terms) + 1)
        for degree, k in terms.items():
            coeffs[degree] ^= field.exp(k)
        return cls(field, coeffs)

    @classmethod
    def from_descending(cls, field: Field, symbols: Sequence[GfElement]) -> "GfPoly":
        """Build from symbols in transmission order, highest power first."""
        return cls(field, reversed([int(s) for s in symbols]))

    def to_descending(self, length: int) -> list[GfElement]:
        padded = list(self.coeffs) + [0] * (length - len(self.coeffs))
        return padded[length - 1 :: -1] if length else []

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> GfElement:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int) -> GfElement:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _same_field(self, other: "GfPoly") -> None:
        if other.field is not self.field and other.field.spec != self.field.spec:
            raise ConfigError("polynomials belong to different fields")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GfPoly):
            return NotImplemented
        return self.field.spec == other.field.spec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field.spec, self.coeffs))

    def __add__(self, other: "GfPoly") -> "GfPoly":
        self._same_field(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] ^= c
        return GfPoly(self.field, out)

    __sub__ = __add__

    def __mul__(self, other: "GfPoly") -> "GfPoly":
        self._same_field(other)
        if self.is_zero or other.is_zero:
            return GfPoly.zero(self.field)
        mul = self.field.mul
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] ^= mul(a, b)
        return GfPoly(self.field, out)

    def __divmod__(self, den: "GfPoly") -> tuple["GfPoly", "GfPoly"]:
        self._same_field(den)
        if den.is_zero:
            raise DivideByZero("polynomial division by zero")
        field = self.field
        dd = len(den.coeffs) - 1
        rem = list(self.coeffs)
        quot = [0] * max(len(rem) - dd, 0)
        inv_lead = field.inv(den.lead)
        for i in range(len(rem) - 1, dd - 1, -1):
            if rem[i] == 0:
                continue
            factor = field.mul(rem[i], inv_lead)
            quot[i - dd] = factor
            for j, dc in enumerate(den.coeffs):
                if dc:
                    rem[i - dd + j] ^= field.mul(factor, dc)
        return GfPoly(field, quot), GfPoly(field, rem[:dd])

    def __floordiv__(self, den: "GfPoly") -> "GfPoly":
        return divmod(self, den)[0]

    def __mod__(self, den: "GfPoly") -> "GfPoly":
        return divmod(self, den)[1]

    def __call__(self, x: GfElement) -> GfElement:
        """Horner evaluation at a field element."""
        mul = self.field.mul
        acc = 0
        for c in reversed(self.coeffs):
            acc = mul(acc, x) ^ c
        return acc

    def derivative(self) -> "GfPoly":
        # characteristic 2: even-power terms vanish, odd ones drop one degree
        return GfPoly(
            self.field,
            (c if i % 2 else 0 for i, c in enumerate(self.coeffs[1:], start=1)),
        )

    def scale(self, c: GfElement) -> "GfPoly":
        mul = self.field.mul
        return GfPoly(self.field, (mul(a, c) for a in self.coeffs))

    def shift(self, k: int) -> "GfPoly":
        if k < 0:
            raise ValueError("shift must be non-negative")
        if self.is_zero:
            return self
        return GfPoly(self.field, [0] * k + list(self.coeffs))

    def mod_xn(self, k: int) -> "GfPoly":
        return GfPoly(self.field, self.coeffs[:k])

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            coeff = "" if c == 1 and i > 0 else self.field.power_str(c)
            power = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(coeff + power)
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"GfPoly({self})"
