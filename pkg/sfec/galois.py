"""Binary extension fields GF(2^m) backed by exp/log tables."""

import functools
import logging

import numpy as np

from sfec.errors import BadSymbol, DivideByZero, NotPrimitive, TooLarge
from sfec.utils.typing import FieldSpec, GfElement

logger = logging.getLogger(__name__)

# add/mul tables are only rendered for small fields
MAX_TABLE_M = 8


class Field:
    """GF(2^m) with elements held in vector (integer) representation.

    ``exp_table`` has length 2n so that ``exp_table[log a + log b]`` never needs
    a modulo. ``log_table[0]`` is never read: the logarithm of zero raises.
    """

    def __init__(self, spec: FieldSpec, exp_table: np.ndarray, log_table: np.ndarray):
        self.spec = spec
        self.m = spec.m
        self.size = 1 << spec.m
        self.n = self.size - 1
        self.exp_table = exp_table
        self.log_table = log_table
        self.exp_table.setflags(write=False)
        self.log_table.setflags(write=False)
        # plain lists for the scalar hot path
        self._exp = exp_table.tolist()
        self._log = log_table.tolist()

    def __repr__(self) -> str:
        return f"Field(GF(2^{self.m}), poly={self.spec.prim_poly:#x})"

    def check(self, a: GfElement) -> GfElement:
        if not 0 <= a < self.size:
            raise BadSymbol(f"{a} is not an element of GF(2^{self.m})")
        return a

    def exp(self, i: int) -> GfElement:
        return self._exp[i % self.n]

    def log(self, a: GfElement) -> int:
        if a == 0:
            raise DivideByZero("log of zero is undefined")
        return self._log[self.check(a)]

    def add(self, a: GfElement, b: GfElement) -> GfElement:
        return a ^ b

    sub = add

    def mul(self, a: GfElement, b: GfElement) -> GfElement:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def div(self, a: GfElement, b: GfElement) -> GfElement:
        if b == 0:
            raise DivideByZero("division by the zero element")
        if a == 0:
            return 0
        return self._exp[self._log[a] + self.n - self._log[b]]

    def inv(self, a: GfElement) -> GfElement:
        if a == 0:
            raise DivideByZero("zero has no multiplicative inverse")
        return self._exp[self.n - self._log[a]]

    def pow(self, a: GfElement, e: int) -> GfElement:
        if a == 0:
            if e < 0:
                raise DivideByZero("zero raised to a negative power")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self.n]

    def power_str(self, a: GfElement) -> str:
        """Render an element as 0, 1, a or a^k."""
        if a == 0:
            return "0"
        k = self.log(a)
        if k == 0:
            return "1"
        return "a" if k == 1 else f"a^{k}"

    def element_table(self) -> list[tuple[int, str, str]]:
        """(decimal, binary, power) rows in the order the powers are generated."""
        rows = [(0, format(0, f"0{self.m}b"), "0")]
        for i in range(self.n):
            value = self._exp[i]
            rows.append((value, format(value, f"0{self.m}b"), f"a^{i}"))
        return rows

    def _power_grid(self, op) -> list[list[GfElement]]:
        if self.m > MAX_TABLE_M:
            raise TooLarge(f"operation tables are limited to m <= {MAX_TABLE_M}")
        powers = self._exp[: self.n]
        return [[op(a, b) for b in powers] for a in powers]

    def add_table(self) -> list[list[GfElement]]:
        """Sums of every pair of nonzero elements, rows/columns ordered 1, a, a^2, ..."""
        return self._power_grid(self.add)

    def mul_table(self) -> list[list[GfElement]]:
        return self._power_grid(self.mul)


@functools.lru_cache(maxsize=None)
def build_field(spec: FieldSpec) -> Field:
    """Enumerate the powers of alpha = x modulo ``spec.prim_poly``."""
    size = 1 << spec.m
    n = size - 1
    exp_table = np.zeros(2 * n, dtype=np.int64)
    log_table = np.zeros(size, dtype=np.int64)
    x = 1
    for i in range(n):
        if i > 0 and x == 1:
            raise NotPrimitive(
                f"{spec.prim_poly:#x} repeats after {i} powers, expected {n}"
            )
        exp_table[i] = x
        log_table[x] = i
        x <<= 1
        if x & size:
            x ^= spec.prim_poly
    exp_table[n:] = exp_table[:n]
    logger.debug(f"Built GF(2^{spec.m}) from poly {spec.prim_poly:#x}")
    return Field(spec, exp_table, log_table)
