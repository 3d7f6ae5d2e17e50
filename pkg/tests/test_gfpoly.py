import pytest

from sfec.errors import ConfigError, DivideByZero
from sfec.galois import build_field
from sfec.gfpoly import ZERO_DEGREE, GfPoly
from sfec.utils.typing import FieldSpec


@pytest.fixture
def P(gf16):
    def make(terms):
        return GfPoly.from_powers(gf16, terms)

    return make


@pytest.fixture
def generator(P):
    # x^6 + a^10x^5 + a^14x^4 + a^4x^3 + a^6x^2 + a^9x + a^6
    return P({6: 0, 5: 10, 4: 14, 3: 4, 2: 6, 1: 9, 0: 6})


@pytest.fixture
def syndrome_poly(P):
    # a^10x^5 + x^3 + a^5x^2 + x + 1
    return P({5: 10, 3: 0, 2: 5, 1: 0, 0: 0})


def random_poly(field, rng, max_degree=6):
    return GfPoly(field, rng.integers(0, field.size, rng.integers(0, max_degree + 1)).tolist())


def test_trimming_and_degree(gf16):
    assert GfPoly(gf16, [1, 2, 0, 0]).coeffs == (1, 2)
    assert GfPoly(gf16, [1, 2, 0, 0]).degree == 1
    assert GfPoly.zero(gf16).degree == ZERO_DEGREE
    assert GfPoly.zero(gf16).degree < 0
    assert GfPoly.one(gf16).degree == 0


def test_add(gf16, P):
    p = P({3: 2, 0: 7})
    assert (p + p).is_zero
    assert P({1: 0, 0: 0}) + P({1: 0}) == GfPoly.one(gf16)


def test_codeword_is_shifted_message_plus_parity(gf16, P):
    shifted = P({1: 11}).shift(6)
    parity = P({5: 8, 4: 10, 3: 4, 2: 14, 1: 8, 0: 12})
    codeword = shifted + parity
    assert codeword.to_descending(15) == [0, 0, 0, 0, 0, 0, 0, 14, 0, 5, 7, 3, 9, 5, 15]


def test_mul(P):
    assert P({1: 0, 0: 1}) * P({1: 0, 0: 2}) == P({2: 0, 1: 5, 0: 3})


def test_generator_product(gf16, P, generator):
    product = GfPoly.one(gf16)
    for i in range(1, 7):
        product = product * P({1: 0, 0: i})
    assert product == generator
    assert str(product) == "x^6 + a^10x^5 + a^14x^4 + a^4x^3 + a^6x^2 + a^9x + a^6"


def test_mul_identity(gf16, P):
    p = P({4: 3, 1: 9})
    assert p * GfPoly.one(gf16) == p
    assert (p * GfPoly.zero(gf16)).is_zero


def test_parity_by_long_division(P, generator):
    _, remainder = divmod(P({7: 11}), generator)
    assert remainder == P({5: 8, 4: 10, 3: 4, 2: 14, 1: 8, 0: 12})
    assert str(remainder) == "a^8x^5 + a^10x^4 + a^4x^3 + a^14x^2 + a^8x + a^12"


def test_first_euclid_step(gf16, P, syndrome_poly):
    quotient, remainder = divmod(GfPoly.monomial(gf16, 1, 6), syndrome_poly)
    assert quotient == P({1: 5})
    assert remainder == P({4: 5, 3: 10, 2: 5, 1: 5})


def test_divide_by_self_and_zero(gf16, P):
    p = P({2: 3, 0: 1})
    assert divmod(p, p) == (GfPoly.one(gf16), GfPoly.zero(gf16))
    with pytest.raises(DivideByZero):
        divmod(p, GfPoly.zero(gf16))


def test_divmod_reconstruction(gf16, rng):
    for _ in range(200):
        num = random_poly(gf16, rng, 10)
        den = random_poly(gf16, rng, 5)
        if den.is_zero:
            continue
        q, r = divmod(num, den)
        assert q * den + r == num
        assert r.degree < den.degree
        assert num // den == q
        assert num % den == r


def test_evaluation(gf16, example_received):
    received = GfPoly.from_descending(gf16, example_received.tolist())
    assert received(gf16.exp(3)) == gf16.exp(5)
    assert received(gf16.exp(5)) == 0


def test_evaluation_at_zero_is_constant_term(gf16, P):
    p = P({3: 2, 0: 9})
    assert p(0) == gf16.exp(9)


def test_derivative(gf16, P):
    assert P({2: 10, 1: 0, 0: 0}).derivative() == GfPoly.one(gf16)
    assert P({0: 4}).derivative().is_zero
    assert P({3: 0, 2: 1, 1: 5, 0: 0}).derivative() == P({2: 0, 0: 5})


def test_derivative_product_rule(gf16, rng):
    for _ in range(100):
        f = random_poly(gf16, rng, 4)
        g = random_poly(gf16, rng, 4)
        assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


def test_ring_axioms(gf16, rng):
    for _ in range(100):
        f, g, h = (random_poly(gf16, rng, 4) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h


def test_evaluation_is_multiplicative(gf16, rng):
    for _ in range(100):
        f = random_poly(gf16, rng, 4)
        g = random_poly(gf16, rng, 4)
        x = int(rng.integers(0, 16))
        assert (f * g)(x) == gf16.mul(f(x), g(x))


def test_shift_and_scale(gf16, P):
    m = P({1: 11})
    assert m.shift(6) == P({7: 11})
    p = P({3: 2, 1: 7})
    assert p.scale(1) == p
    assert p.scale(0).is_zero


def test_descending_roundtrip(gf16):
    symbols = [0, 0, 3, 0, 9, 1]
    p = GfPoly.from_descending(gf16, symbols)
    assert p.degree == 3
    assert p.to_descending(6) == symbols


def test_mod_xn(P):
    assert P({5: 1, 2: 3, 0: 4}).mod_xn(3) == P({2: 3, 0: 4})


def test_str_rendering(gf16, P):
    assert str(GfPoly.zero(gf16)) == "0"
    assert str(P({2: 10, 1: 0, 0: 0})) == "a^10x^2 + x + 1"
    assert str(P({1: 1})) == "ax"


def test_mixed_fields_rejected(gf16):
    other = build_field(FieldSpec(m=8, prim_poly=0x11D))
    with pytest.raises(ConfigError):
        GfPoly.one(gf16) + GfPoly.one(other)
