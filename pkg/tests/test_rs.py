import numpy as np
import pytest
from pydantic import ValidationError

from sfec.errors import BadLength, BadSymbol, DegenerateInput, SingularSystem
from sfec.gfpoly import GfPoly
from sfec.rs import (
    RsEncoder,
    build_generator,
    ccsds_rs_spec,
    error_values_direct,
    error_values_forney,
    rs_15_9_spec,
    rs_decode,
    rs_encode,
    rs_encoder,
    solve_key_bm,
    solve_key_eea,
)
from sfec.utils.tracing import DecodeTrace
from sfec.utils.typing import DecodeStatus, FieldSpec, RsSpec


def corrupt(word, positions, magnitudes):
    out = np.array(word, dtype=np.int64)
    n = out.size
    for p, y in zip(positions, magnitudes):
        out[n - 1 - p] ^= y
    return out


def random_errors(enc, rng, count):
    positions = rng.choice(enc.n, size=count, replace=False)
    magnitudes = rng.integers(1, enc.field.size, size=count)
    return positions.tolist(), magnitudes.tolist()


def root_set(enc, lam):
    return {p for _, p in enc.chien_search(lam)}


def test_presets():
    assert rs_15_9_spec().t == 3
    assert ccsds_rs_spec().t == 16
    assert ccsds_rs_spec().n - ccsds_rs_spec().k == 32
    assert ccsds_rs_spec().d_min == 33


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 14, "k": 8},
        {"n": 15, "k": 10},
        {"n": 15, "k": 15},
        {"n": 15, "k": 9, "g_exp": 3},
    ],
)
def test_rs_spec_validation(kwargs):
    with pytest.raises(ValidationError):
        RsSpec(field_spec=FieldSpec(m=4, prim_poly=0x13), **kwargs)


def test_generator_example(rs15):
    assert str(rs15.gen) == "x^6 + a^10x^5 + a^14x^4 + a^4x^3 + a^6x^2 + a^9x + a^6"


def test_ccsds_generator_roots(ccsds_rs):
    field = ccsds_rs.field
    gen = build_generator(ccsds_rs_spec())
    assert gen.degree == 32
    assert gen.lead == 1
    for j in range(112, 144):
        assert gen(field.exp(11 * j)) == 0


def test_ccsds_generator_is_self_reciprocal(ccsds_rs):
    coeffs = ccsds_rs.gen.coeffs
    assert coeffs == coeffs[::-1]


def test_encode_example(rs15, example_codeword):
    message = [0] * 7 + [rs15.field.exp(11), 0]
    codeword = rs_encode(rs15, message)
    assert codeword.tolist() == example_codeword.tolist()


def test_encode_all_zero(rs15, ccsds_rs):
    assert not rs15.encode([0] * 9).any()
    assert not ccsds_rs.encode([0] * 223).any()


def test_ccsds_codeword_roots(ccsds_rs):
    field = ccsds_rs.field
    codeword = ccsds_rs.encode([1] + [0] * 222)
    poly = GfPoly.from_descending(field, codeword.tolist())
    for j in range(112, 144):
        assert poly(field.exp(11 * j)) == 0


def test_encode_is_systematic_with_zero_syndromes(ccsds_rs, rng):
    for _ in range(20):
        message = rng.integers(0, 256, 223)
        codeword = ccsds_rs.encode(message)
        assert codeword[:223].tolist() == message.tolist()
        assert not ccsds_rs.syndromes(codeword).any()


def test_encode_rejects_bad_input(rs15):
    with pytest.raises(BadLength):
        rs15.encode([0] * 8)
    with pytest.raises(BadSymbol):
        rs15.encode([16] + [0] * 8)


def test_example_syndromes(rs15, example_received):
    f = rs15.field
    expected = [1, 1, f.exp(5), 1, 0, f.exp(10)]
    assert rs15.syndromes(example_received).tolist() == expected
    assert rs15.syndromes_via_remainder(example_received).tolist() == expected


def test_single_error_syndromes(ccsds_rs):
    f = ccsds_rs.field
    y, p = 0x5A, 77
    received = corrupt(np.zeros(255, dtype=np.int64), [p], [y])
    for j, s in enumerate(ccsds_rs.syndromes(received).tolist()):
        assert s == f.mul(y, f.pow(ccsds_rs.a_g, (112 + j) * p))


def test_syndrome_methods_agree(ccsds_rs, rng):
    for _ in range(10):
        word = rng.integers(0, 256, 255)
        assert ccsds_rs.syndromes(word).tolist() == ccsds_rs.syndromes_via_remainder(word).tolist()


def test_eea_example(rs15, example_received):
    f = rs15.field
    trace = DecodeTrace(f)
    lam, omega = solve_key_eea(f, rs15.syndromes(example_received).tolist(), 3, trace)
    assert str(lam) == "a^10x^2 + x + 1"
    assert omega == GfPoly.one(f)
    first = trace.stage("eea_step")[0]
    assert first["quotient"] == "a^5x"
    assert first["remainder"] == "a^5x^4 + a^10x^3 + a^5x^2 + a^5x"


def test_bm_example(rs15, example_received):
    f = rs15.field
    lam, omega = solve_key_bm(f, rs15.syndromes(example_received).tolist(), 3)
    assert str(lam) == "a^10x^2 + x + 1"
    assert omega == GfPoly.one(f)


@pytest.mark.parametrize("solve", [solve_key_eea, solve_key_bm])
def test_single_error_locator(ccsds_rs, solve):
    f = ccsds_rs.field
    received = corrupt(np.zeros(255, dtype=np.int64), [200], [3])
    lam, _ = solve(f, ccsds_rs.syndromes(received).tolist(), 16)
    assert lam.degree == 1
    assert lam == GfPoly(f, [1, f.pow(ccsds_rs.a_g, 200)])


@pytest.mark.parametrize("solve", [solve_key_eea, solve_key_bm])
def test_one_step_locator(gf16, solve):
    for s0 in range(1, 16):
        for s1 in range(1, 16):
            lam, _ = solve(gf16, [s0, s1], 1)
            assert lam == GfPoly(gf16, [1, gf16.div(s1, s0)])


@pytest.mark.parametrize("solve", [solve_key_eea, solve_key_bm])
def test_all_zero_syndromes_are_degenerate(gf16, solve):
    with pytest.raises(DegenerateInput):
        solve(gf16, [0] * 6, 3)


def test_chien_example(rs15):
    f = rs15.field
    lam = GfPoly.from_powers(f, {2: 10, 1: 0, 0: 0})
    found = rs15.chien_search(lam)
    assert found == [(f.exp(2), 2), (f.exp(8), 8)]
    assert rs15.chien_values(lam)[0] == f.exp(10)


def test_chien_single_root(ccsds_rs):
    f = ccsds_rs.field
    z = f.pow(ccsds_rs.a_g, 41)
    assert ccsds_rs.chien_search(GfPoly(f, [1, z])) == [(z, 41)]


def test_forney_example(gf16):
    lam = GfPoly.from_powers(gf16, {2: 10, 1: 0, 0: 0})
    locators = [gf16.exp(2), gf16.exp(8)]
    assert error_values_forney(gf16, lam, GfPoly.one(gf16), locators, 1) == [1, 1]


def test_direct_example(gf16):
    locators = [gf16.exp(2), gf16.exp(8)]
    assert error_values_direct(gf16, [1, 1, gf16.exp(5), 1, 0, gf16.exp(10)], locators, 1) == [1, 1]


def test_direct_single_unknown(gf256):
    z = gf256.exp(30)
    s = gf256.exp(100)
    assert error_values_direct(gf256, [s], [z], 112) == [gf256.div(s, gf256.pow(z, 112))]


def test_direct_singular_system(gf16):
    with pytest.raises(SingularSystem):
        error_values_direct(gf16, [1, 1], [gf16.exp(3), gf16.exp(3)], 1)


def test_decode_example(rs15, example_received, example_codeword):
    report = rs_decode(rs15, example_received)
    assert report.status is DecodeStatus.CORRECTED
    assert report.positions == (2, 8)
    assert report.magnitudes == (1, 1)
    assert list(report.corrected) == example_codeword.tolist()
    assert list(report.message) == [0] * 7 + [rs15.field.exp(11), 0]


@pytest.mark.parametrize("solver", ["eea", "bm"])
@pytest.mark.parametrize("magnitudes", ["forney", "direct"])
def test_decode_example_all_methods(rs15, example_received, example_codeword, solver, magnitudes):
    report = rs15.decode(example_received, solver=solver, magnitudes=magnitudes)
    assert report.status is DecodeStatus.CORRECTED
    assert list(report.corrected) == example_codeword.tolist()


def test_decode_clean_word(rs15, example_codeword):
    report = rs15.decode(example_codeword)
    assert report.status is DecodeStatus.NO_ERROR
    assert report.num_errors == 0
    assert report.ok


def test_ccsds_single_error_nontrivial_offset(ccsds_rs, rng):
    message = rng.integers(0, 256, 223)
    codeword = ccsds_rs.encode(message)
    for p, y in [(0, 1), (254, 0xFF), (130, 0x37)]:
        report = ccsds_rs.decode(corrupt(codeword, [p], [y]))
        assert report.status is DecodeStatus.CORRECTED
        assert report.positions == (p,)
        assert report.magnitudes == (y,)


def test_rs15_exhaustive_single_and_double_errors(rs15, rng):
    message = rng.integers(0, 16, 9)
    codeword = rs15.encode(message)
    for p in range(15):
        for y in range(1, 16):
            report = rs15.decode(corrupt(codeword, [p], [y]))
            assert report.status is DecodeStatus.CORRECTED
            assert list(report.message) == message.tolist()
    for p in range(15):
        for q in range(p + 1, 15):
            y = rng.integers(1, 16, 2).tolist()
            report = rs15.decode(corrupt(codeword, [p, q], y))
            assert report.status is DecodeStatus.CORRECTED
            assert report.positions == (p, q)


def test_rs15_solvers_and_methods_agree(rs15, rng):
    f = rs15.field
    for _ in range(300):
        codeword = rs15.encode(rng.integers(0, 16, 9))
        positions, magnitudes = random_errors(rs15, rng, int(rng.integers(1, 4)))
        synd = rs15.syndromes(corrupt(codeword, positions, magnitudes)).tolist()
        lam_e, omega_e = solve_key_eea(f, synd, 3)
        lam_b, omega_b = solve_key_bm(f, synd, 3)
        assert root_set(rs15, lam_e) == root_set(rs15, lam_b) == set(positions)
        locators = [z for z, _ in rs15.chien_search(lam_e)]
        assert error_values_forney(f, lam_e, omega_e, locators, 1) == error_values_direct(
            f, synd, locators, 1
        )


def test_ccsds_random_roundtrip(ccsds_rs, rng):
    for _ in range(100):
        message = rng.integers(0, 256, 223)
        positions, magnitudes = random_errors(ccsds_rs, rng, int(rng.integers(1, 17)))
        report = ccsds_rs.decode(corrupt(ccsds_rs.encode(message), positions, magnitudes))
        assert report.status is DecodeStatus.CORRECTED
        assert list(report.message) == message.tolist()
        assert report.positions == tuple(sorted(positions))


def test_ccsds_never_lies_beyond_t(ccsds_rs, rng):
    for _ in range(50):
        codeword = ccsds_rs.encode(rng.integers(0, 256, 223))
        positions, magnitudes = random_errors(ccsds_rs, rng, 17)
        report = ccsds_rs.decode(corrupt(codeword, positions, magnitudes))
        if report.status is DecodeStatus.CORRECTED:
            assert not ccsds_rs.syndromes(report.corrected).any()
            assert 1 <= report.num_errors <= 16
        else:
            assert report.corrected is None
            assert report.reason


@pytest.mark.slow
def test_ccsds_correction_capability(ccsds_rs, rng):
    for _ in range(1000):
        message = rng.integers(0, 256, 223)
        positions, magnitudes = random_errors(ccsds_rs, rng, int(rng.integers(1, 17)))
        report = ccsds_rs.decode(corrupt(ccsds_rs.encode(message), positions, magnitudes))
        assert report.status is DecodeStatus.CORRECTED
        assert list(report.message) == message.tolist()
    for _ in range(1000):
        codeword = ccsds_rs.encode(rng.integers(0, 256, 223))
        report = ccsds_rs.decode(corrupt(codeword, *random_errors(ccsds_rs, rng, 17)))
        if report.status is DecodeStatus.CORRECTED:
            assert not ccsds_rs.syndromes(report.corrected).any()


@pytest.mark.slow
def test_ccsds_solver_and_method_equivalence(ccsds_rs, rng):
    f = ccsds_rs.field
    for _ in range(1000):
        codeword = ccsds_rs.encode(rng.integers(0, 256, 223))
        positions, magnitudes = random_errors(ccsds_rs, rng, int(rng.integers(1, 17)))
        synd = ccsds_rs.syndromes(corrupt(codeword, positions, magnitudes)).tolist()
        lam_e, omega_e = solve_key_eea(f, synd, 16)
        lam_b, omega_b = solve_key_bm(f, synd, 16)
        assert root_set(ccsds_rs, lam_e) == root_set(ccsds_rs, lam_b)
        locators = [z for z, _ in ccsds_rs.chien_search(lam_e)]
        assert error_values_forney(f, lam_e, omega_e, locators, 112) == error_values_direct(
            f, synd, locators, 112
        )


def test_decode_trace_transcript(rs15, example_received):
    trace = DecodeTrace(rs15.field)
    rs15.decode(example_received, trace=trace)
    text = trace.render()
    assert "  S_1 = 1" in text
    assert "  S_3 = a^5" in text
    assert "  S_5 = 0" in text
    assert "  S_6 = a^10" in text
    assert "Lambda(x) = a^10x^2 + x + 1" in text
    assert "Omega(x) = 1" in text
    assert "  Lambda(a^0) = a^10" in text
    assert "  Lambda(a^-2) = 0" in text
    assert "  z = a^2, position 2, y = 1" in text
    assert "  z = a^8, position 8, y = 1" in text
    assert text.endswith("Status: Corrected\n")
    assert trace.render() == text


def test_failure_report(rs15, rng):
    codeword = rs15.encode(rng.integers(0, 16, 9))
    statuses = set()
    for _ in range(200):
        report = rs15.decode(corrupt(codeword, *random_errors(rs15, rng, 5)))
        statuses.add(report.status)
        if report.status is DecodeStatus.FAILURE:
            assert not report.ok
            assert report.message is None
    assert DecodeStatus.FAILURE in statuses


def test_rs_encoder_is_cached():
    assert rs_encoder(rs_15_9_spec()) is rs_encoder(rs_15_9_spec())
    assert isinstance(rs_encoder(rs_15_9_spec()), RsEncoder)
