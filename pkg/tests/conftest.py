import numpy as np
import pytest

from sfec.galois import build_field
from sfec.rs import ccsds_rs_spec, rs_15_9_spec, rs_encoder
from sfec.utils.bits import hex_to_symbols
from sfec.utils.typing import FieldSpec

# RS(15,9) worked example: codeword for M(x) = a^11 x and the same word
# with unit errors at x^2 and x^8
EXAMPLE_CODEWORD_HEX = "0000000E057395F"
EXAMPLE_RECEIVED_HEX = "0000001E057385F"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long statistical runs (deselect with -m 'not slow')")


@pytest.fixture(scope="session")
def gf16():
    return build_field(FieldSpec(m=4, prim_poly=0x13))


@pytest.fixture(scope="session")
def gf256():
    return build_field(ccsds_rs_spec().field_spec)


@pytest.fixture(scope="session")
def rs15():
    return rs_encoder(rs_15_9_spec())


@pytest.fixture(scope="session")
def ccsds_rs():
    return rs_encoder(ccsds_rs_spec())


@pytest.fixture
def example_codeword():
    return hex_to_symbols(EXAMPLE_CODEWORD_HEX, 4)


@pytest.fixture
def example_received():
    return hex_to_symbols(EXAMPLE_RECEIVED_HEX, 4)


@pytest.fixture
def rng():
    return np.random.default_rng(20160813)


@pytest.fixture
def codeword_hex():
    return EXAMPLE_CODEWORD_HEX


@pytest.fixture
def received_hex():
    return EXAMPLE_RECEIVED_HEX
