import pytest

from period_lens.newforms import generate_level_one, generate_level7_weight4
from period_lens.lfunction import build_l_table
from period_lens.precision import PrecisionPolicy

# Enough coefficients for the 256-bit completed-series budget at these levels.
FIXTURE_COEFFS = 400

LEVEL_ONE_WEIGHTS = (12, 16, 18, 20, 22, 26)


@pytest.fixture(scope="session")
def policy():
    return PrecisionPolicy()


@pytest.fixture(scope="session")
def delta():
    return generate_level_one(12, FIXTURE_COEFFS)


@pytest.fixture(scope="session")
def level_one_family():
    return {k: generate_level_one(k, FIXTURE_COEFFS) for k in LEVEL_ONE_WEIGHTS}


@pytest.fixture(scope="session")
def nf7():
    return generate_level7_weight4(FIXTURE_COEFFS)


@pytest.fixture(scope="session")
def delta_table(delta, policy):
    return build_l_table(delta, policy)


@pytest.fixture(scope="session")
def family_tables(level_one_family, policy):
    return {k: build_l_table(nf, policy) for k, nf in level_one_family.items()}


@pytest.fixture(scope="session")
def nf7_table(nf7, policy):
    return build_l_table(nf7, policy)
