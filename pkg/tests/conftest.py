import pytest

from zetacorr import primes, zeta


@pytest.fixture(scope="session")
def table_small():
    return primes.sieve_primes(10_000)


@pytest.fixture(scope="session")
def table_mega():
    return primes.sieve_primes(1_000_000)


@pytest.fixture(scope="session")
def grid_100_200():
    # fine grid for quadrature tests: step 0.0125 publishes at 0.025
    return zeta.sample_critical_line(
        98.0, 204.0, 0.0125, correction_terms=6, workers=1)
