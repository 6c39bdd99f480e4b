import pytest

from cyclo6.field_core import build_context, odd_primes

# small independent helpers used as oracles; none of them touch cyclo6 internals


def trial_division_is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def mult_order(g, p):
    x, k = g % p, 1
    while x != 1:
        x = x * g % p
        k += 1
    return k


def naive_class(p, alpha, d, x):
    """Class index by brute-force discrete log."""
    y, k = 1, 0
    while y != x % p:
        y = y * alpha % p
        k += 1
    return k % d


PRIMES_12 = odd_primes(13, 500, 12, 1)


@pytest.fixture(scope="session")
def ctx13():
    return build_context(13, 6)


@pytest.fixture(scope="session")
def ctx37():
    return build_context(37, 6)


@pytest.fixture(scope="session")
def contexts_500():
    return [build_context(p, 6) for p in PRIMES_12]
