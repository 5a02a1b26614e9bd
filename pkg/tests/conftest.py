import pytest

from ringwalk import spectral


@pytest.fixture(scope="session")
def sd_cache():
    """Shared spectral builds keyed by (k, n)."""
    cache = {}

    def get(k, n):
        if (k, n) not in cache:
            cache[(k, n)] = spectral.build_spectral(k, n)
        return cache[(k, n)]

    return get
