import hypothesis
import numpy as np
import pytest
from hypothesis import strategies as st

np.seterr(all="warn")

hypothesis.settings.register_profile("default", deadline=None, max_examples=50)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=5)
hypothesis.settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20211)


def random_hermitian(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (a + a.conj().T)


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    w = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return w @ w.conj().T


def random_symmetric(rng, n):
    h = rng.standard_normal((n, n))
    h = h + h.T
    np.fill_diagonal(h, 0.0)
    return h


def random_state(rng, n, rank=2):
    w = rng.standard_normal((2**n, rank)) + 1j * rng.standard_normal((2**n, rank))
    rho = w @ w.conj().T
    return rho / np.trace(rho)


def random_unitary(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))
