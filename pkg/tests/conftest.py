import numpy as np
import pytest

from csencrypt.fileio import load_test_image


def dense_centered_dft(n):
    """Centered unitary DFT built entry by entry (oracle, no shortcuts)."""
    c = n // 2
    m = np.empty((n, n), dtype=complex)
    for p in range(n):
        for q in range(n):
            m[p, q] = np.exp(-2j * np.pi * (p - c) * (q - c) / n)
    return m / np.sqrt(n)


def dense_dft(n):
    m = np.empty((n, n), dtype=complex)
    for p in range(n):
        for q in range(n):
            m[p, q] = np.exp(-2j * np.pi * p * q / n)
    return m / np.sqrt(n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def cameraman():
    return load_test_image("cameraman")


@pytest.fixture(scope="session")
def cameraman_128(cameraman):
    # 4x4 block average keeps the content at a test-friendly size.
    return cameraman.reshape(128, 4, 128, 4).mean(axis=(1, 3))


@pytest.fixture(scope="session")
def cameraman_64(cameraman):
    return cameraman.reshape(64, 8, 64, 8).mean(axis=(1, 3))
