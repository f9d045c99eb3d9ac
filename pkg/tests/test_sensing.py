from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csencrypt.errors import InvalidArgumentError
from csencrypt.sensing import (
    Measurements,
    coherence,
    feasible_rates,
    parse_rate,
    srm_adjoint,
    srm_forward,
    srm_matrix,
    srm_new,
)

from conftest import dense_dft


def dense_phi(op):
    """Build D F P from explicit matrices."""
    n = op.side
    p = np.zeros((n, n))
    for i, j in enumerate(op.permutation):
        p[i, j] = 1.0
    d = np.zeros((op.m, n))
    for i, r in enumerate(op.selected_rows):
        d[i, r] = 1.0
    return d @ dense_dft(n) @ p


def test_quarter_rate_dimensions_512():
    op = srm_new(512, Fraction(1, 4), 11)
    assert op.m == 128
    assert op.m * 512 == 65536 == 256**2
    assert op.meas_side == 256


def test_full_rate():
    op = srm_new(8, 1, 3)
    assert op.m == 8
    assert list(op.selected_rows) == list(range(8))


def test_non_square_rejected():
    with pytest.raises(InvalidArgumentError, match="perfect square"):
        srm_new(512, "1/3", 1)


@pytest.mark.parametrize("rate", ["0", "3/2", "-1/4", 0.3])
def test_bad_rates(rate):
    with pytest.raises(InvalidArgumentError):
        srm_new(16, rate, 1)


def test_parse_rate_forms():
    assert parse_rate("1/4") == Fraction(1, 4)
    assert parse_rate(0.25) == Fraction(1, 4)
    assert parse_rate(1) == 1


def test_feasible_rates():
    rates = feasible_rates(512)
    assert Fraction(1, 4) in rates and Fraction(1) in rates
    assert Fraction(1, 2) not in rates  # 256 * 512 = 2**17
    assert all((r * 512 * 512).denominator == 1 for r in rates)


def test_determinism_and_structure():
    a = srm_new(64, "1/4", 99)
    b = srm_new(64, "1/4", 99)
    c = srm_new(64, "1/4", 100)
    assert np.array_equal(a.permutation, b.permutation)
    assert np.array_equal(a.selected_rows, b.selected_rows)
    assert not np.array_equal(a.permutation, c.permutation)
    assert sorted(a.permutation) == list(range(64))
    assert np.all(np.diff(a.selected_rows) > 0)
    assert a.selected_rows[0] == 0  # DC kept


def test_identity_permutation_full_rate_is_columnwise_dft(rng):
    op = srm_new(16, 1, 5, scramble=False)
    x = rng.standard_normal((16, 16))
    y = srm_forward(x, op).values
    assert np.abs(y - dense_dft(16) @ x).max() <= 1e-12


def test_parseval_full_rate(rng):
    op = srm_new(32, 1, 8)
    x = rng.standard_normal((32, 32))
    y = srm_forward(x, op).values
    assert abs(np.linalg.norm(y) - np.linalg.norm(x)) <= 1e-10 * np.linalg.norm(x)
    assert np.abs(srm_adjoint(srm_forward(x, op), op) - x).max() <= 1e-10


@pytest.mark.parametrize("side,rate", [(4, "1"), (4, "1/4"), (16, "1/4"), (16, "9/16")])
def test_dense_oracle(side, rate, rng):
    op = srm_new(side, rate, 42)
    phi = dense_phi(op)
    assert np.abs(srm_matrix(op) - phi).max() <= 1e-12
    x = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    assert np.abs(srm_forward(x, op).values - phi @ x).max() <= 1e-12
    y = rng.standard_normal((op.m, side)) + 1j * rng.standard_normal((op.m, side))
    assert np.abs(srm_adjoint(y, op) - phi.conj().T @ y).max() <= 1e-12


def test_unitary_at_full_rate():
    for n in (4, 9, 16):
        phi = srm_matrix(srm_new(n, 1, 17, require_square=False))
        assert np.abs(phi.conj().T @ phi - np.eye(n)).max() <= 1e-10


def test_adjoint_identity_random_trials(rng):
    op = srm_new(16, "1/4", 2)
    for _ in range(100):
        x = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        y = rng.standard_normal((op.m, 16)) + 1j * rng.standard_normal((op.m, 16))
        lhs = np.vdot(y, srm_forward(x, op).values)
        rhs = np.vdot(srm_adjoint(y, op), x)
        assert abs(lhs - rhs) <= 1e-10 * np.linalg.norm(x) * np.linalg.norm(y)


@settings(max_examples=30, deadline=None)
@given(
    side=st.sampled_from([4, 9, 16, 25, 36, 64]),
    seed=st.integers(0, 2**64 - 1),
    data=st.data(),
)
def test_adjoint_identity_property(side, seed, data):
    rate = data.draw(st.sampled_from(feasible_rates(side)))
    op = srm_new(side, rate, seed)
    r = np.random.default_rng(seed % 2**32)
    x = r.standard_normal((side, side))
    y = r.standard_normal((op.m, side)) + 1j * r.standard_normal((op.m, side))
    lhs = np.vdot(y, srm_forward(x, op).values)
    rhs = np.vdot(srm_adjoint(y, op), x)
    assert abs(lhs - rhs) <= 1e-10 * np.linalg.norm(x) * np.linalg.norm(y)


def test_shape_errors(rng):
    op = srm_new(16, "1/4", 1)
    with pytest.raises(InvalidArgumentError):
        srm_forward(np.zeros((8, 8)), op)
    with pytest.raises(InvalidArgumentError):
        srm_adjoint(np.zeros((5, 16)), op)
    with pytest.raises(InvalidArgumentError):
        Measurements(values=np.zeros((3, 16)), side=16, rate=Fraction(1, 4))


def brute_coherence(phi, psi):
    n = psi.shape[0]
    best = 0.0
    for k in range(phi.shape[0]):
        fk = phi[k] / np.sqrt(sum(abs(v) ** 2 for v in phi[k]))
        for j in range(psi.shape[1]):
            pj = psi[:, j] / np.sqrt(sum(abs(v) ** 2 for v in psi[:, j]))
            best = max(best, abs(sum(fk[i] * pj[i] for i in range(n))))
    return np.sqrt(n) * best


def test_coherence_examples():
    assert coherence(np.eye(9), np.eye(9)) == pytest.approx(3.0, abs=1e-12)
    assert coherence(dense_dft(4), np.eye(4)) == pytest.approx(1.0, abs=1e-12)
    phi = srm_matrix(srm_new(8, "1/2", 3, require_square=False))
    assert coherence(phi, np.eye(8)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [2, 5, 8, 16])
def test_coherence_matches_enumeration(n, rng):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    psi, _ = np.linalg.qr(rng.standard_normal((n, n)))
    mu = coherence(q.conj().T, psi)
    assert mu == pytest.approx(brute_coherence(q.conj().T, psi), abs=1e-12)
    assert 1 - 1e-12 <= mu <= np.sqrt(n) + 1e-12


def test_coherence_dimension_mismatch():
    with pytest.raises(InvalidArgumentError):
        coherence(np.eye(4), np.eye(5))
