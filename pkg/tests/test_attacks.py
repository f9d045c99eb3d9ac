from dataclasses import replace

import numpy as np
import pytest

from csencrypt.attacks import (
    CSV_HEADER,
    ORDER_KEY,
    AttackSpec,
    add_noise,
    crop_pixels,
    format_csv,
    standard_suite,
    perturb_key,
    run_bench,
)
from csencrypt.errors import InvalidArgumentError
from csencrypt.pipeline import CipherBundle, encrypt, keygen
from csencrypt.recovery import SolverConfig


@pytest.fixture
def raw(rng):
    f = rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))
    return CipherBundle(hidden=f, side=64, meas_side=32)


def test_zero_noise_is_bit_exact(raw):
    out = add_noise(raw, 0.0)
    assert out.hidden.tobytes() == raw.hidden.tobytes()
    assert out.hidden is not raw.hidden


def test_noise_statistics(raw):
    s = 2.5
    diffs = [add_noise(raw, s, seed).hidden - raw.hidden for seed in range(20)]
    d = np.concatenate([x.ravel() for x in diffs])
    # U(0, s) on both parts: E|n|^2 = 2 s^2 / 3
    assert np.mean(np.abs(d) ** 2) == pytest.approx(2 * s * s / 3, rel=0.05)
    assert d.real.min() >= 0 and d.real.max() <= s
    assert np.array_equal(add_noise(raw, s, 3).hidden, add_noise(raw, s, 3).hidden)


def test_host_noise_clipped():
    k = keygen(16, "1/4", 1, wavelet_levels=1)
    c = encrypt(np.zeros((16, 16)), k, np.full((16, 8), 255.0))
    noisy = add_noise(c, 10.0, 1)
    assert noisy.hidden.max() <= 255 and noisy.hidden.min() >= 0


def test_crop_counts(raw):
    n = raw.hidden.size
    for frac in (1 / n, 0.2, 0.25, 0.5, 0.75):
        out = crop_pixels(raw, frac)
        zeroed = np.sum(out.hidden != raw.hidden)
        assert zeroed == round(frac * n)
        assert np.all(out.hidden[out.hidden != raw.hidden] == 0)
    one = crop_pixels(raw, 1 / n)
    assert one.hidden[0, 0] == 0 and np.array_equal(one.hidden.ravel()[1:], raw.hidden.ravel()[1:])


def test_crop_masks_nested(raw):
    masks = [crop_pixels(raw, f).hidden != raw.hidden for f in (0.2, 0.25, 0.5, 0.75)]
    for small, big in zip(masks, masks[1:]):
        assert np.all(big[small])


def test_crop_region(raw):
    out = crop_pixels(raw, 0.25, region=(16, 16, 16, 16))
    assert np.all(out.hidden[16:, 16:] == 0)
    assert np.array_equal(out.hidden[:16], raw.hidden[:16])
    with pytest.raises(InvalidArgumentError):
        crop_pixels(raw, 0.25, region=(20, 16, 16, 16))
    with pytest.raises(InvalidArgumentError):
        crop_pixels(raw, 0.25, region=(0, 0, 8, 8))
    for bad in (0, 1, -0.1):
        with pytest.raises(InvalidArgumentError):
            crop_pixels(raw, bad)


def test_perturb_key_variants():
    k = keygen(64, "1/4", 9)
    assert perturb_key(k, 1).srm_seed == k.srm_seed ^ 1
    assert perturb_key(k, 1, bit=63).srm_seed == k.srm_seed ^ (1 << 63)
    assert perturb_key(k, 2).arnold_iterations == k.arnold_iterations + 1
    assert perturb_key(k, 3).theta_seed == k.theta_seed ^ 1
    assert perturb_key(k, 4).omega_seed == k.omega_seed ^ 1
    o = perturb_key(k, ORDER_KEY)
    assert o.alpha == pytest.approx(k.alpha + 0.1) and o.beta == pytest.approx(k.beta + 0.1)
    assert replace(o, alpha=k.alpha, beta=k.beta) == k
    with pytest.raises(InvalidArgumentError):
        perturb_key(k, 6)


def test_attack_spec_validation():
    assert AttackSpec("wrong_key", ORDER_KEY).param == "orders"
    assert AttackSpec("crop", 0.25).param == "0.25"
    for args in (("blur", 1.0), ("noise", -1.0), ("crop", 1.0), ("wrong_key", 7)):
        with pytest.raises(InvalidArgumentError):
            AttackSpec(*args)


def test_standard_suite_layout():
    suite = standard_suite()
    assert [(a.kind, a.param) for a in suite] == [
        ("noise", "1"),
        ("crop", "0.2"), ("crop", "0.25"), ("crop", "0.5"), ("crop", "0.75"),
        ("wrong_key", "1"), ("wrong_key", "2"), ("wrong_key", "3"), ("wrong_key", "4"), ("wrong_key", "orders"),
    ]


def test_empty_bench_is_baseline_only(cameraman_64):
    k = keygen(64, "1/4", 2)
    rows = run_bench(cameraman_64, k, [], SolverConfig(max_iters=20))
    assert len(rows) == 1 and (rows[0].attack, rows[0].param) == ("none", "0")
    text = format_csv(rows, timing=False)
    assert text.splitlines()[0] == CSV_HEADER
    assert text.endswith(",0.0000\n")


def test_bench_deterministic_without_timing(cameraman_64):
    k = keygen(64, "1/4", 2)
    cfg = SolverConfig(max_iters=20)
    suite = [AttackSpec("noise", 1.0, seed=4), AttackSpec("crop", 0.5), AttackSpec("wrong_key", 2)]
    a = format_csv(run_bench(cameraman_64, k, suite, cfg), timing=False)
    b = format_csv(run_bench(cameraman_64, k, suite, cfg), timing=False)
    assert a == b
    assert len(a.splitlines()) == 5
