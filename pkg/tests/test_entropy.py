import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from vmiqa import (
    ORIENTATIONS,
    DegenerateInputError,
    directional_entropy_map,
    directional_offsets,
    extract_window,
    mean_directional_entropy,
    normalize_pwd,
    pwd,
    renyi_entropy,
)

from .oracles import pixel_entropy, pwd_bruteforce


def test_offsets_pi_over_8():
    w = directional_offsets(math.pi / 8, 8)
    expected = [(-4, -2), (-3, -1), (-2, -1), (-1, 0), (0, 0), (1, 0), (2, 1), (3, 1), (4, 2)]
    assert [tuple(o) for o in w.offsets] == expected


def test_offsets_3pi_over_8_is_diagonal_mirror():
    a = directional_offsets(math.pi / 8, 8).offsets
    b = directional_offsets(3 * math.pi / 8, 8).offsets
    np.testing.assert_array_equal(b, a[:, ::-1])


@pytest.mark.parametrize("n", [2, 4, 8, 12])
def test_window_invariants(n):
    spans = []
    for theta in ORIENTATIONS:
        w = directional_offsets(theta, n)
        assert w.offsets.shape == (n + 1, 2)
        np.testing.assert_array_equal(w.offsets, -w.offsets[::-1])
        assert tuple(w.offsets[n // 2]) == (0, 0)
        spans.append(w.span)
    assert np.ptp(spans) == 0


def test_octagon_span_n8():
    for theta in ORIENTATIONS:
        assert directional_offsets(theta, 8).span == pytest.approx(math.sqrt(20))


def test_offsets_odd_n_rejected():
    with pytest.raises(ValueError):
        directional_offsets(math.pi / 8, 7)


def test_extract_constant():
    img = np.full((10, 10), 0.4)
    w = directional_offsets(math.pi / 8, 8)
    np.testing.assert_array_equal(extract_window(img, (5, 5), w), np.full(9, 0.4))


def test_extract_corner_mirrors(rng):
    img = rng.random((6, 6))
    vals = extract_window(img, (0, 0), directional_offsets(5 * math.pi / 8, 8))
    assert vals.shape == (9,) and np.all(np.isfinite(vals))


def test_extract_ramp():
    h, w = 20, 30
    img = np.tile(np.arange(w) / w, (h, 1))
    win = directional_offsets(math.pi / 8, 8)
    vals = extract_window(img, (10, 12), win)
    np.testing.assert_allclose(vals, (12 + win.offsets[:, 0]) / w)


def test_extract_outside_rejected():
    with pytest.raises(ValueError):
        extract_window(np.zeros((4, 4)), (4, 0), directional_offsets(math.pi / 8, 8))


def test_pwd_constant_window():
    c = 0.7
    w = pwd(np.full(9, c))
    expected = np.zeros(8)
    expected[4] = 16 * c * c  # k = 0 sits at index N/2
    np.testing.assert_allclose(w, expected, atol=1e-12)


def test_pwd_zero_window():
    np.testing.assert_array_equal(pwd(np.zeros(9)), np.zeros(8))


def test_pwd_matches_bruteforce(rng):
    for _ in range(50):
        z = rng.random(9)
        re, im = pwd_bruteforce(z)
        np.testing.assert_allclose(pwd(z), re, atol=1e-10, rtol=0)
        assert np.all(np.abs(im) < 1e-9 * np.maximum(1, np.abs(re)))


def test_pwd_wrong_length():
    with pytest.raises(ValueError):
        pwd(np.ones(8))


def test_normalize_examples():
    np.testing.assert_array_equal(normalize_pwd([16, 0, 0, 0, 0, 0, 0, 0]), [1, 0, 0, 0, 0, 0, 0, 0])
    np.testing.assert_allclose(normalize_pwd([2, 2, 0, 0, 0, 0, 0, 0]), [0.5, 0.5, 0, 0, 0, 0, 0, 0])
    with pytest.raises(DegenerateInputError):
        normalize_pwd(np.zeros(8))


@given(arrays(np.float64, 8, elements=st.floats(-10, 10)), st.floats(1e-3, 1e3))
def test_normalize_scale_and_sum(w, c):
    if np.sum(w * w) < 1e-12:
        return
    p = normalize_pwd(w)
    assert abs(p.sum() - 1) < 1e-12 and np.all(p >= 0)
    np.testing.assert_allclose(normalize_pwd(c * w), p, rtol=1e-12, atol=1e-15)


def test_renyi_examples():
    assert renyi_entropy([1, 0, 0, 0, 0, 0, 0, 0]) == 0.0
    assert renyi_entropy(np.full(8, 1 / 8)) == pytest.approx(1.0, abs=1e-15)
    assert renyi_entropy([0.5, 0.5, 0, 0, 0, 0, 0, 0]) == pytest.approx(1 / 3, abs=1e-15)


def test_renyi_rejects_unnormalized():
    with pytest.raises(ValueError):
        renyi_entropy([0.5, 0.6, 0, 0, 0, 0, 0, 0])


def test_map_constant_image_is_zero():
    for theta in ORIENTATIONS:
        np.testing.assert_array_equal(directional_entropy_map(np.full((12, 12), 0.6), theta), 0.0)


def test_map_black_image_is_zero():
    np.testing.assert_array_equal(directional_entropy_map(np.zeros((9, 9)), ORIENTATIONS[0]), 0.0)


def test_map_matches_pixel_oracle(rng):
    img = rng.random((16, 16))
    for theta in ORIENTATIONS:
        emap = directional_entropy_map(img, theta)
        oracle = np.array([[pixel_entropy(img, r, c, theta) for c in range(16)] for r in range(16)])
        np.testing.assert_allclose(emap, oracle, atol=1e-10, rtol=0)


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, (10, 11), elements=st.floats(0, 1)), st.floats(0.01, 100))
def test_map_bounds_and_scale_invariance(img, c):
    for theta in ORIENTATIONS:
        emap = directional_entropy_map(img, theta)
        assert emap.min() >= 0 and emap.max() <= 1
        scaled = directional_entropy_map(c * img, theta, bounded=False)
        np.testing.assert_allclose(scaled, emap, atol=1e-12)


def test_map_partitioning_is_irrelevant(rng):
    img = rng.random((24, 24))
    theta = ORIENTATIONS[1]
    whole = directional_entropy_map(img, theta)
    # an interior tile computed on its own (with enough margin) matches
    tile = directional_entropy_map(img[4:20, 4:20], theta)
    np.testing.assert_array_equal(whole[8:16, 8:16], tile[4:12, 4:12])


def test_mean_directional_entropy_constant():
    de = mean_directional_entropy(np.full((10, 10), 0.3))
    np.testing.assert_array_equal(de.values, 0.0)
    np.testing.assert_allclose(de.angles, np.array([1, 3, 5, 7]) * np.pi / 8)


def test_rotation_swaps_axes(rng):
    img = rng.random((20, 20))
    a = mean_directional_entropy(img).values
    for k in (1, 3):
        b = mean_directional_entropy(np.rot90(img, k)).values
        np.testing.assert_allclose(b, a[[2, 3, 0, 1]], atol=1e-12)


def test_mean_entropy_bounds(photos):
    for img in photos.values():
        v = mean_directional_entropy(img).values
        assert v.shape == (4,) and np.all((v >= 0) & (v <= 1))
