import numpy as np
import pytest
import scipy.stats
from hypothesis import given
from hypothesis import strategies as st

from vmiqa import UndefinedCorrelationError, kendall, pearson, rankdata, spearman

from .oracles import kendall_bruteforce, pearson_bruteforce, ranks_bruteforce


def test_pearson_examples():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    assert pearson(x, x) == pytest.approx(1.0)
    assert pearson(x, -2 * x + 7) == pytest.approx(-1.0)
    assert pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(0.9819805060619659, abs=1e-15)


def test_spearman_examples():
    assert spearman([1, 2, 3], [1, 4, 9]) == pytest.approx(1.0)
    assert spearman([1, 2, 3], [9, 4, 1]) == pytest.approx(-1.0)


def test_spearman_ties_vs_oracle():
    x = [1, 2, 2, 3]
    y = [0.5, 0.1, 0.9, 2.0]
    expected = pearson_bruteforce(ranks_bruteforce(x), ranks_bruteforce(y))
    assert spearman(x, y) == pytest.approx(expected, abs=1e-12)


def test_kendall_examples():
    assert kendall([1, 2, 3, 4], [1, 2, 3, 4]) == pytest.approx(1.0)
    assert kendall([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)


def test_kendall_vs_oracle(rng):
    x = rng.random(10)
    y = rng.random(10)
    assert kendall(x, y) == pytest.approx(kendall_bruteforce(list(x), list(y)), abs=1e-12)


def test_rankdata_vs_oracle(rng):
    v = rng.integers(0, 5, 30).astype(float)
    np.testing.assert_array_equal(rankdata(v), ranks_bruteforce(list(v)))


@pytest.mark.parametrize("fn", [pearson, spearman])
def test_constant_sample_undefined(fn):
    with pytest.raises(UndefinedCorrelationError):
        fn([1, 1, 1], [1, 2, 3])


def test_kendall_all_tied():
    with pytest.raises(UndefinedCorrelationError):
        kendall([2, 2, 2], [1, 2, 3])


def test_length_checks():
    with pytest.raises(ValueError):
        pearson([1, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        spearman([1], [1])
    with pytest.raises(ValueError):
        kendall([1, np.nan], [1, 2])


def test_agree_with_scipy(rng):
    x = rng.integers(0, 6, 40).astype(float)
    y = x + rng.integers(0, 3, 40)
    assert spearman(x, y) == pytest.approx(scipy.stats.spearmanr(x, y)[0], abs=1e-12)
    assert kendall(x, y) == pytest.approx(scipy.stats.kendalltau(x, y, variant="b")[0], abs=1e-12)


finite_pairs = st.lists(
    st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=3, max_size=25
).filter(lambda p: len({a for a, _ in p}) > 1 and len({b for _, b in p}) > 1)


@given(finite_pairs)
def test_invariants(pairs):
    x = np.array([a for a, _ in pairs], float)
    y = np.array([b for _, b in pairs], float)
    for fn in (pearson, spearman, kendall):
        r = fn(x, y)
        assert -1 <= r <= 1
        assert fn(y, x) == pytest.approx(r, abs=1e-12)
    # strictly increasing transforms leave rank statistics alone
    assert spearman(np.exp(x), y ** 3) == pytest.approx(spearman(x, y), abs=1e-12)
    assert kendall(np.exp(x), y ** 3) == pytest.approx(kendall(x, y), abs=1e-12)
    assert pearson(3 * x + 2, y) == pytest.approx(pearson(x, y), abs=1e-12)


@given(st.permutations(list(range(12))))
def test_kendall_no_ties_equals_tau_a(perm):
    x = np.arange(12.0)
    y = np.array(perm, float)
    n0 = 12 * 11 / 2
    s = sum(np.sign(x[j] - x[i]) * np.sign(y[j] - y[i]) for i in range(12) for j in range(i + 1, 12))
    assert kendall(x, y) == pytest.approx(s / n0, abs=1e-12)
