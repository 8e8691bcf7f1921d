import numpy as np
import pytest

from gradrubin import hyperbolic as hy


@pytest.mark.parametrize("k", [0.5, 1.0, 3.0, 7.0])
def test_against_naive_formulas(k):
    L, y = 1.3, np.linspace(0, 1.3, 7)
    assert np.allclose(hy.sinh_ratio(k, y, L), np.sinh(k * y) / np.sinh(k * L), rtol=1e-13, atol=1e-15)
    assert np.allclose(hy.sinh_ratio_complement(k, y, L), np.sinh(k * (L - y)) / np.sinh(k * L), rtol=1e-13, atol=1e-15)
    assert hy.k_coth(k, L) == pytest.approx(k / np.tanh(k * L), rel=1e-14)
    assert hy.k_csch(k, L) == pytest.approx(k / np.sinh(k * L), rel=1e-14)
    assert hy.kernel_symbol(k, L) == pytest.approx((np.cosh(k * L) - 1) / (k * np.sinh(k * L)), rel=1e-13)
    assert hy.inverse_kernel_symbol(k, L) == pytest.approx(k * np.sinh(k * L) / (np.cosh(k * L) - 1), rel=1e-13)


def test_zero_limits():
    L = 2.0
    assert hy.sinh_ratio(0, 0.5, L) == 0.25
    assert hy.sinh_ratio_complement(0, 0.5, L) == 0.75
    assert hy.k_coth(0, L) == 0.5 and hy.k_csch(0, L) == 0.5
    assert hy.kernel_symbol(0, L) == 1.0
    assert hy.inverse_kernel_symbol(0, L) == 1.0
    assert hy.wall_correction(0, 0.5, L) == 0.25


def test_no_overflow_at_large_wavenumber():
    with np.errstate(over="raise"):
        k = np.array([1e3, 1e5])
        assert np.all(np.isfinite(hy.k_coth(k, 1.0)))
        assert np.all(hy.k_csch(k, 1.0) == 0.0)
        assert np.allclose(hy.kernel_symbol(k, 1.0) * k, 1.0)
        assert np.all(np.isfinite(hy.sinh_ratio(k, 0.5, 1.0)))
