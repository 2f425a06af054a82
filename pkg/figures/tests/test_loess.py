import numpy as np
import pytest

from mobnet_figures.loess import LoessParams, loess_smooth


class TestParams:
    def test_span_bounds(self):
        with pytest.raises(ValueError):
            LoessParams(span=0.0)
        with pytest.raises(ValueError):
            LoessParams(span=1.2)

    def test_only_degree_one(self):
        with pytest.raises(ValueError):
            LoessParams(degree=2)


class TestPolynomialReproduction:
    @pytest.mark.parametrize("span", [0.3, 0.5, 0.75, 1.0])
    def test_lines_are_fixed_points(self, span):
        x = np.linspace(0.0, 9.0, 25)
        y = 0.5 + 2.0 * x
        fitted = loess_smooth(x, y, LoessParams(span=span))
        assert np.abs(fitted - y).max() < 1e-9

    def test_constant_series(self):
        x = np.arange(10.0)
        y = np.full(10, 3.25)
        assert np.abs(loess_smooth(x, y) - y).max() < 1e-12

    def test_irregular_spacing_still_exact_on_lines(self):
        x = np.array([0.0, 0.3, 1.1, 2.5, 2.9, 4.0, 7.3, 8.0])
        y = -1.0 + 0.75 * x
        fitted = loess_smooth(x, y, LoessParams(span=0.6))
        assert np.abs(fitted - y).max() < 1e-9


class TestHandComputedInstance:
    def test_five_points_full_span(self):
        # Direct tricube weighted least squares, worked independently.
        x = [0.0, 1.0, 2.0, 3.0, 4.0]
        y = [1.0, 0.5, 2.0, 1.5, 3.0]
        expected = [
            0.744650828542, 1.098971187373, 1.427378964942,
            2.098971187373, 2.744650828542,
        ]
        fitted = loess_smooth(x, y, LoessParams(span=1.0))
        assert np.abs(fitted - np.array(expected)).max() < 1e-6


class TestValidation:
    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="lengths differ"):
            loess_smooth([1.0, 2.0, 3.0], [1.0, 2.0])

    def test_too_few_points(self):
        with pytest.raises(ValueError, match="at least 3"):
            loess_smooth([1.0, 2.0], [1.0, 2.0])

    def test_non_increasing_x(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            loess_smooth([0.0, 0.0, 1.0], [1.0, 2.0, 3.0])

    def test_span_too_narrow_for_fit(self):
        x = np.arange(4.0)
        with pytest.raises(ValueError, match="span"):
            loess_smooth(x, x, LoessParams(span=0.25))

    def test_smoothing_pulls_toward_neighbors(self):
        x = np.arange(9.0)
        y = np.zeros(9)
        y[4] = 9.0  # single spike
        fitted = loess_smooth(x, y, LoessParams(span=0.8))
        assert fitted[4] < 9.0
        assert fitted[0] == pytest.approx(0.0, abs=1.5)
