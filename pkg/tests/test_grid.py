"""Grid geometry and field container behavior."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mechanosim import Field, Grid, integrate, shift


class TestGrid:
    def test_dx_and_extent(self):
        g = Grid(2.0, 8)
        assert g.dx == pytest.approx(0.25)
        assert g.centers[0] == pytest.approx(-1.0 + 0.125)
        assert g.centers[-1] == pytest.approx(1.0 - 0.125)
        assert g.edges[0] == pytest.approx(-1.0)
        assert g.edges[-1] == pytest.approx(1.0)
        assert len(g.edges) == 9

    def test_centers_midway_between_edges(self):
        g = Grid(1.0, 10)
        mid = 0.5 * (g.edges[:-1] + g.edges[1:])
        np.testing.assert_allclose(g.centers, mid)

    def test_validation(self):
        with pytest.raises(ValueError):
            Grid(0.0, 10)
        with pytest.raises(ValueError):
            Grid(-1.0, 10)
        with pytest.raises(ValueError):
            Grid(1.0, 3)
        with pytest.raises(ValueError):
            Grid(np.inf, 10)

    @given(st.integers(min_value=-1000, max_value=1000))
    def test_wrap_total(self, i):
        g = Grid(1.0, 7)
        assert 0 <= g.wrap(i) < 7
        assert g.wrap(i) == g.wrap(i + 7)


class TestField:
    def test_shape_check(self):
        g = Grid(1.0, 5)
        with pytest.raises(ValueError):
            Field(g, np.ones(4))

    def test_immutable(self):
        g = Grid(1.0, 5)
        f = Field(g, np.ones(5))
        with pytest.raises((ValueError, RuntimeError)):
            f.values[0] = 2.0
        with pytest.raises(AttributeError):
            f.values = np.zeros(5)

    def test_copies_input(self):
        g = Grid(1.0, 5)
        src = np.ones(5)
        f = Field(g, src)
        src[0] = 99.0
        assert f.values[0] == 1.0

    def test_positivity_flag(self):
        g = Grid(1.0, 5)
        Field(g, np.ones(5), require_positive=True)
        with pytest.raises(ValueError):
            Field(g, np.array([1.0, 1.0, 0.0, 1.0, 1.0]), require_positive=True)

    def test_rejects_nonfinite(self):
        g = Grid(1.0, 5)
        with pytest.raises(ValueError):
            Field(g, np.array([1.0, np.nan, 1.0, 1.0, 1.0]))

    def test_csv_roundtrip(self, tmp_path):
        g = Grid(1.0, 8)
        f = Field(g, np.linspace(0.1, 1.7, 8))
        path = tmp_path / "field.csv"
        f.to_csv(path)
        back = Field.from_csv(g, path)
        np.testing.assert_array_equal(back.values, f.values)

    def test_uniform(self):
        f = Field.uniform(Grid(1.0, 6), 2.5)
        assert f.min() == f.max() == 2.5


class TestFunctionals:
    def test_integrate_uniform(self):
        f = Field.uniform(Grid(3.0, 30), 2.0)
        assert integrate(f) == pytest.approx(6.0)

    @given(st.integers(min_value=-5, max_value=5))
    def test_shift_preserves_integral(self, cells):
        g = Grid(1.0, 16)
        f = Field(g, 1.0 + 0.5 * np.sin(2 * np.pi * g.centers))
        assert integrate(shift(f, cells)) == pytest.approx(integrate(f), rel=1e-14)

    def test_shift_moves_values(self):
        g = Grid(1.0, 4)
        f = Field(g, np.array([1.0, 2.0, 3.0, 4.0]))
        np.testing.assert_array_equal(shift(f, 1).values, [4.0, 1.0, 2.0, 3.0])
