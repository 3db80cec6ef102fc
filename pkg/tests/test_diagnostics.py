"""Functionals: mass, entropy, free energy, relative entropy, weighted
norms, decay bound and rate fitting."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mechanosim import Field, Grid, RationalLaw
from mechanosim.errors import InsufficientSamples
from mechanosim import diagnostics as dg


@st.composite
def positive_fields(draw, n=32, L=1.0):
    vals = draw(
        st.lists(
            st.floats(min_value=0.05, max_value=20.0),
            min_size=n, max_size=n,
        )
    )
    return Field(Grid(L, n), np.asarray(vals))


def make_reference(n=32, M=1.0):
    g = Grid(1.0, n)
    psi = Field(g, 0.7 * np.sin(2 * np.pi * g.centers))
    return dg.StationaryReference.from_psi(psi, M)


class TestStationaryReference:
    def test_mass_of_rho_inf(self):
        ref = make_reference(M=2.5)
        assert dg.mass(ref.rho_inf) == pytest.approx(2.5, rel=1e-12)
        assert ref.rho_inf.min() > 0.0

    def test_energy_floor_attained(self):
        ref = make_reference()
        E = dg.free_energy(ref.rho_inf, ref.psi)
        assert E == pytest.approx(ref.energy_floor, rel=1e-12)

    def test_from_signal(self):
        g = Grid(1.0, 16)
        S = Field(g, 1.0 + 0.1 * np.cos(2 * np.pi * g.centers))
        law = RationalLaw(2, 2)
        ref = dg.StationaryReference.from_signal(S, law, 1.0, 1.0)
        np.testing.assert_allclose(ref.psi.values, law.psi(1.0, S.values))


class TestBasicFunctionals:
    def test_mass_uniform(self):
        assert dg.mass(Field.uniform(Grid(1.0, 10), 1.0)) == pytest.approx(1.0)

    def test_mass_linear(self):
        g = Grid(1.0, 10)
        f = Field(g, np.linspace(1, 2, 10))
        assert dg.mass(f.with_values(2 * f.values)) == pytest.approx(2 * dg.mass(f))

    def test_entropy_uniform(self):
        assert dg.entropy(Field.uniform(Grid(1.0, 10), 1.0)) == pytest.approx(0.0)
        c = 2.5
        assert dg.entropy(Field.uniform(Grid(1.0, 10), c)) == pytest.approx(c * np.log(c))

    def test_entropy_increases_under_concentration(self):
        g = Grid(1.0, 4)
        spread = dg.entropy(Field(g, np.array([1.0, 1.0, 1.0, 1.0])))
        peaked = dg.entropy(Field(g, np.array([3.7, 0.1, 0.1, 0.1])))
        assert peaked > spread

    def test_entropy_requires_positive(self):
        with pytest.raises(ValueError):
            dg.entropy(Field(Grid(1.0, 4), np.array([1.0, 0.0, 1.0, 1.0])))

    def test_free_energy_reduces_to_entropy(self):
        g = Grid(2.0, 16)
        rho = Field(g, 0.5 + np.linspace(0, 1, 16))
        zero_psi = Field.uniform(g, 0.0)
        assert dg.free_energy(rho, zero_psi) == pytest.approx(
            g.length * dg.entropy(rho), rel=1e-12
        )


class TestLowerBoundAndRelativeEntropy:
    @given(positive_fields())
    @settings(max_examples=60)
    def test_free_energy_floor(self, rho):
        ref = make_reference()
        M = dg.mass(rho)
        floor = M * np.log(M / ref.Z)
        assert dg.free_energy(rho, ref.psi) >= floor - 1e-10

    @given(positive_fields())
    @settings(max_examples=60)
    def test_relative_entropy_nonnegative(self, rho):
        ref = make_reference()
        assert dg.relative_entropy(rho, ref) >= -1e-12

    @given(positive_fields())
    @settings(max_examples=60)
    def test_identity_with_free_energy(self, rho):
        ref = make_reference()
        M = dg.mass(rho)
        lhs = dg.relative_entropy(rho, ref) * M + M * np.log(M / ref.Z)
        assert lhs == pytest.approx(dg.free_energy(rho, ref.psi), abs=1e-10)

    def test_zero_at_stationary_state(self):
        ref = make_reference()
        assert dg.relative_entropy(ref.rho_inf, ref) == pytest.approx(0.0, abs=1e-14)


class TestWeightedNorms:
    def test_zero_at_reference(self):
        ref = make_reference()
        assert dg.weighted_l2_deviation(ref.rho_inf, ref) == 0.0
        assert dg.l1_distance(ref.rho_inf, ref) == 0.0

    def test_zero_mean_property(self):
        ref = make_reference()
        g = ref.psi.grid
        rho = Field(g, ref.rho_inf.values * (1.0 + 0.3 * np.sin(4 * np.pi * g.centers)))
        # same-mass correction
        rho = Field(g, rho.values * ref.M / dg.mass(rho))
        u = rho.values / ref.rho_inf.values - 1.0
        assert g.dx * np.sum(u * ref.rho_inf.values) == pytest.approx(0.0, abs=1e-12)

    @given(positive_fields())
    @settings(max_examples=60)
    def test_cauchy_schwarz(self, rho):
        ref = make_reference()
        l1 = dg.l1_distance(rho, ref)  # asserts the bound internally
        assert l1 <= np.sqrt(ref.M) * np.sqrt(dg.weighted_l2_deviation(rho, ref)) * (1 + 1e-12) + 1e-290


class TestDecayBound:
    def test_constant_velocity_value(self):
        b = dg.DecayBound(v_min=1.0, v_max=1.0, alpha=3.0, D=1.0, poincare_C=1.0)
        assert b.rate == pytest.approx(2.0)

    def test_mobility_factors_cancel_for_constant_v(self):
        for alpha in (0.0, 1.0, 7.0):
            b = dg.DecayBound(v_min=0.5, v_max=0.5, alpha=alpha, D=2.0, poincare_C=1.0)
            assert b.rate == pytest.approx(2.0 * 2.0 * 0.25)

    def test_monotone_in_extremes(self):
        base = dg.DecayBound(v_min=0.4, v_max=0.9, alpha=1.0, D=1.0, poincare_C=1.0)
        assert dg.DecayBound(0.45, 0.9, 1.0, 1.0, 1.0).rate > base.rate
        assert dg.DecayBound(0.4, 1.0, 1.0, 1.0, 1.0).rate < base.rate

    def test_from_signal_field(self):
        g = Grid(1.0, 32)
        S = Field(g, 1.0 + 0.3 * np.cos(2 * np.pi * g.centers))
        law = RationalLaw(2, 2)
        b = dg.decay_bound(law, 1.0, 1.0, S)
        v = law.v(S.values)
        assert b.v_min == pytest.approx(v.min())
        assert b.v_max == pytest.approx(v.max())
        assert b.poincare_C == pytest.approx((1.0 / (2 * np.pi)) ** 2)
        assert b.rate > 0.0


class TestFitRate:
    def test_exact_exponential(self):
        t = np.linspace(0.0, 2.0, 50)
        assert dg.fit_rate(t, np.exp(-3.0 * t)) == pytest.approx(3.0, abs=1e-10)

    def test_constant_series(self):
        t = np.linspace(0.0, 1.0, 20)
        assert dg.fit_rate(t, np.full(20, 0.7)) == pytest.approx(0.0, abs=1e-12)

    def test_noisy_exponential(self):
        rng = np.random.default_rng(0)
        t = np.linspace(0.0, 2.0, 200)
        vals = np.exp(-1.5 * t) * (1.0 + 1e-3 * rng.standard_normal(200))
        assert dg.fit_rate(t, vals) == pytest.approx(1.5, rel=0.01)

    def test_insufficient_samples(self):
        with pytest.raises(InsufficientSamples):
            dg.fit_rate([0.0, 1.0], [1.0, 0.5])

    def test_requires_positive_values(self):
        t = np.linspace(0.0, 1.0, 12)
        with pytest.raises(ValueError):
            dg.fit_rate(t, np.linspace(1.0, -0.1, 12))
