"""Semi-analytic steady states: first integral, root finding, profile
quadrature and the concentration classifier."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mechanosim import CustomLaw, Field, Grid, RationalLaw, SigmoidLaw
from mechanosim.errors import InconclusiveProbe, NoFinitePeriod, NotSteady
from mechanosim import steady


LAW = RationalLaw(2, 2)


class TestEvalF:
    def test_zero_at_base_point(self):
        assert steady.eval_f(LAW, 1.0, 1.2, 0.8, 1.2) == 0.0

    def test_rejects_below_base(self):
        with pytest.raises(ValueError):
            steady.eval_f(LAW, 1.0, 1.2, 0.8, 1.0)

    @given(
        st.floats(min_value=0.5, max_value=3.0),
        st.floats(min_value=0.1, max_value=0.45),
    )
    @settings(max_examples=30)
    def test_derivative_at_base(self, S0, rho0_frac):
        rho0 = rho0_frac * S0
        h = 1e-7 * S0
        fd = steady.eval_f(LAW, 1.0, S0, rho0, S0 + h) / h
        assert fd == pytest.approx(2.0 * (S0 - rho0), rel=1e-4)

    def test_analytic_derivatives_match_finite_differences(self):
        S0, rho0, S = 1.2, 0.8, 1.9
        h = 1e-6
        f = lambda s: steady.eval_f(LAW, 1.0, S0, rho0, s)
        fp_fd = (f(S + h) - f(S - h)) / (2 * h)
        fpp_fd = (f(S + h) - 2 * f(S) + f(S - h)) / h**2
        # f' is small here, so the FD comparison is absolute-dominated
        assert steady.f_prime(LAW, 1.0, S0, rho0, S) == pytest.approx(fp_fd, rel=1e-5, abs=1e-9)
        assert steady.f_dprime(LAW, 1.0, S0, rho0, S) == pytest.approx(fpp_fd, rel=1e-3)

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 10.0])
    def test_closed_form_matches_quadrature(self, alpha):
        from mechanosim.velocity import VelocityLaw

        S0, rho0 = 1.2, 0.8
        C0 = rho0 * float(LAW.mobility(alpha, S0))
        for S in np.linspace(S0, 5 * S0, 17):
            closed = steady.eval_f(LAW, alpha, S0, rho0, S)
            quad_int = VelocityLaw.inverse_mobility_antiderivative(LAW, alpha, S0, S)
            via_quad = S * S - S0 * S0 - 2.0 * C0 * quad_int
            assert closed == pytest.approx(via_quad, rel=1e-9, abs=1e-12)


class TestFindSL:
    def test_precondition(self):
        with pytest.raises(ValueError):
            steady.find_SL(LAW, 1.0, 0.8, 1.2)

    def test_root_and_positivity_between(self):
        S_L = steady.find_SL(LAW, 1.0, 1.2, 0.8)
        assert S_L is not None and S_L > 1.2
        assert abs(steady.eval_f(LAW, 1.0, 1.2, 0.8, S_L)) <= 1e-10 * S_L**2
        # dense scan: f > 0 strictly between, exactly one sign change
        S = np.linspace(1.2, S_L, 2000)[1:-1]
        f = np.array([steady.eval_f(LAW, 1.0, 1.2, 0.8, s) for s in S])
        assert np.all(f > 0.0)

    def test_constant_velocity_never_roots(self):
        law = CustomLaw(v_func=lambda s: np.ones_like(np.asarray(s, float)),
                        dv_func=lambda s: np.zeros_like(np.asarray(s, float)))
        # f(S) = (S - S0)(S + S0 - 2 rho0) > 0 for S > S0 when rho0 < S0
        assert steady.find_SL(law, 0.0, 1.0, 0.5) is None

    def test_sigmoid_has_finite_root(self):
        law = SigmoidLaw(0.3, 0.1)
        S_L = steady.find_SL(law, 0.0, 0.95, 0.85)
        assert S_L is not None
        assert abs(steady.eval_f(law, 0.0, 0.95, 0.85, S_L)) <= 1e-10 * S_L**2


@pytest.fixture(scope="module")
def prof():
    return steady.profile(LAW, 1.0, 1.2, 0.8, 0.01)


class TestProfile:
    def test_starts_at_zero(self, prof):
        assert prof.x[0] == 0.0

    def test_monotone_and_positive(self, prof):
        assert np.all(np.diff(prof.x) > 0.0)
        assert np.all(np.diff(prof.S) > 0.0)
        assert np.all(prof.rho > 0.0)

    def test_rho_from_first_integral(self, prof):
        w = np.asarray(LAW.mobility(1.0, prof.S))
        np.testing.assert_allclose(prof.rho * w, prof.C0, rtol=1e-12)

    def test_halving_step_changes_little(self, prof):
        dS = (prof.S_L - prof.S0) / 2000.0
        finer = steady.profile(LAW, 1.0, 1.2, 0.8, 0.01, dS / 2.0)
        assert abs(finer.L_half - prof.L_half) <= 0.005 * prof.L_half
        assert abs(finer.M - prof.M) <= 0.01 * prof.M

    def test_mass_consistency(self, prof):
        # int S dx equals int rho dx over the half period (elliptic coupling)
        M_rho = np.trapezoid(prof.rho, prof.x)
        assert M_rho == pytest.approx(prof.M, rel=0.01)

    def test_requires_enough_steps(self):
        S_L = steady.find_SL(LAW, 1.0, 1.2, 0.8)
        with pytest.raises(ValueError):
            steady.profile(LAW, 1.0, 1.2, 0.8, 0.01, dS=(S_L - 1.2) / 10)

    def test_no_finite_period_raises(self):
        law = CustomLaw(v_func=lambda s: np.ones_like(np.asarray(s, float)),
                        dv_func=lambda s: np.zeros_like(np.asarray(s, float)))
        with pytest.raises(NoFinitePeriod):
            steady.profile(law, 0.0, 1.0, 0.5, 0.01)

    def test_interpolation_even_symmetry(self, prof):
        x = np.array([0.1, -0.1, 0.25, -0.25])
        S = prof.interpolate_S(x)
        assert S[0] == S[1]
        assert S[2] == S[3]

    def test_csv(self, prof, tmp_path):
        prof.write_csv(tmp_path / "profile.csv")
        lines = (tmp_path / "profile.csv").read_text().splitlines()
        assert lines[0] == "x,S,rho"
        assert len(lines) == prof.S.size + 1


class TestVerifyAgainstFv:
    def test_not_steady_raises(self):
        from mechanosim import InitSpec, MacroConfig, build_initial, solve_signal
        cfg = MacroConfig.paper_default(LAW, 1.0, 0.01, t_end=1.0)
        rho = build_initial(cfg.grid, InitSpec(amplitude=0.3))
        S = solve_signal(rho, cfg.signal)
        with pytest.raises(NotSteady):
            steady.verify_against_fv(rho, S, cfg)

    def test_uniform_state_not_applicable(self):
        from mechanosim import InitSpec, MacroConfig, build_initial, solve_signal
        from dataclasses import replace
        cfg = MacroConfig.paper_default(RationalLaw(2, 0.1), 1.0, 0.01, t_end=1.0)
        cfg = replace(cfg, init=InitSpec(kind="uniform"))
        rho = build_initial(cfg.grid, cfg.init)
        S = solve_signal(rho, cfg.signal)
        report = steady.verify_against_fv(rho, S, cfg)
        assert not report.applicable


class TestConcentrationCheck:
    def test_rational_p2_concentrates(self):
        verdict = steady.concentration_check(RationalLaw(2, 2), 1.0, 0.5)
        assert verdict.concentrating

    def test_sigmoid_never_concentrates(self):
        verdict = steady.concentration_check(SigmoidLaw(0.02, 0.01), 0.0, 100.0)
        assert not verdict.concentrating
        assert "v(inf)" in verdict.reason

    def test_p1_borderline_condition(self):
        law = RationalLaw(1, 2)
        low = steady.concentration_check(law, 0.0, 0.3)   # C0*q = 0.6 < 1
        high = steady.concentration_check(law, 0.0, 0.8)  # C0*q = 1.6 > 1
        assert not low.concentrating
        assert high.concentrating
        assert "C0*q" in low.reason

    def test_custom_law_probe(self):
        decaying = CustomLaw(v_func=lambda s: 1.0 / (1.0 + np.asarray(s, float)),
                             dv_func=lambda s: -1.0 / (1.0 + np.asarray(s, float)) ** 2)
        assert steady.concentration_check(decaying, 0.0, 2.0).concentrating
        flat = CustomLaw(v_func=lambda s: np.ones_like(np.asarray(s, float)),
                         dv_func=lambda s: np.zeros_like(np.asarray(s, float)))
        assert not steady.concentration_check(flat, 0.0, 1.0).concentrating

    def test_nonmonotone_probe_raises(self):
        wiggly = CustomLaw(
            v_func=lambda s: 1.0 / (1.0 + np.abs(np.asarray(s, float) - 1e4) * 1e3),
            dv_func=lambda s: np.zeros_like(np.asarray(s, float)),
        )
        with pytest.raises(InconclusiveProbe):
            steady.concentration_check(wiggly, 0.0, 1.0)

    def test_requires_positive_c0(self):
        with pytest.raises(ValueError):
            steady.concentration_check(LAW, 1.0, 0.0)


class TestInverseScan:
    def test_returns_sorted_candidates(self):
        results = steady.inverse_scan(
            LAW, 1.0, 0.01, L_target=0.5, M_target=0.5,
            S0_range=(1.05, 1.6), rho0_range=(0.5, 1.0), n=6,
        )
        assert results
        errs = [r[0] for r in results]
        assert errs == sorted(errs)
