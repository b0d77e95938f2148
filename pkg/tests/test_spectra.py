import cmath
import math

import numpy as np
import pytest

from minkqm.errors import BracketError, DomainError, PoleError
from minkqm.model import NATURAL_UNITS, PhysicalParams
from minkqm.spectra import (
    Branch,
    coulomb_closed_spectrum,
    coulomb_scaling,
    coulomb_third,
    coulomb_third_asymptotic,
    coulomb_u1,
    coulomb_u1_asymptotic,
    coulomb_u2,
    deep_ladder,
    duality_forward,
    free_spectrum,
    gamma_phase,
    oscillator_closed_spectrum,
    oscillator_quantized_spectrum,
    oscillator_wavefunction,
    quantization_f,
    shallow_spectrum,
    solve_quantized_spectrum,
)

PP = NATURAL_UNITS

# 40-digit offline references
COULOMB_U1_G2_M1_Z1 = complex(0.56893549580603705, 0.52597576027778702)
GAMMA_PHASE_G2_M1 = 0.61049728068930063
QUANT_F_G1_M1 = -3.1190979764480602


class TestScaling:
    def test_hand_values(self):
        sc = coulomb_scaling(PP, 1.0, -0.5)
        assert sc.r0 == pytest.approx(0.5, rel=1e-15)
        assert sc.g == pytest.approx(1.0, rel=1e-15)
        sc = coulomb_scaling(PP, 1.0, -2.0)
        assert sc.r0 == pytest.approx(0.25, rel=1e-15)
        assert sc.g == pytest.approx(0.5, rel=1e-15)

    def test_g_monotone_toward_threshold(self):
        gs = [coulomb_scaling(PP, 1.0, e).g for e in (-10.0, -1.0, -0.1, -0.001)]
        assert gs == sorted(gs)

    def test_positive_energy_rejected(self):
        with pytest.raises(DomainError):
            coulomb_scaling(PP, 1.0, 0.5)


class TestClosedSpectrum:
    def test_m0_ladder(self):
        for n in range(10):
            got = coulomb_closed_spectrum(PP, 1.0, n, 0.0)
            assert got.imag == 0.0
            assert got.real == pytest.approx(-1.0 / (2 * (n + 0.5) ** 2), rel=1e-15)

    def test_complex_example(self):
        got = coulomb_closed_spectrum(PP, 1.0, 0, 1.0)
        assert got == pytest.approx(complex(0.24, 0.32), rel=1e-15)

    def test_m_negation_conjugates(self):
        for n in (0, 3):
            for m_ang in (0.5, 2.0):
                a = coulomb_closed_spectrum(PP, 1.0, n, m_ang)
                b = coulomb_closed_spectrum(PP, 1.0, n, -m_ang)
                assert b == a.conjugate()

    def test_coincides_with_shallow_at_half(self):
        for n in range(51):
            closed = coulomb_closed_spectrum(PP, 1.0, n, 0.0)
            assert closed.real == shallow_spectrum(PP, 1.0, 0.5, n)
            assert closed.imag == 0.0


class TestWavefunctions:
    def test_u1_ground_state_value(self):
        # M=0, g=1/2 has a = 0: u1 = sqrt(z) e^{-z/2}
        got = coulomb_u1(0.5, 0.0, 1.0)
        assert got.real == pytest.approx(math.exp(-0.5), rel=1e-14)
        assert got.imag == 0.0

    def test_u1_reference_value(self):
        got = coulomb_u1(2.0, 1.0, 1.0)
        assert abs(got - COULOMB_U1_G2_M1_Z1) < 1e-14

    def test_small_z_modulus_m_independent(self):
        # |u1| ~ sqrt(z), no M dependence in the modulus
        for z in (1e-8, 1e-6):
            mags = [abs(coulomb_u1(1.3, m, z)) for m in (0.0, 0.7, 2.5)]
            for m in mags:
                assert m == pytest.approx(math.sqrt(z), rel=1e-5)

    def test_u2_is_conjugate_of_u1(self):
        zs = np.linspace(1e-3, 30.0, 1000)
        for m_ang in (0.5, 1.0, 2.0):
            for g in (0.7, 2.3):
                worst = max(
                    abs(coulomb_u2(g, m_ang, float(z)) - coulomb_u1(g, m_ang, float(z)).conjugate())
                    for z in zs
                )
                assert worst == 0.0

    def test_u2_equals_u1_at_m_zero(self):
        for z in (0.2, 1.0, 5.0):
            assert coulomb_u2(1.2, 0.0, z) == coulomb_u1(1.2, 0.0, z)

    def test_z_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            coulomb_u1(1.0, 1.0, 0.0)

    def test_u1_asymptotic_agreement_improves(self):
        devs = [
            abs(coulomb_u1(2.0, 1.0, z) / coulomb_u1_asymptotic(2.0, 1.0, z) - 1.0)
            for z in (30.0, 40.0, 50.0, 60.0)
        ]
        assert all(devs[i + 1] < devs[i] for i in range(3))


class TestGammaPhase:
    def test_zero_at_m0(self):
        rp = gamma_phase(0.3, 0.0)
        assert rp.gamma == 0.0 and rp.beta == 0.0

    def test_pole_at_closed_levels(self):
        for g in (0.5, 1.5, 7.5):
            with pytest.raises(PoleError):
                gamma_phase(g, 0.0)

    def test_reference_value(self):
        rp = gamma_phase(2.0, 1.0)
        assert rp.gamma == pytest.approx(GAMMA_PHASE_G2_M1, abs=1e-14)
        assert 0.0 <= rp.gamma < math.pi

    def test_beta_composition(self):
        for r0 in (0.5, 1.0, 3.0):
            rp = gamma_phase(2.0, 1.0, r0=r0)
            assert rp.beta == rp.gamma - 1.0 * math.log(r0)

    def test_default_r0_is_natural_units(self):
        rp = gamma_phase(2.0, 1.0)
        sc = coulomb_scaling(PP, 1.0, -1.0 / (2 * 2.0**2))
        assert sc.r0 == pytest.approx(1.0, rel=1e-15)  # r0 = g/2 at g=2
        assert rp.beta == rp.gamma - math.log(sc.r0)

    def test_conjugation(self):
        for g in (0.4, 2.0, 9.3):
            for m_ang in (0.5, 1.0, 2.7):
                gp = gamma_phase(g, m_ang).gamma
                gm = gamma_phase(g, -m_ang).gamma
                dev = math.fmod(gp + gm, math.pi)
                assert min(abs(dev), math.pi - abs(dev)) < 1e-12

    def test_raw_reduces_to_gamma(self):
        rp = gamma_phase(5.7, 1.3)
        red = math.fmod(rp.gamma_raw, math.pi)
        if red < 0:
            red += math.pi
        assert red == pytest.approx(rp.gamma, abs=1e-12)


class TestQuantizationF:
    def test_reference_value(self):
        assert quantization_f(1.0, 1.0) == pytest.approx(QUANT_F_G1_M1, abs=1e-13)

    def test_shallow_slope_is_minus_pi(self):
        slope = (quantization_f(100.0, 1.0) - quantization_f(50.0, 1.0)) / 50.0
        assert slope == pytest.approx(-math.pi, abs=1e-5)

    def test_deep_log_behavior(self):
        # f + M ln g stays within ~2e-3 of its g->0 limit on [1e-6, 1e-3]
        limit = -1.0846540406523574  # offline 40-digit value
        for g in (1e-6, 1e-5, 1e-4, 1e-3):
            assert abs(quantization_f(g, 1.0) + math.log(g) - limit) < 2e-3

    def test_continuity_across_integer_g(self):
        # the continuously tracked argument must not jump at integer offsets
        for g0 in (1.0, 2.0, 5.0, 17.0):
            left = quantization_f(g0 - 1e-9, 1.0)
            right = quantization_f(g0 + 1e-9, 1.0)
            assert abs(left - right) < 1e-6

    def test_monotone_decreasing_for_positive_m(self):
        gs = np.geomspace(1e-7, 150.0, 1500)
        for m_ang in (0.5, 1.0, 2.0):
            fs = [quantization_f(float(g), m_ang) for g in gs]
            assert all(fs[i + 1] < fs[i] for i in range(len(fs) - 1))

    def test_odd_in_m(self):
        for g in (0.3, 4.2):
            assert quantization_f(g, -1.5) == pytest.approx(
                -quantization_f(g, 1.5), rel=1e-12
            )

    def test_pole_at_m0_closed_level(self):
        with pytest.raises(PoleError):
            quantization_f(2.5, 0.0)


class TestQuantizedSolver:
    def test_n_zero_returns_anchor(self):
        entries = solve_quantized_spectrum(PP, 1.0, 1.0, -3.7, [0])
        assert entries[0].energy == complex(-3.7, 0.0)
        assert entries[0].branch is Branch.QUANTIZED_THIRD

    def test_deep_ladder_ratios(self):
        entries = solve_quantized_spectrum(PP, 1.0, 1.0, -1e6, range(1, 6))
        es = [e.energy.real for e in entries]
        tgt = math.exp(2 * math.pi)
        for i in range(1, 5):
            assert es[i] / es[i - 1] == pytest.approx(tgt, rel=1e-3)

    def test_levels_satisfy_condition_exactly(self):
        # the defining property: f(g_n) - f(g_0) = pi n
        entries = solve_quantized_spectrum(PP, 1.0, 1.0, -2.0, [-2, 1, 3], tol=1e-12)
        f0 = quantization_f(coulomb_scaling(PP, 1.0, -2.0).g, 1.0)
        for e in entries:
            g_n = coulomb_scaling(PP, 1.0, e.energy.real).g
            assert quantization_f(g_n, 1.0) - f0 == pytest.approx(
                math.pi * e.n, abs=1e-9
            )

    def test_shallow_levels_fit_rydberg_form(self):
        entries = solve_quantized_spectrum(PP, 1.0, 1.0, -2.0, range(-4, -9, -1))
        gs = np.array([coulomb_scaling(PP, 1.0, e.energy.real).g for e in entries])
        ks = np.array([e.n for e in entries], dtype=float)
        g0_fit = float(np.mean(gs + ks))
        for e, k in zip(entries, ks):
            want = shallow_spectrum(PP, 1.0, g0_fit, int(-k))
            assert e.energy.real == pytest.approx(want, rel=1e-2)

    def test_free_particle_exact_ladder(self):
        entries = solve_quantized_spectrum(PP, 0.0, 1.0, -1.0, range(-3, 4), tol=1e-12)
        for e in entries:
            assert e.energy.real == pytest.approx(
                -math.exp(2 * math.pi * e.n), rel=1e-10
            )

    def test_negative_m_mirror(self):
        plus = solve_quantized_spectrum(PP, 1.0, 1.0, -2.0, [1, 2])
        minus = solve_quantized_spectrum(PP, 1.0, -1.0, -2.0, [-1, -2])
        for a, b in zip(plus, minus):
            assert b.energy.real == pytest.approx(a.energy.real, rel=1e-9)

    def test_bracket_failure_reports_window(self):
        with pytest.raises(BracketError, match="window"):
            solve_quantized_spectrum(PP, 1.0, 1.0, -1.0, [5], max_decades=0.5)

    def test_m_zero_rejected(self):
        with pytest.raises(DomainError):
            solve_quantized_spectrum(PP, 1.0, 0.0, -1.0, [1])

    def test_units_scale_out(self):
        # natural units vs scaled units related by exact energy scaling
        pp2 = PhysicalParams(mass=2.0, hbar=0.5)
        e_nat = solve_quantized_spectrum(PP, 1.0, 1.0, -1.0, [2])[0].energy.real
        # E scale = m alpha^2 / hbar^2 = 8; anchor scales accordingly
        e_scaled = solve_quantized_spectrum(pp2, 1.0, 1.0, -8.0, [2])[0].energy.real
        assert e_scaled == pytest.approx(8.0 * e_nat, rel=1e-9)

    def test_deep_shallow_crossover_monotone(self):
        # the first-gap ratio E_1/E_0 interpolates monotonically from the
        # geometric ladder value e^{2 pi} (deep anchors) toward the
        # Rydberg-like value (g0/(g0-1))^2 (shallow anchors)
        anchors = [-1e6, -1e4, -1e2, -1.0, -1e-2]
        ratios = []
        for e0 in anchors:
            e1 = solve_quantized_spectrum(PP, 1.0, 1.0, e0, [1])[0].energy.real
            ratios.append(e1 / e0)
        assert abs(ratios[0] - math.exp(2 * math.pi)) / math.exp(2 * math.pi) < 1e-2
        assert ratios[-1] < 2.0
        assert all(b < a for a, b in zip(ratios, ratios[1:]))


class TestLadders:
    def test_deep_ladder_values(self):
        assert deep_ladder(-1.0, 2 * math.pi, 0) == -1.0
        assert deep_ladder(-1.0, 2 * math.pi, 1) == pytest.approx(-math.e, rel=1e-15)

    def test_geometric_ratio_independent_of_n(self):
        for n in (-3, 0, 5):
            r = deep_ladder(-2.0, 1.5, n + 1) / deep_ladder(-2.0, 1.5, n)
            assert r == pytest.approx(math.exp(2 * math.pi / 1.5), rel=1e-12)

    def test_free_spectrum_matches_deep_ladder(self):
        for n in (-2, 0, 3):
            assert free_spectrum(-1.3, 0.8, n) == deep_ladder(-1.3, 0.8, n)

    def test_free_spectrum_example(self):
        assert free_spectrum(-1.0, 1.0, -1) == pytest.approx(-math.exp(-2 * math.pi), rel=1e-15)

    def test_spacing_grows_with_n(self):
        es = [free_spectrum(-1.0, 1.0, n) for n in range(4)]
        gaps = [abs(es[i + 1] - es[i]) for i in range(3)]
        assert gaps == sorted(gaps)

    def test_positive_reference_rejected(self):
        with pytest.raises(DomainError):
            free_spectrum(1.0, 1.0, 0)

    def test_shallow_values(self):
        assert shallow_spectrum(PP, 1.0, 0.5, 0) == -2.0
        assert shallow_spectrum(PP, 1.0, 0.5, 1) == pytest.approx(-2.0 / 9.0, rel=1e-15)

    def test_shallow_large_n_limit(self):
        for n in (200, 2000):
            ratio = shallow_spectrum(PP, 1.0, 0.5, n) / (-1.0 / (2.0 * n * n))
            assert ratio == pytest.approx(1.0, rel=2.0 / n)


class TestDuality:
    def test_hand_example(self):
        d = duality_forward(PP, 1.0, -2.0, 0.0, 1.0)
        assert d.omega == pytest.approx(4.0, rel=1e-15)
        assert d.e_osc == pytest.approx(4.0, rel=1e-15)
        assert d.m_osc == 0.0

    def test_invariants_random(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            pp = PhysicalParams(rng.uniform(0.2, 5), rng.uniform(0.2, 5))
            alpha = rng.uniform(0.05, 8)
            e_c = -rng.uniform(1e-4, 1e4)
            m_c = rng.uniform(-4, 4)
            r0 = rng.uniform(0.01, 50)
            d = duality_forward(pp, alpha, e_c, m_c, r0)
            assert d.r0_scale * d.e_osc == pytest.approx(4 * alpha, rel=1e-12)
            assert pp.mass * d.omega**2 * d.r0_scale**2 == pytest.approx(
                -8 * e_c, rel=1e-12
            )
            assert d.m_osc == 2 * m_c

    def test_energy_relation_roundtrip(self):
        alpha = 2.0
        d = duality_forward(PP, alpha, -3.0, 1.0, 0.7)
        e_back = -2.0 * (alpha * d.omega) ** 2 * PP.mass / d.e_osc**2
        assert e_back == pytest.approx(-3.0, rel=1e-10)

    def test_positive_coulomb_energy_rejected(self):
        with pytest.raises(DomainError):
            duality_forward(PP, 1.0, 1.0, 0.0, 1.0)


class TestOscillator:
    def test_closed_values(self):
        assert oscillator_closed_spectrum(PP, 1.0, 0, 0.0) == 1.0
        assert oscillator_closed_spectrum(PP, 1.0, 2, 0.0) == 5.0
        assert oscillator_closed_spectrum(PP, 1.0, 0, 3.0) == complex(1, 3)

    def test_closed_exact_m0(self):
        pp = PhysicalParams(mass=1.0, hbar=0.7)
        for n in range(8):
            got = oscillator_closed_spectrum(pp, 1.3, n, 0.0)
            assert got.real == pp.hbar * 1.3 * (2 * n + 1)
            assert got.imag == 0.0

    def test_spacing(self):
        for n in range(4):
            diff = oscillator_closed_spectrum(PP, 2.0, n + 1, 1.0) - oscillator_closed_spectrum(
                PP, 2.0, n, 1.0
            )
            assert diff == pytest.approx(2 * 2.0, rel=1e-15)

    def test_ground_state_is_gaussian(self):
        for rho in (0.3, 1.0, 2.2):
            got = oscillator_wavefunction(PP, 1.0, 0, 0.0, rho, 0.0)
            assert got.real == pytest.approx(math.exp(-rho * rho / 2), rel=1e-14)
            assert got.imag == 0.0

    def test_first_excited_node(self):
        assert oscillator_wavefunction(PP, 1.0, 1, 0.0, 1.0, 0.0) == 0.0

    def test_modulus_independent_of_phi_and_phase(self):
        mags = {
            round(abs(oscillator_wavefunction(PP, 1.0, 1, 2.0, 0.8, phi)), 13)
            for phi in (-2.0, 0.0, 1.3)
        }
        assert len(mags) == 1

    def test_quantized_small_ladder(self):
        ent = oscillator_quantized_spectrum(PP, 1.0, 1.0, 2e-4, [-1, 0])
        assert ent[1].energy.real == 2e-4
        ratio = ent[0].energy.real / 2e-4
        assert ratio == pytest.approx(math.exp(-2 * math.pi), rel=1e-3)

    def test_quantized_large_spacing(self):
        ent = oscillator_quantized_spectrum(PP, 1.0, 1.0, 25.0, range(0, 4))
        es = [e.energy.real for e in ent]
        for i in range(3):
            assert es[i + 1] - es[i] == pytest.approx(2.0, rel=1e-2)

    def test_m_osc_stored_on_entries(self):
        ent = oscillator_quantized_spectrum(PP, 1.0, 3.0, 1.0, [0, -1])
        assert all(e.m_ang == 3.0 for e in ent)

    def test_duality_substitution_reproduces_wavefunction(self):
        # at M = 0 the oscillator amplitude is the Coulomb one under
        # x = m omega rho^2 / hbar:  Psi_osc(rho) = u1(x)/sqrt(x) up to a
        # constant (here exactly 1)
        n, g = 1, 1.5
        for rho in (0.4, 1.3, 2.1):
            x = rho * rho  # m = omega = hbar = 1
            psi = oscillator_wavefunction(PP, 1.0, n, 0.0, rho, 0.0)
            via_coulomb = coulomb_u1(g, 0.0, x) / math.sqrt(x)
            assert psi == pytest.approx(via_coulomb, rel=1e-13)

    def test_negative_reference_rejected(self):
        with pytest.raises(DomainError):
            oscillator_quantized_spectrum(PP, 1.0, 1.0, -1.0, [0])


class TestThirdSolutionPhaseLaw:
    def test_small_z_oscillation(self):
        # u/sqrt(z) ~ 2i e^{-i gamma} sin(M ln z + gamma) near the origin
        g, m_ang = 2.0, 1.0
        rp = gamma_phase(g, m_ang)
        zs = np.geomspace(1e-9, 1e-6, 120)
        osc = []
        for z in zs:
            u = coulomb_third(g, m_ang, float(z), rp.gamma)
            osc.append((u / math.sqrt(z) * cmath.exp(1j * rp.gamma) / 2j).real)
        osc = np.array(osc)
        model = np.sin(m_ang * np.log(zs) + rp.gamma)
        amp = float(np.linalg.lstsq(model[:, None], osc, rcond=None)[0][0])
        resid = float(np.sqrt(np.mean((osc - amp * model) ** 2))) / abs(amp)
        assert resid < 1e-6

    def test_decay_at_infinity_and_sensitivity(self):
        g, m_ang = 2.0, 1.0
        rp = gamma_phase(g, m_ang)
        zs = np.geomspace(0.5, 35.0, 200)
        max_u = max(abs(coulomb_third(g, m_ang, float(z), rp.gamma)) for z in zs)
        tail = abs(coulomb_third_asymptotic(g, m_ang, 60.0, rp.gamma))
        assert tail / max_u < 1e-6
        tail_bad = abs(coulomb_third_asymptotic(g, m_ang, 60.0, rp.gamma + 0.1))
        assert tail_bad / tail > 1e3

    def test_series_third_solution_stays_small_at_moderate_z(self):
        # series evaluation is still well conditioned at z ~ 35
        g, m_ang = 2.0, 1.0
        rp = gamma_phase(g, m_ang)
        val = abs(coulomb_third(g, m_ang, 35.0, rp.gamma))
        assert val < 1e-4


class TestClosedFormResidual:
    """Closed-form eigenfunctions solve u'' + Q u = 0 to 1e-8 scaled residual.

    Double-precision central differences bottom out near 7e-8 (truncation
    vs roundoff trade-off), so the measurement runs in 80-bit longdouble
    on closed forms spot-checked against coulomb_u1.
    """

    @staticmethod
    def _segment_residual(u_func, q_func, z_lo, z_hi, h):
        z = np.arange(z_lo, z_hi, h, dtype=np.longdouble)
        u = u_func(z)
        d2 = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (np.longdouble(h) * np.longdouble(h))
        qu = q_func(z) * u
        return np.max(np.abs(d2 + qu[1:-1])), np.max(np.abs(qu))

    @pytest.mark.parametrize("g", [0.5, 1.5])
    def test_residual_below_1e8(self, g):
        n = int(g - 0.5)

        def u_func(z):
            # F(-n, 1, z) for n = 0, 1 written out; verified against coulomb_u1
            poly = 1.0 - z if n == 1 else np.ones_like(z)
            return np.sqrt(z) * np.exp(-z / 2) * poly

        def q_func(z):
            return 0.25 / (z * z) + g / z - np.longdouble(0.25)

        # identity check against the series implementation at double precision
        for z in np.geomspace(0.1, 30.0, 60):
            series = coulomb_u1(g, 0.0, float(z))
            closed = complex(u_func(np.longdouble(z)))
            assert abs(series - closed) < 1e-13 * max(abs(series), 1e-3)

        # fine step near the edge where u'''' is largest, coarser beyond
        r1, s1 = self._segment_residual(u_func, q_func, 0.1, 1.0, 1e-5)
        r2, s2 = self._segment_residual(u_func, q_func, 1.0, 30.0, 1e-4)
        scale = max(s1, s2)
        assert float(max(r1, r2) / scale) < 1e-8
