"""Property and invariant tests for the probability module."""

from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from gaugecmp.constants import FINE_STRUCTURE_CONSTANT
from gaugecmp.hydrogenic import AtomicState, orbit_radius
from gaugecmp.kernels import Coupling, SwitchingProfile
from gaugecmp import probability as pr


ONE_S = AtomicState(1, 0, 0)
TWO_PZ = AtomicState(2, 1, 0)
EXC_MIN = pr.TransitionSpec(ONE_S, TWO_PZ, Coupling.MINIMAL)
EXC_DIP = pr.TransitionSpec(ONE_S, TWO_PZ, Coupling.DIPOLE)
EM_MIN = pr.TransitionSpec(TWO_PZ, ONE_S, Coupling.MINIMAL)
EM_DIP = pr.TransitionSpec(TWO_PZ, ONE_S, Coupling.DIPOLE)
GAP = EXC_MIN.gap


def test_transition_spec_derives_gap_and_validates():
    assert EXC_MIN.gap > 0 and EM_MIN.gap < 0
    assert EXC_MIN.gap == TWO_PZ.energy - ONE_S.energy
    assert EM_MIN.gap == -EXC_MIN.gap
    for Z, mu in ((2.0, 1.0), (5.0, 0.93)):
        s1 = AtomicState(1, 0, 0, Z, mu)
        p1 = AtomicState(2, 1, 0, Z, mu)
        spec = pr.TransitionSpec(s1, p1)
        assert spec.gap == p1.energy - s1.energy
    with pytest.raises(ValueError):
        pr.TransitionSpec(AtomicState(1, 0, 0, 1.0), AtomicState(2, 1, 0, 2.0))


def test_zero_duration_gives_zero_probability_exactly():
    assert pr.vacuum_probability(EXC_MIN, 0.0).P0 == 0.0
    assert pr.emission_probability(EM_MIN, 0.0) == 0.0
    assert pr.mode_sum_vacuum_probability(EXC_MIN, 0.0).P0 == 0.0
    assert pr.dipole_limit_probability(EXC_MIN, 0.0, omega_max=0.01 * GAP) == 0.0


def test_vacuum_probability_nonnegative_and_small_time_quadratic():
    rng = np.random.default_rng(31)
    for _ in range(8):
        Z = float(rng.integers(1, 9))
        coupling = Coupling.MINIMAL if rng.random() < 0.5 else Coupling.DIPOLE
        spec = pr.TransitionSpec(AtomicState(1, 0, 0, Z),
                                 AtomicState(2, 1, 0, Z), coupling)
        T = float(rng.uniform(0.01, 30.0)) / spec.gap
        res = pr.vacuum_probability(spec, T)
        assert res.P0 >= 0.0
        assert res.Pphi == 0.0
        assert res.total == res.P0
    # for T much shorter than every atomic scale P grows as T^2 with the
    # full spectral moment of the envelope as coefficient
    a = orbit_radius(1.0, 1.0)
    for m, moment in ((4, 27.0 / 64.0), (6, None)):
        spec = EXC_MIN if m == 4 else EXC_DIP
        if moment is None:
            moment, _ = sp_integrate.quad(
                lambda u: u**3 * (1 + 4 * u * u / 9.0) ** -6, 0.0, np.inf)
        for tau in (1e-3, 3e-4):
            T = tau * a
            res = pr.vacuum_probability(spec, T)
            expect = pr.dimensionless_prefactor() * moment * tau**2
            assert abs(res.P0 - expect) < 2e-6 * expect


def test_velocity_flavor_dominates_length_flavor_pointwise():
    for mult in (0.5, 2.0, 7.0, 60.0):
        T = mult / GAP
        p_min = pr.vacuum_probability(EXC_MIN, T).P0
        p_dip = pr.vacuum_probability(EXC_DIP, T).P0
        assert p_min >= p_dip > 0.0
    assert pr.asymptotic_vacuum_probability(EXC_MIN) > \
        pr.asymptotic_vacuum_probability(EXC_DIP)


def test_finite_time_probability_saturates_to_asymptote():
    for spec in (EXC_MIN, EXC_DIP):
        asym = pr.asymptotic_vacuum_probability(spec)
        finite = pr.vacuum_probability(spec, 1e3 / GAP)
        assert abs(finite.P0 - asym) < 1e-6 * asym


def test_asymptote_against_independent_quadrature():
    """Second numeric route: scipy quad on the dephased integrand."""
    u_tilde = orbit_radius(1.0, 1.0) * GAP
    for spec, m in ((EXC_MIN, 4), (EXC_DIP, 6)):
        ref, _ = sp_integrate.quad(
            lambda u: 2.0 * u**3 * (1 + 4 * u * u / 9.0) ** -m / (u + u_tilde) ** 2,
            0.0, 200.0, limit=400)
        ours = pr.asymptotic_vacuum_probability(spec)
        assert abs(ours - pr.dimensionless_prefactor() * ref) < 1e-9 * ours
    with pytest.raises(ValueError):
        pr.asymptotic_vacuum_probability(EM_MIN)


def test_asymptote_z_sweep_trends():
    """Asymptote falls with Z; model disagreement grows with Z."""
    asyms, rels = [], []
    for Z in (1.0, 3.0, 6.0, 10.0):
        s1 = AtomicState(1, 0, 0, Z)
        p1 = AtomicState(2, 1, 0, Z)
        a_min = pr.asymptotic_vacuum_probability(pr.TransitionSpec(s1, p1, Coupling.MINIMAL))
        a_dip = pr.asymptotic_vacuum_probability(pr.TransitionSpec(s1, p1, Coupling.DIPOLE))
        asyms.append(a_min)
        rels.append(abs(a_min - a_dip) / a_min)
    assert all(x > y for x, y in zip(asyms, asyms[1:]))
    assert all(x < y for x, y in zip(rels, rels[1:]))


def test_mode_sum_route_matches_closed_form():
    for coupling in (Coupling.MINIMAL, Coupling.DIPOLE):
        spec = pr.TransitionSpec(ONE_S, TWO_PZ, coupling)
        for mult in (1.0, 10.0, 100.0):
            T = mult / GAP
            closed = pr.vacuum_probability(spec, T).P0
            summed = pr.mode_sum_vacuum_probability(spec, T).P0
            assert abs(summed - closed) < 1e-6 * closed


def test_general_pair_dispatch_uses_mode_sum():
    """Non-(1s,2p) transitions run through the general path and stay tiny."""
    spec = pr.TransitionSpec(ONE_S, AtomicState(2, 0, 0), Coupling.DIPOLE)
    res = pr.vacuum_probability(spec, 4.0 / GAP, u_max=20.0)
    # 1s->2s has no one-photon dipole channel: probability at noise level
    assert res.P0 >= 0.0
    assert res.P0 < 1e-12


def test_spectral_kernel_integrand_nonnegative_and_consistent():
    T = 2.0 / GAP
    kern = pr.SpectralKernel(geometry_exponent=4,
                             prefactor=pr.spectral_prefactor(),
                             Omega=GAP, T=T)
    omegas = np.linspace(0.0, 40.0 * GAP, 4001)
    vals = kern.integrand(omegas)
    assert np.all(vals >= 0.0)
    # with a cutoff keeping the oscillation count small, scipy quadrature of
    # the dimensionful integrand reproduces the dimensionless engine
    lam = 8.0 * GAP
    cut = pr.SpectralKernel(geometry_exponent=4,
                            prefactor=pr.spectral_prefactor(),
                            Omega=GAP, T=T, Lambda=lam)
    direct, _ = sp_integrate.quad(lambda w: float(cut.integrand(w)),
                                  0.0, lam, limit=400)
    spec_cut = pr.TransitionSpec(ONE_S, TWO_PZ, Coupling.MINIMAL,
                                 SwitchingProfile(T=T, Lambda=lam))
    engine = pr.vacuum_probability(spec_cut, T).P0
    assert abs(direct - engine) < 1e-8 * engine
    # cutoff zeroes the integrand beyond Lambda
    assert float(cut.integrand(9.0 * GAP)) == 0.0
    assert float(cut.integrand(4.0 * GAP)) > 0.0


def test_cutoff_is_read_from_switching_profile():
    a = orbit_radius(1.0, 1.0)
    lam = 1.0 / a
    spec_cut = pr.TransitionSpec(ONE_S, TWO_PZ, Coupling.MINIMAL,
                                 SwitchingProfile(T=1.0, Lambda=lam))
    full = pr.asymptotic_vacuum_probability(EXC_MIN)
    cut = pr.asymptotic_vacuum_probability(spec_cut)
    assert cut < full
    ref, _ = sp_integrate.quad(
        lambda u: 2.0 * u**3 * (1 + 4 * u * u / 9.0) ** -4 / (u + a * GAP) ** 2,
        0.0, 1.0, limit=200)
    assert abs(cut - pr.dimensionless_prefactor() * ref) < 5e-9 * cut


def test_emission_rate_closed_form_and_si_anchor():
    """Rate assembly equals (2/3)^8 mu Z^4 alpha^5 / envelope^m exactly."""
    alpha = FINE_STRUCTURE_CONSTANT
    for Z, mu in ((1.0, 1.0), (3.0, 1.0), (7.0, 0.911)):
        for coupling, m in ((Coupling.MINIMAL, 4), (Coupling.DIPOLE, 6)):
            spec = pr.TransitionSpec(AtomicState(2, 1, 0, Z, mu),
                                     AtomicState(1, 0, 0, Z, mu), coupling)
            rate = pr.emission_rate(spec)
            closed = (2.0 / 3.0) ** 8 * mu * Z**4 * alpha**5 \
                / (1.0 + Z**2 * alpha**2 / 16.0) ** m
            assert abs(rate - closed) < 1e-12 * closed
    with pytest.raises(ValueError):
        pr.emission_rate(EXC_MIN)
    assert abs(pr.emission_rate_si(EM_MIN) - 6.2648e8) < 0.002e8


def test_emission_direct_and_asymptotic_routes_agree():
    for spec in (EM_MIN, EM_DIP):
        for tau in (100.0, 400.0):
            T = tau / abs(spec.gap)
            direct = pr.emission_probability(spec, T, method="direct")
            asym = pr.emission_probability(spec, T, method="asymptotic")
            assert abs(direct - asym) < 1e-10 * direct
    with pytest.raises(ValueError):
        pr.emission_probability(EM_MIN, 1.0, method="simpson")
    with pytest.raises(ValueError):
        pr.emission_probability(EXC_MIN, 1.0)


def test_emission_slope_matches_rate():
    rate = pr.emission_rate(EM_MIN)
    t1, t2 = 250.0 / abs(EM_MIN.gap), 500.0 / abs(EM_MIN.gap)
    slope = (pr.emission_probability(EM_MIN, t2, method="direct")
             - pr.emission_probability(EM_MIN, t1, method="direct")) / (t2 - t1)
    assert abs(slope - rate) < 0.01 * rate


def test_finite_part_window_independence():
    u0 = orbit_radius(1.0, 1.0) * abs(EM_MIN.gap)

    def g_complex(u):
        u = np.asarray(u, dtype=complex)
        return u**3 * (1.0 + (4.0 / 9.0) * u * u) ** -4.0

    values = [pr._finite_part(g_complex, u0, 200.0, window=h)
              for h in (0.9 * u0, 0.35 * u0)]
    assert abs(values[0] - values[1]) < 1e-9 * abs(values[0])
    with pytest.raises(ValueError):
        pr._finite_part(g_complex, u0, 200.0, window=2.0 * u0)


def test_coherent_pulse_scaling_and_validation():
    s = 0.2
    pulse = pr.CoherentGaussianPulse(k0=(GAP, 0.0, 0.0), sigma=(GAP / 100,) * 3,
                                     lambda0=1, Tstar=0.0, amplitude_scale=s)
    T = 100.0 / GAP
    base = pr.coherent_Pphi(EXC_MIN, pulse, T)
    assert base > 0.0
    for factor in (2.0, 5.0):
        scaled = pr.CoherentGaussianPulse(k0=(GAP, 0.0, 0.0),
                                          sigma=(GAP / 100,) * 3, lambda0=1,
                                          Tstar=0.0,
                                          amplitude_scale=factor * s)
        assert abs(pr.coherent_Pphi(EXC_MIN, scaled, T)
                   - factor**2 * base) < 1e-12 * factor**2 * base
    zero = pr.CoherentGaussianPulse(k0=(GAP, 0.0, 0.0), sigma=(GAP / 100,) * 3,
                                    amplitude_scale=0.0)
    assert pr.coherent_Pphi(EXC_MIN, zero, T) == 0.0
    # momentum box reaching omega <= 0 is rejected
    with pytest.raises(ValueError):
        pr.CoherentGaussianPulse(k0=(GAP, 0.0, 0.0), sigma=(GAP / 2,) * 3)
    with pytest.raises(ValueError):
        pr.CoherentGaussianPulse(k0=(GAP, 0.0, 0.0), sigma=(GAP / 100,) * 3,
                                 lambda0=3)


def test_transition_probability_composes_vacuum_and_pulse():
    T = 50.0 / GAP
    vac = pr.transition_probability(EXC_MIN, pr.Vacuum(), T)
    assert vac.Pphi == 0.0
    assert vac.total == vac.P0
    pulse = pr.CoherentGaussianPulse(k0=(GAP, 0.0, 0.0), sigma=(GAP / 100,) * 3,
                                     lambda0=1, amplitude_scale=0.3)
    both = pr.transition_probability(EXC_MIN, pulse, T)
    assert both.P0 == vac.P0
    assert both.Pphi > 0.0
    assert both.total == both.P0 + both.Pphi
    assert abs(both.Pphi - pr.coherent_Pphi(EXC_MIN, pulse, T)) <= 1e-12 * both.Pphi


def test_dipole_limit_flavor_blind_and_warning():
    T = 10.0 / GAP
    small = 0.01 / orbit_radius(1.0, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        v_min = pr.dipole_limit_probability(EXC_MIN, T, omega_max=small)
        v_dip = pr.dipole_limit_probability(EXC_DIP, T, omega_max=small)
    assert v_min == v_dip
    with pytest.warns(UserWarning):
        pr.dipole_limit_probability(EXC_MIN, T, omega_max=1.0 / orbit_radius(1.0, 1.0))
    # ratio against the cutoff vacuum probability approaches 1 from below
    gaps = []
    for u_hi in (0.3, 0.1, 0.03):
        omega_max = u_hi / orbit_radius(1.0, 1.0)
        spec_cut = pr.TransitionSpec(ONE_S, TWO_PZ, Coupling.MINIMAL,
                                     SwitchingProfile(T=T, Lambda=omega_max))
        full = pr.vacuum_probability(spec_cut, T).P0
        taylor = pr.dipole_limit_probability(EXC_MIN, T, omega_max=omega_max)
        gaps.append(abs(taylor / full - 1.0))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3


def test_cutoff_sweep_monotone_and_consistent():
    lams = [0.05, 0.2, 1.0, 5.0, 40.0]
    rows = pr.cutoff_sweep(EXC_MIN, None, lams)
    assert [r[0] for r in rows] == lams
    diffs = [r[3] for r in rows]
    assert all(d >= 0.0 for d in diffs)
    assert all(b >= a for a, b in zip(diffs, diffs[1:]))
    # infinite-T spelling matches the None spelling
    rows_inf = pr.cutoff_sweep(EXC_MIN, math.inf, [1.0])
    assert rows_inf[0] == pr.cutoff_sweep(EXC_MIN, None, [1.0])[0]
    # finite-T sweep stays below the asymptotic one for matching cutoffs
    rows_finite = pr.cutoff_sweep(EXC_MIN, 0.5 / GAP, [1.0])
    assert rows_finite[0][2] < rows[2][2] * 1.05
    with pytest.raises(ValueError):
        pr.cutoff_sweep(EXC_MIN, None, [0.0, 1.0])


def test_vacuum_offset_magnitude_and_m_summed_convenience():
    offset = pr.vacuum_offset()
    assert offset > 0.0
    assert abs(offset - 2.58e-4) < 0.1 * 2.58e-4
    # the three 2p channels contribute equally by symmetry
    total = pr.m_summed_vacuum_probability(
        pr.TransitionSpec(ONE_S, AtomicState(2, 1, 0), Coupling.MINIMAL),
        5.0 / GAP)
    single = pr.vacuum_probability(EXC_MIN, 5.0 / GAP)
    assert abs(total.P0 - 3.0 * single.P0) < 1e-9 * total.P0
