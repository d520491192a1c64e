"""Tests for the semiclassical gauge-freedom audit."""

from __future__ import annotations

import math

import numpy as np
import pytest

from gaugecmp.gaugeaudit import (
    ClassicalField,
    GaugeFunction,
    PlaneWave,
    VectorTerm,
    amplitude,
    chi_element,
    dipole_chi,
    dipole_gauge_check,
    dipole_residual_sweep,
    dressed_L_semiclassical,
    evolved_K,
    gauge_transform,
    invariance_report,
    monomial_chi,
    plane_wave_chi,
    random_polynomial_chi,
)
from gaugecmp.hydrogenic import AtomicState, energy_gap, orbit_radius

OMEGA = energy_gap(1, 2, 1.0, 1.0)
SCALE = orbit_radius(1.0, 1.0)
DRIVE_T = 3.0 / OMEGA

STATE_1S = AtomicState(1, 0, 0)
STATE_2S = AtomicState(2, 0, 0)
STATE_2P0 = AtomicState(2, 1, 0)
STATE_2P1 = AtomicState(2, 1, 1)


def _default_wave(wavelength_parameter: float = 0.02) -> PlaneWave:
    return PlaneWave(
        amplitude=1e-3,
        wavevector=(wavelength_parameter / SCALE, 0.0, 0.0),
        polarization=(0.0, 0.0, 1.0),
        angular_frequency=OMEGA,
        phase=0.4,
    )


def test_plane_wave_validation():
    with pytest.raises(ValueError):
        PlaneWave(1e-3, (1.0, 0.0, 0.0), (1.0, 0.0, 0.0), OMEGA)  # longitudinal
    with pytest.raises(ValueError):
        PlaneWave(1e-3, (1.0, 0.0, 0.0), (0.0, 0.0, 0.0), OMEGA)
    with pytest.raises(ValueError):
        PlaneWave(-1e-3, (1.0, 0.0, 0.0), (0.0, 0.0, 1.0), OMEGA)
    with pytest.raises(ValueError):
        PlaneWave(1e-3, (1.0, 0.0, 0.0), (0.0, 0.0, 1.0), 0.0)
    wave = PlaneWave(1e-3, (0.02 / SCALE, 0.0, 0.0), (0.0, 0.0, 2.0), OMEGA)
    assert wave.polarization == (0.0, 0.0, 1.0)
    assert abs(wave.wavelength_parameter - 0.02) < 1e-15


def test_plane_wave_derived_fields_match_finite_differences():
    """E = -dA/dt and B = curl A, checked against central differences."""
    wave = _default_wave()
    field = wave.field()
    rng = np.random.default_rng(31)
    points = rng.uniform(-2.0 * SCALE, 2.0 * SCALE, size=(4, 3))
    times = rng.uniform(0.0, DRIVE_T, size=4)
    dt = 1e-6 / OMEGA
    dx = 1e-7 * SCALE
    for (x, y, z), t in zip(points, times):
        e_num = -(
            field.vector_potential(x, y, z, t + dt)
            - field.vector_potential(x, y, z, t - dt)
        ) / (2.0 * dt)
        e_ana = field.electric_field(x, y, z, t)
        assert np.max(np.abs(e_num - e_ana)) < 1e-8 * OMEGA * wave.amplitude

        def A(px, py, pz):
            return field.vector_potential(px, py, pz, t)

        curl_num = np.array([
            (A(x, y + dx, z)[2] - A(x, y - dx, z)[2]
             - A(x, y, z + dx)[1] + A(x, y, z - dx)[1]),
            (A(x, y, z + dx)[0] - A(x, y, z - dx)[0]
             - A(x + dx, y, z)[2] + A(x - dx, y, z)[2]),
            (A(x + dx, y, z)[1] - A(x - dx, y, z)[1]
             - A(x, y + dx, z)[0] + A(x, y - dx, z)[0]),
        ]) / (2.0 * dx)
        b_ana = field.magnetic_field(x, y, z, t)
        k_norm = np.linalg.norm(wave.wavevector)
        assert np.max(np.abs(curl_num - b_ana)) < 1e-6 * k_norm * wave.amplitude


def test_gauge_transform_identity_and_time_only_shift():
    """Empty chi is the identity; chi = f(t) only shifts the scalar potential."""
    field = _default_wave().field()
    same = gauge_transform(field, GaugeFunction())
    x, y, z, t = 0.7 * SCALE, -0.3 * SCALE, 1.1 * SCALE, 0.4 * DRIVE_T
    assert np.array_equal(same.vector_potential(x, y, z, t),
                          field.vector_potential(x, y, z, t))
    assert same.scalar_potential(x, y, z, t) == field.scalar_potential(x, y, z, t)

    c, nu, delta = 2.5, 1.7 * OMEGA, 0.3
    f_only = monomial_chi(c, (0, 0, 0), nu, delta, SCALE)
    shifted = gauge_transform(field, f_only)
    assert np.max(np.abs(
        shifted.vector_potential(x, y, z, t) - field.vector_potential(x, y, z, t)
    )) < 1e-18
    expected_shift = -c * nu * math.sin(nu * t + delta)
    assert abs(
        shifted.scalar_potential(x, y, z, t)
        - field.scalar_potential(x, y, z, t)
        - expected_shift
    ) < 1e-15 * abs(expected_shift)
    assert np.max(np.abs(
        shifted.electric_field(x, y, z, t) - field.electric_field(x, y, z, t)
    )) < 1e-18


def test_electric_and_magnetic_fields_are_gauge_invariant():
    """E and B agree pointwise at 1e-12 of the scales being cancelled."""
    field = _default_wave().field()
    rng = np.random.default_rng(47)
    chis = [
        plane_wave_chi(0.8, (0.3 / SCALE, 0.1 / SCALE, 0.0), 1.3 * OMEGA, 0.2),
        random_polynomial_chi(rng, 1.0, OMEGA, SCALE),
        dipole_chi(_default_wave()),
    ]
    axis = np.linspace(-2.0 * SCALE, 2.0 * SCALE, 10)
    gx, gy, gz = np.meshgrid(axis, axis, axis, indexing="ij")
    times = (0.0, 0.31 * DRIVE_T, 0.77 * DRIVE_T)
    for chi in chis:
        transformed = gauge_transform(field, chi)
        scale = max(
            float(np.max(np.abs(field.electric_field(gx, gy, gz, t)))) for t in times
        )
        scale = max(scale, max(
            float(np.max(np.abs(term.time_derivative(t) * term.gradient(gx, gy, gz))))
            for term in chi.terms for t in times
        ))
        for t in times:
            e_dev = np.max(np.abs(
                transformed.electric_field(gx, gy, gz, t)
                - field.electric_field(gx, gy, gz, t)
            ))
            assert e_dev < 1e-12 * scale
            assert np.array_equal(
                transformed.magnetic_field(gx, gy, gz, t),
                field.magnetic_field(gx, gy, gz, t),
            )


def test_monomial_chi_derivatives_match_finite_differences():
    chi = monomial_chi(1.3, (1, 0, 2), 1.9 * OMEGA, 0.8, SCALE, kind="sin")
    rng = np.random.default_rng(5)
    points = rng.uniform(-1.5 * SCALE, 1.5 * SCALE, size=(5, 3))
    t = 0.6 / OMEGA
    dx = 1e-6 * SCALE
    dt = 1e-7 / OMEGA
    for x, y, z in points:
        grad = chi.gradient(x, y, z, t)
        num = np.array([
            chi.value(x + dx, y, z, t) - chi.value(x - dx, y, z, t),
            chi.value(x, y + dx, z, t) - chi.value(x, y - dx, z, t),
            chi.value(x, y, z + dx, t) - chi.value(x, y, z - dx, t),
        ]) / (2.0 * dx)
        assert np.max(np.abs(grad - num)) < 1e-8 / SCALE
        dot = chi.time_derivative(x, y, z, t)
        num_dot = (chi.value(x, y, z, t + dt) - chi.value(x, y, z, t - dt)) / (2.0 * dt)
        assert abs(dot - num_dot) < 1e-6 * OMEGA


def test_dipole_chi_equals_vector_potential_dot_position():
    wave = _default_wave()
    chi = dipole_chi(wave)
    field = wave.field()
    rng = np.random.default_rng(6)
    for x, y, z in rng.uniform(-2.0 * SCALE, 2.0 * SCALE, size=(6, 3)):
        for t in (0.0, 0.23 * DRIVE_T, 0.91 * DRIVE_T):
            a_dot_x = field.vector_potential(x, y, z, t) @ np.array([x, y, z])
            assert abs(chi.value(x, y, z, t) - a_dot_x) < 1e-15 * max(abs(a_dot_x), 1e-6)
    dx = 1e-6 * SCALE
    x, y, z, t = 0.4 * SCALE, -0.9 * SCALE, 0.6 * SCALE, 0.37 * DRIVE_T
    grad = chi.gradient(x, y, z, t)
    num = np.array([
        chi.value(x + dx, y, z, t) - chi.value(x - dx, y, z, t),
        chi.value(x, y + dx, z, t) - chi.value(x, y - dx, z, t),
        chi.value(x, y, z + dx, t) - chi.value(x, y, z - dx, t),
    ]) / (2.0 * dx)
    assert np.max(np.abs(grad - num)) < 1e-8 * wave.amplitude


def test_dressing_vanishes_for_degenerate_pair_without_potentials():
    """With no external potentials the degenerate dressing coefficient is zero."""
    free = ClassicalField()
    assert dressed_L_semiclassical(STATE_2S, STATE_2P0, free, 0.8 / OMEGA) == 0.0
    assert dressed_L_semiclassical(STATE_2P1, STATE_2P0, free, 0.8 / OMEGA) == 0.0


def test_dressing_for_pure_gauge_field_equals_gauge_matrix_element():
    """For potentials that are pure gauge, L_ab(t) is -<b|chi(t)|a> exactly
    (plus the t = 0 element back in the degenerate branch)."""
    chi = monomial_chi(1.2, (0, 0, 1), 1.4 * OMEGA, 0.6, SCALE)
    pure = gauge_transform(ClassicalField(), chi)
    for t in (0.3 / OMEGA, 1.7 / OMEGA):
        value = dressed_L_semiclassical(STATE_1S, STATE_2P0, pure, t)
        expected = -chi_element(STATE_1S, STATE_2P0, chi, t)
        assert abs(value - expected) < 1e-12 * max(abs(expected), 1e-3)

        value = dressed_L_semiclassical(STATE_2S, STATE_2P0, pure, t)
        expected = (
            -chi_element(STATE_2S, STATE_2P0, chi, t)
            + chi_element(STATE_2S, STATE_2P0, chi, 0.0)
        )
        assert abs(value - expected) < 1e-12 * max(abs(expected), 1e-3)


def test_dressing_transformation_law():
    """L' = L - <b|chi(t)|a> (degenerate branch restores the t = 0 element)."""
    field = _default_wave().field()
    chi = monomial_chi(0.9, (0, 0, 1), 2.1 * OMEGA, 1.1, SCALE, kind="sin")
    transformed = gauge_transform(field, chi)
    for state_a, state_b, degenerate in (
        (STATE_1S, STATE_2P0, False),
        (STATE_2S, STATE_2P0, True),
        (STATE_2P1, STATE_2P0, True),
    ):
        for t in (0.4 / OMEGA, 1.9 / OMEGA):
            before = dressed_L_semiclassical(state_a, state_b, field, t)
            after = dressed_L_semiclassical(state_a, state_b, transformed, t)
            predicted = before - chi_element(state_a, state_b, chi, t)
            if degenerate:
                predicted += chi_element(state_a, state_b, chi, 0.0)
            assert abs(after - predicted) < 1e-10 * max(abs(after), abs(before), 1e-3)


def test_evolved_coefficient_closed_form_two_level():
    """Single cosine-modulated gradient term against the analytic integral."""
    chi = monomial_chi(1.0, (0, 0, 1), 0.0, 0.0, SCALE)
    gradient_profile = chi.terms[0].gradient
    omega0 = 0.7 * OMEGA
    field = ClassicalField(vector_terms=(
        VectorTerm(
            time=lambda t: np.cos(omega0 * t),
            time_derivative=lambda t: -omega0 * np.sin(omega0 * t),
            profile=gradient_profile,
            curl=lambda x, y, z: np.zeros((3,) + np.shape(x)),
        ),
    ))
    delta = STATE_2P0.energy - STATE_1S.energy
    coefficient = dressed_L_semiclassical(STATE_1S, STATE_2P0, field, 0.0)
    T = 2.3 / OMEGA

    def ramp(w: float) -> complex:
        return (np.exp(1j * w * T) - 1.0) / (1j * w)

    integral = 0.5 * (ramp(delta + omega0) + ramp(delta - omega0))
    expected = 1j * delta * coefficient * integral + coefficient
    value = evolved_K(STATE_1S, STATE_2P0, field, T)
    assert abs(value - expected) < 1e-12 * abs(expected)


def test_evolved_coefficient_reduces_to_dressing_offset():
    """No interaction gives K = L(0); T = 0 gives K(0) = L(0)."""
    free = ClassicalField()
    for T in (0.0, 1.3 / OMEGA):
        assert evolved_K(STATE_1S, STATE_2P0, free, T) == 0.0
    field = _default_wave().field()
    offset = dressed_L_semiclassical(STATE_1S, STATE_2P0, field, 0.0)
    assert evolved_K(STATE_1S, STATE_2P0, field, 0.0) == offset
    with pytest.raises(ValueError):
        evolved_K(STATE_1S, STATE_2P0, field, -1.0)


def test_evolved_coefficient_transformation_law():
    """K' = K - <k|chi(T)|l> e^{i(E_k-E_l)T} (+ t = 0 element when degenerate)."""
    field = _default_wave().field()
    chi = monomial_chi(1.1, (0, 0, 1), 0.9 * OMEGA, 0.2, SCALE)
    transformed = gauge_transform(field, chi)
    T = 2.2 / OMEGA
    for initial, final, degenerate in (
        (STATE_1S, STATE_2P0, False),
        (STATE_2S, STATE_2P0, True),
        (STATE_2P1, STATE_2P0, True),
    ):
        before = evolved_K(initial, final, field, T)
        after = evolved_K(initial, final, transformed, T)
        shift = chi_element(initial, final, chi, T) * np.exp(
            1j * (final.energy - initial.energy) * T
        )
        predicted = before - shift
        if degenerate:
            predicted += chi_element(initial, final, chi, 0.0)
        assert abs(after - predicted) < 1e-10 * max(abs(after), abs(before), 1e-3)


def test_amplitude_validation():
    field = _default_wave().field()
    with pytest.raises(ValueError):
        amplitude(STATE_1S, STATE_1S, field, DRIVE_T)
    helium_state = AtomicState(2, 1, 0, Z=2.0)
    with pytest.raises(ValueError):
        amplitude(STATE_1S, helium_state, field, DRIVE_T)


def test_dressed_amplitude_is_gauge_invariant():
    """Random polynomial gauge functions move the dressed amplitudes by < 1e-10."""
    field = _default_wave().field()
    pairs = (
        (STATE_1S, STATE_2P0),
        (STATE_2P1, STATE_2P0),
        (STATE_2S, STATE_2P0),
    )
    base = [amplitude(a, b, field, DRIVE_T) for a, b in pairs]
    reference = max(abs(v) for v in base)
    rng = np.random.default_rng(90)
    for _ in range(5):
        chi = random_polynomial_chi(rng, 1.0, OMEGA, SCALE)
        transformed = gauge_transform(field, chi)
        for (state_a, state_b), amp0 in zip(pairs, base):
            amp1 = amplitude(state_a, state_b, transformed, DRIVE_T)
            assert abs(amp1 - amp0) < 1e-10 * reference


def test_undressed_amplitude_breaks_gauge_invariance_linearly():
    """Naive amplitudes shift by O(chi), exactly linearly in its strength."""
    field = _default_wave().field()
    base = amplitude(STATE_1S, STATE_2P0, field, DRIVE_T, dressed=False)
    deviations = []
    for strength in (0.5, 1.0, 2.0):
        chi = monomial_chi(strength, (0, 0, 1), 1.3 * OMEGA, 0.7, SCALE)
        moved = amplitude(
            STATE_1S, STATE_2P0, gauge_transform(field, chi), DRIVE_T, dressed=False
        )
        deviations.append(abs(moved - base) / abs(base))
    assert deviations[1] > 1e-3
    assert abs(deviations[0] - 0.5 * deviations[1]) < 1e-9 * deviations[1]
    assert abs(deviations[2] - 2.0 * deviations[1]) < 1e-9 * deviations[1]


def test_dipole_residual_sweep_linear_law():
    """Uniform-field error: residual = slope * |k| a with negligible intercept."""
    sweep = dipole_residual_sweep()
    assert sweep.slope > 0.0
    assert abs(sweep.intercept) < 1e-10
    ratios = [r / lam for r, lam in zip(sweep.residuals, sweep.wavelength_parameters)]
    for ratio in ratios[1:]:
        assert abs(ratio - ratios[0]) < 1e-3 * ratios[0]
    # the parity-changing channel is protected to second order: quadrupling
    # the retardation at fixed grid spacing multiplies its residual by ~16
    allowed = [r.allowed_channel_residual for r in sweep.reports]
    assert 3.7 < allowed[1] / allowed[0] < 4.3
    assert 3.7 < allowed[2] / allowed[1] < 4.3
    for report in sweep.reports:
        assert report.exact_transform_deviation < 1e-10


def test_dipole_check_at_zero_and_large_retardation():
    """k = 0 agrees exactly; |k| a = 0.1 leaves an order-0.1 relative residual."""
    omega = OMEGA
    still = PlaneWave(1e-3, (0.0, 0.0, 0.0), (0.0, 0.0, 1.0), omega, phase=0.4)
    report = dipole_gauge_check(still, DRIVE_T)
    assert report.residual < 1e-12
    assert report.allowed_channel_residual < 1e-10

    fast = PlaneWave(1e-3, (0.1 / SCALE, 0.0, 0.0), (0.0, 0.0, 1.0), omega, phase=0.4)
    report = dipole_gauge_check(fast, DRIVE_T)
    assert 0.03 < report.residual < 0.5


def test_invariance_report_passes_every_case():
    report = invariance_report()
    labels = {case.label: case for case in report.cases}
    dressed = labels["dressed-invariance-20-random-gauge-functions"]
    assert dressed.value < 1e-10
    assert labels["naive-deviation-floor"].value > 1e-3
    assert labels["naive-deviation-growth-slope"].value > 0.0
    assert report.passed
    text = report.summary()
    assert "audit PASSED" in text
    assert text.count("PASS") >= len(report.cases)
