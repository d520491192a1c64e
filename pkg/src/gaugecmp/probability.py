"""Transition probabilities for a sharply switched atom-field coupling.

The probability splits into a field-preparation part and a vacuum part,
P = P_phi + P0. For the 1s <-> 2p pair the vacuum part collapses to a
one-dimensional spectral integral

    P0(T) = C  Int_0^inf dw  w^3 (1 + 4 a^2 w^2 / 9)^{-m}
                 4 sin^2((w + gap) T / 2) / (w + gap)^2

with a = a0/Z, m = 4 for the velocity-type (minimal) coupling and m = 6
for the length-type (dipole) coupling, and a single shared prefactor C.
Everything here is computed in the dimensionless frequency u = w a, where
the prefactor becomes the Z-independent D = C / a^2.

C is assembled from the mode amplitudes (charge, mode normalization,
transverse coupling scalar, angular measure); its absolute scale is
validated in the test suite against the independently known spontaneous
decay rate of the 2p level rather than trusted from any printed constant.

Signed gap conventions: gap = E_final - E_initial > 0 is excitation (the
spectral integrand is everywhere off-resonant and P0 saturates), gap < 0
is emission (the integrand is resonant at w = -gap and P0 grows linearly
at the golden-rule rate, plus a constant offset captured by a finite-part
integral).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Union

import numpy as np

from .constants import (
    ELEMENTARY_CHARGE_NATURAL,
    HYDROGEN_REDUCED_MASS,
    PhysicalConstants,
    seconds_per_natural_time,
)
from .hydrogenic import AtomicState, orbit_radius
from .kernels import Coupling, SwitchingProfile, switching_sinc
from .matrixelements import (
    angular_strength,
    envelope_1s2p,
    transverse_amplitude_1s2p,
)
from .quadrature import NonConvergenceError, integrate_adaptive, integrate_piecewise

__all__ = [
    "Vacuum",
    "CoherentGaussianPulse",
    "FieldPreparation",
    "TransitionSpec",
    "SpectralKernel",
    "ProbabilityResult",
    "dimensionless_prefactor",
    "spectral_prefactor",
    "geometry_exponent",
    "geometry_resonance_constant",
    "vacuum_probability",
    "mode_sum_vacuum_probability",
    "asymptotic_vacuum_probability",
    "vacuum_offset",
    "emission_probability",
    "emission_result",
    "emission_offset",
    "emission_rate",
    "emission_rate_si",
    "dipole_limit_probability",
    "dipole_limit_si_prefactor",
    "coherent_Pphi",
    "transition_probability",
    "cutoff_sweep",
    "m_summed_vacuum_probability",
]


# ----------------------------------------------------------------------
# Domain types
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Vacuum:
    """Field prepared in its ground state: only the creation branch acts."""


@dataclass(frozen=True)
class CoherentGaussianPulse:
    """Gaussian coherent pulse centered at k0 with per-axis widths sigma.

    The momentum profile is L2-normalized before amplitude_scale, so the
    mean photon number equals amplitude_scale**2. lambda0 picks the
    polarization (1 polar, 2 azimuthal); Tstar shifts the launch time.
    """

    k0: tuple[float, float, float]
    sigma: tuple[float, float, float]
    lambda0: int = 1
    Tstar: float = 0.0
    amplitude_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.lambda0 not in (1, 2):
            raise ValueError("lambda0 must be 1 or 2")
        if any(s <= 0 for s in self.sigma):
            raise ValueError("sigma components must be positive")
        if self.amplitude_scale < 0:
            raise ValueError("amplitude_scale must be nonnegative")
        if np.linalg.norm(self.k0) <= 6.0 * max(self.sigma):
            raise ValueError("pulse momentum box spans nonpositive frequencies")


FieldPreparation = Union[Vacuum, CoherentGaussianPulse]


@dataclass(frozen=True)
class TransitionSpec:
    """One transition: states, coupling flavor, switching window."""

    initial: AtomicState
    final: AtomicState
    coupling: Coupling = Coupling.MINIMAL
    switching: SwitchingProfile | None = None

    def __post_init__(self) -> None:
        if (self.initial.Z, self.initial.mu_e) != (self.final.Z, self.final.mu_e):
            raise ValueError("states must share Z and mu_e")
        object.__setattr__(self, "coupling", Coupling(str(getattr(
            self.coupling, "value", self.coupling)).lower()))

    @property
    def gap(self) -> float:
        """E_final - E_initial; positive for excitation, negative for emission."""
        return self.final.energy - self.initial.energy

    @property
    def Z(self) -> float:
        return self.final.Z

    @property
    def mu_e(self) -> float:
        return self.final.mu_e

    @property
    def cutoff(self) -> float | None:
        return self.switching.Lambda if self.switching is not None else None

    def is_1s2p(self) -> bool:
        lo, hi = sorted((self.initial, self.final), key=lambda s: s.n)
        return (lo.n, lo.l) == (1, 0) and (hi.n, hi.l) == (2, 1)


def geometry_exponent(coupling: Coupling) -> int:
    """Probability-level envelope exponent: 4 velocity-type, 6 length-type."""
    return 4 if Coupling(coupling) is Coupling.MINIMAL else 6


@dataclass(frozen=True)
class SpectralKernel:
    """The factorized one-dimensional vacuum integrand for 1s <-> 2p."""

    geometry_exponent: int
    prefactor: float
    Omega: float
    T: float
    Z: float = 1.0
    mu_e: float = 1.0
    Lambda: float | None = None

    def integrand(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        env = envelope_1s2p(omega, self.Z, self.mu_e)
        half = 0.5 * (omega + self.Omega)
        osc = np.where(half == 0.0, self.T**2,
                       np.sin(np.where(half == 0.0, 1.0, half) * self.T) ** 2
                       / np.where(half == 0.0, 1.0, half) ** 2)
        out = self.prefactor * omega**3 * env ** (-self.geometry_exponent) * osc
        if self.Lambda is not None:
            out = np.where(omega > self.Lambda, 0.0, out)
        return out


@dataclass(frozen=True)
class ProbabilityResult:
    """P0 + Pphi decomposition with a quadrature error estimate."""

    P0: float
    Pphi: float
    quad_error: float = 0.0

    @property
    def total(self) -> float:
        return self.P0 + self.Pphi


# ----------------------------------------------------------------------
# Prefactors
# ----------------------------------------------------------------------

def dimensionless_prefactor() -> float:
    """D = C / a^2: the Z- and mass-independent spectral prefactor.

    Assembled from the squared creation-branch amplitude integrated over
    modes: q^2/(2 (2pi)^3) x (8 pi / 3) x (16 sqrt2 / 81)^2 / (mu gap a)^2
    with mu gap a^2 = 3/8, which collapses to 65536 alpha / (177147 pi).
    """
    alpha = PhysicalConstants().alpha
    return 65536.0 * alpha / (177147.0 * math.pi)


def spectral_prefactor(Z: float = 1.0, mu_e: float = 1.0) -> float:
    """C in natural units (carries a^2 = (a0/Z)^2)."""
    return dimensionless_prefactor() * orbit_radius(Z, mu_e) ** 2


def geometry_resonance_constant(Z: float = 1.0, mu_e: float = 1.0) -> float:
    """Resonance value of the envelope shift, normalized by Z^2.

    (envelope(|gap|) - 1) / Z^2 = alpha^2 / 16 for every Z and mu_e: the
    1s <-> 2p geometry scale at its own resonance is a pure fine-structure
    number.
    """
    gap = abs(AtomicState(2, 1, 0, Z, mu_e).energy - AtomicState(1, 0, 0, Z, mu_e).energy)
    return float(envelope_1s2p(gap, Z, mu_e) - 1.0) / Z**2


# ----------------------------------------------------------------------
# Dimensionless spectral engine
# ----------------------------------------------------------------------

def _envelope_g(m: int) -> Callable[[np.ndarray], np.ndarray]:
    def g(u):
        u = np.asarray(u)
        return u**3 * (1.0 + (4.0 / 9.0) * u * u) ** (-float(m))
    return g


def _arch_edges(lo: float, hi: float, u_tilde: float, tau: float) -> np.ndarray:
    """Panel edges aligned with the zeros of sin((u + u_tilde) tau / 2)."""
    period = 2.0 * math.pi / tau
    j_lo = math.ceil((lo + u_tilde) / period)
    j_hi = math.floor((hi + u_tilde) / period)
    inner = -u_tilde + period * np.arange(j_lo, j_hi + 1)
    inner = inner[(inner > lo + 1e-15 * (hi - lo)) & (inner < hi - 1e-15 * (hi - lo))]
    edges = np.concatenate([[lo], inner, [hi]])
    if edges.size < 9:
        edges = np.linspace(lo, hi, 33)
    return edges


def _spectral_probability(g: Callable[[np.ndarray], np.ndarray], u_tilde: float,
                          tau: float, u_max: float,
                          rel_tol: float = 1e-9,
                          abs_tol: float = 1e-18) -> tuple[float, float]:
    """Int_0^{u_max} g(u) 4 sin^2((u+u_tilde) tau/2) / (u+u_tilde)^2 du.

    Arch-aligned panel quadrature on the oscillatory head; beyond a
    crossover u_s the oscillation is replaced by its mean 2/(u+u_tilde)^2
    with the leading boundary term of the cosine part evaluated explicitly
    and the rest bounded into the error estimate. The absolute floor keeps
    identically-vanishing densities (pure roundoff noise) convergent.
    """
    if tau < 0.0:
        raise ValueError("duration must be nonnegative")
    if tau == 0.0:
        return 0.0, 0.0

    def oscillatory(u: np.ndarray) -> np.ndarray:
        x = u + u_tilde
        half = 0.5 * x * tau
        safe = np.where(x == 0.0, 1.0, x)
        return g(u) * np.where(
            x == 0.0, tau * tau, 4.0 * np.sin(half) ** 2 / (safe * safe))

    n_osc = tau * u_max / (2.0 * math.pi)
    if n_osc <= 4000.0:
        edges = _arch_edges(0.0, u_max, u_tilde, tau)
        value, err = integrate_piecewise(oscillatory, edges, abs_tol=abs_tol,
                                         rel_tol=rel_tol)
        return value, err

    # Crossover: find the smallest u_s >= 5 where the cosine-tail bound is
    # negligible relative to a rough size estimate of the integral.
    rough = max(abs(float(np.max(np.abs(oscillatory(np.linspace(
        1e-3, min(5.0, u_max), 200)))))) * 2.0, 1e-300)
    target = rel_tol * rough * 0.05

    def G(u):
        u = np.asarray(u, dtype=float)
        return g(u) / (u + u_tilde) ** 2

    u_s = 5.0
    while u_s < u_max and abs(float(G(np.array([u_s]))[0])) * 4.0 / tau > target:
        u_s *= 1.3
    u_s = min(u_s, u_max)

    edges = _arch_edges(0.0, u_s, u_tilde, tau)
    head, err_head = integrate_piecewise(oscillatory, edges, abs_tol=abs_tol,
                                         rel_tol=rel_tol)
    if u_s >= u_max:
        return head, err_head

    mean_tail, err_tail = integrate_adaptive(
        lambda u: 2.0 * G(u), u_s, u_max, abs_tol=target, rel_tol=rel_tol)

    # cosine part: -2 Int G cos((u+u_tilde) tau) du; leading boundary term
    # [G sin / tau] evaluated, next order bounded via a coarse |G'| scan.
    def boundary(u: float) -> float:
        return float(G(np.array([u]))[0]) * math.sin((u + u_tilde) * tau)

    cos_part = -2.0 * (boundary(u_max) - boundary(u_s)) / tau
    scan = np.linspace(u_s, u_max, 257)
    g_prime_var = float(np.sum(np.abs(np.diff(G(scan))))) + 2.0 * abs(
        float(G(np.array([u_s]))[0]))
    err_cos = 4.0 * g_prime_var / tau**2

    value = head + mean_tail + cos_part
    return value, err_head + err_tail + err_cos


def _tail_beyond(m: int, u_max: float) -> float:
    """Bound on the neglected integrand mass above u_max (dephased mean)."""
    # g(u) 4 sin^2 / (u + ...)^2 <= 4 (9/4)^m u^{1 - 2m}
    return 4.0 * (9.0 / 4.0) ** m * u_max ** (2 - 2 * m) / (2 * m - 2)


# ----------------------------------------------------------------------
# Vacuum excitation
# ----------------------------------------------------------------------

_DEFAULT_U_MAX = 200.0


def _u_parameters(spec: TransitionSpec, T: float) -> tuple[float, float, float]:
    a = orbit_radius(spec.Z, spec.mu_e)
    return a, a * spec.gap, T / a


def _effective_u_max(spec: TransitionSpec, u_max: float) -> float:
    if spec.cutoff is not None:
        a = orbit_radius(spec.Z, spec.mu_e)
        return min(u_max, a * spec.cutoff)
    return u_max


def vacuum_probability(spec: TransitionSpec, T: float,
                       u_max: float = _DEFAULT_U_MAX) -> ProbabilityResult:
    """P0(T) = sum over modes of |h_emit|^2, for the 1s <-> 2p pair.

    Uses the closed-form spectral reduction; general pairs go through
    mode_sum_vacuum_probability. A cutoff in spec.switching truncates the
    frequency integral.
    """
    if T < 0.0:
        raise ValueError("duration must be nonnegative")
    if not spec.is_1s2p():
        return mode_sum_vacuum_probability(spec, T)
    if T == 0.0:
        return ProbabilityResult(P0=0.0, Pphi=0.0, quad_error=0.0)
    m = geometry_exponent(spec.coupling)
    a, u_tilde, tau = _u_parameters(spec, T)
    hi = _effective_u_max(spec, u_max)
    value, err = _spectral_probability(_envelope_g(m), u_tilde, tau, hi)
    D = dimensionless_prefactor()
    tail = _tail_beyond(m, hi) if spec.cutoff is None else 0.0
    return ProbabilityResult(P0=D * value, Pphi=0.0, quad_error=D * (err + tail))


def asymptotic_vacuum_probability(spec: TransitionSpec,
                                  u_max: float = _DEFAULT_U_MAX) -> float:
    """Dephased long-time limit of vacuum excitation (sin^2 -> 1/2).

    Only defined for excitation (gap > 0); emission grows secularly.
    """
    if spec.gap <= 0.0:
        raise ValueError("asymptote exists only for excitation (gap > 0)")
    m = geometry_exponent(spec.coupling)
    a, u_tilde, _ = _u_parameters(spec, 1.0)
    hi = _effective_u_max(spec, u_max)
    g = _envelope_g(m)
    value, _ = integrate_adaptive(
        lambda u: 2.0 * g(u) / (u + u_tilde) ** 2, 0.0, hi,
        abs_tol=1e-16, rel_tol=1e-12)
    return dimensionless_prefactor() * value


def vacuum_offset(Z: float = 1.0, mu_e: float = 1.0,
                  cutoff: float | None = None,
                  u_max: float = _DEFAULT_U_MAX) -> float:
    """Long-time vacuum-probability gap between the couplings.

    Returns asymptote(minimal) - asymptote(dipole), which is positive: the
    length-type envelope falls faster, so its saturated probability is
    smaller.
    """
    one_s = AtomicState(1, 0, 0, Z, mu_e)
    two_p = AtomicState(2, 1, 0, Z, mu_e)
    switching = SwitchingProfile(T=1.0, Lambda=cutoff)
    p_min = asymptotic_vacuum_probability(TransitionSpec(
        one_s, two_p, Coupling.MINIMAL, switching), u_max)
    p_dip = asymptotic_vacuum_probability(TransitionSpec(
        one_s, two_p, Coupling.DIPOLE, switching), u_max)
    return p_min - p_dip


def m_summed_vacuum_probability(spec: TransitionSpec, T: float) -> ProbabilityResult:
    """Convenience: vacuum probability summed over the final level's m."""
    total, err = 0.0, 0.0
    for m_f in range(-spec.final.l, spec.final.l + 1):
        final = AtomicState(spec.final.n, spec.final.l, m_f, spec.Z, spec.mu_e)
        res = vacuum_probability(TransitionSpec(
            spec.initial, final, spec.coupling, spec.switching), T)
        total += res.P0
        err += res.quad_error
    return ProbabilityResult(P0=total, Pphi=0.0, quad_error=err)


# ----------------------------------------------------------------------
# Mode-sum route (general pairs; oracle for the closed form)
# ----------------------------------------------------------------------

def _mode_sum_density(spec: TransitionSpec) -> Callable[[float], float]:
    """Raw u^3-weighted polarization-and-angle-summed density at one u."""
    a = orbit_radius(spec.Z, spec.mu_e)
    q = ELEMENTARY_CHARGE_NATURAL

    def raw(u: float) -> float:
        W = angular_strength(spec.final, spec.initial, spec.coupling.value,
                             float(u) / a, sign=-1)
        return q**2 / (2.0 * (2.0 * math.pi) ** 3) * float(u) ** 3 * W / a**2

    return raw


@lru_cache(maxsize=64)
def _mode_sum_interpolant(initial: AtomicState, final: AtomicState,
                          coupling: Coupling, u_max: float, degree: int):
    """Chebyshev fit of the mode-sum density, split at u = 6.

    The density's nearest complex structure sits a distance of order one
    from the real axis, so a single panel over a wide [0, u_max] range
    converges slowly; a short head panel plus a long tail panel restores
    spectral accuracy. Returns (evaluate, fit_rel_err) where the residual
    is measured against raw density values at off-node points.
    """
    spec = TransitionSpec(initial=initial, final=final, coupling=coupling)
    raw = _mode_sum_density(spec)
    split = min(6.0, u_max)

    def fit_panel(lo: float, hi: float):
        def mapped(x):
            us = lo + 0.5 * (np.asarray(x) + 1.0) * (hi - lo)
            return np.array([raw(float(u)) for u in np.atleast_1d(us)])
        coeffs = np.polynomial.chebyshev.chebinterpolate(mapped, degree)
        return np.polynomial.Chebyshev(coeffs, domain=[lo, hi])

    head = fit_panel(0.0, split)
    tail = fit_panel(split, u_max) if u_max > split else None

    def evaluate(u):
        u = np.asarray(u, dtype=float)
        if tail is None:
            return head(u)
        return np.where(u <= split, head(np.minimum(u, split)),
                        tail(np.maximum(u, split)))

    probes = list(np.linspace(0.31, split - 0.17, 5))
    if tail is not None:
        probes += [split + 0.61 * (u_max - split), u_max - 0.23]
    resid, scale = 0.0, 0.0
    for u in probes:
        exact = raw(u)
        resid = max(resid, abs(float(evaluate(u)) - exact))
        scale = max(scale, abs(exact))
    return evaluate, resid / max(scale, 1e-300)


def mode_sum_vacuum_probability(spec: TransitionSpec, T: float,
                                u_max: float = 80.0,
                                degree: int = 64) -> ProbabilityResult:
    """Vacuum excitation via the general matrix-element path.

    The polarization-summed angular strength is sampled at Chebyshev nodes
    (it is smooth and oscillation-free), interpolated, and pushed through
    the same arch-aligned spectral quadrature as the closed form. The fit
    residual, measured at off-node points, feeds the error estimate.
    """
    if T < 0.0:
        raise ValueError("duration must be nonnegative")
    if T == 0.0:
        return ProbabilityResult(P0=0.0, Pphi=0.0, quad_error=0.0)
    a, u_tilde, tau = _u_parameters(spec, T)
    hi = _effective_u_max(spec, u_max)
    evaluate, fit_rel = _mode_sum_interpolant(spec.initial, spec.final,
                                              spec.coupling, hi, degree)
    value, err = _spectral_probability(evaluate, u_tilde, tau, hi)
    if value < 0.0:
        # fitted roundoff noise of an identically vanishing channel
        err += -value
        value = 0.0
    return ProbabilityResult(P0=value, Pphi=0.0,
                             quad_error=err + fit_rel * abs(value))


# ----------------------------------------------------------------------
# Emission
# ----------------------------------------------------------------------

def emission_rate(spec: TransitionSpec) -> float:
    """Golden-rule decay rate in natural time, at the resonant frequency."""
    if spec.gap >= 0.0:
        raise ValueError("emission requires gap < 0")
    m = geometry_exponent(spec.coupling)
    a, u_tilde, _ = _u_parameters(spec, 1.0)
    u0 = -u_tilde
    g0 = float(_envelope_g(m)(np.array([u0]))[0])
    return 2.0 * math.pi * dimensionless_prefactor() * g0 / a


def emission_rate_si(spec: TransitionSpec,
                     mass_in_electron_masses: float = HYDROGEN_REDUCED_MASS) -> float:
    """Decay rate in 1/seconds (natural rate divided by the SI time unit)."""
    return emission_rate(spec) / seconds_per_natural_time(mass_in_electron_masses)


def _finite_part(g_complex: Callable, u0: float, u_max: float,
                 n_fft: int = 64, window: float | None = None) -> float:
    """FP of Int_0^{u_max} g(u)/(u-u0)^2 du: limit of (outer - 2 g(u0)/h).

    The punctured-window limit is taken exactly: for finite h the missing
    inner piece equals 2 sum over even n>=2 of a_n h^{n-1}/(n-1) with a_n
    the Taylor coefficients of g at u0, recovered by an FFT around a circle
    of radius h (g is analytic there). The result is h-independent to
    roundoff, which the tests assert.
    """
    h = window if window is not None else min(0.9 * u0, 0.5 * (u_max - u0), 0.5)
    if not (0.0 < h < u0 and u0 + h < u_max):
        raise ValueError("finite-part window must keep the puncture inside the domain")
    theta = 2.0 * math.pi * np.arange(n_fft) / n_fft
    ring = g_complex(u0 + h * np.exp(1j * theta))
    A = np.fft.fft(ring) / n_fft  # A[n] = a_n h^n for n < n_fft/2
    g0 = float(np.real(A[0]))

    window = 0.0
    for n in range(2, n_fft // 2, 2):
        window += 2.0 * float(np.real(A[n])) / (h * (n - 1))

    def g_real(u):
        return np.real(g_complex(np.asarray(u, dtype=complex)))

    left, _ = integrate_adaptive(lambda u: g_real(u) / (u - u0) ** 2,
                                 0.0, u0 - h, abs_tol=1e-16, rel_tol=1e-12)
    right, _ = integrate_adaptive(lambda u: g_real(u) / (u - u0) ** 2,
                                  u0 + h, u_max, abs_tol=1e-16, rel_tol=1e-12)
    return left + right - 2.0 * g0 / h + window


def emission_offset(spec: TransitionSpec, u_max: float = _DEFAULT_U_MAX) -> float:
    """Constant term of the long-time emission probability P ~ rate*T + offset."""
    if spec.gap >= 0.0:
        raise ValueError("emission requires gap < 0")
    m = geometry_exponent(spec.coupling)
    _, u_tilde, _ = _u_parameters(spec, 1.0)
    u0 = -u_tilde
    hi = _effective_u_max(spec, u_max)

    def g_complex(u):
        u = np.asarray(u, dtype=complex)
        return u**3 * (1.0 + (4.0 / 9.0) * u * u) ** (-float(m))

    return 2.0 * dimensionless_prefactor() * _finite_part(g_complex, u0, hi)


def emission_result(spec: TransitionSpec, T: float, method: str = "auto",
                    u_max: float = _DEFAULT_U_MAX) -> ProbabilityResult:
    """Finite-T emission probability through the same spectral kernel.

    method 'direct' forces arch quadrature, 'asymptotic' forces the
    rate*T + offset form, 'auto' switches at |gap| T = 600 where the two
    agree to well below the quadrature tolerance.
    """
    if spec.gap >= 0.0:
        raise ValueError("emission requires gap < 0")
    if T < 0.0:
        raise ValueError("duration must be nonnegative")
    if T == 0.0:
        return ProbabilityResult(P0=0.0, Pphi=0.0, quad_error=0.0)
    if method not in ("auto", "direct", "asymptotic"):
        raise ValueError("method must be auto, direct or asymptotic")
    if not spec.is_1s2p():
        raise ValueError("emission kernels are implemented for the 1s <-> 2p pair")
    tau_gap = T * abs(spec.gap)
    if method == "auto":
        method = "direct" if tau_gap <= 600.0 else "asymptotic"
    m = geometry_exponent(spec.coupling)
    a, u_tilde, tau = _u_parameters(spec, T)
    hi = _effective_u_max(spec, u_max)
    D = dimensionless_prefactor()
    if method == "direct":
        value, err = _spectral_probability(_envelope_g(m), u_tilde, tau, hi)
        return ProbabilityResult(P0=D * value, Pphi=0.0,
                                 quad_error=D * (err + _tail_beyond(m, hi)))
    rate = emission_rate(spec)
    offset = emission_offset(spec, u_max)
    u0 = -u_tilde
    # residual oscillation decays with the resonance phase u0 * tau = |gap| T
    osc_err = 2.0 * D * (float(_envelope_g(m)(np.array([u0]))[0]) / (u0 * tau_gap)
                         + 6.0 * u0 / tau_gap**2)
    return ProbabilityResult(P0=rate * T + offset, Pphi=0.0, quad_error=osc_err)


def emission_probability(spec: TransitionSpec, T: float, method: str = "auto",
                         u_max: float = _DEFAULT_U_MAX) -> float:
    """Finite-T emission probability (see emission_result for the details)."""
    return emission_result(spec, T, method, u_max).P0


# ----------------------------------------------------------------------
# Dipole-limit Taylor expressions
# ----------------------------------------------------------------------

def dipole_limit_probability(spec: TransitionSpec, T: float,
                             omega_max: float) -> float:
    """Vacuum probability with the geometry envelope frozen at 1.

    Valid for frequencies small against Z/a0; identical for both couplings
    by construction (the envelopes only differ beyond zeroth order).
    """
    if T < 0.0:
        raise ValueError("duration must be nonnegative")
    if omega_max <= 0.0:
        raise ValueError("omega_max must be positive")
    a, u_tilde, tau = _u_parameters(spec, T)
    u_hi = a * omega_max
    if u_hi > 0.5:
        warnings.warn("dipole-limit truncation is only accurate for "
                      "omega_max well below Z/a0", stacklevel=2)
    if T == 0.0:
        return 0.0
    value, _ = _spectral_probability(lambda u: np.asarray(u) ** 3,
                                     u_tilde, tau, u_hi)
    return dimensionless_prefactor() * value


def dipole_limit_si_prefactor(Z: float = 1.0, mu_e: float = 1.0,
                              mass_in_electron_masses: float = HYDROGEN_REDUCED_MASS) -> float:
    """The shared spectral prefactor C expressed in seconds squared."""
    return spectral_prefactor(Z, mu_e) * seconds_per_natural_time(
        mass_in_electron_masses) ** 2


# ----------------------------------------------------------------------
# Coherent pulse
# ----------------------------------------------------------------------

def _lobe_vector(m: int) -> np.ndarray:
    """Direction (conjugated spherical unit vector) of the 2p_m lobe."""
    if m == 0:
        return np.array([0.0, 0.0, 1.0], dtype=complex)
    if m == 1:
        return np.array([-1.0, 1.0j, 0.0], dtype=complex) / math.sqrt(2.0)
    if m == -1:
        return np.array([1.0, 1.0j, 0.0], dtype=complex) / math.sqrt(2.0)
    raise ValueError("2p lobe index must be -1, 0, or 1")


def _closed_amplitudes(spec: TransitionSpec, kx, ky, kz, T: float):
    """Vectorized h_absorb, h_emit over a grid of wavevectors (both pols).

    Uses the closed-form 1s <-> 2p transverse scalar; conventions match
    kernels.mode_amplitude exactly (asserted in tests).
    """
    q = ELEMENTARY_CHARGE_NATURAL
    omega = np.sqrt(kx**2 + ky**2 + kz**2)
    theta = np.arccos(np.clip(kz / np.where(omega == 0, 1.0, omega), -1, 1))
    phi = np.arctan2(ky, kx)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    eps = {
        1: np.stack([ct * cp, ct * sp, -st]),
        2: np.stack([-sp, cp, np.zeros_like(sp)]),
    }
    lobe = _lobe_vector(spec.final.m if spec.gap > 0 else spec.initial.m)
    gap = spec.gap
    g = transverse_amplitude_1s2p(omega, spec.Z, spec.coupling.value, spec.mu_e)
    norm = (2.0 * math.pi) ** -1.5 * np.sqrt(omega / 2.0)
    s_plus = switching_sinc(gap, omega, T, +1)
    s_minus = switching_sinc(gap, omega, T, -1)
    out = {}
    for pol, e in eps.items():
        eps_dot = e[0] * lobe[0] + e[1] * lobe[1] + e[2] * lobe[2]
        if spec.coupling is Coupling.MINIMAL:
            scale = q / (spec.mu_e * gap)
            h1 = +scale * norm * eps_dot * g * s_plus
            h2 = -scale * norm * eps_dot * g * s_minus
        else:
            h1 = -q * norm * eps_dot * g * s_plus
            h2 = +q * norm * eps_dot * g * s_minus
        out[pol] = (h1, h2)
    return out


def _pulse_profile(pulse: CoherentGaussianPulse, kx, ky, kz) -> np.ndarray:
    """L2-normalized Gaussian momentum profile times amplitude_scale."""
    sx, sy, sz = pulse.sigma
    dx, dy, dz = kx - pulse.k0[0], ky - pulse.k0[1], kz - pulse.k0[2]
    norm = (2.0 * math.pi) ** -0.75 / math.sqrt(sx * sy * sz)
    omega = np.sqrt(kx**2 + ky**2 + kz**2)
    phase = np.exp(1j * omega * pulse.Tstar)
    return pulse.amplitude_scale * norm * phase * np.exp(
        -dx**2 / (4 * sx**2) - dy**2 / (4 * sy**2) - dz**2 / (4 * sz**2))


def _coherent_amplitude(spec: TransitionSpec, pulse: CoherentGaussianPulse,
                        T: float, n_start: int = 16, n_cap: int = 128,
                        rel_tol: float = 1e-6) -> tuple[complex, float]:
    """A = Int d^3k (h_absorb^* G^* + h_emit^* G), with node-doubling control."""
    from .quadrature import gauss_legendre_rule

    lo = [pulse.k0[i] - 6.0 * pulse.sigma[i] for i in range(3)]
    hi = [pulse.k0[i] + 6.0 * pulse.sigma[i] for i in range(3)]
    prev = None
    n = n_start
    while True:
        axes = [gauss_legendre_rule(n, lo[i], hi[i]) for i in range(3)]
        kx = axes[0][0][:, None, None]
        ky = axes[1][0][None, :, None]
        kz = axes[2][0][None, None, :]
        w = (axes[0][1][:, None, None] * axes[1][1][None, :, None]
             * axes[2][1][None, None, :])
        amps = _closed_amplitudes(spec, kx, ky, kz, T)
        h1, h2 = amps[pulse.lambda0]
        G = _pulse_profile(pulse, kx, ky, kz)
        A = complex(np.sum(w * (np.conj(h1) * np.conj(G) + np.conj(h2) * G)))
        if prev is not None:
            change = abs(A - prev) / max(abs(A), 1e-300)
            if change < rel_tol:
                return A, change
        if n >= n_cap:
            raise NonConvergenceError(
                "coherent-pulse quadrature did not stabilize", abs(A) ** 2,
                abs(A - (prev if prev is not None else A)))
        prev = A
        n *= 2


def coherent_Pphi(spec: TransitionSpec, pulse: CoherentGaussianPulse,
                  T: float) -> float:
    """P_phi = |sum over pols Int d^3k (h1* G* + h2* G)|^2 for the pulse.

    The profile G lives on one polarization only, so the polarization sum
    collapses; scales exactly as amplitude_scale^2.
    """
    if T < 0.0:
        raise ValueError("duration must be nonnegative")
    if pulse.amplitude_scale == 0.0 or T == 0.0:
        return 0.0
    A, _ = _coherent_amplitude(spec, pulse, T)
    return abs(A) ** 2


def transition_probability(spec: TransitionSpec, preparation: FieldPreparation,
                           T: float) -> ProbabilityResult:
    """Full P = P0 + Pphi for a vacuum or coherent-pulse preparation."""
    base = vacuum_probability(spec, T) if spec.gap > 0 else emission_result(spec, T)
    if isinstance(preparation, Vacuum):
        return base
    if preparation.amplitude_scale == 0.0 or T == 0.0:
        return ProbabilityResult(P0=base.P0, Pphi=0.0, quad_error=base.quad_error)
    A, change = _coherent_amplitude(spec, preparation, T)
    pphi = abs(A) ** 2
    return ProbabilityResult(P0=base.P0, Pphi=pphi,
                             quad_error=base.quad_error + 2.0 * change * pphi)


# ----------------------------------------------------------------------
# Cutoff sweep
# ----------------------------------------------------------------------

def cutoff_sweep(spec: TransitionSpec, T: float | None,
                 lambdas: Sequence[float]) -> list[tuple[float, float, float, float]]:
    """(Lambda, P_dip, P_min, P_min - P_dip) per cutoff.

    Cutoffs are given in units of Z/a0 (i.e. as the dimensionless u value
    where the frequency integral stops). T = None (or inf) uses the
    dephased asymptote; otherwise the finite-T probability. The difference
    is monotone nondecreasing in Lambda because the integrand gap
    (envelope^-4 - envelope^-6 >= 0) is pointwise nonnegative.
    """
    if any(lam <= 0 for lam in lambdas):
        raise ValueError("cutoff values must be positive")
    a = orbit_radius(spec.Z, spec.mu_e)
    asymptotic = T is None or T == math.inf
    rows = []
    for lam in lambdas:
        switching = SwitchingProfile(T=1.0 if (asymptotic or T <= 0.0) else T,
                                     Lambda=float(lam) / a)
        p = {}
        for coupling in (Coupling.DIPOLE, Coupling.MINIMAL):
            sub = TransitionSpec(spec.initial, spec.final, coupling, switching)
            if asymptotic:
                p[coupling] = asymptotic_vacuum_probability(sub)
            else:
                p[coupling] = vacuum_probability(sub, T).P0
        rows.append((float(lam), p[Coupling.DIPOLE], p[Coupling.MINIMAL],
                     p[Coupling.MINIMAL] - p[Coupling.DIPOLE]))
    return rows
