"""Gauge-freedom audit for light-atom coupling on a truncated basis.

A classical single-mode vector potential drives a hydrogen-like atom.  This
module checks, fully numerically, that transition amplitudes built from
*dressed* states do not change when the potentials are gauge transformed,
while naive (undressed) amplitudes do, and it quantifies how fast the
long-wavelength (uniform-field) approximation converges.

Conventions
-----------
Potentials are represented as sums of separable terms ``u_j(t) * V_j(x)``
(vector part) and ``s_j(t) * W_j(x)`` (scalar part) with every spatial
profile real-valued and every time factor vectorized over numpy arrays.
The first-order interaction, with the elementary charge factored out, is

    h1(t) = -(A.p + p.A)/(2 mu_e) + U.

The dressing coefficient attached to an ordered state pair (a, b) is

    L_ab(t) = <b| (A.p + p.A)/(2 mu_e) |a> / (i (E_b - E_a))     E_b != E_a
    L_ab(t) = -integral_0^t <b| U(s) |a> ds                      E_b == E_a

and the transition amplitude from ``initial`` (l) to ``final`` (k) reads

    K_lk(T) = -integral_0^T <k| h1(t) |l> e^{i(E_k-E_l)t} dt + L_lk(0)
    amp     = i q (K_lk(T) e^{-i E_k T} - conj(L_kl(T)) e^{-i E_l T}).

Under A -> A - grad(chi), U -> U + d(chi)/dt these obey

    L'_ab = L_ab - <b|chi(t)|a>            (+ <b|chi(0)|a> when degenerate)
    K'_lk = K_lk - <k|chi(T)|l> e^{i(E_k-E_l)T}

and the dressed amplitude is invariant identically; with the dressing
replaced by the identity the amplitude shifts by O(chi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .constants import ELEMENTARY_CHARGE_NATURAL
from .hydrogenic import AtomicState, energy_gap, orbit_radius, wavefunction_and_gradient
from .quadrature import gauss_legendre_rule

__all__ = [
    "AuditCase",
    "AuditReport",
    "ClassicalField",
    "DipoleGaugeReport",
    "DipoleResidualSweep",
    "GaugeFunction",
    "GaugeTerm",
    "PlaneWave",
    "ScalarTerm",
    "VectorTerm",
    "amplitude",
    "chi_element",
    "dipole_chi",
    "dipole_gauge_check",
    "dipole_residual_sweep",
    "dressed_L_semiclassical",
    "evolved_K",
    "gauge_transform",
    "invariance_report",
    "monomial_chi",
    "plane_wave_chi",
    "random_polynomial_chi",
]

_TIME_NODES = 2048
_DEGENERACY_CUT = 1e-12


def _zero_vector(x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    return np.zeros((3,) + np.shape(x))


# --------------------------------------------------------------------------
# potential and gauge-function containers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class VectorTerm:
    """One separable vector-potential contribution u(t) * V(x).

    ``profile`` maps (x, y, z) arrays to a (3,) + shape array; ``curl``
    returns its analytic curl with the same signature.  Time factors must
    accept numpy arrays.
    """

    time: Callable[[np.ndarray], np.ndarray]
    time_derivative: Callable[[np.ndarray], np.ndarray]
    profile: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    curl: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ScalarTerm:
    """One separable scalar-potential contribution s(t) * W(x)."""

    time: Callable[[np.ndarray], np.ndarray]
    profile: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ClassicalField:
    """External electromagnetic potentials as sums of separable terms."""

    vector_terms: tuple[VectorTerm, ...] = ()
    scalar_terms: tuple[ScalarTerm, ...] = ()

    def vector_potential(self, x, y, z, t: float) -> np.ndarray:
        total = np.zeros((3,) + np.shape(x))
        for term in self.vector_terms:
            total = total + term.time(t) * term.profile(x, y, z)
        return total

    def scalar_potential(self, x, y, z, t: float) -> np.ndarray:
        total = np.zeros(np.shape(x))
        for term in self.scalar_terms:
            total = total + term.time(t) * term.profile(x, y, z)
        return total

    def electric_field(self, x, y, z, t: float) -> np.ndarray:
        total = np.zeros((3,) + np.shape(x))
        for term in self.vector_terms:
            total = total - term.time_derivative(t) * term.profile(x, y, z)
        for term in self.scalar_terms:
            total = total - term.time(t) * term.gradient(x, y, z)
        return total

    def magnetic_field(self, x, y, z, t: float) -> np.ndarray:
        total = np.zeros((3,) + np.shape(x))
        for term in self.vector_terms:
            total = total + term.time(t) * term.curl(x, y, z)
        return total


@dataclass(frozen=True)
class GaugeTerm:
    """One separable gauge-function contribution f(t) * g(x)."""

    time: Callable[[np.ndarray], np.ndarray]
    time_derivative: Callable[[np.ndarray], np.ndarray]
    profile: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GaugeFunction:
    """Scalar gauge function with analytic gradient and time derivative."""

    terms: tuple[GaugeTerm, ...] = ()

    def value(self, x, y, z, t: float) -> np.ndarray:
        total = np.zeros(np.shape(x))
        for term in self.terms:
            total = total + term.time(t) * term.profile(x, y, z)
        return total

    def gradient(self, x, y, z, t: float) -> np.ndarray:
        total = np.zeros((3,) + np.shape(x))
        for term in self.terms:
            total = total + term.time(t) * term.gradient(x, y, z)
        return total

    def time_derivative(self, x, y, z, t: float) -> np.ndarray:
        total = np.zeros(np.shape(x))
        for term in self.terms:
            total = total + term.time_derivative(t) * term.profile(x, y, z)
        return total


def gauge_transform(field: ClassicalField, chi: GaugeFunction) -> ClassicalField:
    """Apply A -> A - grad(chi), U -> U + d(chi)/dt."""
    extra_vector = tuple(
        VectorTerm(
            time=_negated(term.time),
            time_derivative=_negated(term.time_derivative),
            profile=term.gradient,
            curl=_zero_vector,  # curl of a gradient vanishes identically
        )
        for term in chi.terms
    )
    extra_scalar = tuple(
        ScalarTerm(time=term.time_derivative, profile=term.profile,
                   gradient=term.gradient)
        for term in chi.terms
    )
    return ClassicalField(
        vector_terms=field.vector_terms + extra_vector,
        scalar_terms=field.scalar_terms + extra_scalar,
    )


def _negated(fn: Callable) -> Callable:
    def wrapped(t):
        return -fn(t)

    return wrapped


# --------------------------------------------------------------------------
# concrete field and gauge-function families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PlaneWave:
    """Transverse plane-wave vector potential A = eps A0 cos(k.x - w t + phase).

    The frequency is an independent parameter (this is a test field, not a
    vacuum solution), so retardation k and drive frequency can be chosen
    separately.  Z and mu_e identify the atom the audit runs on.
    """

    amplitude: float
    wavevector: tuple[float, float, float]
    polarization: tuple[float, float, float]
    angular_frequency: float
    phase: float = 0.0
    Z: float = 1.0
    mu_e: float = 1.0

    def __post_init__(self) -> None:
        if self.amplitude < 0.0:
            raise ValueError("amplitude must be nonnegative")
        if self.angular_frequency <= 0.0:
            raise ValueError("angular_frequency must be positive")
        k = np.asarray(self.wavevector, dtype=float)
        eps = np.asarray(self.polarization, dtype=float)
        norm = float(np.linalg.norm(eps))
        if norm == 0.0:
            raise ValueError("polarization must be a nonzero vector")
        object.__setattr__(self, "polarization", tuple(eps / norm))
        if abs(float(k @ eps)) > 1e-12 * max(float(np.linalg.norm(k)), 1e-300) * norm:
            raise ValueError("plane wave must be transverse (k . eps = 0)")
        if self.Z <= 0.0 or self.mu_e <= 0.0:
            raise ValueError("Z and mu_e must be positive")

    @property
    def wavelength_parameter(self) -> float:
        """|k| times the atomic length scale (dimensionless retardation)."""
        return float(np.linalg.norm(self.wavevector)) * orbit_radius(self.Z, self.mu_e)

    def field(self) -> ClassicalField:
        """Coulomb-gauge potentials: transverse A, vanishing U."""
        k = np.asarray(self.wavevector, dtype=float)
        eps = np.asarray(self.polarization, dtype=float)
        amp, omega, phase = self.amplitude, self.angular_frequency, self.phase
        k_cross_eps = np.cross(k, eps)

        def kdotx(x, y, z):
            return k[0] * x + k[1] * y + k[2] * z

        cos_profile = lambda x, y, z: np.multiply.outer(eps, amp * np.cos(kdotx(x, y, z)))
        sin_profile = lambda x, y, z: np.multiply.outer(eps, amp * np.sin(kdotx(x, y, z)))
        cos_curl = lambda x, y, z: np.multiply.outer(k_cross_eps, -amp * np.sin(kdotx(x, y, z)))
        sin_curl = lambda x, y, z: np.multiply.outer(k_cross_eps, amp * np.cos(kdotx(x, y, z)))
        return ClassicalField(vector_terms=(
            VectorTerm(
                time=lambda t: np.cos(omega * t - phase),
                time_derivative=lambda t: -omega * np.sin(omega * t - phase),
                profile=cos_profile,
                curl=cos_curl,
            ),
            VectorTerm(
                time=lambda t: np.sin(omega * t - phase),
                time_derivative=lambda t: omega * np.cos(omega * t - phase),
                profile=sin_profile,
                curl=sin_curl,
            ),
        ))


def monomial_chi(
    coefficient: float,
    exponents: tuple[int, int, int],
    frequency: float,
    phase: float,
    length_scale: float,
    kind: str = "cos",
) -> GaugeFunction:
    """chi = c * (x/L)^i (y/L)^j (z/L)^k * trig(nu t + phase)."""
    i, j, k = exponents
    if min(i, j, k) < 0:
        raise ValueError("exponents must be nonnegative")
    if kind == "cos":
        time = lambda t: np.cos(frequency * t + phase)
        time_derivative = lambda t: -frequency * np.sin(frequency * t + phase)
    elif kind == "sin":
        time = lambda t: np.sin(frequency * t + phase)
        time_derivative = lambda t: frequency * np.cos(frequency * t + phase)
    else:
        raise ValueError(f"kind must be 'cos' or 'sin', got {kind!r}")
    L = float(length_scale)

    def profile(x, y, z):
        return coefficient * (x / L) ** i * (y / L) ** j * (z / L) ** k

    def gradient(x, y, z):
        shape = np.shape(x)
        gx = (coefficient * i / L) * (x / L) ** max(i - 1, 0) * (y / L) ** j * (z / L) ** k \
            if i else np.zeros(shape)
        gy = (coefficient * j / L) * (x / L) ** i * (y / L) ** max(j - 1, 0) * (z / L) ** k \
            if j else np.zeros(shape)
        gz = (coefficient * k / L) * (x / L) ** i * (y / L) ** j * (z / L) ** max(k - 1, 0) \
            if k else np.zeros(shape)
        return np.stack([np.broadcast_to(g, shape) for g in (gx, gy, gz)])

    return GaugeFunction(terms=(GaugeTerm(time, time_derivative, profile, gradient),))


def plane_wave_chi(
    coefficient: float,
    wavevector: tuple[float, float, float],
    angular_frequency: float,
    phase: float = 0.0,
) -> GaugeFunction:
    """chi = c * cos(k.x - w t + phase), split into separable terms."""
    k = np.asarray(wavevector, dtype=float)
    omega = angular_frequency

    def kdotx(x, y, z):
        return k[0] * x + k[1] * y + k[2] * z

    cos_term = GaugeTerm(
        time=lambda t: np.cos(omega * t - phase),
        time_derivative=lambda t: -omega * np.sin(omega * t - phase),
        profile=lambda x, y, z: coefficient * np.cos(kdotx(x, y, z)),
        gradient=lambda x, y, z: np.multiply.outer(k, -coefficient * np.sin(kdotx(x, y, z))),
    )
    sin_term = GaugeTerm(
        time=lambda t: np.sin(omega * t - phase),
        time_derivative=lambda t: omega * np.cos(omega * t - phase),
        profile=lambda x, y, z: coefficient * np.sin(kdotx(x, y, z)),
        gradient=lambda x, y, z: np.multiply.outer(k, coefficient * np.cos(kdotx(x, y, z))),
    )
    return GaugeFunction(terms=(cos_term, sin_term))


def dipole_chi(wave: PlaneWave) -> GaugeFunction:
    """chi = A(x, t) . x for a plane wave; generates the length gauge."""
    k = np.asarray(wave.wavevector, dtype=float)
    eps = np.asarray(wave.polarization, dtype=float)
    amp, omega, phase = wave.amplitude, wave.angular_frequency, wave.phase

    def kdotx(x, y, z):
        return k[0] * x + k[1] * y + k[2] * z

    def epsdotx(x, y, z):
        return eps[0] * x + eps[1] * y + eps[2] * z

    cos_term = GaugeTerm(
        time=lambda t: np.cos(omega * t - phase),
        time_derivative=lambda t: -omega * np.sin(omega * t - phase),
        profile=lambda x, y, z: amp * np.cos(kdotx(x, y, z)) * epsdotx(x, y, z),
        gradient=lambda x, y, z: (
            np.multiply.outer(eps, amp * np.cos(kdotx(x, y, z)))
            - np.multiply.outer(k, amp * np.sin(kdotx(x, y, z)) * epsdotx(x, y, z))
        ),
    )
    sin_term = GaugeTerm(
        time=lambda t: np.sin(omega * t - phase),
        time_derivative=lambda t: omega * np.cos(omega * t - phase),
        profile=lambda x, y, z: amp * np.sin(kdotx(x, y, z)) * epsdotx(x, y, z),
        gradient=lambda x, y, z: (
            np.multiply.outer(eps, amp * np.sin(kdotx(x, y, z)))
            + np.multiply.outer(k, amp * np.cos(kdotx(x, y, z)) * epsdotx(x, y, z))
        ),
    )
    return GaugeFunction(terms=(cos_term, sin_term))


_MONOMIAL_EXPONENTS: tuple[tuple[int, int, int], ...] = (
    (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
    (2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1),
)


def random_polynomial_chi(
    rng: np.random.Generator,
    amplitude: float,
    frequency_scale: float,
    length_scale: float,
) -> GaugeFunction:
    """Random low-order polynomial-in-x, trigonometric-in-t gauge function."""
    n_terms = int(rng.integers(1, 3))
    terms: list[GaugeTerm] = []
    for _ in range(n_terms):
        exponents = _MONOMIAL_EXPONENTS[int(rng.integers(1, len(_MONOMIAL_EXPONENTS)))]
        part = monomial_chi(
            coefficient=amplitude * float(rng.uniform(0.5, 1.5)) / n_terms,
            exponents=exponents,
            frequency=frequency_scale * float(10.0 ** rng.uniform(-0.5, 0.5)),
            phase=float(rng.uniform(0.0, 2.0 * math.pi)),
            length_scale=length_scale,
            kind="cos" if rng.random() < 0.5 else "sin",
        )
        terms.extend(part.terms)
    return GaugeFunction(terms=tuple(terms))


# --------------------------------------------------------------------------
# matrix elements on a fixed product grid
# --------------------------------------------------------------------------


class _Workspace:
    """Product-quadrature grid plus lazily cached state pair data."""

    def __init__(self, Z: float, mu_e: float, radial_nodes: int = 140,
                 theta_nodes: int = 32, phi_nodes: int = 32,
                 radial_span: float = 50.0) -> None:
        self.Z = Z
        self.mu_e = mu_e
        scale = orbit_radius(Z, mu_e)
        r, w_r = gauss_legendre_rule(radial_nodes, 0.0, radial_span * scale)
        u, w_u = np.polynomial.legendre.leggauss(theta_nodes)
        theta = np.arccos(u)
        phi = np.linspace(0.0, 2.0 * math.pi, phi_nodes, endpoint=False)
        r3, theta3 = r[:, None, None], theta[None, :, None]
        phi3 = phi[None, None, :]
        sin_theta = np.sin(theta3)
        self.x = r3 * sin_theta * np.cos(phi3)
        self.y = r3 * sin_theta * np.sin(phi3)
        self.z = r3 * np.cos(theta3) + 0.0 * phi3
        self.weight = (
            (w_r * r**2)[:, None, None]
            * w_u[None, :, None]
            * (2.0 * math.pi / phi_nodes)
        )
        self._r3, self._theta3, self._phi3 = r3, theta3, phi3
        self._states: dict[AtomicState, tuple[np.ndarray, np.ndarray]] = {}
        self._pairs: dict[tuple[AtomicState, AtomicState], tuple[np.ndarray, np.ndarray]] = {}
        self._term_elements: dict[tuple[int, AtomicState, AtomicState], complex] = {}
        self._term_refs: list[object] = []

    def _state(self, state: AtomicState) -> tuple[np.ndarray, np.ndarray]:
        if state not in self._states:
            rg, tg, pg = np.broadcast_arrays(self._r3, self._theta3, self._phi3)
            psi, grad = wavefunction_and_gradient(state)(rg, tg, pg)
            psi = np.ascontiguousarray(np.broadcast_to(psi, self.x.shape))
            grad = np.ascontiguousarray(np.broadcast_to(grad, (3,) + self.x.shape))
            self._states[state] = (psi, grad)
        return self._states[state]

    def _pair(self, bra: AtomicState, ket: AtomicState):
        key = (bra, ket)
        if key not in self._pairs:
            psi_b, grad_b = self._state(bra)
            psi_k, grad_k = self._state(ket)
            density = self.weight * np.conj(psi_b) * psi_k
            current = self.weight * (np.conj(psi_b) * grad_k - np.conj(grad_b) * psi_k)
            self._pairs[key] = (density, current)
        return self._pairs[key]

    def scalar_element(self, bra: AtomicState, ket: AtomicState, profile) -> complex:
        """<bra| W(x) |ket> for a real scalar profile."""
        if (bra, ket) not in self._pairs and (ket, bra) in self._pairs:
            return complex(np.conj(self.scalar_element(ket, bra, profile)))
        density, _ = self._pair(bra, ket)
        return complex(np.sum(density * profile(self.x, self.y, self.z)))

    def sym_element(self, bra: AtomicState, ket: AtomicState, profile) -> complex:
        """<bra| (V.p + p.V) / (2 mu_e) |ket> for a real vector profile."""
        if (bra, ket) not in self._pairs and (ket, bra) in self._pairs:
            return complex(np.conj(self.sym_element(ket, bra, profile)))
        _, current = self._pair(bra, ket)
        values = profile(self.x, self.y, self.z)
        return complex(-0.5j / self.mu_e * np.sum(current * values))

    def term_element(self, term, bra: AtomicState, ket: AtomicState) -> complex:
        """Cached spatial element of a VectorTerm / ScalarTerm / GaugeTerm."""
        key = (id(term), bra, ket)
        if key not in self._term_elements:
            self._term_refs.append(term)  # keep id() stable for the cache's life
            if isinstance(term, VectorTerm):
                value = self.sym_element(bra, ket, term.profile)
            else:
                value = self.scalar_element(bra, ket, term.profile)
            self._term_elements[key] = value
        return self._term_elements[key]


@lru_cache(maxsize=4)
def _workspace(Z: float, mu_e: float) -> _Workspace:
    return _Workspace(Z, mu_e)


def _check_pair(state_a: AtomicState, state_b: AtomicState) -> _Workspace:
    if (state_a.Z, state_a.mu_e) != (state_b.Z, state_b.mu_e):
        raise ValueError("both states must share Z and mu_e")
    return _workspace(state_a.Z, state_a.mu_e)


def _interaction_series(
    ws: _Workspace, field: ClassicalField, bra: AtomicState, ket: AtomicState
) -> tuple[tuple[Callable, complex], ...]:
    """<bra| h1(t) |ket> as (time factor, constant element) contributions."""
    parts: list[tuple[Callable, complex]] = []
    for term in field.vector_terms:
        parts.append((term.time, -ws.term_element(term, bra, ket)))
    for term in field.scalar_terms:
        parts.append((term.time, ws.term_element(term, bra, ket)))
    return tuple(parts)


def _series_at(parts: Sequence[tuple[Callable, complex]], t) -> np.ndarray:
    total = 0.0 + 0.0j
    for time_fn, element in parts:
        total = total + element * np.asarray(time_fn(t), dtype=float)
    return total


def chi_element(state_a: AtomicState, state_b: AtomicState,
                chi: GaugeFunction, t: float) -> complex:
    """<b| chi(t) |a> on the audit grid (the transformation-law element)."""
    ws = _check_pair(state_a, state_b)
    total = 0.0 + 0.0j
    for term in chi.terms:
        total += float(term.time(t)) * ws.term_element(term, state_b, state_a)
    return complex(total)


# --------------------------------------------------------------------------
# dressing coefficients, evolved coefficients, amplitudes
# --------------------------------------------------------------------------


def dressed_L_semiclassical(
    state_a: AtomicState, state_b: AtomicState, field: ClassicalField, t: float
) -> complex:
    """Dressing coefficient L_ab(t) for the ordered pair (a, b).

    Non-degenerate pairs use the symmetrized vector-potential element over
    i (E_b - E_a); degenerate pairs accumulate the scalar potential,
    -integral_0^t <b|U(s)|a> ds, which vanishes when U = 0.
    """
    ws = _check_pair(state_a, state_b)
    E_a, E_b = state_a.energy, state_b.energy
    if abs(E_b - E_a) > _DEGENERACY_CUT * (abs(E_a) + abs(E_b)):
        total = 0.0 + 0.0j
        for term in field.vector_terms:
            total += float(term.time(t)) * ws.term_element(term, state_b, state_a)
        return complex(total / (1j * (E_b - E_a)))
    if t == 0.0:
        return 0.0 + 0.0j
    nodes, weights = gauss_legendre_rule(_TIME_NODES, 0.0, t)
    total = 0.0 + 0.0j
    for term in field.scalar_terms:
        element = ws.term_element(term, state_b, state_a)
        total -= element * float(np.dot(weights, np.asarray(term.time(nodes), dtype=float)))
    return complex(total)


def evolved_K(
    initial: AtomicState, final: AtomicState, field: ClassicalField, T: float,
    dressed: bool = True,
) -> complex:
    """First-order evolved coefficient K for the transition initial -> final.

    K(T) = -integral_0^T <final| h1(t) |initial> e^{i(E_f-E_i)t} dt + L(0),
    with the trailing dressing offset dropped when ``dressed`` is False.
    """
    if T < 0.0:
        raise ValueError("T must be nonnegative")
    ws = _check_pair(initial, final)
    delta = final.energy - initial.energy
    parts = _interaction_series(ws, field, final, initial)
    value = 0.0 + 0.0j
    if T > 0.0:
        nodes, weights = gauss_legendre_rule(_TIME_NODES, 0.0, T)
        integrand = _series_at(parts, nodes) * np.exp(1j * delta * nodes)
        value = -complex(np.sum(weights * integrand))
    if dressed:
        value += dressed_L_semiclassical(initial, final, field, 0.0)
    return value


def amplitude(
    initial: AtomicState, final: AtomicState, field: ClassicalField, T: float,
    dressed: bool = True,
) -> complex:
    """First-order transition amplitude between dressed (or bare) states."""
    if initial == final:
        raise ValueError("initial and final states must differ")
    E_i, E_f = initial.energy, final.energy
    K = evolved_K(initial, final, field, T, dressed=dressed)
    if dressed:
        L_back = dressed_L_semiclassical(final, initial, field, T)
    else:
        L_back = 0.0 + 0.0j
    q = ELEMENTARY_CHARGE_NATURAL
    return 1j * q * (
        K * np.exp(-1j * E_f * T) - np.conj(L_back) * np.exp(-1j * E_i * T)
    )


# --------------------------------------------------------------------------
# long-wavelength (uniform-field) approximation check
# --------------------------------------------------------------------------


def _length_gauge_approximation(wave: PlaneWave) -> ClassicalField:
    """Potentials after the A.x transformation with the residual A dropped.

    What remains is the scalar potential dA/dt . x, i.e. evolution under
    -x.E(x, t); the discarded vector part is the O(|k| x) retardation term.
    """
    exact = gauge_transform(ClassicalField(), dipole_chi(wave))
    return ClassicalField(vector_terms=(), scalar_terms=exact.scalar_terms)


@dataclass(frozen=True)
class DipoleGaugeReport:
    """Residuals of the uniform-field approximation at one retardation."""

    wavelength_parameter: float
    residual: float
    allowed_channel_residual: float
    exact_transform_deviation: float
    reference_scale: float


def _audit_states(Z: float, mu_e: float) -> dict[str, AtomicState]:
    return {
        "1s": AtomicState(1, 0, 0, Z, mu_e),
        "2s": AtomicState(2, 0, 0, Z, mu_e),
        "2p0": AtomicState(2, 1, 0, Z, mu_e),
        "2p+": AtomicState(2, 1, 1, Z, mu_e),
    }


def dipole_gauge_check(wave: PlaneWave, T: float) -> DipoleGaugeReport:
    """Compare length-gauge-approximated and exact-gauge amplitudes.

    The headline residual uses the degenerate even-parity channel
    (2p, m=+1) -> (2p, m=0), whose leading retardation correction is first
    order in |k| times the atomic size; the parity-changing channel
    1s -> (2p, m=0) is protected to second order and reported alongside.
    Both are normalized by the leading allowed amplitude.
    """
    states = _audit_states(wave.Z, wave.mu_e)
    base = wave.field()
    approx = _length_gauge_approximation(wave)
    exact = gauge_transform(base, dipole_chi(wave))

    pairs = {
        "allowed": (states["1s"], states["2p0"]),
        "even": (states["2p+"], states["2p0"]),
    }
    amps = {
        name: {
            "base": amplitude(pair[0], pair[1], base, T),
            "approx": amplitude(pair[0], pair[1], approx, T),
            "exact": amplitude(pair[0], pair[1], exact, T),
        }
        for name, pair in pairs.items()
    }
    reference = abs(amps["allowed"]["base"])
    if reference == 0.0:
        raise ValueError("reference transition amplitude vanished; pick a different T")
    exact_dev = max(
        abs(entry["exact"] - entry["base"]) / reference for entry in amps.values()
    )
    return DipoleGaugeReport(
        wavelength_parameter=wave.wavelength_parameter,
        residual=abs(amps["even"]["approx"] - amps["even"]["base"]) / reference,
        allowed_channel_residual=(
            abs(amps["allowed"]["approx"] - amps["allowed"]["base"]) / reference
        ),
        exact_transform_deviation=exact_dev,
        reference_scale=reference,
    )


@dataclass(frozen=True)
class DipoleResidualSweep:
    """Linear fit of the approximation residual against retardation."""

    wavelength_parameters: tuple[float, ...]
    residuals: tuple[float, ...]
    slope: float
    intercept: float
    reports: tuple[DipoleGaugeReport, ...]


def _default_drive(Z: float, mu_e: float) -> float:
    return energy_gap(1, 2, Z, mu_e)


def dipole_residual_sweep(
    wavelength_parameters: Sequence[float] = (5e-5, 1e-4, 2e-4),
    T: float | None = None,
    amplitude_scale: float = 1e-3,
    Z: float = 1.0,
    mu_e: float = 1.0,
    phase: float = 0.4,
) -> DipoleResidualSweep:
    """Sweep retardation |k| a and fit residual = slope * (|k| a) + intercept."""
    omega = _default_drive(Z, mu_e)
    if T is None:
        T = 3.0 / omega
    scale = orbit_radius(Z, mu_e)
    reports = []
    for lam in wavelength_parameters:
        wave = PlaneWave(
            amplitude=amplitude_scale,
            wavevector=(lam / scale, 0.0, 0.0),
            polarization=(0.0, 0.0, 1.0),
            angular_frequency=omega,
            phase=phase,
            Z=Z,
            mu_e=mu_e,
        )
        reports.append(dipole_gauge_check(wave, T))
    lams = np.asarray([r.wavelength_parameter for r in reports])
    residuals = np.asarray([r.residual for r in reports])
    slope, intercept = np.polyfit(lams, residuals, 1)
    return DipoleResidualSweep(
        wavelength_parameters=tuple(float(v) for v in lams),
        residuals=tuple(float(v) for v in residuals),
        slope=float(slope),
        intercept=float(intercept),
        reports=tuple(reports),
    )


# --------------------------------------------------------------------------
# full audit report
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AuditCase:
    """One audited property: a measured value against a requirement."""

    label: str
    value: float
    requirement: str
    passed: bool


@dataclass(frozen=True)
class AuditReport:
    cases: tuple[AuditCase, ...]

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    def summary(self) -> str:
        lines = []
        for case in self.cases:
            status = "PASS" if case.passed else "FAIL"
            lines.append(f"{status} {case.label}: {case.value:.3e} (require {case.requirement})")
        lines.append("audit " + ("PASSED" if self.passed else "FAILED"))
        return "\n".join(lines)


def invariance_report(
    T: float | None = None,
    n_random: int = 20,
    seed: int = 20260815,
    amplitude_scale: float = 1e-3,
    chi_amplitude: float = 1.0,
    Z: float = 1.0,
    mu_e: float = 1.0,
    tolerance: float = 1e-10,
) -> AuditReport:
    """Run the full gauge audit and collect per-case outcomes.

    Cases: pointwise E/B invariance of the transformed potentials, the
    closed-form transformation laws for the dressing and evolved
    coefficients, dressed-amplitude invariance over ``n_random`` random
    polynomial gauge functions, the naive-amplitude deviation floor, and
    linear growth of that deviation with gauge-function amplitude.
    """
    omega = _default_drive(Z, mu_e)
    if T is None:
        T = 3.0 / omega
    scale = orbit_radius(Z, mu_e)
    rng = np.random.default_rng(seed)
    states = _audit_states(Z, mu_e)
    wave = PlaneWave(
        amplitude=amplitude_scale,
        wavevector=(0.02 / scale, 0.0, 0.0),
        polarization=(0.0, 0.0, 1.0),
        angular_frequency=omega,
        phase=0.4,
        Z=Z,
        mu_e=mu_e,
    )
    base = wave.field()
    pairs = [
        (states["1s"], states["2p0"]),   # resonant, parity-changing
        (states["2p+"], states["2p0"]),  # degenerate sector
        (states["2s"], states["2p0"]),   # degenerate sector, s-p
    ]
    base_amps = [amplitude(a, b, base, T) for a, b in pairs]

    def draw_chi() -> GaugeFunction:
        return random_polynomial_chi(rng, chi_amplitude, omega, scale)

    # --- E and B field invariance on a sample grid
    axis = np.linspace(-2.0 * scale, 2.0 * scale, 10)
    gx, gy, gz = np.meshgrid(axis, axis, axis, indexing="ij")
    chi_eb = draw_chi()
    transformed_eb = gauge_transform(base, chi_eb)
    e_dev = b_dev = 0.0
    times_eb = (0.0, 0.37 * T, 0.83 * T)
    # The invariance is a cancellation between the appended -grad(chi) vector
    # terms and the appended d(chi)/dt scalar terms, so the honest reference
    # scale is the larger of the base field and those cancelling terms.
    base_scale = max(
        float(np.max(np.abs(base.electric_field(gx, gy, gz, t)))) for t in times_eb
    )
    gauge_scale = max(
        float(np.max(np.abs(term.time_derivative(t) * term.gradient(gx, gy, gz))))
        for term in chi_eb.terms
        for t in times_eb
    )
    e_scale = max(base_scale, gauge_scale)
    for t in times_eb:
        e0 = base.electric_field(gx, gy, gz, t)
        e1 = transformed_eb.electric_field(gx, gy, gz, t)
        b0 = base.magnetic_field(gx, gy, gz, t)
        b1 = transformed_eb.magnetic_field(gx, gy, gz, t)
        e_dev = max(e_dev, float(np.max(np.abs(e1 - e0))) / e_scale)
        b_dev = max(b_dev, float(np.max(np.abs(b1 - b0))) / e_scale)

    # --- closed-form transformation laws for L and K
    law_dev = 0.0
    chi_law = draw_chi()
    transformed_law = gauge_transform(base, chi_law)
    for state_a, state_b in pairs:
        E_a, E_b = state_a.energy, state_b.energy
        degenerate = abs(E_b - E_a) <= _DEGENERACY_CUT * (abs(E_a) + abs(E_b))
        for t in rng.uniform(0.05 * T, T, size=10):
            t = float(t)
            L0 = dressed_L_semiclassical(state_a, state_b, base, t)
            L1 = dressed_L_semiclassical(state_a, state_b, transformed_law, t)
            predicted = L0 - chi_element(state_a, state_b, chi_law, t)
            if degenerate:
                predicted += chi_element(state_a, state_b, chi_law, 0.0)
            norm = max(abs(L0), abs(L1), 1e-6)
            law_dev = max(law_dev, abs(L1 - predicted) / norm)
        for T_k in rng.uniform(0.2 * T, T, size=3):
            T_k = float(T_k)
            K0 = evolved_K(state_a, state_b, base, T_k)
            K1 = evolved_K(state_a, state_b, transformed_law, T_k)
            shift = chi_element(state_a, state_b, chi_law, T_k) * np.exp(
                1j * (E_b - E_a) * T_k
            )
            predicted = K0 - shift
            if degenerate:
                predicted += chi_element(state_a, state_b, chi_law, 0.0)
            norm = max(abs(K0), abs(K1), 1e-6)
            law_dev = max(law_dev, abs(K1 - predicted) / norm)

    # --- dressed amplitude invariance over random gauge functions.
    # Deviations are normalized by the largest audited amplitude: the
    # degenerate channels are orders of magnitude below the resonant one,
    # and dividing rounding noise by an accidentally tiny amplitude would
    # measure conditioning, not invariance.
    reference = max(abs(v) for v in base_amps)
    dressed_dev = 0.0
    for _ in range(n_random):
        chi = draw_chi()
        transformed = gauge_transform(base, chi)
        for (state_a, state_b), amp0 in zip(pairs, base_amps):
            amp1 = amplitude(state_a, state_b, transformed, T)
            dressed_dev = max(dressed_dev, abs(amp1 - amp0) / reference)

    # --- time-only gauge function leaves everything unchanged
    f_only = monomial_chi(chi_amplitude, (0, 0, 0), 1.7 * omega, 0.3, scale)
    transformed_uniform = gauge_transform(base, f_only)
    uniform_dev = max(
        abs(amplitude(a, b, transformed_uniform, T) - amp0) / reference
        for (a, b), amp0 in zip(pairs, base_amps)
    )

    # --- naive amplitudes are not invariant, with linear deviation growth.
    # A random monomial can legitimately decouple from every audited channel
    # by parity, so the failure demonstration uses a gauge function with a
    # guaranteed order-unity coupling to the resonant transition.
    state_a, state_b = pairs[0]
    naive0 = amplitude(state_a, state_b, base, T, dressed=False)

    def coupled_chi(strength: float) -> GaugeFunction:
        return monomial_chi(strength, (0, 0, 1), 1.3 * omega, 0.7, scale)

    scales = (0.5, 1.0, 2.0)
    growth = []
    for factor in scales:
        transformed = gauge_transform(base, coupled_chi(factor * chi_amplitude))
        naive1 = amplitude(state_a, state_b, transformed, T, dressed=False)
        growth.append(abs(naive1 - naive0) / abs(naive0))
    naive_floor = growth[1]
    slope = float(np.polyfit(scales, growth, 1)[0])

    cases = (
        AuditCase("electric-field-invariance", e_dev, "< 1e-12", e_dev < 1e-12),
        AuditCase("magnetic-field-invariance", b_dev, "< 1e-12", b_dev < 1e-12),
        AuditCase("transformation-laws", law_dev, "< 1e-10", law_dev < 1e-10),
        AuditCase(
            f"dressed-invariance-{n_random}-random-gauge-functions",
            dressed_dev, f"< {tolerance:g}", dressed_dev < tolerance,
        ),
        AuditCase("time-only-gauge-function", uniform_dev, "< 1e-12", uniform_dev < 1e-12),
        AuditCase("naive-deviation-floor", naive_floor, "> 1e-3", naive_floor > 1e-3),
        AuditCase("naive-deviation-growth-slope", slope, "> 0", slope > 0.0),
    )
    return AuditReport(cases=cases)
