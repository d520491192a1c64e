"""Hydrogen-like bound states: energies, radial functions, angular algebra.

Everything downstream (matrix elements, transition kernels, the gauge audit)
is built from the pieces here: eigenenergies E_n = -mu_e Z^2 alpha^2 / (2 n^2),
normalized radial functions R_nl built on a stable forward Laguerre
recurrence, spherical harmonics in the Condon-Shortley convention, and
Clebsch-Gordan coefficients from the Racah sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import sph_harm_y

from .constants import FINE_STRUCTURE_CONSTANT

__all__ = [
    "AtomicState",
    "energy",
    "energy_gap",
    "orbit_radius",
    "generalized_laguerre",
    "radial_function",
    "radial_derivative",
    "spherical_harmonic",
    "spherical_harmonic_theta_derivative",
    "wavefunction_and_gradient",
    "clebsch_gordan",
]


def energy(n: int, Z: float = 1.0, mu_e: float = 1.0) -> float:
    """Bound-state eigenenergy -mu_e Z^2 alpha^2 / (2 n^2) in natural units."""
    if n < 1 or int(n) != n:
        raise ValueError(f"principal quantum number must be a positive integer, got {n}")
    if Z <= 0.0:
        raise ValueError("Z must be positive")
    if mu_e <= 0.0:
        raise ValueError("mu_e must be positive")
    return -0.5 * mu_e * (Z * FINE_STRUCTURE_CONSTANT) ** 2 / n**2


def energy_gap(n_initial: int, n_final: int, Z: float = 1.0, mu_e: float = 1.0) -> float:
    """E(n_final) - E(n_initial); positive for excitation."""
    return energy(n_final, Z, mu_e) - energy(n_initial, Z, mu_e)


def orbit_radius(Z: float = 1.0, mu_e: float = 1.0) -> float:
    """Characteristic orbital radius a = a0/Z = 1/(mu_e Z alpha)."""
    if Z <= 0.0 or mu_e <= 0.0:
        raise ValueError("Z and mu_e must be positive")
    return 1.0 / (mu_e * Z * FINE_STRUCTURE_CONSTANT)


@dataclass(frozen=True)
class AtomicState:
    """Hydrogen-like bound state |n, l, m> with nuclear charge Z.

    mu_e is the reduced mass in natural units (1.0 by convention); it only
    rescales lengths and energies.
    """

    n: int
    l: int
    m: int
    Z: float = 1.0
    mu_e: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.l < self.n:
            raise ValueError(f"need 0 <= l < n, got l={self.l}, n={self.n}")
        if not -self.l <= self.m <= self.l:
            raise ValueError(f"need |m| <= l, got m={self.m}, l={self.l}")
        if self.Z <= 0.0:
            raise ValueError("Z must be positive")
        if self.mu_e <= 0.0:
            raise ValueError("mu_e must be positive")

    @property
    def energy(self) -> float:
        return energy(self.n, self.Z, self.mu_e)

    @property
    def orbit_radius(self) -> float:
        return orbit_radius(self.Z, self.mu_e)

    def radial(self) -> Callable[[np.ndarray], np.ndarray]:
        return radial_function(self.n, self.l, self.Z, self.mu_e)

    def radial_prime(self) -> Callable[[np.ndarray], np.ndarray]:
        return radial_derivative(self.n, self.l, self.Z, self.mu_e)


def generalized_laguerre(k: int, order: float, x: np.ndarray) -> np.ndarray:
    """L_k^{order}(x) by the stable forward three-term recurrence."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = 1.0 + order - x
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1 + order - x) * cur - (j + order) * prev) / (j + 1)
    return cur


def _radial_scale(n: int, Z: float, mu_e: float) -> tuple[float, float]:
    """Return (2/(n a), normalization) for R_nl."""
    a = orbit_radius(Z, mu_e)
    return 2.0 / (n * a), a


def radial_function(n: int, l: int, Z: float = 1.0, mu_e: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """Normalized radial function R_nl(r), with integral R^2 r^2 dr = 1."""
    if not 0 <= l < n:
        raise ValueError(f"need 0 <= l < n, got l={l}, n={n}")
    scale, _ = _radial_scale(n, Z, mu_e)
    norm = math.sqrt(scale**3 * math.factorial(n - l - 1) / (2 * n * math.factorial(n + l)))

    def R(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("radius must be nonnegative")
        rho = scale * r
        return norm * rho**l * np.exp(-rho / 2.0) * generalized_laguerre(n - l - 1, 2 * l + 1, rho)

    return R


def radial_derivative(n: int, l: int, Z: float = 1.0, mu_e: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """dR_nl/dr, using d/dx L_k^a(x) = -L_{k-1}^{a+1}(x)."""
    if not 0 <= l < n:
        raise ValueError(f"need 0 <= l < n, got l={l}, n={n}")
    scale, _ = _radial_scale(n, Z, mu_e)
    norm = math.sqrt(scale**3 * math.factorial(n - l - 1) / (2 * n * math.factorial(n + l)))
    k = n - l - 1

    def Rprime(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("radius must be nonnegative")
        rho = scale * r
        lag = generalized_laguerre(k, 2 * l + 1, rho)
        dlag = -generalized_laguerre(k - 1, 2 * l + 2, rho) if k >= 1 else np.zeros_like(rho)
        # d/drho of rho^l e^{-rho/2} L(rho), times drho/dr = scale.
        poly = (l * np.divide(lag, rho, out=np.zeros_like(rho), where=rho > 0) if l > 0 else 0.0)
        core = np.exp(-rho / 2.0) * (
            (poly * rho**l if l > 0 else 0.0) - 0.5 * rho**l * lag + rho**l * dlag
        )
        # Rewrite without the awkward divide for l > 0: l rho^{l-1} lag.
        if l > 0:
            core = np.exp(-rho / 2.0) * (
                l * rho ** (l - 1) * lag - 0.5 * rho**l * lag + rho**l * dlag
            )
        return norm * scale * core

    return Rprime


def spherical_harmonic(l: int, m: int) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Y_lm(theta, phi), orthonormal on the sphere, Condon-Shortley phase."""
    if abs(m) > l:
        raise ValueError(f"need |m| <= l, got m={m}, l={l}")

    def Y(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        return sph_harm_y(l, m, np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))

    return Y


def spherical_harmonic_theta_derivative(l: int, m: int) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """d/dtheta Y_lm via the ladder identity.

    dY_lm/dtheta = m cot(theta) Y_lm + sqrt((l-m)(l+m+1)) e^{-i phi} Y_{l,m+1}.
    Valid away from the poles, which is where all quadrature nodes live.
    """
    if abs(m) > l:
        raise ValueError(f"need |m| <= l, got m={m}, l={l}")
    ladder = math.sqrt((l - m) * (l + m + 1)) if m < l else 0.0

    def dY(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        out = np.zeros(np.broadcast(theta, phi).shape, dtype=complex)
        if m != 0:
            out += m * (np.cos(theta) / np.sin(theta)) * sph_harm_y(l, m, theta, phi)
        if ladder != 0.0:
            out += ladder * np.exp(-1j * phi) * sph_harm_y(l, m + 1, theta, phi)
        return out

    return dY


def wavefunction_and_gradient(
    state: AtomicState,
) -> Callable[[np.ndarray, np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """psi and its Cartesian gradient on (r, theta, phi) grids.

    Returns a callable mapping broadcastable arrays (r, theta, phi) to
    (psi, grad) where grad has shape (3,) + broadcast shape. Intended for
    interior quadrature nodes (r > 0, 0 < theta < pi).
    """
    R = state.radial()
    Rp = state.radial_prime()
    Y = spherical_harmonic(state.l, state.m)
    dY = spherical_harmonic_theta_derivative(state.l, state.m)
    m = state.m

    def psi_grad(r: np.ndarray, theta: np.ndarray, phi: np.ndarray):
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        Rv, Rpv = R(r), Rp(r)
        Yv, dYv = Y(theta, phi), dY(theta, phi)
        psi = Rv * Yv
        st, ct = np.sin(theta), np.cos(theta)
        sp, cp = np.sin(phi), np.cos(phi)
        d_r = Rpv * Yv
        d_theta_over_r = Rv * dYv / r
        # (1/(r sin theta)) d/dphi, with dY/dphi = i m Y; Y ~ sin^|m|, finite.
        d_phi_term = (1j * m) * Rv * Yv / (r * st) if m != 0 else 0.0
        gx = st * cp * d_r + ct * cp * d_theta_over_r - sp * d_phi_term
        gy = st * sp * d_r + ct * sp * d_theta_over_r + cp * d_phi_term
        gz = ct * d_r - st * d_theta_over_r
        return psi, np.stack([np.asarray(g, dtype=complex) for g in (gx, gy, gz)])

    return psi_grad


def _triangle_ok(a: int, b: int, c: int) -> bool:
    return abs(a - b) <= c <= a + b


def clebsch_gordan(l1: int, m1: int, l2: int, m2: int, L: int, M: int) -> float:
    """Clebsch-Gordan coefficient <l1 m1; l2 m2 | L M> (Racah sum).

    Integer angular momenta. Returns 0 when m1 + m2 != M or the triangle
    inequality fails; raises on individually invalid quantum numbers.
    """
    for l, m in ((l1, m1), (l2, m2), (L, M)):
        if l < 0:
            raise ValueError(f"angular momentum must be nonnegative, got {l}")
        if abs(m) > l:
            raise ValueError(f"need |m| <= l, got m={m}, l={l}")
    if m1 + m2 != M or not _triangle_ok(l1, l2, L):
        return 0.0

    f = math.factorial
    pref = (
        (2 * L + 1)
        * f(l1 + l2 - L) * f(l1 - l2 + L) * f(-l1 + l2 + L) / f(l1 + l2 + L + 1)
        * f(L + M) * f(L - M)
        * f(l1 - m1) * f(l1 + m1) * f(l2 - m2) * f(l2 + m2)
    )
    k_min = max(0, l2 - L - m1, l1 + m2 - L)
    k_max = min(l1 + l2 - L, l1 - m1, l2 + m2)
    total = 0.0
    for k in range(k_min, k_max + 1):
        total += (-1) ** k / (
            f(k) * f(l1 + l2 - L - k) * f(l1 - m1 - k) * f(l2 + m2 - k)
            * f(L - l2 + m1 + k) * f(L - l1 - m2 + k)
        )
    return math.sqrt(pref) * total
