"""Interface geometry in the tangent-angle / length representation.

The interface is z_alpha = (L/2pi) exp(i(alpha + theta0 + phi(alpha))) with
phi real and mean free.  L is not evolved: it is recovered from phi and the
enclosed volume pi R^2.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .fourier import TrigSeries, alpha_grid, derivative, norm_F01, norm_Fs1, synthesize


class VolumeDegeneracyError(ArithmeticError):
    """The volume constraint admits no positive length for this phi."""


class OpenCurveError(ValueError):
    pass


@dataclass(frozen=True)
class InterfaceState:
    phi: TrigSeries
    theta0: float = 0.0
    R: float = 1.0
    gamma: float = 1.0
    t: float = 0.0

    def __post_init__(self):
        if not self.phi.real_flag:
            raise ValueError("phi must be a real series")
        if abs(self.phi[0]) > 1e-14:
            raise ValueError("phi must be mean free (coeff(0) = 0)")
        if not self.R > 0:
            raise ValueError("R must be positive")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.t < 0:
            raise ValueError("t must be nonnegative")

    @property
    def N(self):
        return self.phi.N

    def replace(self, **kw):
        d = dict(phi=self.phi, theta0=self.theta0, R=self.R, gamma=self.gamma, t=self.t)
        d.update(kw)
        return InterfaceState(**d)


def default_m(N):
    return max(64, 4 * N)


def _unit_speed_coeffs(phi, m):
    """FFT coefficients (numpy order) of exp(i(alpha + phi)) on alpha_grid(m)."""
    a = alpha_grid(m)
    g = np.exp(1j * (a + synthesize(phi, m)))
    return np.fft.fft(g) / m


def unit_volume(phi, m=None):
    """Volume enclosed by z(alpha) = int_0^alpha exp(i(eta + phi)) d eta.

    Evaluated exactly in Fourier space, including the drift term that appears
    when the curve fails to close.
    """
    m = m or default_m(phi.N)
    return volume_from_coeffs(_unit_speed_coeffs(phi, m))


def volume_from_coeffs(gh):
    """unit_volume from the FFT coefficients of exp(i(alpha + phi))."""
    m = gh.shape[0]
    k = np.fft.fftfreq(m, 1.0 / m)
    nz = k != 0
    kk = k[nz]
    g0 = gh[0]
    gk = gh[nz]
    periodic = np.sum(1j * np.abs(gk) ** 2 / kk)
    c = -np.sum(gk / (1j * kk))
    drift = np.conj(g0) * np.sum(gk * np.cos(np.pi * kk) / (1j * kk))
    A = 2 * np.pi * (periodic + drift + np.conj(c) * g0)
    return 0.5 * A.imag


def length_from_volume_factor(V1, R):
    denom = V1 / np.pi
    if not (0.0 < denom <= 2.0):
        raise VolumeDegeneracyError(f"volume factor {denom:.6g} outside (0, 2]")
    return 2 * np.pi * R / math.sqrt(denom)


def length_from_phi(phi, R, m=None):
    """Interface length enforcing enclosed volume pi R^2.

    (L/2pi)^2 = R^2 / (1 + (1/2pi) Im int int_0^alpha e^{i(alpha-eta)}(e^{i(phi(alpha)-phi(eta))} - 1)),
    where the bracket equals unit_volume(phi) / pi.
    """
    return length_from_volume_factor(unit_volume(phi, m), R)


def length(state, m=None):
    return length_from_phi(state.phi, state.R, m)


@dataclass(frozen=True)
class CurveSamples:
    m: int
    z: np.ndarray = field(repr=False)
    base_point: complex = 0j
    closure: float = 0.0
    z_alpha: np.ndarray = field(default=None, repr=False)

    @property
    def alpha(self):
        return alpha_grid(self.m)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["alpha", "x", "y"])
            for a, zz in zip(self.alpha, self.z):
                w.writerow([repr(float(a)), repr(float(zz.real)), repr(float(zz.imag))])


def reconstruct_curve(state, base_point=0j, m=None, L=None):
    """Positions z(alpha_j) by spectral antidifferentiation of z_alpha.

    The mean of z_alpha is not integrated; it is returned as ``closure``
    (relative to |z_alpha| = L/2pi).
    """
    m = m or default_m(state.N)
    if m < 2 * state.N + 2:
        raise ValueError("grid too coarse for phi")
    L = length(state) if L is None else L
    a = alpha_grid(m)
    za = (L / (2 * np.pi)) * np.exp(1j * (a + state.theta0 + synthesize(state.phi, m)))
    ch = np.fft.fft(za) / m
    k = np.fft.fftfreq(m, 1.0 / m)
    closure = abs(ch[0]) / (L / (2 * np.pi))
    anti = np.zeros(m, complex)
    nz = k != 0
    anti[nz] = ch[nz] / (1j * k[nz])
    anti[m // 2] = 0.0  # Nyquist mode has no well-defined antiderivative
    z = np.fft.ifft(anti) * m
    z = z - z[0] + base_point
    za_closed = za - ch[0]
    return CurveSamples(m, z, complex(base_point), float(closure), za_closed)


def volume(curve, tol=1e-6):
    """Enclosed volume (1/2) Im int conj(z) z_alpha by the periodic trapezoid rule."""
    if curve.closure > tol:
        raise OpenCurveError(f"closure residual {curve.closure:.3e} exceeds {tol:.1e}")
    za = curve.z_alpha
    if za is None:
        ch = np.fft.fft(curve.z)
        k = np.fft.fftfreq(curve.m, 1.0 / curve.m)
        ch[curve.m // 2] = 0
        za = np.fft.ifft(1j * k * ch)
    V = 0.5 * np.imag(np.sum(np.conj(curve.z) * za)) * 2 * np.pi / curve.m
    if V <= 0:
        raise ValueError("curve is not positively oriented")
    return float(V)


def shoelace_area(z):
    """Polygon area of ordered vertices z (no repeated endpoint)."""
    x, y = z.real, z.imag
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def curvature(state, L=None):
    """Signed curvature (2pi/L)(1 + phi_alpha) as a real series."""
    L = length(state) if L is None else L
    s = 2 * np.pi / L
    dphi = derivative(state.phi)
    c = s * dphi.coeff
    c = c.copy()
    c[state.N] += s
    return TrigSeries(state.N, c, True)


def closure_residual(state, m=None):
    """|(1/2pi) int exp(i(alpha + theta)) d alpha|, the mode -1 content of exp(i phi)."""
    m = m or default_m(state.N)
    g = np.fft.fft(np.exp(1j * synthesize(state.phi, m))) / m
    return float(abs(g[-1]))


def is_circle(state, tol):
    return norm_Fs1(state.phi, 1.0) <= tol


def length_bounds(phi_norm, R):
    """Two-sided bounds on L from the Wiener norm of phi; None above the validity window."""
    e = 0.5 * np.pi * math.expm1(2 * phi_norm)
    if e >= 1:
        return None
    lo = 2 * np.pi * R / math.sqrt(1 + e)
    hi = 2 * np.pi * R / math.sqrt(1 - e)
    return lo, hi


def length_ratio_bound(phi_norm):
    """Bound on |2 pi R / L - 1|."""
    e = 0.5 * np.pi * math.expm1(2 * phi_norm)
    if e >= 1:
        return math.inf
    return 1 - math.sqrt(1 - e)


def isoperimetric_deficit(L, V):
    return L * L - 4 * np.pi * V


def phi_wiener_norm(state):
    return norm_F01(state.phi)
