"""Interfacial Stokes velocity from the single-layer potential.

u(z(alpha)) = (2pi/L)(gamma/4pi) int z''(beta) . G(z(alpha) - z(beta)) d beta,
G = -log|w| I + w w^T / |w|^2.

The log part is split as log|2 sin((alpha-beta)/2)| plus a smooth remainder;
the singular piece uses the spectral log weights, everything else the
periodic trapezoid rule on the same grid (Nystrom style).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .fourier import TrigSeries, alpha_grid, analyze, derivative, synthesize
from .geometry import length_from_volume_factor, volume_from_coeffs
from .quadrature import (
    expm1i,
    log_multiplier,
    log_weights,
    phase_mean,
    phase_mean_shifted,
    pv_integral,
    regular_integral,
)


class ResolutionError(RuntimeError):
    """Quadrature grid does not resolve the interface."""


@dataclass(frozen=True)
class QuadratureGrid:
    m: int
    beta_nodes: np.ndarray = field(repr=False)
    weights_smooth: np.ndarray = field(repr=False)
    weights_log: np.ndarray = field(repr=False)

    @classmethod
    def make(cls, m):
        if m % 2 or m < 4:
            raise ValueError("m must be even and >= 4")
        nodes = -np.pi + 2 * np.pi * np.arange(m) / m
        # log_weights are indexed by the offset p h from beta = 0; node j sits at offset j - m/2
        return cls(m, nodes, np.full(m, 2 * np.pi / m), np.roll(log_weights(m), -(m // 2)))


@dataclass(frozen=True)
class VelocityField:
    u_conj: TrigSeries
    U: TrigSeries
    T: TrigSeries
    net_force: float = 0.0


@dataclass(frozen=True)
class _GridConst:
    m: int
    alpha: np.ndarray
    k: np.ndarray  # rfft wavenumbers with the Nyquist mode zeroed
    kfull: np.ndarray  # fft wavenumbers with the Nyquist mode zeroed
    log_sin: np.ndarray
    log_mult: np.ndarray
    tail_mask: np.ndarray


@lru_cache(maxsize=16)
def grid_constants(m):
    a = alpha_grid(m)
    d = a[:, None] - a[None, :]
    s = np.abs(2 * np.sin(0.5 * d))
    np.fill_diagonal(s, 1.0)
    k = np.arange(m // 2 + 1, dtype=float)
    k[-1] = 0
    kf = np.fft.fftfreq(m, 1.0 / m)
    tail = np.abs(kf) >= 3 * m // 8
    kf[m // 2] = 0
    return _GridConst(m, a, k, kf, np.log(s), log_multiplier(m), tail)


def _mean_free_antiderivative(samples):
    """Samples of operator_M applied to real grid data."""
    m = samples.shape[0]
    g = grid_constants(m)
    c = np.fft.rfft(samples)
    out = np.zeros_like(c)
    out[1:] = -1j * c[1:] / np.where(g.k[1:] == 0, 1, g.k[1:])
    out[-1] = 0
    # zero mode fixes the value at alpha = 0
    out[0] = -2 * np.sum(out[1:].real)
    return np.fft.irfft(out, n=m)


def _spectral_diff(samples):
    g = grid_constants(samples.shape[0])
    return np.fft.irfft(1j * g.k * np.fft.rfft(samples), n=samples.shape[0])


@dataclass(frozen=True)
class _Frame:
    """Grid samples shared by the velocity and the evolution right-hand side."""

    m: int
    L: float
    phi: np.ndarray
    dphi: np.ndarray
    tangent: np.ndarray  # exp(i(alpha + theta))
    z: np.ndarray
    zpp: np.ndarray
    tail: float
    closure: float
    z_alpha: np.ndarray  # derivative of z; differs from s * tangent by the closure defect


def frame_from_samples(ph, dph, theta0, R, m, L=None):
    g = grid_constants(m)
    e = np.exp(1j * (g.alpha + theta0 + ph))
    ch = np.fft.fft(e) / m
    if L is None:
        L = length_from_volume_factor(volume_from_coeffs(ch), R)
    s = L / (2 * np.pi)
    absc = np.abs(ch)
    tail = float(absc[g.tail_mask].sum() / absc.sum())
    anti = np.zeros(m, complex)
    nz = g.kfull != 0
    anti[nz] = ch[nz] / (1j * g.kfull[nz])
    z = np.fft.ifft(anti) * (m * s)
    zpp = s * 1j * (1 + dph) * e
    return _Frame(m, L, ph, dph, e, z, zpp, tail, float(absc[0]), s * (e - ch[0]))


def frame(state, m, L=None):
    ph = synthesize(state.phi, m)
    dph = synthesize(derivative(state.phi), m)
    return frame_from_samples(ph, dph, state.theta0, state.R, m, L)


def slp_from_frame(fr, gamma):
    m = fr.m
    g = grid_constants(m)
    s = fr.L / (2 * np.pi)
    z, zpp = fr.z, fr.zpp
    w = z[:, None] - z[None, :]
    d2 = w.real ** 2 + w.imag ** 2
    np.fill_diagonal(d2, 1.0)
    za = fr.z_alpha
    # smooth part of -log|w|: log|2 sin| - log|w|, diagonal limit -log|z_alpha|
    rem = g.log_sin - 0.5 * np.log(d2)
    np.fill_diagonal(rem, -0.5 * np.log(za.real ** 2 + za.imag ** 2))
    # rank-one part Re(conj(z'') w) w / |w|^2, diagonal limit from the tangent direction
    rank1 = (zpp.real[None, :] * w.real + zpp.imag[None, :] * w.imag) / d2
    diag = (zpp.real * za.real + zpp.imag * za.imag) / (za.real ** 2 + za.imag ** 2)
    np.fill_diagonal(rank1, 0.0)
    smooth = (rem @ zpp + (rank1 * w).sum(axis=1) + diag * za) * (2 * np.pi / m)
    logpart = np.fft.ifft(np.fft.fft(zpp) * g.log_mult)
    return (gamma / (4 * np.pi)) / s * (logpart + smooth)


def slp_samples(state, m, L=None, tol_resolution=1e-10, fr=None):
    """Complex velocity u1 + i u2 at the grid nodes, and the frame used."""
    fr = fr if fr is not None else frame(state, m, L)
    if fr.tail > tol_resolution:
        raise ResolutionError(f"tangent spectrum tail {fr.tail:.2e} exceeds {tol_resolution:.1e} at m={m}")
    return slp_from_frame(fr, state.gamma), fr


def slp_velocity(state, grid, N_out=None, L=None, tol_resolution=1e-10):
    """u_conj = u1 - i u2 on the interface as a complex series."""
    m = grid.m
    u, _ = slp_samples(state, m, L, tol_resolution)
    N_out = N_out if N_out is not None else m // 2 - 1
    return analyze(np.conj(u), N_out)


def normal_speed_samples(u, tangent):
    return (np.conj(u) * 1j * tangent).real


def normal_speed(state, u_conj, m=None):
    """U = Re(u_conj * i exp(i(alpha + theta))), returned as a real series."""
    m = m or max(4 * state.N, 2 * u_conj.N + 2)
    a = alpha_grid(m)
    tangent = np.exp(1j * (a + state.theta0 + synthesize(state.phi, m)))
    Us = (synthesize(u_conj, m) * 1j * tangent).real
    return analyze(Us, m // 2 - 1)


def tangential_speed(state, U):
    """T = M((1 + phi_alpha) U), which fixes T(0) = 0.

    The product is formed on a grid wide enough to hold its full band.
    """
    n = state.N + U.N
    m = 2 * n + 4
    dph = synthesize(derivative(state.phi), m)
    f = (1 + dph) * synthesize(U, m)
    return analyze(_mean_free_antiderivative(f), n)


def velocity_field(state, grid, L=None, tol_resolution=1e-10):
    m = grid.m
    u, fr = slp_samples(state, m, L, tol_resolution)
    Us = normal_speed_samples(u, fr.tangent)
    Ts = _mean_free_antiderivative((1 + fr.dphi) * Us)
    n = m // 2 - 1
    # int gamma kappa n ds, which vanishes for any periodic tangent
    net = state.gamma * (2 * np.pi) ** 2 / fr.L * abs(np.mean(fr.zpp))
    return VelocityField(analyze(np.conj(u), n), analyze(Us, n), analyze(Ts, n), float(net))


# linear part of the normal speed

def _ker(b):
    return cmath.exp(1j * b), expm1i(b)


def u1_mode_kernels(k):
    """The seven beta-kernels of F(i e^{i alpha} e^{i theta0} L)(k) / phi_hat(k).

    Inner s-integrals are closed form; E_7 carries the simple pole.
    """
    def e1(b):
        q, qm1 = _ker(b)
        return -q * (1j * qm1 + b * (1 + q)) / (2 * qm1) * cmath.exp(-1j * k * b) * phase_mean((k - 1) * b)

    def e2(b):
        q, qm1 = _ker(b)
        num = -1 - 2j * b + q * q
        return 1j * num / (2 * qm1 * qm1) * cmath.exp(-1j * k * b) * phase_mean((k + 1) * b)

    def e3(b):
        q, _ = _ker(b)
        return -b * q / 2 * cmath.exp(-1j * k * b) * phase_mean_shifted((k - 1) * b)

    def e4(b):
        q, qm1 = _ker(b)
        return -b * (1 + q) / (2 * qm1) * cmath.exp(-1j * k * b) * phase_mean_shifted((k + 1) * b)

    def e5(b):
        q, _ = _ker(b)
        return -1j * b * q / 2 * 1j * k * cmath.exp(-1j * k * b) * phase_mean_shifted((k - 1) * b)

    def e6(b):
        q, qm1 = _ker(b)
        return 1j * b * (1 + q) / (2 * qm1) * 1j * k * cmath.exp(-1j * k * b) * phase_mean_shifted((k + 1) * b)

    def e7(b):
        q, qm1 = _ker(b)
        return -1j * (-1 + 2 * q + q * q) / (2 * qm1) * cmath.exp(-1j * k * b)

    return (e1, e2, e3, e4, e5, e6, e7)


def u1_kernel_contributions(k, gamma=1.0):
    """(gamma/4pi) int E_j(k, beta) d beta for j = 1..7 (complex, per unit phi_hat(k))."""
    c = gamma / (4 * np.pi)
    return [c * pv_integral(f) for f in u1_mode_kernels(k)]


@lru_cache(maxsize=512)
def u1_multiplier(k, gamma=1.0):
    """m1(k) with F(U_1)(k) = m1(k) phi_hat(k).

    U_1 is the real part of the complex-linear quantity built from the E_j
    kernels, so m1(k) = (q(k) + conj(q(-k))) / 2.
    """
    if k == 0:
        return 0j
    qp = sum(u1_kernel_contributions(k, gamma))
    qm = sum(u1_kernel_contributions(-k, gamma))
    return 0.5 * (qp + np.conj(qm))


def linear_velocity_U1(phi, gamma=1.0, grid=None):
    """U_1 as the Fourier multiplier m1(k) applied to phi."""
    out = np.zeros(phi.N + 1, complex)
    for k in range(1, phi.N + 1):
        if phi[k] != 0:
            out[k] = u1_multiplier(k, gamma) * phi[k]
    return TrigSeries.from_nonneg(out)


# a priori constants for the linear kernels

_S = 0.5 * math.sqrt(1 + math.pi ** 2 / 4)  # sup |(1 + e^{ib}) b / (2(e^{ib} - 1))| type factor


def ej_bounds(gamma=1.0):
    """Per-kernel constants b_1..b_7 (E_5, E_6 scale with |k|), times gamma/4pi."""
    pi = math.pi
    b = [
        2 * pi + pi ** 2 / 4 * math.sqrt(1 + pi ** 2 / 4),
        (_S * 2 * pi + pi ** 2) + (2 * (pi / 2) * _S * 2 * pi + pi ** 2),
        pi ** 2 / 2,
        _S * pi ** 2 + 2 * pi,
        pi ** 2 / 2,
        _S * pi ** 2 + 2 * pi,
        _S * 1.5 * 2 * pi + 0.5 * 4 * 5,
    ]
    c = gamma / (4 * pi)
    return [c * x for x in b]


def H34(gamma=1.0):
    """(H3, H4) with |F(U_1)(k)| <= (H3 + H4 |k|) |phi_hat(k)|."""
    b = ej_bounds(gamma)
    return b[0] + b[1] + b[2] + b[3] + b[6], b[4] + b[5]


def kernel_constants(n, gamma=1.0):
    """C_n bounding the order-n kernel integrals of the nonlinear expansion."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    pi = math.pi
    return gamma / (4 * pi) * ((n + 1) * (pi / 2) ** n * _S * pi ** 2 + 2 * pi)


def lemma_integrand(k1, kj, kc):
    """Order-zero kernel of the nonlinear terms, regular at beta = 0."""
    def f(b):
        inner = cmath.exp(-1j * b * (k1 - kj)) * cmath.exp(-1j * b * kc) * phase_mean_shifted(b * (kc - 1))
        return inner * (-1j * b * cmath.exp(2j * b) / -expm1i(b))
    return f


def lemma_integral(k1, kj, kc, gamma=1.0):
    return gamma / (4 * math.pi) * regular_integral(lemma_integrand(k1, kj, kc))
