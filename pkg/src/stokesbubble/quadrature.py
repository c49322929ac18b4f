"""Scalar quadrature helpers for the singular beta-integrals.

Integrands are complex functions of beta on [-pi, pi] with at most a simple
pole at beta = 0.  The principal value is formed from the even part
f(b) + f(-b), which is regular; [eps, pi] goes to QUADPACK and the excised
piece [0, eps] is closed with a midpoint value (error O(eps^3)).
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.integrate import quad

PV_EPS = 1e-4
QUAD_TOL = 1e-13


def expm1i(x):
    """exp(i x) - 1 without cancellation for small x."""
    return 2j * math.sin(0.5 * x) * cmath.exp(0.5j * x)


def phase_mean(x):
    """int_0^1 exp(i x s) ds."""
    if abs(x) < 1e-3:
        return sum((1j * x) ** n / math.factorial(n + 1) for n in range(8))
    return expm1i(x) / (1j * x)


def phase_mean_shifted(x):
    """int_0^1 (s - 1) exp(i x s) ds."""
    if abs(x) < 1e-3:
        return -sum((1j * x) ** n / (math.factorial(n) * (n + 1) * (n + 2)) for n in range(8))
    return expm1i(x) / (x * x) + 1 / (1j * x)


def complex_quad(f, a, b, tol=QUAD_TOL, limit=400):
    re = quad(lambda x: f(x).real, a, b, epsabs=tol, epsrel=tol, limit=limit)[0]
    im = quad(lambda x: f(x).imag, a, b, epsabs=tol, epsrel=tol, limit=limit)[0]
    return complex(re, im)


def pv_integral(f, eps=PV_EPS, tol=QUAD_TOL):
    """Principal value of int_{-pi}^{pi} f(beta) d beta."""
    def even(b):
        return f(b) + f(-b)

    return complex_quad(even, eps, math.pi, tol) + eps * even(0.5 * eps)


def regular_integral(f, tol=QUAD_TOL):
    """int_{-pi}^{pi} f for f bounded near 0 (the removable point is never sampled)."""
    return pv_integral(f, eps=1e-6, tol=tol)


def log_weights(m):
    """Circulant weights R_p, p = 0..m-1, for int -log|2 sin((a_j - b)/2)| f(b) db.

    Exact for trigonometric f of degree <= m/2 - 1.
    """
    if m % 2:
        raise ValueError("m must be even")
    p = np.arange(m)
    h = 2 * np.pi / m
    k = np.arange(1, m // 2)
    w = (np.cos(np.outer(p, k) * h) / k).sum(axis=1) + np.cos(np.pi * p) / m
    return h * w


def log_multiplier(m):
    """Fourier multiplier of the log kernel on an m-point grid (numpy FFT order)."""
    k = np.abs(np.fft.fftfreq(m, 1.0 / m))
    out = np.zeros(m)
    nz = k != 0
    out[nz] = np.pi / k[nz]
    return out
