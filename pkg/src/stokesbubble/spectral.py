"""Closed-form multipliers of the linearized evolution and their quadrature oracles."""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .dynamics import SimConfig, linearized_rhs_fd
from .fourier import TrigSeries
from .quadrature import PV_EPS, expm1i, pv_integral

PI = math.pi
E = cmath.exp


class OracleFailure(ArithmeticError):
    pass


def _check_k(k):
    if k == 0:
        raise ValueError("k = 0 has no multiplier")


def J1_analytic(k):
    _check_k(k)
    return 0.0 if abs(k) == 1 else -PI / abs(k)


def J2_analytic(k):
    _check_k(k)
    a = abs(k)
    return 0.0 if a == 1 else -PI * (a - 1 / a)


def multiplier_analytic(k, L=2 * PI, gamma=1.0):
    """Fourier multiplier of the linearized operator: -(2pi/L)(gamma/4pi) pi |k|, zero at |k| = 1."""
    _check_k(k)
    if not L > 0:
        raise ValueError("L must be positive")
    if abs(k) == 1:
        return 0.0
    return -(2 * PI / L) * (gamma / (4 * PI)) * PI * abs(k)


# quadrature oracles.  q = e^{i b}; 1/(q - 1) is formed with expm1i.

def _dq(a, c, b):
    """(e^{i a b} - e^{i c b}) / b without cancellation."""
    return E(1j * c * b) * expm1i((a - c) * b) / b


def _j1_terms(k):
    c1 = k / (k - 1) + 1 / (k * (1 - k))
    c2 = k / (1 + k) - 1 / (k * (1 + k))
    c3 = -k ** 2 / (k - 1) ** 2 + 1 / (k - 1) ** 2
    c4 = 1j * k ** 2 / (k - 1) - 1j / (k - 1)
    c5 = -k ** 2 / (1 + k) ** 2 + 1 / (1 + k) ** 2
    c6 = -k ** 2 / (1 + k) + 1 / (1 + k)
    c7 = 1j * k / (k - 1) ** 2 - 1j / (k * (k - 1) ** 2)
    c8 = k / (k - 1) - 1 / (k * (k - 1))
    c9 = 1j * k / (1 + k) ** 2 - 1j / (k * (1 + k) ** 2)
    c10 = k / (1 + k) - 1 / (k * (1 + k))

    def parts(b):
        q = E(1j * b)
        d = expm1i(b)
        pm = -1 - 2 * q + q * q  # -1 - 2q + q^2
        pp = -1 + 2 * q + q * q
        return q, d, pm, pp

    def t1(b):
        q, d, pm, _ = parts(b)
        return (1j - (1j + b) * q) * pm / (4 * d * d) * _dq(-1, -k, b) * c1

    def t2(b):
        q, d, _, pp = parts(b)
        return E(-1j * b) * pp * (b + 1j * d) / (4 * d * d) * _dq(1, -k, b) * c2

    def t3(b):
        q, d, pm, _ = parts(b)
        return -1j * pm / (4 * d) * E(-1j * b * (1 + k)) * _dq(k, 1, b) * c3

    def t4(b):
        q, d, pm, _ = parts(b)
        return -1j * pm * E(-1j * b * k) / (4 * d) * c4

    def t5(b):
        q, d, _, pp = parts(b)
        return E(-1j * b) * 1j * pp / (4 * d) * E(-1j * b * k) * _dq(1 + k, 0, b) * c5

    def t6(b):
        q, d, _, pp = parts(b)
        return E(-1j * b) * pp * E(-1j * b * k) / (4 * d) * c6

    def t7(b):
        q, d, pm, _ = parts(b)
        return -pm / (4 * d) * E(-1j * b * (1 + k)) * _dq(k, 1, b) * c7

    def t8(b):
        q, d, pm, _ = parts(b)
        return -pm * E(-1j * b * k) / (4 * d) * c8

    def t9(b):
        q, d, _, pp = parts(b)
        return -E(-1j * b) * pp / (4 * d) * E(-1j * b * k) * _dq(1 + k, 0, b) * c9

    def t10(b):
        q, d, _, pp = parts(b)
        return -E(-1j * b) * pp * E(-1j * b * k) / (4 * d) * c10

    return (t1, t2, t3, t4, t5, t6, t7, t8, t9, t10)


def J1_quadrature_terms(k, eps=PV_EPS):
    """The ten principal-value integrals whose sum is J1(k)."""
    if abs(k) < 2:
        raise ValueError("J1 quadrature needs |k| >= 2")
    return [pv_integral(f, eps) for f in _j1_terms(k)]


def J1_quadrature(k, eps=PV_EPS):
    if abs(k) == 1:
        return 0j
    return sum(J1_quadrature_terms(k, eps))


def J2_quadrature(k, eps=PV_EPS):
    _check_k(k)

    def f(b):
        q = E(1j * b)
        return -E(-1j * b) * 1j * (1 + q + q * q + q ** 3) * E(-1j * k * b) / (4 * expm1i(b))

    return (1j * k - 1j / k) * pv_integral(f, eps)


def g_constants_quadrature(k, eps=PV_EPS):
    """Numeric g2, g3, g5, g6, g7, g8 (there is no g4)."""
    if k < 2:
        raise ValueError("g constants need k >= 2")

    def g2(b):
        q = E(1j * b)
        d = expm1i(b)
        return -q * (-1 - 2 * q + q * q) / (4 * d * d) * _dq(-1, -k, b) * b

    def g3(b):
        q = E(1j * b)
        d = expm1i(b)
        return E(-1j * b) * (-1 + 2 * q + q * q) / (4 * d * d) * _dq(1, -k, b) * b

    def g5(b):
        q = E(1j * b)
        return -1j * (-1 - 2 * q + q * q) * E(-1j * b * k) / (4 * expm1i(b))

    def g6(b):
        q = E(1j * b)
        return E(-1j * b) * (-1 + 2 * q + q * q) * E(-1j * b * k) / (4 * expm1i(b))

    def g7(b):
        q = E(1j * b)
        return (1 + 2 * q - q * q) * E(-1j * b * k) / (4 * expm1i(b))

    def g8(b):
        return -g6(b)

    return {name: pv_integral(f, eps) for name, f in
            (("g2", g2), ("g3", g3), ("g5", g5), ("g6", g6), ("g7", g7), ("g8", g8))}


def g_constants_analytic(k):
    return {"g2": -PI * k / 2, "g3": -PI * k / 2, "g5": -0.5j * PI,
            "g6": -PI / 2, "g7": -PI / 2, "g8": PI / 2}


def J1_from_g(k, g):
    """J1 assembled from the g constants."""
    return ((k + 1) / k * g["g2"] + (k - 1) / k * g["g3"] + 1j * (k + 1) * g["g5"]
            + (1 - k) * g["g6"] + (k + 1) / k * g["g7"] + (k - 1) / k * g["g8"])


def multiplier_quadrature(k, L=2 * PI, gamma=1.0, eps=PV_EPS):
    """-(2pi/L)(gamma/4pi)(J1 + J2) assembled from the quadrature oracles (complex)."""
    _check_k(k)
    return (2 * PI / L) * (gamma / (4 * PI)) * (J1_quadrature(k, eps) + J2_quadrature(k, eps))


# a priori length-factor functions

X_MAX_A = 0.5 * math.log(1 + 2 / PI)


def A_of(x):
    if not 0 < x < X_MAX_A:
        raise ValueError(f"A is defined for 0 < x < {X_MAX_A:.6g}")
    e = 0.5 * PI * math.expm1(2 * x)
    # 1 - sqrt(1 - e) = e / (1 + sqrt(1 - e))
    return e / (1 + math.sqrt(1 - e)) / x


def A1_of(x):
    if x < 0:
        raise ValueError("A1 needs x >= 0")
    return 1 / math.sqrt(1 + 0.5 * PI * math.expm1(2 * x))


# reports

@dataclass(frozen=True)
class MultiplierReport:
    k: int
    analytic: float
    numeric: float
    abs_err: float
    method: str

    def passed(self, tol):
        return self.abs_err <= tol


@dataclass(frozen=True)
class LinearizationConfig:
    kmax: int = 6
    gamma: float = 1.0
    R: float = 1.0
    eps: float = 1e-6
    N: int = 16
    m: int = 64
    include_k1: bool = True


def verify_linearization(config=LinearizationConfig()):
    """Rows comparing the closed-form multiplier with the quadrature and finite-difference routes."""
    L = 2 * PI * config.R
    sim = SimConfig(N=max(config.N, config.kmax + 1), m=max(config.m, 4 * (config.kmax + 1)))
    rows = []
    ks = range(1 if config.include_k1 else 2, config.kmax + 1)
    for k in ks:
        a = multiplier_analytic(k, L, config.gamma)
        q = multiplier_quadrature(k, L, config.gamma) if abs(k) > 1 else 0j
        if abs(q.imag) > 1e-8:
            raise OracleFailure(f"quadrature multiplier at k={k} has imaginary part {q.imag:.2e}")
        d = TrigSeries.from_modes(sim.N, {k: 1.0})
        fd = linearized_rhs_fd(d, config.eps, sim, R=config.R, gamma=config.gamma)[k]
        for method, val in (("pv_quadrature", q.real), ("fd_linearization", fd.real)):
            rows.append(MultiplierReport(k, a, float(val), abs(a - float(val)), method))
    return rows


def reports_to_json(rows):
    return json.dumps([asdict(r) for r in rows], indent=2)
