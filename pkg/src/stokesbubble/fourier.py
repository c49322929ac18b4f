"""Band-limited Fourier series on [-pi, pi) and the Wiener-type norms.

Coefficients follow f(alpha) = sum_k c_k exp(i k alpha) with
c_k = (1/2pi) int f(alpha) exp(-i k alpha) dalpha.  Storage is dense over
k = -N..N, index ``k + N``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class AliasingError(ValueError):
    """Grid too coarse to represent the requested band."""


class GridError(ValueError):
    """Sample nodes are not a uniform periodic grid."""


def alpha_grid(m):
    """Uniform nodes alpha_j = 2 pi j / m."""
    return 2.0 * np.pi * np.arange(m) / m


def _hermitian_gap(coeff):
    return np.max(np.abs(coeff - np.conj(coeff[::-1]))) if coeff.size else 0.0


@dataclass(frozen=True)
class TrigSeries:
    """Trigonometric polynomial with modes |k| <= N."""

    N: int
    coeff: np.ndarray = field(repr=False)
    real_flag: bool = True

    def __post_init__(self):
        c = np.asarray(self.coeff, dtype=complex)
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        if c.shape != (2 * self.N + 1,):
            raise ValueError(f"coeff must have length 2N+1={2 * self.N + 1}, got {c.shape}")
        if self.real_flag:
            scale = max(1.0, float(np.max(np.abs(c))))
            gap = _hermitian_gap(c)
            if gap > 1e-12 * scale:
                raise ValueError(f"real series violates coeff(-k) = conj(coeff(k)) by {gap:.3e}")
            # remove roundoff-level asymmetry so downstream samples are exactly real
            c = 0.5 * (c + np.conj(c[::-1]))
        c.setflags(write=False)
        object.__setattr__(self, "coeff", c)

    # construction helpers
    @classmethod
    def zeros(cls, N, real_flag=True):
        return cls(N, np.zeros(2 * N + 1, complex), real_flag)

    @classmethod
    def from_modes(cls, N, modes, real_flag=True):
        """Build from a {k: value} mapping; real series get the conjugate mode filled in."""
        c = np.zeros(2 * N + 1, complex)
        for k, v in modes.items():
            if abs(k) > N:
                raise ValueError(f"mode {k} outside band N={N}")
            c[k + N] = v
            if real_flag and k != 0:
                c[-k + N] = np.conj(v)
        if real_flag:
            c[N] = c[N].real
        return cls(N, c, real_flag)

    @classmethod
    def from_nonneg(cls, half):
        """Real series from coefficients k = 0..N (exactly Hermitian by construction)."""
        half = np.asarray(half, complex)
        N = half.size - 1
        c = np.empty(2 * N + 1, complex)
        c[N:] = half
        c[N] = half[0].real
        c[:N] = np.conj(half[:0:-1])
        return cls(N, c, True)

    def __getitem__(self, k):
        if abs(k) > self.N:
            return 0j
        return complex(self.coeff[k + self.N])

    @property
    def modes(self):
        return np.arange(-self.N, self.N + 1)

    def nonzero_modes(self, tol=0.0):
        return [int(k) for k, c in zip(self.modes, self.coeff) if abs(c) > tol]

    def resized(self, N):
        """Zero-pad or truncate to band N."""
        c = np.zeros(2 * N + 1, complex)
        n = min(N, self.N)
        c[N - n:N + n + 1] = self.coeff[self.N - n:self.N + n + 1]
        return TrigSeries(N, c, self.real_flag)

    def __add__(self, other):
        N = max(self.N, other.N)
        a, b = self.resized(N), other.resized(N)
        return TrigSeries(N, a.coeff + b.coeff, self.real_flag and other.real_flag)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, s):
        real = self.real_flag and np.isreal(s)
        return TrigSeries(self.N, complex(s) * self.coeff, bool(real))

    def __neg__(self):
        return (-1.0) * self

    def __call__(self, alpha):
        alpha = np.asarray(alpha, float)
        vals = np.exp(1j * np.multiply.outer(alpha, self.modes)) @ self.coeff
        return vals.real if self.real_flag else vals

    def allclose(self, other, atol=1e-12):
        N = max(self.N, other.N)
        return bool(np.allclose(self.resized(N).coeff, other.resized(N).coeff, rtol=0, atol=atol))

    def to_json(self):
        return {
            "N": self.N,
            "re": [float(x) for x in self.coeff.real],
            "im": [float(x) for x in self.coeff.imag],
        }

    @classmethod
    def from_json(cls, d, real_flag=True):
        N = int(d["N"])
        re, im = d["re"], d["im"]
        if len(re) != 2 * N + 1 or len(im) != 2 * N + 1:
            raise ValueError(f"series with N={N} needs {2 * N + 1} re/im entries")
        return cls(N, np.asarray(re, float) + 1j * np.asarray(im, float), real_flag)


@dataclass(frozen=True)
class NormWeight:
    nu0: float = 0.0
    t: float = 0.0

    @property
    def nu(self):
        return nu_of_t(self.nu0, self.t)


UNWEIGHTED = NormWeight(0.0, 0.0)


def nu_of_t(nu0, t):
    """Analyticity band growth nu0 * t / (1 + t)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if nu0 < 0:
        raise ValueError("nu0 must be nonnegative")
    if math.isinf(t):
        return float(nu0)
    return nu0 * t / (1.0 + t)


# transforms

def synthesize(f, m):
    """Samples of f on alpha_grid(m)."""
    if m < 2 * f.N + 2:
        raise AliasingError(f"grid of {m} points cannot resolve band N={f.N}")
    N = f.N
    if f.real_flag:
        half = np.zeros(m // 2 + 1, complex)
        half[:N + 1] = f.coeff[N:]
        return np.fft.irfft(half, n=m) * m
    full = np.zeros(m, complex)
    full[:N + 1] = f.coeff[N:]
    if N:
        full[-N:] = f.coeff[:N]
    return np.fft.ifft(full) * m


def _check_uniform(alpha, m):
    alpha = np.asarray(alpha, float)
    if alpha.shape != (m,):
        raise GridError("node array does not match samples")
    h = np.diff(alpha)
    if not np.allclose(h, 2 * np.pi / m, rtol=0, atol=1e-12):
        raise GridError("nodes are not uniformly spaced with step 2pi/m")


def analyze(samples, N, alpha=None):
    """Fourier coefficients |k| <= N from samples on a uniform grid.

    ``alpha`` may be passed to have the grid validated; a uniform grid with
    a nonzero offset is accepted and the phase shift is removed.
    """
    samples = np.asarray(samples)
    m = samples.shape[0]
    if m < 2 * N + 2:
        raise AliasingError(f"{m} samples cannot resolve band N={N}")
    shift = 0.0
    if alpha is not None:
        _check_uniform(alpha, m)
        shift = float(np.asarray(alpha)[0])
    ks = np.arange(N + 1)
    if np.isrealobj(samples):
        half = np.fft.rfft(samples)[:N + 1] / m
        if shift:
            half = half * np.exp(-1j * ks * shift)
        return TrigSeries.from_nonneg(half)
    full = np.fft.fft(samples) / m
    c = np.concatenate([full[m - N:], full[:N + 1]]) if N else full[:1].copy()
    if shift:
        c = c * np.exp(-1j * np.arange(-N, N + 1) * shift)
    return TrigSeries(N, c, False)


# operators on coefficients

def derivative(f):
    return TrigSeries(f.N, 1j * f.modes * f.coeff, f.real_flag)


def operator_M(f):
    """Mean-free antiderivative int_0^alpha f - (alpha/2pi) int f, in coefficient form."""
    k = f.modes
    out = np.zeros_like(f.coeff)
    nz = k != 0
    out[nz] = -1j / k[nz] * f.coeff[nz]
    out[f.N] = np.sum(1j / k[nz] * f.coeff[nz])
    return TrigSeries(f.N, out, f.real_flag)


def cutoff_JN(f, n_keep):
    if n_keep < 0:
        raise ValueError("cutoff must be nonnegative")
    c = f.coeff.copy()
    c[np.abs(f.modes) > n_keep] = 0
    return TrigSeries(f.N, c, f.real_flag)


def cutoff_JN1(f, n_keep):
    g = cutoff_JN(f, n_keep)
    c = g.coeff.copy()
    c[np.abs(f.modes) == 1] = 0
    return TrigSeries(f.N, c, f.real_flag)


def product(f, g, N_out):
    """Exact coefficient convolution truncated to |k| <= N_out."""
    full = np.convolve(f.coeff, g.coeff)  # modes -(Nf+Ng)..(Nf+Ng)
    M = f.N + g.N
    out = np.zeros(2 * N_out + 1, complex)
    n = min(N_out, M)
    out[N_out - n:N_out + n + 1] = full[M - n:M + n + 1]
    real = f.real_flag and g.real_flag
    if real:
        return TrigSeries.from_nonneg(out[N_out:])
    return TrigSeries(N_out, out, False)


# norms (compensated summation via math.fsum)

def norm_F01(f, w=UNWEIGHTED):
    nu = w.nu
    return math.fsum(math.exp(nu * abs(int(k))) * abs(c) for k, c in zip(f.modes, f.coeff))


def norm_Fs1(f, s, w=UNWEIGHTED):
    """Homogeneous norm sum_{k != 0} e^{nu|k|} |k|^s |c_k| (zero mode excluded)."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    nu = w.nu
    return math.fsum(
        math.exp(nu * abs(int(k))) * abs(int(k)) ** s * abs(c)
        for k, c in zip(f.modes, f.coeff) if k != 0
    )


def norm_F11_inclusive(f, w=UNWEIGHTED):
    """s = 1 weighted norm with the zero mode counted at weight 1."""
    return abs(f[0]) + norm_Fs1(f, 1.0, w)
