"""Tangent-angle evolution, time stepping and trajectory diagnostics."""
from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .fourier import NormWeight, TrigSeries, norm_F01, norm_Fs1
from .geometry import InterfaceState, reconstruct_curve, volume
from .velocity import (
    ResolutionError,
    _mean_free_antiderivative,
    _spectral_diff,
    frame_from_samples,
    normal_speed_samples,
    slp_from_frame,
)

CSV_HEADER = ["t", "L", "norm_F11_nu", "norm_F11", "norm_F21_nu", "maxU", "maxT",
              "closure", "volume_residual", "theta0"]


class StepFailure(ArithmeticError):
    def __init__(self, msg, last_good=None):
        super().__init__(msg)
        self.last_good = last_good


class SmallnessError(ValueError):
    pass


class SimulationError(RuntimeError):
    """A run stopped early; ``records`` holds what was produced."""

    def __init__(self, msg, records, state):
        super().__init__(msg)
        self.records = records
        self.state = state


@dataclass(frozen=True)
class SimConfig:
    N: int = 16
    m: int = 64
    dt: float = 1e-3
    t_end: float = 20.0
    integrator: str = "rk4"
    nu0: float = 0.0
    output_every: int = 100
    tol_closure: float = 1e-6
    tol_resolution: float = 1e-10
    constrained: bool = True
    smallness: float = 0.05

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.N < 2:
            raise ValueError("N must be >= 2")
        if self.m < 4 * self.N or self.m % 2:
            raise ValueError("m must be even and >= 4N")
        if self.nu0 < 0:
            raise ValueError("nu0 must be nonnegative")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.integrator not in ("rk4", "imex"):
            raise ValueError("integrator must be 'rk4' or 'imex'")
        if self.output_every < 1:
            raise ValueError("output_every must be >= 1")

    def replace(self, **kw):
        d = asdict(self)
        d.update(kw)
        return SimConfig(**d)

    @property
    def n_steps(self):
        return int(round(self.t_end / self.dt))


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    L: float
    norm_F11: float
    norm_F11_unweighted: float
    norm_F21: float
    maxU: float
    maxT: float
    closure_residual: float
    volume_residual: float
    theta0: float
    # extra diagnostics kept off the CSV
    volume: float = math.nan
    norm_F01: float = math.nan

    def row(self):
        return [getattr(self, f.name) for f in fields(self)][:len(CSV_HEADER)]


def _samples(half, m):
    """Samples of a real series given by its coefficients k = 0..N, and of its derivative."""
    buf = np.zeros(m // 2 + 1, complex)
    n = half.shape[0]
    buf[:n] = half
    ph = np.fft.irfft(buf, n=m) * m
    buf[:n] *= 1j * np.arange(n)
    return ph, np.fft.irfft(buf, n=m) * m


def _theta_t(half, theta0, R, gamma, config):
    """Grid samples of d theta/dt, plus U, T and L."""
    m = config.m
    ph, dph = _samples(half, m)
    fr = frame_from_samples(ph, dph, theta0, R, m)
    if fr.tail > config.tol_resolution:
        raise ResolutionError(f"tangent spectrum tail {fr.tail:.2e} exceeds {config.tol_resolution:.1e} at m={m}")
    u = slp_from_frame(fr, gamma)
    U = normal_speed_samples(u, fr.tangent)
    T = _mean_free_antiderivative((1 + dph) * U)
    f = (2 * np.pi / fr.L) * (_spectral_diff(U) + T * (1 + dph))
    return f, U, T, fr


def _rhs_half(half, theta0, R, gamma, config):
    f, *_ = _theta_t(half, theta0, R, gamma, config)
    out = np.fft.rfft(f)[:config.N + 1] / config.m
    if config.constrained:
        out[1] = 0
    return out


def rhs(state, config):
    """d theta / dt projected onto |k| <= N; the zero mode is the theta0 rate."""
    half = state.phi.resized(config.N).coeff[config.N:]
    return TrigSeries.from_nonneg(_rhs_half(half, state.theta0, state.R, state.gamma, config))


def zero_mode_rate(state, config=None):
    config = config or SimConfig(N=max(2, state.N), m=max(64, 4 * state.N))
    return rhs(state, config)[0].real


def _linear_rates(gamma, R, N):
    k = np.arange(N + 1)
    lam = -gamma * k / (4 * R)
    lam[:2] = 0.0
    return lam


def _rk4_half(u, th, R, gamma, config):
    dt = config.dt

    def f(v, t0):
        r = _rhs_half(v, t0, R, gamma, config)
        z = r[0].real
        r[0] = 0
        return r, z

    k1, z1 = f(u, th)
    k2, z2 = f(u + 0.5 * dt * k1, th + 0.5 * dt * z1)
    k3, z3 = f(u + 0.5 * dt * k2, th + 0.5 * dt * z2)
    k4, z4 = f(u + dt * k3, th + dt * z3)
    return u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4), th + dt / 6 * (z1 + 2 * z2 + 2 * z3 + z4)


def _imex_half(u, th, R, gamma, config):
    """Integrating-factor RK4 with the frozen linear multiplier on |k| > 1."""
    dt = config.dt
    lam = _linear_rates(gamma, R, config.N)
    E = np.exp(lam * dt)
    E2 = np.exp(lam * dt / 2)

    def nl(v, t0):
        r = _rhs_half(v, t0, R, gamma, config)
        z = r[0].real
        r[0] = 0
        return r - lam * v, z

    n1, z1 = nl(u, th)
    n2, z2 = nl(E2 * (u + 0.5 * dt * n1), th + 0.5 * dt * z1)
    n3, z3 = nl(E2 * u + 0.5 * dt * n2, th + 0.5 * dt * z2)
    n4, z4 = nl(E * u + dt * E2 * n3, th + dt * z3)
    new = E * u + dt / 6 * (E * n1 + 2 * E2 * (n2 + n3) + n4)
    return new, th + dt / 6 * (z1 + 2 * z2 + 2 * z3 + z4)


def _step_half(u, th, R, gamma, config):
    if config.integrator == "rk4":
        return _rk4_half(u, th, R, gamma, config)
    return _imex_half(u, th, R, gamma, config)


def _to_state(template, u, th, t):
    return template.replace(phi=TrigSeries.from_nonneg(u), theta0=float(th), t=t)


def step(state, config):
    u = state.phi.resized(config.N).coeff[config.N:].copy()
    new, th = _step_half(u, state.theta0, state.R, state.gamma, config)
    if not (np.all(np.isfinite(new)) and math.isfinite(th)):
        raise StepFailure(f"non-finite state at t={state.t + config.dt:.6g}", state)
    return _to_state(state, new, th, state.t + config.dt)


def diagnostics(state, config):
    m = config.m
    half = state.phi.resized(config.N).coeff[config.N:]
    f, U, T, fr = _theta_t(half, state.theta0, state.R, state.gamma, config)
    L = fr.L
    w = NormWeight(config.nu0, state.t)
    curve = reconstruct_curve(state, m=m, L=L)
    V = volume(curve, tol=math.inf)
    V0 = math.pi * state.R ** 2
    return DiagnosticsRecord(
        t=state.t,
        L=L,
        norm_F11=norm_Fs1(state.phi, 1.0, w),
        norm_F11_unweighted=norm_Fs1(state.phi, 1.0),
        norm_F21=norm_Fs1(state.phi, 2.0, w),
        maxU=float(np.max(np.abs(U))),
        maxT=float(np.max(np.abs(T))),
        closure_residual=fr.closure,
        volume_residual=abs(V - V0) / V0,
        theta0=state.theta0,
        volume=V,
        norm_F01=norm_F01(state.phi),
    )


def simulate(init, config, callback=None):
    """Integrate to t_end, returning a record every ``output_every`` steps."""
    if init.N != config.N:
        init = init.replace(phi=init.phi.resized(config.N))
    n0 = norm_Fs1(init.phi, 1.0)
    if n0 > config.smallness:
        raise SmallnessError(f"initial norm {n0:.4g} exceeds smallness threshold {config.smallness}")
    state = init
    records = [diagnostics(state, config)]
    c_allow = max(records[0].closure_residual, config.tol_closure)
    u = init.phi.coeff[config.N:].copy()
    th = init.theta0
    try:
        for i in range(1, config.n_steps + 1):
            new, th_new = _step_half(u, th, init.R, init.gamma, config)
            if not (np.all(np.isfinite(new)) and math.isfinite(th_new)):
                raise StepFailure(f"non-finite state at t={init.t + i * config.dt:.6g}", state)
            u, th = new, th_new
            last = i == config.n_steps
            if callback is not None or last or i % config.output_every == 0:
                state = _to_state(init, u, th, init.t + i * config.dt)
            if callback is not None:
                callback(state)
            if last or i % config.output_every == 0:
                rec = diagnostics(state, config)
                records.append(rec)
                if rec.closure_residual > c_allow * (1 + 1e-6):
                    raise StepFailure(f"closure residual {rec.closure_residual:.3e} above {c_allow:.1e}", state)
    except (StepFailure, ArithmeticError, ResolutionError) as exc:
        raise SimulationError(str(exc), records, state) from exc
    return records, state


def linearized_rhs_fd(direction, eps, config, R=1.0, gamma=1.0):
    """(rhs(eps d) - rhs(0)) / eps about the circle of radius R."""
    if not 1e-8 <= eps <= 1e-4:
        raise ValueError("eps must lie in [1e-8, 1e-4]")
    d = direction.resized(config.N)
    base = InterfaceState(TrigSeries.zeros(config.N), R=R, gamma=gamma)
    pert = base.replace(phi=eps * d)
    return (1 / eps) * (rhs(pert, config) - rhs(base, config))


def fitted_rate(records, t_min=0.0, floor=1e-13):
    """Least-squares slope of -log ||phi||_{F^{1,1}} against t."""
    t = np.array([r.t for r in records if r.t >= t_min and r.norm_F11_unweighted > floor])
    y = np.log([r.norm_F11_unweighted for r in records if r.t >= t_min and r.norm_F11_unweighted > floor])
    if t.size < 2:
        return float("nan")
    return float(-np.polyfit(t, y, 1)[0])


def write_diagnostics(path, records):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([f"{x:.17g}" for x in r.row()])
