"""Time-step and quadrature-resolution convergence of the solver."""
import numpy as np

from stokesbubble.dynamics import SimConfig, simulate
from stokesbubble.fourier import TrigSeries
from stokesbubble.geometry import InterfaceState
from stokesbubble.velocity import QuadratureGrid, slp_velocity


def time_convergence():
    st = InterfaceState(TrigSeries.from_modes(16, {2: 0.004, 3: 0.002j, 4: 0.001}))
    finals = {}
    for dt in (0.2, 0.1, 0.05, 0.025, 0.0125):
        finals[dt] = simulate(st, SimConfig(dt=dt, t_end=2.0, output_every=10 ** 6))[1].phi.coeff
    dts = sorted(finals, reverse=True)
    errs = [np.abs(finals[a] - finals[b]).max() for a, b in zip(dts, dts[1:])]
    print("rk4 successive differences under dt halving")
    for dt, e, e_next in zip(dts, errs, errs[1:]):
        print(f"  dt={dt:<7} diff={e:.3e}  ratio to next={e / e_next:6.2f}")


def quadrature_convergence():
    half = np.zeros(9, complex)
    half[2:] = 0.03 * np.exp(-0.6 * np.arange(2, 9)) * np.exp(1j * np.arange(2, 9))
    st = InterfaceState(TrigSeries.from_nonneg(half))
    ms = (32, 48, 64, 96, 128, 256)
    us = [slp_velocity(st, QuadratureGrid.make(m), N_out=15, tol_resolution=1.0).coeff for m in ms]
    print("single-layer velocity against the m=256 reference")
    for m, u in zip(ms[:-1], us[:-1]):
        print(f"  m={m:<4} err={np.abs(u - us[-1]).max():.3e}")


if __name__ == "__main__":
    time_convergence()
    quadrature_convergence()
