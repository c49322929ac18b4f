"""Spectral simulation of a surface-tension-driven bubble in 2-D Stokes flow.

The interface is carried in tangent-angle form, the velocity comes from the
single-layer potential, and the closed-form linear multipliers are checked
against independent quadrature.
"""
from .fourier import NormWeight, TrigSeries, analyze, synthesize
from .geometry import InterfaceState, length, reconstruct_curve, volume
from .velocity import QuadratureGrid, velocity_field
from .dynamics import SimConfig, rhs, simulate, step

__all__ = [
    "NormWeight", "TrigSeries", "analyze", "synthesize",
    "InterfaceState", "length", "reconstruct_curve", "volume",
    "QuadratureGrid", "velocity_field",
    "SimConfig", "rhs", "simulate", "step",
]
