"""Pseudo-two-level reduction: dark state coupled to |4> by a composite field.

To second order in Omega_c the dark state only talks to |4>, through
Omega = -Omega_a Omega_c / G. The two-level ground energy stays finite as
delta_3 -> 0, where the perturbative correction diverges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from kerr4ls.lambda_spectrum import lambda_constants
from kerr4ls.model import SystemParams, detunings_from_params, rabi_from_params


@dataclass(frozen=True)
class TlsModel:
    omega_eff: complex
    delta_3: float


def tls_model(params: SystemParams) -> TlsModel:
    rabi = rabi_from_params(params)
    det = detunings_from_params(params)
    g = lambda_constants(rabi, det).g_norm
    return TlsModel(omega_eff=-rabi.omega_a * rabi.omega_c / g, delta_3=det.delta_3)


def tls_hamiltonian(model: TlsModel) -> np.ndarray:
    om = complex(model.omega_eff)
    return np.array([[0.0, om.conjugate() / 2], [om / 2, model.delta_3]], dtype=np.complex128)


def tls_ground_energy(model: TlsModel) -> float:
    """Eigenvalue of the two-level block connected to E = 0 at Omega = 0.

    For delta_3 > 0 this is the lower eigenvalue; for delta_3 < 0 the
    connected branch is the upper one. At delta_3 = 0 the lower value
    -|Omega|/2 is returned.
    """
    om2 = abs(model.omega_eff) ** 2
    d3 = model.delta_3
    if d3 == 0.0:
        return -0.5 * math.sqrt(om2)
    root = math.copysign(math.sqrt(d3 * d3 + om2), d3)
    # (d3 - root)/2 rewritten without cancellation
    return -om2 / (2.0 * (d3 + root))


def tls_lower_energy(model: TlsModel) -> float:
    """Lower eigenvalue of the two-level block; continuous in delta_3."""
    om2 = abs(model.omega_eff) ** 2
    d3 = model.delta_3
    return 0.5 * (d3 - math.hypot(d3, math.sqrt(om2)))


def tls_energy_printed(model: TlsModel) -> float:
    """(delta_3/2) (1 - sqrt(1 + |Omega|^2/delta_3^2)), as written; undefined at delta_3 = 0."""
    d3 = model.delta_3
    return 0.5 * d3 * (1.0 - math.sqrt(1.0 + abs(model.omega_eff) ** 2 / d3**2))
