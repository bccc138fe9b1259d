"""Physical parameters and the four-level N-scheme Hamiltonian.

Units are hbar = 1: every matrix entry is an angular frequency. The bare
basis is ordered |1>, |2>, |3>, |4> and labels the invariant subspace
{|1, n_a, n_b, n_c>, |2, n_a-1, n_b, n_c>, |3, n_a-1, n_b+1, n_c>,
|4, n_a-1, n_b+1, n_c-1>}.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from kerr4ls.errors import DegenerateSubspaceError, RamanResonanceError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SystemParams:
    """Couplings, photon numbers and detunings of the atom-field system.

    ``n_x`` are the photon numbers when the atom is in |1>. ``phi`` is an
    extra phase applied to the perturbing field, so the 3-4 coupling in the
    Hamiltonian is ``2 g_c sqrt(n_c) exp(i phi)``.
    """

    g_a: complex
    g_b: complex
    g_c: complex
    n_a: int = 1
    n_b: int = 0
    n_c: int = 1
    delta_a: float = 0.0
    delta_b: float = 0.0
    delta_c: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        for name in ("n_a", "n_b", "n_c"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")
            object.__setattr__(self, name, int(value))
        for name in ("g_a", "g_b", "g_c"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        for name in ("delta_a", "delta_b", "delta_c", "phi"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check_subspace(self)
        _check_raman(self)

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    @classmethod
    def from_rabi(cls, omega_a, omega_b, omega_c, delta_1, delta_3, phi=0.0) -> "SystemParams":
        """Parameters realizing the given Rabi frequencies with n_a = n_c = 1, n_b = 0."""
        return cls(
            g_a=complex(omega_a) / 2,
            g_b=complex(omega_b) / 2,
            g_c=complex(omega_c) / 2,
            n_a=1,
            n_b=0,
            n_c=1,
            delta_a=delta_1,
            delta_b=delta_1,
            delta_c=delta_3,
            phi=phi,
        )

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


def _check_subspace(params: SystemParams) -> None:
    if params.n_a < 1 or params.n_c < 1:
        raise DegenerateSubspaceError(
            "degenerate subspace: n_a >= 1 and n_c >= 1 are required for the "
            f"four-dimensional invariant subspace (got n_a={params.n_a}, n_c={params.n_c})"
        )


def _check_raman(params: SystemParams) -> None:
    if params.delta_b != params.delta_a:
        raise RamanResonanceError(
            "Raman resonance violated: delta_2 = delta_a - delta_b = "
            f"{params.delta_a - params.delta_b!r} but delta_2 = 0 is required"
        )


@dataclass(frozen=True)
class RabiSet:
    omega_a: complex
    omega_b: complex
    omega_c: complex


@dataclass(frozen=True)
class Detunings:
    delta_1: float
    delta_2: float
    delta_3: float


def rabi_from_params(params: SystemParams) -> RabiSet:
    """Quantized Rabi frequencies 2 g_a sqrt(n_a), 2 g_b sqrt(n_b + 1), 2 g_c sqrt(n_c)."""
    _check_subspace(params)
    return RabiSet(
        omega_a=2 * params.g_a * math.sqrt(params.n_a),
        omega_b=2 * params.g_b * math.sqrt(params.n_b + 1),
        omega_c=2 * params.g_c * math.sqrt(params.n_c) * cmath.exp(1j * params.phi),
    )


def detunings_from_params(params: SystemParams) -> Detunings:
    _check_raman(params)
    return Detunings(
        delta_1=params.delta_a,
        delta_2=0.0,
        delta_3=params.delta_c - params.delta_b + params.delta_a,
    )


@dataclass(frozen=True, eq=False)
class Hamiltonian4:
    """Total Hamiltonian ``h = h0 + epsilon * v``.

    ``v`` is the unit-modulus 3-4 coupling direction and ``epsilon = |Omega_c|/2``.
    """

    h: np.ndarray
    h0: np.ndarray
    v: np.ndarray
    epsilon: float

    def with_epsilon(self, epsilon: float) -> "Hamiltonian4":
        """Same unperturbed part and coupling direction at a new strength."""
        return Hamiltonian4(_frozen(self.h0 + epsilon * self.v), self.h0, self.v, float(epsilon))

    @property
    def omega_c(self) -> complex:
        return complex(2.0 * self.epsilon * self.v[3, 2])


def perturbation_direction(omega_c: complex) -> np.ndarray:
    phase = cmath.exp(1j * cmath.phase(omega_c)) if omega_c != 0 else 1.0 + 0j
    v = np.zeros((4, 4), dtype=np.complex128)
    v[2, 3] = phase.conjugate()
    v[3, 2] = phase
    return _frozen(v)


def unperturbed_hamiltonian(rabi: RabiSet, det: Detunings) -> np.ndarray:
    oa, ob = rabi.omega_a, rabi.omega_b
    h0 = np.array(
        [
            [0.0, oa.conjugate() / 2, 0.0, 0.0],
            [oa / 2, det.delta_1, ob / 2, 0.0],
            [0.0, ob.conjugate() / 2, det.delta_2, 0.0],
            [0.0, 0.0, 0.0, det.delta_3],
        ],
        dtype=np.complex128,
    )
    return _frozen(h0)


def build_hamiltonian(params: SystemParams) -> Hamiltonian4:
    rabi = rabi_from_params(params)
    det = detunings_from_params(params)
    h0 = unperturbed_hamiltonian(rabi, det)
    v = perturbation_direction(rabi.omega_c)
    epsilon = abs(rabi.omega_c) / 2
    return Hamiltonian4(_frozen(h0 + epsilon * v), h0, v, epsilon)
