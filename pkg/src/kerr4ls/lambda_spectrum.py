"""Analytic dressed states of the Raman-resonant lambda subsystem.

With delta_2 = 0 the unperturbed Hamiltonian has a dark state
(Omega_b|1> - Omega_a|3>)/G at zero energy, two bright states at
lambda_{-/+} = (delta_1 -/+ sqrt(delta_1^2 + G^2))/2 and the uncoupled level
|4> at delta_3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from kerr4ls.errors import DegenerateLambdaError, NearDegeneracyError
from kerr4ls.model import Detunings, RabiSet

GAP_RTOL = 1e-9

_NAMES = {1: "phi1 (dark)", 2: "phi2 (lambda_-)", 3: "phi3 (lambda_+)", 4: "phi4 (|4>)"}


@dataclass(frozen=True)
class LambdaConstants:
    g_norm: float
    n_minus: float
    n_plus: float
    lambda_minus: float
    lambda_plus: float


@dataclass(frozen=True, eq=False)
class DressedState:
    """One eigenpair in the bare basis; ``label`` runs 1..4."""

    amplitudes: np.ndarray
    energy: float
    label: int

    def overlap(self, other: np.ndarray) -> complex:
        return complex(np.vdot(self.amplitudes, other))


def lambda_constants(rabi: RabiSet, det: Detunings) -> LambdaConstants:
    g2 = abs(rabi.omega_a) ** 2 + abs(rabi.omega_b) ** 2
    if g2 == 0.0:
        raise DegenerateLambdaError(
            "degenerate lambda system: G = 0 (Omega_a = Omega_b = 0), dark state undefined"
        )
    d1 = det.delta_1
    root = math.hypot(d1, math.sqrt(g2))
    # the root of larger magnitude is formed without cancellation; the other
    # follows from lambda_+ * lambda_- = -G^2/4
    if d1 >= 0.0:
        lam_p = 0.5 * (d1 + root)
        lam_m = -g2 / (4.0 * lam_p)
    else:
        lam_m = 0.5 * (d1 - root)
        lam_p = -g2 / (4.0 * lam_m)
    return LambdaConstants(
        g_norm=math.sqrt(g2),
        n_minus=math.sqrt(g2 + 4.0 * lam_m * lam_m),
        n_plus=math.sqrt(g2 + 4.0 * lam_p * lam_p),
        lambda_minus=lam_m,
        lambda_plus=lam_p,
    )


def unperturbed_energies(consts: LambdaConstants, det: Detunings) -> np.ndarray:
    return np.array([0.0, consts.lambda_minus, consts.lambda_plus, det.delta_3])


def gap_tolerance(energies, rtol: float = GAP_RTOL) -> float:
    energies = np.asarray(energies, dtype=float)
    return rtol * max(1.0, float(energies.max() - energies.min()))


def closest_pair(energies) -> tuple[tuple[int, int], float]:
    """1-based labels of the closest pair of levels and their gap."""
    best = None
    for i, j in combinations(range(len(energies)), 2):
        gap = abs(energies[i] - energies[j])
        if best is None or gap < best[1]:
            best = ((i + 1, j + 1), gap)
    return best


def check_nondegenerate(energies, gap_tol: float | None = None) -> None:
    tol = gap_tolerance(energies) if gap_tol is None else gap_tol
    for i, j in combinations(range(len(energies)), 2):
        gap = abs(energies[i] - energies[j])
        if gap <= tol:
            raise NearDegeneracyError(
                "nondegenerate PT inapplicable: unperturbed levels "
                f"{_NAMES[i + 1]} and {_NAMES[j + 1]} collide (gap {gap:.3e} <= tolerance {tol:.3e})",
                pair=(i + 1, j + 1),
                gap=gap,
            )


def dressed_basis(rabi: RabiSet, det: Detunings, gap_tol: float | None = None) -> list[DressedState]:
    """The four unperturbed eigenstates, labeled as dark, lambda_-, lambda_+, |4>."""
    consts = lambda_constants(rabi, det)
    check_nondegenerate(unperturbed_energies(consts, det), gap_tol)
    oa, ob = rabi.omega_a, rabi.omega_b
    g, nm, np_ = consts.g_norm, consts.n_minus, consts.n_plus
    dark = np.array([ob / g, 0.0, -oa / g, 0.0], dtype=np.complex128)
    minus = np.array(
        [oa.conjugate() / nm, 2.0 * consts.lambda_minus / nm, ob.conjugate() / nm, 0.0],
        dtype=np.complex128,
    )
    plus = np.array(
        [oa.conjugate() / np_, 2.0 * consts.lambda_plus / np_, ob.conjugate() / np_, 0.0],
        dtype=np.complex128,
    )
    upper = np.array([0.0, 0.0, 0.0, 1.0], dtype=np.complex128)
    energies = (0.0, consts.lambda_minus, consts.lambda_plus, det.delta_3)
    states = []
    for label, (amps, energy) in enumerate(zip((dark, minus, plus, upper), energies), start=1):
        amps.setflags(write=False)
        states.append(DressedState(amps, float(energy), label))
    return states


def basis_matrix(states) -> np.ndarray:
    """Columns are the amplitude vectors of ``states``."""
    return np.column_stack([s.amplitudes for s in states])
