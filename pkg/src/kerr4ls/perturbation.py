"""Nondegenerate Rayleigh-Schroedinger perturbation theory for H = H0 + eps*V.

Energies are carried to second order and states to first order, in the
dressed eigenbasis of H0 and with intermediate normalization. The printed
closed forms for the dark, bright and upper-level corrections are kept as
a separate validation layer (:func:`closed_form_corrections`).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from kerr4ls.errors import NearDegeneracyError
from kerr4ls.lambda_spectrum import (
    DressedState,
    LambdaConstants,
    basis_matrix,
    check_nondegenerate,
    dressed_basis,
    gap_tolerance,
    lambda_constants,
)
from kerr4ls.model import Detunings, RabiSet, SystemParams, build_hamiltonian, detunings_from_params, rabi_from_params

CLOSED_FORM_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class PerturbationSplit:
    h0: np.ndarray
    v: np.ndarray
    epsilon: float
    basis: tuple[DressedState, ...]
    gap_tol: float


@dataclass(frozen=True, eq=False)
class PerturbationResult:
    """Energy coefficients of eps^0, eps^1, eps^2 and first-order state coefficients.

    ``state1[n, s]`` is the coefficient of the unperturbed state ``s`` in the
    first-order correction to state ``n`` (both 0-based here).
    """

    e0: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    state1: np.ndarray
    v_dressed: np.ndarray


def perturbation_split(params: SystemParams, gap_tol: float | None = None) -> PerturbationSplit:
    ham = build_hamiltonian(params)
    rabi = rabi_from_params(params)
    det = detunings_from_params(params)
    basis = dressed_basis(rabi, det, gap_tol)
    energies = [s.energy for s in basis]
    tol = gap_tolerance(energies) if gap_tol is None else gap_tol
    return PerturbationSplit(ham.h0, ham.v, ham.epsilon, tuple(basis), tol)


def second_order_energies(split: PerturbationSplit) -> PerturbationResult:
    e0 = np.array([s.energy for s in split.basis])
    try:
        check_nondegenerate(e0, split.gap_tol)
    except NearDegeneracyError as exc:
        i, j = exc.pair
        raise NearDegeneracyError(
            f"small-denominator: E0[{i}] - E0[{j}] = {e0[i - 1] - e0[j - 1]:.3e} "
            f"is below the gap tolerance {split.gap_tol:.3e}",
            pair=exc.pair,
            gap=exc.gap,
        ) from exc

    b = basis_matrix(split.basis)
    vd = b.conj().T @ split.v @ b  # vd[s, n] = <phi_s|V|phi_n>
    n = len(e0)
    e1 = np.real(np.diag(vd)).copy()
    e2 = np.zeros(n)
    state1 = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        total = 0.0
        for s in range(n):
            if s == k:
                continue
            denom = e0[k] - e0[s]
            element = vd[s, k]
            total += (element.real ** 2 + element.imag ** 2) / denom
            state1[k, s] = element / denom
        e2[k] = total
    return PerturbationResult(e0, e1, e2, state1, vd)


def perturbation_result(params: SystemParams, gap_tol: float | None = None) -> tuple[PerturbationSplit, PerturbationResult]:
    split = perturbation_split(params, gap_tol)
    return split, second_order_energies(split)


def perturbed_energy(result: PerturbationResult, n: int, epsilon: float) -> float:
    """Energy of state ``n`` (1-based) through second order in ``epsilon``."""
    k = _index(n)
    return float(result.e0[k] + epsilon * result.e1[k] + epsilon**2 * result.e2[k])


def first_order_vector(result: PerturbationResult, basis: Sequence[DressedState], n: int, epsilon: float) -> np.ndarray:
    """Unnormalized phi_n + eps * sum_s a_s phi_s in the bare basis."""
    k = _index(n)
    return basis[k].amplitudes + epsilon * (basis_matrix(basis) @ result.state1[k])


def perturbed_state(result: PerturbationResult, basis: Sequence[DressedState], n: int, epsilon: float) -> DressedState:
    vec = first_order_vector(result, basis, n, epsilon)
    vec = vec / np.linalg.norm(vec)
    vec.setflags(write=False)
    return DressedState(vec, perturbed_energy(result, n, epsilon), n)


def _index(n: int) -> int:
    if n not in (1, 2, 3, 4):
        raise ValueError(f"state index must be in 1..4, got {n}")
    return n - 1


class Consistency(str, enum.Enum):
    CONSISTENT = "CONSISTENT"
    DISCREPANT = "DISCREPANT"


@dataclass(frozen=True)
class ClosedFormCheck:
    values: tuple[float, float, float, float]
    engine: tuple[float, float, float, float]
    flags: tuple[Consistency, Consistency, Consistency, Consistency]

    def __iter__(self):
        return iter(self.values)


def printed_corrections(consts: LambdaConstants, rabi: RabiSet, det: Detunings) -> tuple[float, float, float, float]:
    """The four closed-form second-order coefficients exactly as printed."""
    a2 = abs(rabi.omega_a) ** 2
    b2 = abs(rabi.omega_b) ** 2
    g2 = consts.g_norm**2
    d1, d3 = det.delta_1, det.delta_3
    lam_m, lam_p = consts.lambda_minus, consts.lambda_plus
    l1 = -a2 / (d3 * (a2 + b2))
    l2 = -b2 / (consts.n_minus**2 * (-2.0 * lam_m + 2.0 * d3))
    l3 = b2 / (consts.n_plus**2 * (2.0 * lam_p + 2.0 * d3))
    l4 = (4.0 * (d1 - d3) * d3 + a2) / (d3 * (g2 + 4.0 * d3 * (d1 - d3)))
    return l1, l2, l3, l4


def closed_form_corrections(
    consts: LambdaConstants,
    rabi: RabiSet,
    det: Detunings,
    gap_tol: float | None = None,
    rtol: float = CLOSED_FORM_RTOL,
) -> ClosedFormCheck:
    """Printed closed forms, each flagged against the generic second-order sum.

    Agreement is judged relative to the largest single term of the generic
    sum, which keeps the check meaningful when the terms nearly cancel.
    """
    basis = dressed_basis(rabi, det, gap_tol)
    energies = np.array([s.energy for s in basis])
    b = basis_matrix(basis)
    v = np.zeros((4, 4), dtype=np.complex128)
    v[2, 3] = v[3, 2] = 1.0
    vd = b.conj().T @ v @ b
    engine = []
    scales = []
    for k in range(4):
        terms = [abs(vd[s, k]) ** 2 / (energies[k] - energies[s]) for s in range(4) if s != k]
        engine.append(float(sum(terms)))
        scales.append(max(abs(t) for t in terms))
    values = printed_corrections(consts, rabi, det)
    flags = tuple(
        Consistency.CONSISTENT if abs(val - ref) <= rtol * max(abs(ref), scale) else Consistency.DISCREPANT
        for val, ref, scale in zip(values, engine, scales)
    )
    return ClosedFormCheck(tuple(float(x) for x in values), tuple(engine), flags)


def closed_form_check(params: SystemParams, gap_tol: float | None = None) -> ClosedFormCheck:
    rabi = rabi_from_params(params)
    det = detunings_from_params(params)
    return closed_form_corrections(lambda_constants(rabi, det), rabi, det, gap_tol)
