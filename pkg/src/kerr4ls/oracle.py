"""Exact eigensolver oracle and epsilon-scaling convergence scans.

:func:`eigh` wraps the cyclic Jacobi kernel from :mod:`kerr4ls.extensions`
(compiled when available) and enforces the residual/orthonormality contract.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

import numpy as np

from kerr4ls.errors import AmbiguousMatchError, InvalidInputError, NonHermitianError, SolverError
from kerr4ls.extensions import BACKEND, jacobi
from kerr4ls.lambda_spectrum import DressedState, closest_pair
from kerr4ls.model import SystemParams
from kerr4ls.perturbation import perturbation_result

JACOBI_TOL = 1e-15
MAX_SWEEPS = 50
HERMITIAN_RTOL = 1e-12
AMBIGUITY_TOL = 1e-6
NOISE_RTOL = 1e-13


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray  # columns, matched to ``values``
    residual: float
    sweeps: int = 0

    def vector(self, i: int) -> np.ndarray:
        return self.vectors[:, i]


def _scale(h: np.ndarray) -> float:
    return max(1.0, float(np.abs(h).max()) if h.size else 0.0)


def _check_hermitian(h: np.ndarray) -> None:
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {h.shape}")
    dev = float(np.abs(h - h.conj().T).max())
    if dev >= HERMITIAN_RTOL * _scale(h):
        raise NonHermitianError(f"matrix is not Hermitian: max |H - H^dagger| = {dev:.3e}")


def _canonical(values: np.ndarray, vectors: np.ndarray, h: np.ndarray, sweeps: int, off: float) -> EigenDecomposition:
    if off > JACOBI_TOL * max(float(np.linalg.norm(h)), 1e-300) and sweeps >= MAX_SWEEPS:
        raise SolverError(
            f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps "
            f"(off-diagonal norm {off:.3e}, matrix norm {np.linalg.norm(h):.3e}, backend {BACKEND})"
        )
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order].copy()
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        mags = np.abs(col)
        first = int(np.argmax(mags >= 1e-8 * mags.max()))
        z = col[first]
        vectors[:, j] = col * (abs(z) / z)
        vectors[first, j] = abs(z)
    residual = float(np.abs(h @ vectors - vectors * values).max())
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenDecomposition(values, vectors, residual, int(sweeps))


def eigh(h) -> EigenDecomposition:
    """Ascending eigenvalues and phase-canonical eigenvectors of a Hermitian matrix.

    Each eigenvector's first significant component is made real positive so
    output is reproducible bit for bit.
    """
    h = np.asarray(h, dtype=np.complex128)
    _check_hermitian(h)
    w, v, sweeps, off = jacobi.jacobi_eigh(h, JACOBI_TOL, MAX_SWEEPS)
    return _canonical(w, v, h, sweeps, off)


def eigh_batch(stack) -> list[EigenDecomposition]:
    """:func:`eigh` over a ``(m, n, n)`` stack in one kernel call."""
    stack = np.asarray(stack, dtype=np.complex128)
    for h in stack:
        _check_hermitian(h)
    w, v, sweeps, off = jacobi.jacobi_eigh_batch(stack, JACOBI_TOL, MAX_SWEEPS)
    return [_canonical(w[k], v[k], stack[k], sweeps[k], off[k]) for k in range(len(stack))]


@dataclass(frozen=True)
class Pairing:
    """``exact_index[i]`` is the exact eigenpair matched to approximate state ``i``."""

    exact_index: tuple[int, ...]
    overlaps: tuple[float, ...]


def match_by_overlap(approx: Sequence[DressedState], exact: EigenDecomposition) -> Pairing:
    """Bijection maximizing the summed squared overlaps (phase-insensitive)."""
    amps = np.column_stack([s.amplitudes for s in approx])
    ov = np.abs(amps.conj().T @ exact.vectors)
    weights = ov**2
    n = len(approx)
    scored = sorted(
        ((sum(weights[i, perm[i]] for i in range(n)), perm) for perm in permutations(range(exact.vectors.shape[1]), n)),
        key=lambda item: -item[0],
    )
    best_score, best = scored[0]
    if len(scored) > 1 and best_score - scored[1][0] < AMBIGUITY_TOL:
        raise AmbiguousMatchError(
            f"ambiguous eigenvector pairing (best {best_score:.9f} vs {scored[1][0]:.9f}); "
            "the spectrum is likely degenerate"
        )
    return Pairing(tuple(int(j) for j in best), tuple(float(ov[i, best[i]]) for i in range(n)))


def select_by_overlap(target: np.ndarray, exact: EigenDecomposition) -> tuple[int, float]:
    """Index and |overlap| of the exact eigenvector closest to ``target``."""
    ov = np.abs(exact.vectors.conj().T @ np.asarray(target))
    k = int(np.argmax(ov))
    return k, float(ov[k])


@dataclass(frozen=True)
class StateConvergence:
    label: int
    residuals: tuple[float, ...]
    used: tuple[bool, ...]
    slope: float | None
    pairwise_orders: tuple[float | None, ...]

    @property
    def saturated(self) -> bool:
        return self.slope is None

    @property
    def min_order(self) -> float | None:
        orders = [o for o in self.pairwise_orders if o is not None]
        return min(orders) if orders else None


@dataclass(frozen=True)
class ConvergenceScan:
    epsilons: tuple[float, ...]
    noise_floor: float
    states: tuple[StateConvergence, ...]


def convergence_scan(params: SystemParams, eps_schedule: Sequence[float], gap_tol: float | None = None) -> ConvergenceScan:
    """Empirical order of the second-order energy truncation for every state.

    The residual |E_exact(eps) - e0 - eps^2 e2| is fitted against eps on a
    log-log scale. Residuals under the noise floor are dropped; a state left
    with fewer than two usable points is reported as saturated (slope None).
    """
    eps = [float(e) for e in eps_schedule]
    if len(eps) < 3:
        raise InvalidInputError(f"convergence scan needs at least 3 epsilon values, got {len(eps)}")
    if any(e <= 0 for e in eps) or any(a <= b for a, b in zip(eps, eps[1:])):
        raise InvalidInputError("epsilon schedule must be positive and strictly descending")

    split, result = perturbation_result(params, gap_tol)
    (_, min_gap) = closest_pair(result.e0)
    if eps[0] >= min_gap:
        raise InvalidInputError(f"epsilon {eps[0]} is not below the smallest unperturbed gap {min_gap:.6g}")
    spread = float(result.e0.max() - result.e0.min())
    floor = NOISE_RTOL * max(1.0, spread)

    stack = np.array([split.h0 + e * split.v for e in eps])
    decomps = eigh_batch(stack)
    residuals = np.empty((len(eps), 4))
    for i, (e, dec) in enumerate(zip(eps, decomps)):
        pairing = match_by_overlap(split.basis, dec)
        for k in range(4):
            approx = result.e0[k] + e * e * result.e2[k]
            residuals[i, k] = abs(dec.values[pairing.exact_index[k]] - approx)

    states = []
    log_eps = np.log(eps)
    for k in range(4):
        r = residuals[:, k]
        used = r > floor
        slope = None
        if used.sum() >= 2:
            slope = float(np.polyfit(log_eps[used], np.log(r[used]), 1)[0])
        orders = []
        for i in range(len(eps) - 1):
            if used[i] and used[i + 1]:
                orders.append(math.log(r[i] / r[i + 1]) / math.log(eps[i] / eps[i + 1]))
            else:
                orders.append(None)
        states.append(StateConvergence(k + 1, tuple(float(x) for x in r), tuple(bool(u) for u in used), slope, tuple(orders)))
    return ConvergenceScan(tuple(eps), floor, tuple(states))
