"""Cross-Kerr coupling, cross-phase evolution and regime diagnostics.

In the strong-control limit |Omega_b| >> |Omega_a|, |Omega_c| the dark
state is close to the bare state |1, n_a, n_b, n_c> and its energy is
K n_a n_c with K = -|g_a|^2 |g_c|^2 / (delta_3 |g_b|^2 (n_b + 1)).
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from kerr4ls.errors import DegenerateLambdaError, KerrDomainError, NearDegeneracyError
from kerr4ls.lambda_spectrum import check_nondegenerate, lambda_constants, unperturbed_energies
from kerr4ls.model import SystemParams, build_hamiltonian, detunings_from_params, rabi_from_params
from kerr4ls.oracle import eigh, select_by_overlap

CONTROL_RATIO_MIN = 10.0
DETUNING_RATIO_MIN = 10.0


class Flag(str, enum.Enum):
    WEAK_CONTROL = "WEAK_CONTROL"
    WEAK_DETUNING = "WEAK_DETUNING"
    NEAR_DEGENERATE = "NEAR_DEGENERATE"


def kerr_coupling(params: SystemParams) -> float:
    det = detunings_from_params(params)
    if det.delta_3 == 0.0:
        raise KerrDomainError("Kerr coupling undefined at delta_3 = 0")
    if params.g_b == 0:
        raise KerrDomainError("Kerr coupling undefined for g_b = 0 (no control field)")
    num = abs(params.g_a) ** 2 * abs(params.g_c) ** 2
    return -num / (det.delta_3 * abs(params.g_b) ** 2 * (params.n_b + 1))


def kerr_energy(params: SystemParams) -> float:
    """Dark-state energy K n_a n_c in the strong-control limit."""
    return kerr_coupling(params) * params.n_a * params.n_c


def bare_ground_state() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0], dtype=np.complex128)


def dark_energy_exact(params: SystemParams) -> float:
    """Oracle eigenvalue whose eigenvector best overlaps the unperturbed dark state."""
    ham = build_hamiltonian(params)
    rabi = rabi_from_params(params)
    g2 = abs(rabi.omega_a) ** 2 + abs(rabi.omega_b) ** 2
    if g2 > 0.0:
        g = math.sqrt(g2)
        target = np.array([rabi.omega_b / g, 0.0, -rabi.omega_a / g, 0.0], dtype=np.complex128)
    else:
        target = bare_ground_state()
    dec = eigh(ham.h)
    k, _ = select_by_overlap(target, dec)
    return float(dec.values[k])


@dataclass(frozen=True)
class XpmEvolution:
    """Cross-phase evolution of the bare-state dark-state approximation.

    ``phase`` is K n_a n_c t; the state acquires exp(-i phase).
    """

    phase: float
    t: float
    initial_state: np.ndarray
    final_state: np.ndarray


def xpm_evolution(params: SystemParams, t: float, k_value: float | None = None) -> XpmEvolution:
    k = kerr_coupling(params) if k_value is None else k_value
    phase = k * params.n_a * params.n_c * t
    initial = bare_ground_state()
    final = np.exp(-1j * phase) * initial
    return XpmEvolution(float(phase), float(t), initial, final)


@dataclass(frozen=True)
class KerrReport:
    k_value: float
    dark_energy_exact: float
    dark_energy_kerr: float
    ratio_b_over_a: float
    ratio_b_over_c: float
    ratio_det: float
    flags: tuple[Flag, ...]

    @property
    def relative_error(self) -> float:
        if self.dark_energy_exact == 0.0:
            return math.nan
        return abs(self.dark_energy_kerr - self.dark_energy_exact) / abs(self.dark_energy_exact)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["flags"] = [f.value for f in self.flags]
        data["relative_error"] = self.relative_error
        return {key: _json_number(val) for key, val in data.items()}

    @classmethod
    def from_dict(cls, data: dict) -> "KerrReport":
        """Inverse of :meth:`to_dict`; JSON nulls become inf for ratios, NaN otherwise."""
        values = {}
        for key in ("k_value", "dark_energy_exact", "dark_energy_kerr"):
            values[key] = math.nan if data[key] is None else float(data[key])
        for key in ("ratio_b_over_a", "ratio_b_over_c", "ratio_det"):
            values[key] = math.inf if data[key] is None else float(data[key])
        return cls(flags=tuple(Flag(f) for f in data["flags"]), **values)


def _json_number(val):
    if isinstance(val, float) and not math.isfinite(val):
        return None
    return val


def _ratio(num: float, den: float) -> float:
    if den == 0.0:
        return math.inf
    return num / den


def validity_report(params: SystemParams) -> KerrReport:
    """Kerr coupling with the strong-control and strong-detuning diagnostics.

    Never raises on valid parameters: undefined quantities become NaN and
    the relevant flags are set.
    """
    rabi = rabi_from_params(params)
    det = detunings_from_params(params)
    abs_a, abs_b, abs_c = abs(rabi.omega_a), abs(rabi.omega_b), abs(rabi.omega_c)
    ratio_ba = _ratio(abs_b, abs_a)
    ratio_bc = _ratio(abs_b, abs_c)
    ratio_det = _ratio(abs(det.delta_3), abs_c)

    flags = []
    if min(ratio_ba, ratio_bc) < CONTROL_RATIO_MIN:
        flags.append(Flag.WEAK_CONTROL)
    if ratio_det < DETUNING_RATIO_MIN:
        flags.append(Flag.WEAK_DETUNING)
    try:
        check_nondegenerate(unperturbed_energies(lambda_constants(rabi, det), det))
    except (NearDegeneracyError, DegenerateLambdaError):
        flags.append(Flag.NEAR_DEGENERATE)

    try:
        k_value = kerr_coupling(params)
        e_kerr = k_value * params.n_a * params.n_c
    except KerrDomainError:
        k_value = e_kerr = math.nan
    return KerrReport(
        k_value=k_value,
        dark_energy_exact=dark_energy_exact(params),
        dark_energy_kerr=e_kerr,
        ratio_b_over_a=ratio_ba,
        ratio_b_over_c=ratio_bc,
        ratio_det=ratio_det,
        flags=tuple(flags),
    )
