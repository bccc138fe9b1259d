import math

import numpy as np
import pytest

from conftest import reference_params
from kerr4ls import Consistency, NearDegeneracyError, SystemParams, build_hamiltonian, eigh
from kerr4ls.lambda_spectrum import lambda_constants
from kerr4ls.model import detunings_from_params, rabi_from_params
from kerr4ls.oracle import match_by_overlap
from kerr4ls.perturbation import (
    closed_form_check,
    closed_form_corrections,
    first_order_vector,
    perturbation_result,
    perturbation_split,
    perturbed_energy,
    perturbed_state,
    second_order_energies,
)

SYMMETRIC = SystemParams.from_rabi(1.0, 1.0, 0.02, 0.0, 1.0)
# -|Oa|^2/(G^2 d3), |Ob|^2/(N-^2 (l- - d3)), |Ob|^2/(N+^2 (l+ - d3)) and minus their sum
SYMMETRIC_E2 = (-0.5, -0.14644660940672624, -0.8535533905932737, 1.5)


def fd_second_order(params, h=1e-3):
    """Curvature of the exact sorted spectrum in epsilon (spectrum is even in epsilon)."""
    ham = build_hamiltonian(params)
    e_plus = np.linalg.eigvalsh(ham.h0 + h * ham.v)
    e_zero = np.linalg.eigvalsh(ham.h0)
    return (e_plus - e_zero) / h**2, e_zero


def test_symmetric_example_against_finite_differences():
    _, result = perturbation_result(SYMMETRIC)
    curv, e_zero = fd_second_order(SYMMETRIC)
    order = np.argsort(result.e0)
    np.testing.assert_allclose(result.e0[order], e_zero, atol=1e-14)
    np.testing.assert_allclose(result.e2[order], curv, atol=1e-5)
    np.testing.assert_allclose(result.e2, SYMMETRIC_E2, rtol=1e-13)
    assert result.e2.sum() == pytest.approx(0.0, abs=1e-15)


def test_dark_state_matches_closed_form():
    for params in (reference_params(), SYMMETRIC, SystemParams.from_rabi(0.7j, 0.3 - 1j, 0.01, -2.0, -3.3)):
        _, result = perturbation_result(params)
        rabi = rabi_from_params(params)
        d3 = detunings_from_params(params).delta_3
        a2, b2 = abs(rabi.omega_a) ** 2, abs(rabi.omega_b) ** 2
        assert result.e2[0] == pytest.approx(-a2 / (d3 * (a2 + b2)), rel=1e-12)


def test_reference_dark_energy():
    split, result = perturbation_result(reference_params())
    assert result.e2[0] == pytest.approx(-0.04 / (5 * 4.04), rel=1e-13)
    assert result.e2[0] == pytest.approx(-1.980198e-3, rel=1e-6)
    assert perturbed_energy(result, 1, split.epsilon) == pytest.approx(-4.950495e-6, rel=1e-6)
    assert perturbed_energy(result, 4, split.epsilon) == pytest.approx(5.0 + 0.0025 * result.e2[3], rel=1e-15)
    exact = eigh(build_hamiltonian(reference_params()).h)
    pairing = match_by_overlap(split.basis, exact)
    assert abs(perturbed_energy(result, 1, split.epsilon) - exact.values[pairing.exact_index[0]]) < 1e-8


def test_zero_perturbation_returns_unperturbed_energies():
    split, result = perturbation_result(reference_params())
    for n in range(1, 5):
        assert perturbed_energy(result, n, 0.0) == result.e0[n - 1]
    with pytest.raises(ValueError):
        perturbed_energy(result, 5, 0.1)


def test_engine_invariants(draws):
    for params in draws[:300]:
        _, result = perturbation_result(params)
        assert np.abs(result.e1).max() < 1e-14
        assert abs(result.e2.sum()) < 1e-12
        np.testing.assert_array_equal(np.diag(result.state1), 0)


def test_closed_forms_flags():
    rabi = rabi_from_params(SYMMETRIC)
    det = detunings_from_params(SYMMETRIC)
    check = closed_form_corrections(lambda_constants(rabi, det), rabi, det)
    assert check.values[0] == pytest.approx(-0.5, rel=1e-14)
    assert check.values[3] == pytest.approx(1.5, rel=1e-14)
    # the printed bright-state form carries an extra factor of 1/2
    assert check.values[1] == pytest.approx(-1 / (4 * (math.sqrt(2) + 2)), rel=1e-14)
    assert check.values[1] == pytest.approx(-0.073223, abs=5e-7)
    assert check.flags == (Consistency.CONSISTENT, Consistency.DISCREPANT, Consistency.DISCREPANT, Consistency.CONSISTENT)
    assert check.engine == pytest.approx(SYMMETRIC_E2, rel=1e-13)


def test_reference_closed_form_dark():
    check = closed_form_check(reference_params())
    assert check.values[0] == pytest.approx(-1.980198e-3, rel=1e-6)
    assert check.flags[0] is Consistency.CONSISTENT


def test_small_denominator_guard():
    params = SystemParams.from_rabi(0.2, 2.0, 0.1, 0.5, 5.0)
    split = perturbation_split(params)
    tight = type(split)(split.h0, split.v, split.epsilon, split.basis, gap_tol=10.0)
    with pytest.raises(NearDegeneracyError, match="small-denominator"):
        second_order_energies(tight)
    with pytest.raises(NearDegeneracyError):
        perturbation_result(SystemParams.from_rabi(0.2, 2.0, 0.1, 0.5, 0.0))


def test_ac_stark_consistency(draws):
    for params in draws[:300]:
        split, result = perturbation_result(params)
        rabi = rabi_from_params(params)
        d3 = detunings_from_params(params).delta_3
        g2 = abs(rabi.omega_a) ** 2 + abs(rabi.omega_b) ** 2
        stark = (abs(rabi.omega_a) ** 2 / g2) * (-abs(rabi.omega_c) ** 2 / (4 * d3))
        assert split.epsilon**2 * result.e2[0] == pytest.approx(stark, rel=1e-12)


def test_dark_state_without_probe_stays_bare():
    params = SystemParams.from_rabi(0.0, 2.0, 0.3, 0.5, 5.0)
    split, result = perturbation_result(params)
    for eps in (0.0, 0.01, 0.5):
        state = perturbed_state(result, split.basis, 1, eps)
        np.testing.assert_allclose(state.amplitudes, [1, 0, 0, 0], atol=1e-16)


@pytest.mark.parametrize("phi", [0.0, 1.1])
def test_first_order_dark_state_upper_amplitude(phi):
    params = reference_params(phi=phi)
    split, result = perturbation_result(params)
    rabi = rabi_from_params(params)
    g = lambda_constants(rabi, detunings_from_params(params)).g_norm
    vec = first_order_vector(result, split.basis, 1, split.epsilon)
    expected = rabi.omega_a * rabi.omega_c / (2 * 5.0 * g)
    assert vec[3] == pytest.approx(expected, rel=1e-10)
    np.testing.assert_allclose(vec[:3], split.basis[0].amplitudes[:3], atol=1e-15)
    # against the oracle eigenvector, compared phase-insensitively
    exact = eigh(build_hamiltonian(params).h)
    state = perturbed_state(result, split.basis, 1, split.epsilon)
    k = int(np.argmax(np.abs(exact.vectors.conj().T @ state.amplitudes)))
    ev = exact.vectors[:, k] * (state.amplitudes[0] / exact.vectors[0, k])
    # first-order amplitude: agreement up to O(eps^2) relative
    assert abs(ev[3] / ev[0]) == pytest.approx(abs(vec[3] / vec[0]), rel=10 * split.epsilon**2)


def test_overlap_with_oracle_improves_quadratically():
    base = reference_params()
    defects = []
    for eps in (1e-2, 5e-3, 2.5e-3):
        params = base.replace(g_c=eps)  # |Omega_c| = 2 eps
        split, result = perturbation_result(params)
        exact = eigh(build_hamiltonian(params).h)
        states = [perturbed_state(result, split.basis, n, eps) for n in range(1, 5)]
        pairing = match_by_overlap(states, exact)
        defects.append(max(1 - o for o in pairing.overlaps))
        assert min(pairing.overlaps) > 1 - 10 * eps**2
    assert defects[0] / defects[1] > 3.5 and defects[1] / defects[2] > 3.5


def test_residual_ratio_test():
    split, result = perturbation_result(reference_params())
    residuals = []
    for eps in (4e-2, 2e-2, 1e-2):
        exact = eigh(split.h0 + eps * split.v)
        pairing = match_by_overlap(split.basis, exact)
        residuals.append([abs(exact.values[pairing.exact_index[k]] - result.e0[k] - eps**2 * result.e2[k]) for k in range(4)])
    r = np.array(residuals)
    ratios = r[:-1] / r[1:]
    assert np.all(ratios >= 7.5)
    assert np.all(ratios[:, 0] >= 12)
