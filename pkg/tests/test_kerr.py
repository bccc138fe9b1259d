import json
import math
from importlib import resources

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import reference_params
from kerr4ls import (
    Flag,
    KerrDomainError,
    KerrReport,
    SystemParams,
    dark_energy_exact,
    kerr_coupling,
    kerr_energy,
    validity_report,
    xpm_evolution,
)
from kerr4ls.model import rabi_from_params
from kerr4ls.perturbation import perturbation_result

EXAMPLE = SystemParams(g_a=1, g_b=1, g_c=1, n_b=99, delta_c=10.0)


def limit_params(ratio_ba=20.0, ratio_bc=20.0, ratio_det=50.0, omega_a=0.1, delta_1=0.0):
    omega_b = ratio_ba * omega_a
    omega_c = omega_b / ratio_bc
    return SystemParams.from_rabi(omega_a, omega_b, omega_c, delta_1, ratio_det * omega_c)


@st.composite
def kerr_params(draw):
    mag = st.floats(0.01, 5.0)
    return SystemParams(
        g_a=draw(mag) * np.exp(1j * draw(st.floats(0, 6.3))),
        g_b=draw(mag),
        g_c=draw(mag) * np.exp(1j * draw(st.floats(0, 6.3))),
        n_a=draw(st.integers(1, 30)),
        n_b=draw(st.integers(0, 30)),
        n_c=draw(st.integers(1, 30)),
        delta_c=draw(st.one_of(st.floats(0.1, 50), st.floats(-50, -0.1))),
    )


def test_coupling_example():
    assert kerr_coupling(EXAMPLE) == pytest.approx(-1e-3, rel=1e-15)
    # cross-check against the exact dark energy; this point is only weakly
    # detuned (delta_3/|Omega_c| = 5), so agreement is at the percent level
    assert dark_energy_exact(EXAMPLE) == pytest.approx(-1e-3, rel=0.02)


def test_no_probe_coupling():
    assert kerr_coupling(EXAMPLE.replace(g_a=0)) == 0.0


def test_odd_in_detuning():
    assert kerr_coupling(EXAMPLE.replace(delta_c=-10.0)) == -kerr_coupling(EXAMPLE)


@pytest.mark.parametrize("change", [{"delta_c": 0.0}, {"g_b": 0}])
def test_domain_errors(change):
    with pytest.raises(KerrDomainError):
        kerr_coupling(EXAMPLE.replace(**change))


@settings(max_examples=200, deadline=None)
@given(kerr_params())
def test_substitution_identity_and_sign(params):
    rabi = rabi_from_params(params)
    d3 = params.delta_c
    via_rabi = -abs(rabi.omega_a) ** 2 * abs(rabi.omega_c) ** 2 / (4 * d3 * abs(rabi.omega_b) ** 2)
    assert kerr_energy(params) == pytest.approx(via_rabi, rel=1e-13)
    assert math.copysign(1, kerr_coupling(params)) == -math.copysign(1, d3)


@settings(max_examples=100, deadline=None)
@given(kerr_params())
def test_control_field_passivity(params):
    k = kerr_coupling(params)
    assert kerr_coupling(params.replace(g_b=2 * params.g_b)) == k / 4
    assert kerr_coupling(params.replace(n_b=2 * params.n_b + 1)) == pytest.approx(k / 2, rel=1e-15)
    assert kerr_coupling(params.replace(n_a=params.n_a + 3, n_c=params.n_c + 1)) == k


def test_kerr_limit_against_oracle():
    params = limit_params()
    report = validity_report(params)
    assert report.flags == ()
    assert report.relative_error < 0.01


def test_monotone_accuracy():
    errors = [validity_report(limit_params(ratio_ba=r, ratio_bc=r)).relative_error for r in (5, 10, 20, 40)]
    assert all(a > b for a, b in zip(errors, errors[1:]))


def test_consistency_chain(draws):
    for params in draws[:300]:
        split, result = perturbation_result(params)
        rabi = rabi_from_params(params)
        pt2 = split.epsilon**2 * result.e2[0]
        bound = 2 * (abs(rabi.omega_a) / abs(rabi.omega_b)) ** 2 + 1e-12
        assert abs(kerr_energy(params) - pt2) / abs(pt2) <= bound


def test_flags():
    assert Flag.WEAK_CONTROL in validity_report(limit_params(ratio_ba=1.0)).flags
    assert validity_report(limit_params(ratio_det=0.5)).flags == (Flag.WEAK_DETUNING,)
    near = validity_report(reference_params().replace(delta_c=0.0))
    assert Flag.NEAR_DEGENERATE in near.flags and math.isnan(near.k_value)
    assert math.isfinite(near.dark_energy_exact)
    # negative detuning is judged by magnitude
    assert validity_report(limit_params(ratio_det=-50.0)).flags == ()


def test_report_json_round_trip():
    schema = json.loads(resources.files("kerr4ls").joinpath("schemas/kerr_report.schema.json").read_text())
    for params in (limit_params(), limit_params(ratio_ba=1.0), reference_params().replace(delta_c=0.0), EXAMPLE.replace(g_a=0)):
        report = validity_report(params)
        data = json.loads(json.dumps(report.to_dict(), allow_nan=False))
        jsonschema.validate(data, schema)
        back = KerrReport.from_dict(data)
        for key in ("k_value", "dark_energy_exact", "dark_energy_kerr", "ratio_b_over_a", "ratio_b_over_c", "ratio_det"):
            a, b = getattr(back, key), getattr(report, key)
            assert a == b or (math.isnan(a) and math.isnan(b))
        assert back.flags == report.flags


def test_evolution_examples():
    evo = xpm_evolution(EXAMPLE, 0.0)
    np.testing.assert_array_equal(evo.final_state, evo.initial_state)
    assert evo.phase == 0.0
    evo = xpm_evolution(EXAMPLE, math.pi * 1e3)
    assert evo.phase == pytest.approx(-math.pi, rel=1e-15)
    np.testing.assert_allclose(evo.final_state, -evo.initial_state, atol=1e-15)
    np.testing.assert_array_equal(evo.initial_state, [1, 0, 0, 0])


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_evolution_norm_and_additivity(t1, t2):
    p1 = xpm_evolution(EXAMPLE, t1)
    p2 = xpm_evolution(EXAMPLE, t2)
    p12 = xpm_evolution(EXAMPLE, t1 + t2)
    assert abs(np.linalg.norm(p1.final_state) - 1) < 1e-13
    assert p12.phase == pytest.approx(p1.phase + p2.phase, rel=1e-12, abs=1e-12)


@given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 5))
def test_phase_bilinear(n_a, n_c, m):
    t = 123.0
    base = xpm_evolution(EXAMPLE.replace(n_a=n_a, n_c=n_c), t).phase
    assert xpm_evolution(EXAMPLE.replace(n_a=m * n_a, n_c=n_c), t).phase == pytest.approx(m * base, rel=1e-12)
    assert xpm_evolution(EXAMPLE.replace(n_a=n_a, n_c=m * n_c), t).phase == pytest.approx(m * base, rel=1e-12)
