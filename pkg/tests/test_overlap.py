import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvtele.errors import QuadratureError
from cvtele.overlap import QuadratureConfig, fidelity, integrate, purity, state_overlap, trace_product
from cvtele.protocol import AsymmetricBS, ChannelSpec, ImpreciseMeasurement, LossyHomodyne, output_charfn
from cvtele.states import (
    TMSV,
    Coherent,
    Fock1,
    Mixture,
    PhotonAddedCoherent,
    ResourceMixture,
    ResourceSpec,
    SqueezedBell,
    SqueezedFock11,
    SqueezedVacuum,
    input_charfn,
    resource_charfn,
)

from test_states import ALL_FAMILIES, ALL_INPUTS

IDEAL = ChannelSpec()


@pytest.mark.parametrize(
    "res, expected",
    [
        (ResourceSpec(TMSV(), 0.0), 0.5),
        (ResourceSpec(TMSV(), 0.5), 1 / (1 + np.exp(-1))),
        (ResourceSpec(SqueezedFock11(), 0.0), 0.25),
    ],
)
def test_fidelity_examples(res, expected):
    assert fidelity(IDEAL, Coherent(0.4 - 0.2j), res) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("inp", ALL_INPUTS, ids=lambda s: type(s).__name__)
def test_fidelity_bounds_over_inputs(inp):
    for fam in ALL_FAMILIES:
        f = fidelity(IDEAL, inp, ResourceSpec(fam, 0.6))
        assert 0.0 <= f <= 1.0


@settings(max_examples=15)
@given(
    st.sampled_from(
        [
            ChannelSpec(AsymmetricBS(0.5)),
            ChannelSpec(ImpreciseMeasurement(0.3, -0.2), 0.8, 0.9),
            ChannelSpec(LossyHomodyne(0.2, 0.4, (0.1, 0.0), (0.2, 0.5))),
        ]
    ),
    st.sampled_from(ALL_FAMILIES),
    st.floats(0, 1.2),
)
def test_fidelity_in_unit_interval(channel, fam, r):
    f = fidelity(channel, Fock1(), ResourceSpec(fam, r))
    assert 0.0 <= f <= 1.0


def test_order_doubling_stability():
    res = ResourceSpec(SqueezedBell(0.5), 1.0, np.pi, 0.05, 0.05)
    for inp in (Coherent(0.5), SqueezedVacuum(), PhotonAddedCoherent(0.3)):
        lo = fidelity(IDEAL, inp, res, QuadratureConfig(order=48))
        hi = fidelity(IDEAL, inp, res, QuadratureConfig(order=96))
        assert abs(lo - hi) < 1e-9


@pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: type(f).__name__)
def test_pure_resources_have_unit_purity(fam):
    assert purity(resource_charfn(ResourceSpec(fam, 0.5)), 2) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("inp", ALL_INPUTS[:5], ids=lambda s: type(s).__name__)
def test_pure_inputs_have_unit_purity(inp):
    assert purity(input_charfn(inp), 1) == pytest.approx(1.0, abs=1e-8)


def test_orthogonal_mixture_purity():
    mix = Mixture(((0.5, Coherent(0)), (0.5, Fock1())))
    assert purity(input_charfn(mix), 1) == pytest.approx(0.5, abs=1e-10)


def test_thermal_purity():
    # At r = 0 the embedding gives a product of thermal states with mean n.
    for n in (0.05, 0.1, 0.3):
        p = purity(resource_charfn(ResourceSpec(TMSV(), 0.0, np.pi, n, n)), 2)
        assert p == pytest.approx(1 / (2 * n + 1) ** 2, abs=1e-9)
    values = [purity(resource_charfn(ResourceSpec(TMSV(), 0.8, np.pi, n, n)), 2) for n in (0, 0.05, 0.1, 0.15)]
    assert values[0] == pytest.approx(1.0, abs=1e-8)
    assert all(a > b for a, b in zip(values, values[1:]))
    hi = purity(resource_charfn(ResourceSpec(TMSV(), 0.8, np.pi, 0.1, 0.1)), 2, QuadratureConfig(order_4d=32))
    assert hi == pytest.approx(values[2], abs=1e-9)


def test_state_overlap_examples():
    vac = input_charfn(Coherent(0))
    assert state_overlap(vac, vac, 1) == pytest.approx(1.0, abs=1e-12)
    assert state_overlap(vac, input_charfn(Fock1()), 1) == pytest.approx(0.0, abs=1e-12)
    assert state_overlap(vac, input_charfn(Coherent(1.0)), 1) == pytest.approx(np.exp(-1), abs=1e-12)


@settings(max_examples=20)
@given(st.sampled_from(ALL_INPUTS), st.sampled_from(ALL_INPUTS))
def test_state_overlap_symmetric(a, b):
    x, y = input_charfn(a), input_charfn(b)
    assert abs(state_overlap(x, y, 1) - state_overlap(y, x, 1)) < 1e-10


def test_two_mode_overlap_symmetric():
    a = resource_charfn(ResourceSpec(SqueezedBell(0.3), 0.4))
    b = resource_charfn(ResourceSpec(TMSV(), 0.6))
    assert abs(state_overlap(a, b, 2) - state_overlap(b, a, 2)) < 1e-10


def test_resource_mixture_linearity():
    parts = [ResourceSpec(TMSV(), 0.7), ResourceSpec(SqueezedBell(0.5), 0.3, np.pi, 0.1, 0.0)]
    mix = ResourceMixture(((0.3, parts[0]), (0.7, parts[1])))
    for inp in (Coherent(0.2), Fock1()):
        expected = 0.3 * fidelity(IDEAL, inp, parts[0]) + 0.7 * fidelity(IDEAL, inp, parts[1])
        assert fidelity(IDEAL, inp, mix) == pytest.approx(expected, abs=1e-10)


def test_mixed_input_bilinearity():
    comps = ((0.4, Coherent(0.3)), (0.6, Fock1()))
    mix = Mixture(comps)
    res = ResourceSpec(SqueezedBell(0.4), 0.5)
    channel = ChannelSpec(ImpreciseMeasurement(0.1, 0.2), 0.9, 0.95)
    double_sum = sum(
        p * q * trace_product(input_charfn(a), output_charfn(channel, b, res), 1).real
        for p, a in comps
        for q, b in comps
    )
    assert fidelity(channel, mix, res) == pytest.approx(double_sum, abs=1e-10)


def test_non_convergence_raises():
    with pytest.raises(QuadratureError, match="did not converge"):
        integrate(lambda v: np.exp(40j * v[:, 0]), np.eye(2) * 1e-3, 8, QuadratureConfig(order=8, max_doublings=1))


def test_config_validation_and_env(monkeypatch):
    with pytest.raises(ValueError):
        QuadratureConfig(order=4)
    with pytest.raises(ValueError):
        QuadratureConfig(envelope_scale=0.0)
    monkeypatch.setenv("CFT_QUAD_ORDER", "64")
    assert QuadratureConfig().order == 64


def test_isotropic_envelope_override():
    res = ResourceSpec(TMSV(), 0.3)
    cfg = QuadratureConfig(envelope_scale=0.5, order=64)
    assert fidelity(IDEAL, Coherent(0), res, cfg) == pytest.approx(1 / (1 + np.exp(-0.6)), abs=1e-9)
