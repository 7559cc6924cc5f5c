import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvtele.errors import SpecError
from cvtele.states import (
    SSSF,
    TMSV,
    Coherent,
    Fock1,
    Mixture,
    PhotonAdded,
    PhotonAddedCoherent,
    PhotonSubtracted,
    ResourceMixture,
    ResourceSpec,
    SqueezedBell,
    SqueezedCat,
    SqueezedFock1,
    SqueezedFock11,
    SqueezedVacuum,
    chi_input,
    chi_resource,
    gaussian_charfn,
    input_charfn,
    resource_charfn,
)

from conftest import angles, random_points, squeezing

ALL_FAMILIES = [
    TMSV(),
    SqueezedFock11(),
    PhotonSubtracted(),
    PhotonAdded(),
    SqueezedBell(0.4, 0.3),
    SSSF(0.7, 0.5, 0.2, 0.1, -0.4),
    SqueezedCat(0.6, 0.3, 1.0 + 0.5j),
]
ALL_INPUTS = [
    Coherent(0.4 - 0.3j),
    SqueezedVacuum(0.8, 0.3),
    Fock1(),
    SqueezedFock1(0.5, 1.0),
    PhotonAddedCoherent(0.3 + 0.2j),
]

families = st.one_of(
    st.just(TMSV()),
    st.just(SqueezedFock11()),
    st.just(PhotonSubtracted()),
    st.just(PhotonAdded()),
    st.builds(SqueezedBell, angles, angles),
    st.builds(SSSF, st.floats(0.1, 1), st.floats(-1, 1), st.floats(-1, 1), angles, angles),
    st.builds(
        SqueezedCat,
        st.floats(0, np.pi / 2),
        st.just(0.0),
        st.builds(complex, st.floats(-2, 2), st.floats(-2, 2)),
    ),
)
resources = st.builds(
    ResourceSpec, families, squeezing, angles, st.floats(0, 0.3), st.floats(0, 0.3)
)
points = st.builds(complex, st.floats(-2, 2), st.floats(-2, 2))


# ---------------------------------------------------------------- inputs


def test_coherent_examples():
    assert chi_input(Coherent(1 + 2j), 0.0) == pytest.approx(1.0)
    assert chi_input(Coherent(0), 1.0) == pytest.approx(np.exp(-0.5), abs=1e-15)


def test_fock_vanishes_on_unit_circle():
    assert abs(chi_input(Fock1(), 1.0)) < 1e-15
    assert abs(chi_input(Fock1(), np.exp(0.7j))) < 1e-15


@pytest.mark.parametrize("spec", ALL_INPUTS, ids=lambda s: type(s).__name__)
def test_inputs_normalized(spec):
    assert chi_input(spec, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_squeezed_fock_reduces_to_fock_at_zero_squeezing(rng):
    xi = random_points(rng)
    assert np.allclose(chi_input(SqueezedFock1(0.0), xi), chi_input(Fock1(), xi), atol=1e-15)
    assert np.allclose(chi_input(SqueezedVacuum(0.0), xi), chi_input(Coherent(0), xi), atol=1e-15)


def test_photon_added_coherent_at_zero_amplitude_is_fock(rng):
    xi = random_points(rng)
    assert np.allclose(chi_input(PhotonAddedCoherent(0), xi), chi_input(Fock1(), xi), atol=1e-15)


def test_mixture_is_weighted_sum(rng):
    xi = random_points(rng)
    mix = Mixture(((0.25, Coherent(0.5)), (0.75, Fock1())))
    direct = 0.25 * chi_input(Coherent(0.5), xi) + 0.75 * chi_input(Fock1(), xi)
    assert np.array_equal(chi_input(mix, xi), direct)


@pytest.mark.parametrize(
    "components",
    [
        ((0.5, Coherent()), (0.6, Fock1())),
        ((-0.1, Coherent()), (1.1, Fock1())),
        (),
    ],
)
def test_invalid_mixtures(components):
    with pytest.raises(SpecError):
        Mixture(components)


def test_nested_mixture_rejected():
    inner = Mixture(((1.0, Fock1()),))
    with pytest.raises(SpecError):
        Mixture(((0.5, inner), (0.5, Coherent())))


# ---------------------------------------------------------------- resources


@settings(max_examples=100)
@given(resources)
def test_resource_normalized(spec):
    assert abs(chi_resource(spec, 0.0, 0.0) - 1) < 1e-12


@given(resources, points, points)
def test_resource_hermitian(spec, xa, xb):
    assert abs(chi_resource(spec, -xa, -xb) - np.conj(chi_resource(spec, xa, xb))) < 1e-12


@given(st.builds(ResourceSpec, families, squeezing, angles), points, points)
def test_pure_resource_bounded(spec, xa, xb):
    assert abs(chi_resource(spec, xa, xb)) <= 1 + 1e-9


def _close(spec1, spec2, rng, tol=1e-12):
    xa, xb = random_points(rng), random_points(rng)
    return np.max(np.abs(chi_resource(spec1, xa, xb) - chi_resource(spec2, xa, xb))) < tol


@pytest.mark.parametrize("r, phi", [(0.0, np.pi), (0.6, np.pi), (1.1, 0.4)])
def test_reduction_web(rng, r, phi):
    tmsv = ResourceSpec(TMSV(), r, phi)
    assert _close(tmsv, ResourceSpec(SqueezedBell(0.0), r, phi), rng)
    assert _close(tmsv, ResourceSpec(SSSF(1, 0, 0), r, phi), rng)
    assert _close(tmsv, ResourceSpec(SqueezedCat(0.0, 0.0, 1.3), r, phi), rng)
    assert _close(ResourceSpec(SqueezedFock11(), r, phi), ResourceSpec(SqueezedBell(np.pi / 2), r, phi), rng)


@pytest.mark.parametrize("r, phi", [(0.3, np.pi), (0.9, np.pi), (0.7, 0.4)])
def test_degaussified_are_bell_states(rng, r, phi):
    # the Bell phase that reproduces them is theta = phi + pi (0 at phi = pi)
    n = (1 + np.tanh(r) ** 2) ** -0.5
    theta = phi + np.pi
    assert _close(ResourceSpec(PhotonSubtracted(), r, phi), ResourceSpec(SqueezedBell(np.arccos(n), theta), r, phi), rng)
    assert _close(
        ResourceSpec(PhotonAdded(), r, phi),
        ResourceSpec(SqueezedBell(np.arccos(n * np.tanh(r)), theta), r, phi),
        rng,
    )


def test_cat_small_amplitude_limit_is_tmsv(rng):
    assert _close(
        ResourceSpec(SqueezedCat(np.pi / 4, 0.0, 1e-9), 0.8),
        ResourceSpec(TMSV(), 0.8),
        rng,
        tol=1e-9,
    )


def test_thermal_multiplier(rng):
    xa, xb = random_points(rng), random_points(rng)
    pure = ResourceSpec(SqueezedBell(0.5), 0.7)
    noisy = ResourceSpec(SqueezedBell(0.5), 0.7, np.pi, 0.1, 0.05)
    expected = chi_resource(pure, xa, xb) * np.exp(-0.1 * abs(xa) ** 2 - 0.05 * abs(xb) ** 2)
    assert np.allclose(chi_resource(noisy, xa, xb), expected, atol=1e-15)


def test_resource_mixture_is_weighted_sum(rng):
    xa, xb = random_points(rng), random_points(rng)
    a, b = ResourceSpec(TMSV(), 0.4), ResourceSpec(SqueezedFock11(), 0.9)
    mix = ResourceMixture(((0.3, a), (0.7, b)))
    expected = 0.3 * chi_resource(a, xa, xb) + 0.7 * chi_resource(b, xa, xb)
    assert np.allclose(chi_resource(mix, xa, xb), expected, atol=1e-15)


def test_spec_validation():
    with pytest.raises(SpecError):
        SSSF(0, 0, 0)
    with pytest.raises(SpecError):
        ResourceSpec(TMSV(), 0.5, np.pi, -0.1, 0.0)
    with pytest.raises(SpecError):
        ResourceSpec(TMSV(), np.nan)
    with pytest.raises(SpecError):
        # sin(2 delta) cos(theta) = -1 and gamma = 0 make the cat vanish
        ResourceSpec(SqueezedCat(3 * np.pi / 4, 0.0, 0.0), 0.5)


def test_sssf_angles_parameterization():
    fam = SSSF.from_angles(0.7, 0.4)
    assert np.sum(np.abs(fam.amplitudes()) ** 2) == pytest.approx(1.0)
    assert fam.c1 == pytest.approx(np.sin(0.7) * np.cos(0.4))


# ---------------------------------------------------------------- CharFn envelopes


@given(squeezing, angles, st.floats(0, 0.3), st.floats(0, 0.3), points, points)
def test_gaussian_resource_envelope_is_exact(r, phi, na, nb, xa, xb):
    cf = resource_charfn(ResourceSpec(TMSV(), r, phi, na, nb))
    v = np.array([xa.real, xa.imag, xb.real, xb.imag])
    assert abs(cf(xa, xb)) == pytest.approx(np.exp(-v @ cf.envelope @ v), rel=1e-12, abs=1e-300)


def test_input_charfn_carries_envelope():
    cf = input_charfn(SqueezedVacuum(0.8))
    assert cf.n_modes == 1 and cf.envelope.shape == (2, 2)
    assert np.linalg.det(2 * cf.envelope) == pytest.approx(1.0)


def test_gaussian_charfn_reproduces_tmsv(rng):
    r, phi = 0.6, np.pi
    ch, sh = np.cosh(r), np.sinh(r)
    # quadrature covariance of the TMSV at phi = pi, vacuum = I/4
    c = 0.25 * np.cosh(2 * r)
    s = 0.25 * np.sinh(2 * r)
    cov = np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])
    g = gaussian_charfn(np.zeros(4), cov)
    xa, xb = random_points(rng), random_points(rng)
    assert np.allclose(g(xa, xb), chi_resource(ResourceSpec(TMSV(), r, phi), xa, xb), atol=1e-12)
    assert ch * ch - sh * sh == pytest.approx(1.0)
