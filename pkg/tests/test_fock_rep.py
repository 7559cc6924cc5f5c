import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gammaln

from cvtele.errors import SpecError, TruncationError
from cvtele.fock_rep import (
    FockTensor,
    chi_from_fock,
    chi_from_vector,
    displacement_matrix,
    input_density,
    mode_moments,
    reduced_density,
    synthesize_input_fock,
    synthesize_resource_fock,
)
from cvtele.states import (
    SSSF,
    TMSV,
    Coherent,
    Fock1,
    Mixture,
    PhotonAdded,
    PhotonAddedCoherent,
    PhotonSubtracted,
    ResourceSpec,
    SqueezedBell,
    SqueezedCat,
    SqueezedFock1,
    SqueezedFock11,
    SqueezedVacuum,
    chi_input,
    chi_resource,
)

from conftest import random_points
from test_states import ALL_FAMILIES, ALL_INPUTS


def test_tmsv_zero_squeezing_is_vacuum():
    t = synthesize_resource_fock(ResourceSpec(TMSV(), 0.0))
    expected = np.zeros_like(t.amplitudes)
    expected[0, 0] = 1
    assert np.array_equal(t.amplitudes, expected)


@pytest.mark.parametrize("r", [0.3, 0.9, 1.5])
def test_tmsv_coefficients(r):
    # at phi = pi the amplitudes are tanh^n r / cosh r
    t = synthesize_resource_fock(ResourceSpec(TMSV(), r, np.pi))
    n = np.arange(t.n_max + 1)
    assert np.allclose(np.diag(t.amplitudes), np.tanh(r) ** n / np.cosh(r), atol=1e-15)
    assert np.sum(np.abs(t.amplitudes) ** 2) + t.tail_mass == pytest.approx(1.0, abs=1e-12)


@given(st.floats(0, np.pi), st.floats(0, 2 * np.pi))
def test_unsqueezed_bell_amplitudes(delta, theta):
    psi = synthesize_resource_fock(ResourceSpec(SqueezedBell(delta, theta), 0.0)).amplitudes
    assert psi[0, 0] == pytest.approx(np.cos(delta), abs=1e-15)
    assert psi[1, 1] == pytest.approx(np.exp(1j * theta) * np.sin(delta), abs=1e-15)
    psi[0, 0] = psi[1, 1] = 0
    assert np.max(np.abs(psi)) == 0


@pytest.mark.parametrize("fam", ALL_FAMILIES[:6], ids=lambda f: type(f).__name__)
def test_schmidt_diagonal(fam):
    psi = synthesize_resource_fock(ResourceSpec(fam, 0.8, 0.4)).amplitudes
    off = psi - np.diag(np.diag(psi))
    assert np.sum(np.abs(off) ** 2) < 1e-12


@pytest.mark.parametrize("phi", [np.pi, 0.7])
@pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: type(f).__name__)
def test_chi_oracle_equivalence(fam, phi, rng):
    spec = ResourceSpec(fam, 0.7, phi)
    t = synthesize_resource_fock(spec)
    xa, xb = random_points(rng), random_points(rng)
    tol = max(1e-8, 10 * t.tail_mass)
    assert np.max(np.abs(chi_from_fock(t, xa, xb) - chi_resource(spec, xa, xb))) < tol


def test_norm_preserved_for_heavy_tails():
    t = synthesize_resource_fock(ResourceSpec(SqueezedCat(np.pi / 4, 0, 2.0), 1.0))
    assert t.n_max > 100
    assert np.sum(np.abs(t.amplitudes) ** 2) + t.tail_mass == pytest.approx(1.0, abs=1e-12)


def test_truncation_errors():
    with pytest.raises(TruncationError):
        synthesize_resource_fock(ResourceSpec(TMSV(), 1.5), n_max=10)
    with pytest.raises(TruncationError):
        synthesize_resource_fock(ResourceSpec(TMSV(), 4.0))
    with pytest.raises(TruncationError):
        # strongly squeezed, displaced cats outgrow the 200-level cap
        synthesize_resource_fock(ResourceSpec(SqueezedCat(np.pi / 4, 0, 1.33), 1.5))
    with pytest.raises(SpecError):
        synthesize_resource_fock(ResourceSpec(TMSV(), 0.5, np.pi, 0.1, 0.1))


def test_photon_subtracted_zero_squeezing_limit():
    t = synthesize_resource_fock(ResourceSpec(PhotonSubtracted(), 0.0))
    assert t.amplitudes[0, 0] == 1
    near = synthesize_resource_fock(ResourceSpec(PhotonSubtracted(), 1e-8))
    assert abs(near.amplitudes[0, 0]) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------- single mode


def test_input_vectors():
    assert np.array_equal(synthesize_input_fock(Coherent(0), 10), np.eye(11)[0])
    assert np.array_equal(synthesize_input_fock(Fock1(), 10), np.eye(11)[1])
    v = synthesize_input_fock(Coherent(1.0), 30)
    n = np.arange(31)
    assert np.allclose(v, np.exp(-0.5 - 0.5 * gammaln(n + 1)), atol=1e-15)


@pytest.mark.parametrize("spec", ALL_INPUTS, ids=lambda s: type(s).__name__)
def test_input_chi_oracle(spec, rng):
    v = synthesize_input_fock(spec)
    xi = random_points(rng)
    assert np.max(np.abs(chi_from_vector(v, xi) - chi_input(spec, xi))) < 1e-8


def test_mixture_density():
    mix = Mixture(((0.5, Coherent()), (0.5, Fock1())))
    rho = input_density(mix, 10)
    assert np.allclose(rho, np.diag([0.5, 0.5] + [0] * 9))
    with pytest.raises(SpecError):
        synthesize_input_fock(mix)


# ---------------------------------------------------------------- matrix elements


def test_displacement_matrix_unitary_block():
    d = displacement_matrix(0.4 - 0.3j, 80)
    block = (d.conj().T @ d)[:30, :30]
    assert np.allclose(block, np.eye(30), atol=1e-12)


def test_vacuum_chi():
    vac = FockTensor(np.eye(5)[:, :1] @ np.eye(5)[:1, :], 4, 0.0)
    assert chi_from_fock(vac, 0.0, 0.0) == pytest.approx(1.0)
    assert chi_from_fock(vac, 0.8 + 0.3j, 0.0) == pytest.approx(np.exp(-0.5 * 0.73))


def test_density_route_matches_amplitudes(rng):
    t = synthesize_resource_fock(ResourceSpec(SqueezedBell(0.5, 0.2), 0.4), n_max=25, tail_tol=1e-6)
    psi = t.amplitudes
    rho = np.einsum("ij,kl->ijkl", psi, psi.conj())
    mixed = FockTensor(None, t.n_max, t.tail_mass, rho)
    xa, xb = random_points(rng, 5), random_points(rng, 5)
    assert np.allclose(chi_from_fock(mixed, xa, xb), chi_from_fock(t, xa, xb), atol=1e-12)
    assert np.allclose(reduced_density(mixed), reduced_density(t), atol=1e-14)


# ---------------------------------------------------------------- partial trace


def test_reduced_density_examples():
    assert np.allclose(reduced_density(synthesize_resource_fock(ResourceSpec(TMSV(), 0.0)))[:2, :2], [[1, 0], [0, 0]])
    rho = reduced_density(synthesize_resource_fock(ResourceSpec(SqueezedBell(np.pi / 4), 0.0)))
    assert np.allclose(rho[:2, :2], np.eye(2) / 2)
    r = 0.8
    rho = reduced_density(synthesize_resource_fock(ResourceSpec(TMSV(), r)))
    n = np.arange(rho.shape[0])
    assert np.allclose(np.diag(rho).real, np.tanh(r) ** (2 * n) / np.cosh(r) ** 2, atol=1e-15)


@settings(max_examples=20)
@given(st.floats(0, 1.2), st.floats(0, 2 * np.pi))
def test_reduced_density_hermitian_unit_trace(r, phi):
    t = synthesize_resource_fock(ResourceSpec(SSSF(0.6, 0.5, 0.3), r, phi))
    rho = reduced_density(t)
    assert np.allclose(rho, rho.conj().T, atol=1e-15)
    assert np.trace(rho).real == pytest.approx(1 - t.tail_mass, abs=1e-12)


def test_mode_moments_tmsv():
    r, phi = 0.9, 0.4
    n_a, n_b, ab = mode_moments(synthesize_resource_fock(ResourceSpec(TMSV(), r, phi)))
    assert n_a == pytest.approx(np.sinh(r) ** 2, abs=1e-9)
    assert n_b == pytest.approx(np.sinh(r) ** 2, abs=1e-9)
    assert ab == pytest.approx(-np.exp(1j * phi) * np.cosh(r) * np.sinh(r), abs=1e-9)
