"""Resource properties: moments, inseparability, entropy, non-Gaussianity, affinity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import OptimizationError, SpecError
from .fock_rep import reduced_density, synthesize_resource_fock, tmsv_amplitudes
from .optimize import maximize_scalar
from .overlap import QuadratureConfig, purity, trace_product
from .states import AnyResource, CharFn, ResourceSpec, gaussian_charfn, resource_charfn

FD_STEP = 1e-2
FD_TOL = 1e-9


@dataclass(frozen=True)
class SecondMoments:
    """Moments of a two-mode state in quadrature form and in ladder form.

    ``mean`` is (<x_A>, <p_A>, <x_B>, <p_B>) and ``cov`` the symmetrised
    covariance matrix in the same order (vacuum: identity / 4).
    """

    n_A: float
    n_B: float
    cross: complex
    first_A: complex
    first_B: complex
    mean: np.ndarray
    cov: np.ndarray


def _k_to_v(k: np.ndarray) -> np.ndarray:
    """Map quadrature frequencies k = (2 z, -2 w) per mode back to (w, z)."""
    v = np.empty_like(k)
    v[..., 0::2] = -0.5 * k[..., 1::2]
    v[..., 1::2] = 0.5 * k[..., 0::2]
    return v


def _derivatives(g, dim: int, h: float):
    """Central-difference gradient and Hessian of g at 0."""
    eye = np.eye(dim)
    pts = [np.zeros(dim)]
    for j in range(dim):
        pts += [h * eye[j], -h * eye[j]]
    for j in range(dim):
        for l in range(j + 1, dim):
            for sj in (1, -1):
                for sl in (1, -1):
                    pts.append(h * (sj * eye[j] + sl * eye[l]))
    vals = g(np.array(pts))
    g0 = vals[0]
    grad = np.empty(dim, dtype=complex)
    hess = np.empty((dim, dim), dtype=complex)
    for j in range(dim):
        gp, gm = vals[1 + 2 * j], vals[2 + 2 * j]
        grad[j] = (gp - gm) / (2 * h)
        hess[j, j] = (gp - 2 * g0 + gm) / h**2
    idx = 1 + 2 * dim
    for j in range(dim):
        for l in range(j + 1, dim):
            pp, pm, mp, mm = vals[idx:idx + 4]
            idx += 4
            hess[j, l] = hess[l, j] = (pp - pm - mp + mm) / (4 * h * h)
    return grad, hess


def _richardson(d0, d1, d2):
    """Two Richardson levels on central differences at steps h, h/2, h/4."""
    r0 = [(4 * b - a) / 3 for a, b in zip(d0, d1)]
    r1 = [(4 * b - a) / 3 for a, b in zip(d1, d2)]
    return [(16 * b - a) / 15 for a, b in zip(r0, r1)]


def symmetric_moments(chi: CharFn, h: float = FD_STEP, tol: float = FD_TOL):
    """Quadrature means and symmetrised second moments from derivatives of chi at 0.

    chi(v) = <exp(i k.R)> with R = (x_1, p_1, ...) and k = (2 z_j, -2 w_j), so
    <R_j> = -i dchi/dk_j and <{R_j R_l}> = -d^2chi/dk_j dk_l.  Central
    differences at h, h/2, h/4 are Richardson-extrapolated to sixth order; the
    same extrapolation started from 2h must agree to ``tol``.
    """
    dim = 2 * chi.n_modes

    def g(k):
        v = _k_to_v(k)
        return chi(*[v[:, 2 * j] + 1j * v[:, 2 * j + 1] for j in range(chi.n_modes)])

    d = [_derivatives(g, dim, step) for step in (2 * h, h, h / 2, h / 4)]
    g_coarse, h_coarse = _richardson(*d[:3])
    g_fine, h_fine = _richardson(*d[1:])
    spread = max(np.max(np.abs(g_fine - g_coarse)), np.max(np.abs(h_fine - h_coarse)))
    if spread > tol * max(1.0, np.max(np.abs(h_fine))):
        raise OptimizationError(f"moment extrapolation did not settle (spread {spread:.2e})")
    mean = np.real(-1j * g_fine)
    second = np.real(-h_fine)
    return mean, second


def second_moments(resource: AnyResource, h: float = FD_STEP) -> SecondMoments:
    """Ladder-operator moments entering the inseparability witness."""
    mean, s = symmetric_moments(resource_charfn(resource), h)
    n_a = s[0, 0] + s[1, 1] - 0.5
    n_b = s[2, 2] + s[3, 3] - 0.5
    cross = complex(s[0, 2] - s[1, 3], s[0, 3] + s[1, 2])
    cov = s - np.outer(mean, mean)
    return SecondMoments(
        float(n_a),
        float(n_b),
        cross,
        complex(mean[0], mean[1]),
        complex(mean[2], mean[3]),
        mean,
        cov,
    )


def inseparability_delta(resource: AnyResource) -> float:
    """<a^dag a><b^dag b> - |<a b>|^2; negative values certify entanglement."""
    m = second_moments(resource)
    return m.n_A * m.n_B - abs(m.cross) ** 2


def _require_pure(resource) -> None:
    if not isinstance(resource, ResourceSpec) or not resource.is_pure:
        raise SpecError("this measure is defined for pure resources only")


def von_neumann_entropy(resource: ResourceSpec) -> float:
    """Entanglement entropy (bits) from the exact reduced density matrix."""
    _require_pure(resource)
    lam = np.linalg.eigvalsh(reduced_density(synthesize_resource_fock(resource)))
    lam = lam[lam > 1e-300]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def non_gaussianity(resource: ResourceSpec, cfg: QuadratureConfig | None = None) -> float:
    """Hilbert-Schmidt distance to the Gaussian state with the same first and second moments."""
    _require_pure(resource)
    chi = resource_charfn(resource)
    mean, second = symmetric_moments(chi)
    chi_g = gaussian_charfn(mean, second - np.outer(mean, mean))
    p = purity(chi, 2, cfg)
    p_g = purity(chi_g, 2, cfg)
    cross = trace_product(chi, chi_g, 2, cfg).real
    return float(max(0.0, (p + p_g - 2 * cross) / (2 * p)))


class Affinity(NamedTuple):
    G: float
    s_star: float
    at_boundary: bool


def vacuum_affinity(resource: ResourceSpec, s_max: float = 5.0) -> Affinity:
    """max_s |<TMSV(s)|psi>|^2 over s in [0, s_max], reference squeezing phase pi."""
    _require_pure(resource)
    t = synthesize_resource_fock(resource)
    diag = np.diag(t.amplitudes)
    size = diag.size

    def overlap(s: float) -> float:
        ref = np.diag(tmsv_amplitudes(s, np.pi, size))
        return float(abs(np.vdot(ref, diag)) ** 2)

    res = maximize_scalar(overlap, 0.0, s_max, xtol=1e-7)
    return Affinity(res.fx, res.x, res.at_boundary)


def relative_fidelity(f_opt: float, f_ref: float) -> float:
    if not f_ref > 0:
        raise ZeroDivisionError("reference fidelity must be positive")
    return (f_opt - f_ref) / f_ref
