"""Closed-form characteristic functions of input states and two-mode resources.

Every evaluator is vectorised: phase-space arguments may be complex numpy
arrays of any (broadcastable) shape.  Resource families are written out as
explicit formulas in the Bogoliubov-transformed variables; reductions between
families (Bell -> photon-subtracted, ...) are asserted by the test-suite
rather than used in the implementation.

Besides the value itself each state exposes a Gaussian *envelope*: a real
symmetric matrix ``Q`` such that ``|chi(v)|`` decays like ``exp(-v^T Q v)``
in the real coordinates ``v = (w, z)`` (or ``(w_A, z_A, w_B, z_B)``).  The
quadrature engine uses it to rescale its nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Tuple, Union

import numpy as np

from .errors import SpecError
from .phase_space import as_xi, bogoliubov_matrix, bogoliubov_pair, real_matrix

# ---------------------------------------------------------------------------
# Input states
# ---------------------------------------------------------------------------

DEFAULT_INPUT_SQUEEZING = 0.8


@dataclass(frozen=True)
class Coherent:
    beta: complex = 0j


@dataclass(frozen=True)
class SqueezedVacuum:
    s: float = DEFAULT_INPUT_SQUEEZING
    phi_s: float = 0.0


@dataclass(frozen=True)
class Fock1:
    pass


@dataclass(frozen=True)
class SqueezedFock1:
    s: float = DEFAULT_INPUT_SQUEEZING
    phi_s: float = 0.0


@dataclass(frozen=True)
class PhotonAddedCoherent:
    beta: complex = 0j


PureInput = Union[Coherent, SqueezedVacuum, Fock1, SqueezedFock1, PhotonAddedCoherent]


@dataclass(frozen=True)
class Mixture:
    """Convex combination of pure input states: ``((weight, spec), ...)``."""

    components: Tuple[Tuple[float, PureInput], ...]

    def __post_init__(self):
        comps = tuple((float(w), s) for w, s in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise SpecError("empty mixture")
        for w, s in comps:
            if w < 0 or not np.isfinite(w):
                raise SpecError(f"mixture weight {w} must be finite and nonnegative")
            if isinstance(s, Mixture):
                raise SpecError("mixtures may only contain pure states")
        total = sum(w for w, _ in comps)
        if abs(total - 1.0) > 1e-12:
            raise SpecError(f"mixture weights sum to {total}, expected 1")


InputStateSpec = Union[PureInput, Mixture]
PURE_INPUTS = (Coherent, SqueezedVacuum, Fock1, SqueezedFock1, PhotonAddedCoherent)


def _squeeze_arg(xi, s: float, phi_s: float):
    return xi * np.cosh(s) + np.conj(xi) * np.exp(1j * phi_s) * np.sinh(s)


def chi_input(spec: InputStateSpec, xi) -> complex | np.ndarray:
    """Characteristic function of a single-mode input state."""
    x = as_xi(xi)
    if isinstance(spec, Coherent):
        beta = complex(spec.beta)
        return np.exp(-0.5 * np.abs(x) ** 2 + 2j * np.imag(x * np.conj(beta)))
    if isinstance(spec, SqueezedVacuum):
        xp = _squeeze_arg(x, spec.s, spec.phi_s)
        return np.exp(-0.5 * np.abs(xp) ** 2) + 0j
    if isinstance(spec, Fock1):
        a = np.abs(x) ** 2
        return np.exp(-0.5 * a) * (1.0 - a) + 0j
    if isinstance(spec, SqueezedFock1):
        a = np.abs(_squeeze_arg(x, spec.s, spec.phi_s)) ** 2
        return np.exp(-0.5 * a) * (1.0 - a) + 0j
    if isinstance(spec, PhotonAddedCoherent):
        beta = complex(spec.beta)
        nb = abs(beta) ** 2
        im = np.imag(x * np.conj(beta))
        a = np.abs(x) ** 2
        return np.exp(-0.5 * a + 2j * im) * (1.0 + nb - a + 2j * im) / (1.0 + nb)
    if isinstance(spec, Mixture):
        return sum(w * chi_input(s, x) for w, s in spec.components)
    raise SpecError(f"unknown input spec {spec!r}")


def input_envelope(spec: InputStateSpec) -> np.ndarray:
    """2x2 Gaussian decay matrix of ``chi_input`` in (w, z)."""
    if isinstance(spec, (SqueezedVacuum, SqueezedFock1)):
        m = real_matrix(lambda x: _squeeze_arg(x, spec.s, spec.phi_s))
        return 0.5 * m.T @ m
    if isinstance(spec, Mixture):
        # slowest-decaying component dominates the tails
        qs = [input_envelope(s) for _, s in spec.components]
        return min(qs, key=lambda q: np.linalg.eigvalsh(q)[0])
    if isinstance(spec, PURE_INPUTS):
        return 0.5 * np.eye(2)
    raise SpecError(f"unknown input spec {spec!r}")


# ---------------------------------------------------------------------------
# Resource families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TMSV:
    pass


@dataclass(frozen=True)
class SqueezedFock11:
    pass


@dataclass(frozen=True)
class PhotonSubtracted:
    pass


@dataclass(frozen=True)
class PhotonAdded:
    pass


@dataclass(frozen=True)
class SqueezedBell:
    delta: float = 0.0
    theta: float = 0.0


@dataclass(frozen=True)
class SSSF:
    c0: float = 1.0
    c1: float = 0.0
    c2: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        if self.c0 == 0 and self.c1 == 0 and self.c2 == 0:
            raise SpecError("SSSF coefficients must not all vanish")

    def amplitudes(self) -> np.ndarray:
        """Normalised complex weights of |00>, |11>, |22>."""
        c = np.array(
            [self.c0, self.c1 * np.exp(1j * self.theta1), self.c2 * np.exp(1j * self.theta2)],
            dtype=complex,
        )
        return c / np.sqrt(self.c0**2 + self.c1**2 + self.c2**2)

    @classmethod
    def from_angles(cls, delta1: float, delta2: float, theta1: float = 0.0, theta2: float = 0.0):
        """Hyperspherical parameterisation of the three real weights."""
        return cls(
            np.cos(delta1),
            np.sin(delta1) * np.cos(delta2),
            np.sin(delta1) * np.sin(delta2),
            theta1,
            theta2,
        )


@dataclass(frozen=True)
class SqueezedCat:
    delta: float = np.pi / 4
    theta: float = 0.0
    gamma: complex = 0j

    def norm2(self) -> float:
        """Squared normalisation constant N^2."""
        arg = 1.0 + np.exp(-abs(self.gamma) ** 2) * np.sin(2 * self.delta) * np.cos(self.theta)
        if not arg > 0:
            raise SpecError("squeezed cat normalisation is singular")
        return 1.0 / arg


Family = Union[TMSV, SqueezedFock11, PhotonSubtracted, PhotonAdded, SqueezedBell, SSSF, SqueezedCat]
FAMILIES = (TMSV, SqueezedFock11, PhotonSubtracted, PhotonAdded, SqueezedBell, SSSF, SqueezedCat)


@dataclass(frozen=True)
class ResourceSpec:
    """Two-mode resource: a family, two-mode squeezing r e^{i phi}, thermal noise."""

    family: Family = field(default_factory=TMSV)
    r: float = 0.0
    phi: float = np.pi
    n_th_A: float = 0.0
    n_th_B: float = 0.0

    def __post_init__(self):
        if not isinstance(self.family, FAMILIES):
            raise SpecError(f"unknown resource family {self.family!r}")
        for name in ("r", "phi", "n_th_A", "n_th_B"):
            if not np.isfinite(getattr(self, name)):
                raise SpecError(f"{name} must be finite")
        if self.n_th_A < 0 or self.n_th_B < 0:
            raise SpecError("thermal parameters must be nonnegative")
        if isinstance(self.family, SqueezedCat):
            self.family.norm2()

    @property
    def is_pure(self) -> bool:
        return self.n_th_A == 0 and self.n_th_B == 0


@dataclass(frozen=True)
class ResourceMixture:
    """Convex combination of resources: ``((weight, ResourceSpec), ...)``."""

    components: Tuple[Tuple[float, ResourceSpec], ...]

    def __post_init__(self):
        comps = tuple((float(w), s) for w, s in self.components)
        object.__setattr__(self, "components", comps)
        if not comps or any(w < 0 for w, _ in comps):
            raise SpecError("resource mixture needs nonnegative weights")
        if abs(sum(w for w, _ in comps) - 1.0) > 1e-12:
            raise SpecError("resource mixture weights must sum to 1")


AnyResource = Union[ResourceSpec, ResourceMixture]


# Associated Laguerre polynomials L_n^{(k)}(x) for n <= 2.
def _laguerre(n: int, k: int, x):
    if n == 0:
        return np.ones_like(x)
    if n == 1:
        return 1.0 + k - x
    if n == 2:
        return 0.5 * (k + 2) * (k + 1) - (k + 2) * x + 0.5 * x * x
    raise ValueError("only n <= 2 is tabulated")


_FACT = (1.0, 1.0, 2.0)


def _sssf_reduced(c: np.ndarray, xa, xb, a, b):
    """sum_{m,n} c_m^* c_n <m|D(xa)|n><m|D(xb)|n> without the Gaussian factor."""
    p = xa * xb
    total = np.zeros(np.broadcast(xa, xb).shape, dtype=complex)
    for m in range(3):
        for n in range(3):
            coef = np.conj(c[m]) * c[n]
            if coef == 0:
                continue
            if m >= n:
                k = m - n
                term = (_FACT[n] / _FACT[m]) * p**k * _laguerre(n, k, a) * _laguerre(n, k, b)
            else:
                k = n - m
                term = (_FACT[m] / _FACT[n]) * np.conj(p) ** k * _laguerre(m, k, a) * _laguerre(m, k, b)
            total = total + coef * term
    return total


def _family_chi(family: Family, r: float, phi: float, xa, xb):
    """Pure-family characteristic function evaluated at the transformed pair."""
    a = np.abs(xa) ** 2
    b = np.abs(xb) ** 2
    gauss = np.exp(-0.5 * (a + b))
    p = xa * xb
    la, lb = 1.0 - a, 1.0 - b
    t = np.tanh(r)
    if isinstance(family, TMSV):
        return gauss + 0j
    if isinstance(family, SqueezedFock11):
        return gauss * la * lb + 0j
    if isinstance(family, PhotonSubtracted):
        n2 = 1.0 / (1.0 + t * t)
        cross = np.real(np.exp(-1j * phi) * p)
        return n2 * gauss * (1.0 - 2 * t * cross + t * t * la * lb) + 0j
    if isinstance(family, PhotonAdded):
        n2 = 1.0 / (1.0 + t * t)
        cross = np.real(np.exp(-1j * phi) * p)
        return n2 * gauss * (t * t - 2 * t * cross + la * lb) + 0j
    if isinstance(family, SqueezedBell):
        cd, sd = np.cos(family.delta), np.sin(family.delta)
        cross = np.real(np.exp(-1j * family.theta) * p)
        return gauss * (cd * cd + 2 * cd * sd * cross + sd * sd * la * lb) + 0j
    if isinstance(family, SSSF):
        return gauss * _sssf_reduced(family.amplitudes(), xa, xb, a, b)
    if isinstance(family, SqueezedCat):
        g = complex(family.gamma)
        cd, sd = np.cos(family.delta), np.sin(family.delta)
        ssum = xa + xb
        coh = np.exp(2j * np.imag(np.conj(g) * ssum))
        ket = np.exp(np.conj(g) * ssum)  # <gamma,gamma| D |0,0> / (gauss e^{-|g|^2})
        bra = np.exp(-g * np.conj(ssum))  # <0,0| D |gamma,gamma> / (gauss e^{-|g|^2})
        overlap = np.exp(-abs(g) ** 2) * (
            np.exp(1j * family.theta) * bra + np.exp(-1j * family.theta) * ket
        )
        return family.norm2() * gauss * (cd * cd + sd * sd * coh + cd * sd * overlap)
    raise SpecError(f"unknown family {family!r}")


def chi_resource(spec: AnyResource, xi_a, xi_b) -> complex | np.ndarray:
    """Characteristic function of a (possibly thermal, possibly mixed) resource."""
    if isinstance(spec, ResourceMixture):
        return sum(w * chi_resource(s, xi_a, xi_b) for w, s in spec.components)
    xa, xb = as_xi(xi_a), as_xi(xi_b)
    ta, tb = bogoliubov_pair(xa, xb, spec.r, spec.phi)
    val = _family_chi(spec.family, spec.r, spec.phi, ta, tb)
    if not spec.is_pure:
        val = val * np.exp(-spec.n_th_A * np.abs(xa) ** 2 - spec.n_th_B * np.abs(xb) ** 2)
    return val


def resource_envelope(spec: AnyResource) -> np.ndarray:
    """4x4 Gaussian decay matrix of ``chi_resource`` in (w_A, z_A, w_B, z_B)."""
    if isinstance(spec, ResourceMixture):
        qs = [resource_envelope(s) for _, s in spec.components]
        return min(qs, key=lambda q: np.linalg.eigvalsh(q)[0])
    m = bogoliubov_matrix(spec.r, spec.phi)
    q = 0.5 * m.T @ m
    q = q + np.diag([spec.n_th_A, spec.n_th_A, spec.n_th_B, spec.n_th_B])
    return q


# ---------------------------------------------------------------------------
# Generic evaluator wrapper used by the quadrature engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CharFn:
    """An n-mode characteristic function plus its Gaussian envelope.

    ``fn`` takes ``n_modes`` complex arrays and returns complex values.
    ``envelope`` is a ``2n x 2n`` matrix or ``None`` when unknown.
    """

    fn: Callable
    n_modes: int
    envelope: np.ndarray | None = None

    def __call__(self, *xis):
        return self.fn(*xis)


def input_charfn(spec: InputStateSpec) -> CharFn:
    return CharFn(lambda x: chi_input(spec, x), 1, input_envelope(spec))


def resource_charfn(spec: AnyResource) -> CharFn:
    return CharFn(lambda a, b: chi_resource(spec, a, b), 2, resource_envelope(spec))


def gaussian_charfn(mean: np.ndarray, cov: np.ndarray) -> CharFn:
    """Gaussian state with quadrature means ``(x_1, p_1, ...)`` and symmetric covariance.

    chi(v) = exp(i k.mu - k^T V k / 2) with k = (2 z_j, -2 w_j) per mode.
    """
    mean = np.asarray(mean, dtype=float)
    cov = np.asarray(cov, dtype=float)
    n = mean.size // 2
    # k = T v with v = (w_1, z_1, ...)
    t = np.zeros((2 * n, 2 * n))
    for j in range(n):
        t[2 * j, 2 * j + 1] = 2.0
        t[2 * j + 1, 2 * j] = -2.0
    quad = t.T @ cov @ t
    lin = t.T @ mean

    def fn(*xis):
        xis = np.broadcast_arrays(*[np.asarray(x, dtype=complex) for x in xis])
        v = np.stack([c for x in xis for c in (x.real, x.imag)], axis=-1)
        expo = 1j * (v @ lin) - 0.5 * np.einsum("...i,ij,...j->...", v, quad, v)
        return np.exp(expo)

    return CharFn(fn, n, 0.5 * quad)
