"""Truncated Fock-basis synthesis of resources and inputs.

This layer is deliberately independent of the closed-form characteristic
functions in :mod:`cvtele.states`: states are built from ladder-operator
actions on number states, and ``chi`` is recovered as a trace against
displacement matrix elements.  Agreement between the two routes is the main
oracle of the test-suite.

Convention: the two-mode squeezer acting on |0,0> with parameters (r, phi)
gives amplitudes (-e^{i phi} tanh r)^n / cosh r on |n,n>.  This is the state
whose characteristic function is exp(-(|xi'_A|^2 + |xi'_B|^2)/2) under
:func:`cvtele.phase_space.bogoliubov_pair`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import SpecError, TruncationError
from .phase_space import as_xi
from .states import (
    SSSF,
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
    TMSV,
)

DEFAULT_NMAX = 40
MAX_NMAX = 200
TAIL_TOL = 1e-10
_PAD = 6  # extra levels kept while applying ladder operators, cropped afterwards


@dataclass(frozen=True)
class FockTensor:
    """Truncated two-mode state.

    Pure states store ``amplitudes[n_A, n_B]``; ``density`` is reserved for
    mixed states as ``rho[m_A, m_B, n_A, n_B]``.
    """

    amplitudes: np.ndarray | None
    n_max: int
    tail_mass: float
    density: np.ndarray | None = None

    @property
    def is_pure(self) -> bool:
        return self.amplitudes is not None


# ---------------------------------------------------------------------------
# Matrix elements
# ---------------------------------------------------------------------------


def displacement_matrix(alpha: complex, n_rows: int, n_cols: int | None = None) -> np.ndarray:
    """Matrix elements <m|D(alpha)|n> for m < n_rows, n < n_cols.

    Uses the associated-Laguerre closed form with log-factorial prefactors so
    that large indices do not overflow.
    """
    n_cols = n_rows if n_cols is None else n_cols
    alpha = complex(alpha)
    m = np.arange(n_rows)[:, None]
    n = np.arange(n_cols)[None, :]
    if alpha == 0:
        return (m == n).astype(complex)
    x = abs(alpha) ** 2
    lo = np.minimum(m, n)
    hi = np.maximum(m, n)
    k = hi - lo
    lag = eval_genlaguerre(lo, k, x)
    log_pref = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + k * np.log(abs(alpha)) - 0.5 * x
    ang = np.angle(alpha)
    # m >= n: alpha^k ; m < n: (-alpha^*)^k
    phase = np.where(m >= n, np.exp(1j * k * ang), np.exp(1j * k * (np.pi - ang)))
    return np.exp(log_pref) * phase * lag


def _lower(psi: np.ndarray, axis: int) -> np.ndarray:
    out = np.zeros_like(psi)
    n = psi.shape[axis]
    sq = np.sqrt(np.arange(1, n))
    if axis == 0:
        out[:-1, ...] = sq[:, None] * psi[1:, ...] if psi.ndim == 2 else sq * psi[1:]
    else:
        out[:, :-1] = psi[:, 1:] * sq[None, :]
    return out


def _raise(psi: np.ndarray, axis: int) -> np.ndarray:
    out = np.zeros_like(psi)
    n = psi.shape[axis]
    sq = np.sqrt(np.arange(1, n))
    if axis == 0:
        out[1:, ...] = sq[:, None] * psi[:-1, ...] if psi.ndim == 2 else sq * psi[:-1]
    else:
        out[:, 1:] = psi[:, :-1] * sq[None, :]
    return out


# ---------------------------------------------------------------------------
# Two-mode synthesis
# ---------------------------------------------------------------------------


def tmsv_amplitudes(r: float, phi: float, size: int) -> np.ndarray:
    """Diagonal two-mode squeezed vacuum amplitudes on a ``size x size`` grid."""
    lam = -np.exp(1j * phi) * np.tanh(r)
    n = np.arange(size)
    return np.diag(lam**n / np.cosh(r))


def _squeezed_pair(r: float, phi: float, n: int, size: int) -> np.ndarray:
    """S_AB |n,n> for n <= 2, via (S a^dag S^dag)(S b^dag S^dag) acting n times on S|0,0>."""
    c, s = np.cosh(r), np.sinh(r)
    em = np.exp(-1j * phi)
    psi = tmsv_amplitudes(r, phi, size)
    for _ in range(n):
        psi = c * _raise(psi, 1) + em * s * _lower(psi, 0)  # S b^dag S^dag
        psi = c * _raise(psi, 0) + em * s * _lower(psi, 1)  # S a^dag S^dag
    return psi / np.prod(np.arange(1, n + 1))


def _synthesize(spec: ResourceSpec, n_max: int) -> np.ndarray:
    fam, r, phi = spec.family, spec.r, spec.phi
    size = n_max + _PAD
    if isinstance(fam, TMSV):
        psi = tmsv_amplitudes(r, phi, size)
    elif isinstance(fam, SqueezedFock11):
        psi = _squeezed_pair(r, phi, 1, size)
    elif isinstance(fam, PhotonSubtracted) and r == 0:
        # a b |0,0> vanishes; the normalised r -> 0 limit is the vacuum
        psi = np.zeros((size, size), dtype=complex)
        psi[0, 0] = 1.0
    elif isinstance(fam, PhotonSubtracted):
        t = tmsv_amplitudes(r, phi, size)
        psi = _lower(_lower(t, 0), 1)
        psi = psi / np.sqrt(np.sum(np.abs(psi) ** 2))
    elif isinstance(fam, PhotonAdded):
        t = tmsv_amplitudes(r, phi, size + 2)
        psi = _raise(_raise(t, 0), 1)
        psi = psi / np.sqrt(np.sum(np.abs(psi) ** 2))
    elif isinstance(fam, SqueezedBell):
        psi = np.cos(fam.delta) * _squeezed_pair(r, phi, 0, size) + np.exp(
            1j * fam.theta
        ) * np.sin(fam.delta) * _squeezed_pair(r, phi, 1, size)
    elif isinstance(fam, SSSF):
        c = fam.amplitudes()
        psi = sum(c[n] * _squeezed_pair(r, phi, n, size) for n in range(3))
    elif isinstance(fam, SqueezedCat):
        # S D(g)D(g) |0,0> = D(a)D(a) S |0,0> with a = cosh r g - e^{i phi} sinh r g^*
        g = complex(fam.gamma)
        alpha = np.cosh(r) * g - np.exp(1j * phi) * np.sinh(r) * np.conj(g)
        big = 2 * size + int(4 * abs(alpha) ** 2)
        vac = tmsv_amplitudes(r, phi, big)
        dm = displacement_matrix(alpha, size, big)
        disp = dm @ vac @ dm.T
        base = np.zeros((size, size), dtype=complex)
        base[:, :] = vac[:size, :size]
        psi = np.sqrt(fam.norm2()) * (
            np.cos(fam.delta) * base + np.exp(1j * fam.theta) * np.sin(fam.delta) * disp
        )
    else:
        raise SpecError(f"no Fock synthesis for {fam!r}")
    return psi[:n_max + 1, :n_max + 1]


def synthesize_resource_fock(
    spec: ResourceSpec, n_max: int | None = None, tail_tol: float = TAIL_TOL
) -> FockTensor:
    """Truncated amplitudes psi[n_A, n_B] for 0 <= n <= n_max of a pure resource.

    With ``n_max=None`` the truncation starts at 40 and grows until the
    missing norm is below ``tail_tol`` (up to 200).
    """
    if not isinstance(spec, ResourceSpec):
        raise SpecError("Fock synthesis needs a single ResourceSpec")
    if not spec.is_pure:
        raise SpecError("Fock synthesis is defined for pure resources only")
    auto = n_max is None
    n = DEFAULT_NMAX if auto else int(n_max)
    if n < 2:
        raise SpecError("n_max must be at least 2")
    while True:
        psi = _synthesize(spec, n)
        tail = max(0.0, 1.0 - float(np.sum(np.abs(psi) ** 2)))
        if tail <= tail_tol:
            return FockTensor(psi, n, tail)
        if not auto or n >= MAX_NMAX:
            raise TruncationError(f"tail mass {tail:.3e} exceeds {tail_tol:.1e} at n_max={n}")
        n = min(MAX_NMAX, int(n * 1.5))


# ---------------------------------------------------------------------------
# Single-mode synthesis
# ---------------------------------------------------------------------------


def _squeezed_vacuum_vec(s: float, phi_s: float, size: int) -> np.ndarray:
    vec = np.zeros(size, dtype=complex)
    lam = -np.exp(1j * phi_s) * np.tanh(s)
    k = np.arange((size + 1) // 2)
    logc = 0.5 * gammaln(2 * k + 1) - k * np.log(2.0) - gammaln(k + 1)
    vec[2 * k] = np.exp(logc) * lam**k / np.sqrt(np.cosh(s))
    return vec


def _input_vec(spec, size: int) -> np.ndarray:
    n = np.arange(size)
    if isinstance(spec, Coherent):
        b = complex(spec.beta)
        if b == 0:
            vec = np.zeros(size, dtype=complex)
            vec[0] = 1.0
            return vec
        logmag = -0.5 * abs(b) ** 2 + n * np.log(abs(b)) - 0.5 * gammaln(n + 1)
        return np.exp(logmag + 1j * n * np.angle(b))
    if isinstance(spec, Fock1):
        vec = np.zeros(size, dtype=complex)
        vec[1] = 1.0
        return vec
    if isinstance(spec, SqueezedVacuum):
        return _squeezed_vacuum_vec(spec.s, spec.phi_s, size)
    if isinstance(spec, SqueezedFock1):
        v0 = _squeezed_vacuum_vec(spec.s, spec.phi_s, size)
        # S a^dag S^dag = cosh s a^dag + e^{-i phi_s} sinh s a
        return np.cosh(spec.s) * _raise(v0, 0) + np.exp(-1j * spec.phi_s) * np.sinh(spec.s) * _lower(v0, 0)
    if isinstance(spec, PhotonAddedCoherent):
        v = _raise(_input_vec(Coherent(spec.beta), size), 0)
        return v / np.sqrt(1.0 + abs(complex(spec.beta)) ** 2)
    raise SpecError(f"no Fock synthesis for input {spec!r}")


def synthesize_input_fock(spec, n_max: int | None = None, tail_tol: float = TAIL_TOL) -> np.ndarray:
    """Amplitude vector (length n_max + 1) of a pure single-mode input.

    ``n_max=None`` grows the truncation from 40 until the tail is below ``tail_tol``.
    """
    if isinstance(spec, Mixture):
        raise SpecError("mixtures have no amplitude vector; use input_density")
    auto = n_max is None
    n = DEFAULT_NMAX if auto else int(n_max)
    while True:
        vec = _input_vec(spec, n + 1 + _PAD)[: n + 1]
        tail = max(0.0, 1.0 - float(np.sum(np.abs(vec) ** 2)))
        if tail <= tail_tol:
            return vec
        if not auto or n >= MAX_NMAX:
            raise TruncationError(f"input tail mass {tail:.3e} at n_max={n}")
        n = min(MAX_NMAX, int(n * 1.5))


def input_density(spec, n_max: int = DEFAULT_NMAX) -> np.ndarray:
    """Density matrix of a (possibly mixed) single-mode input."""
    if isinstance(spec, Mixture):
        return sum(w * input_density(s, n_max) for w, s in spec.components)
    v = synthesize_input_fock(spec, n_max)
    return np.outer(v, np.conj(v))


# ---------------------------------------------------------------------------
# Characteristic functions and partial traces
# ---------------------------------------------------------------------------


def chi_from_fock(t: FockTensor, xi_a, xi_b) -> complex | np.ndarray:
    """chi(xi_A, xi_B) = <psi| D(xi_A) (x) D(xi_B) |psi> from truncated amplitudes."""
    xa = np.asarray(as_xi(xi_a), dtype=complex)
    xb = np.asarray(as_xi(xi_b), dtype=complex)
    xa, xb = np.broadcast_arrays(xa, xb)
    size = t.n_max + 1
    out = np.empty(xa.shape, dtype=complex)
    for idx in np.ndindex(xa.shape):
        da = displacement_matrix(xa[idx], size)
        db = displacement_matrix(xb[idx], size)
        if t.is_pure:
            psi = t.amplitudes
            out[idx] = np.sum(np.conj(psi) * (da @ psi @ db.T))
        else:
            out[idx] = np.einsum("ijkl,ki,lj->", t.density, da, db)
    return out if out.ndim else complex(out)


def chi_from_vector(vec: np.ndarray, xi) -> complex | np.ndarray:
    """Single-mode chi = <v|D(xi)|v>."""
    x = np.asarray(as_xi(xi), dtype=complex)
    out = np.empty(x.shape, dtype=complex)
    for idx in np.ndindex(x.shape):
        d = displacement_matrix(x[idx], vec.size)
        out[idx] = np.conj(vec) @ d @ vec
    return out if out.ndim else complex(out)


def reduced_density(t: FockTensor) -> np.ndarray:
    """rho_A[m, n] = sum_k psi[m, k] psi*[n, k]."""
    if not t.is_pure:
        return np.einsum("ikjk->ij", t.density)
    psi = t.amplitudes
    return psi @ np.conj(psi).T


def mode_moments(t: FockTensor) -> tuple[float, float, complex]:
    """(<a^dag a>_A, <b^dag b>_B, <a b>) directly from amplitudes."""
    psi = t.amplitudes
    n = np.arange(psi.shape[0])
    p = np.abs(psi) ** 2
    n_a = float(np.sum(p * n[:, None]))
    n_b = float(np.sum(p * n[None, :]))
    ab = np.sum(np.conj(psi) * _lower(_lower(psi, 0), 1))
    return n_a, n_b, complex(ab)
