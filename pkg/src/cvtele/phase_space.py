"""Transforms on conjugate phase-space coordinates xi = w + i z.

Units follow hbar = 1/2 with alpha = x + i p.  All functions accept either
:class:`ConjVar` values or (arrays of) Python/numpy complex numbers.  Array
inputs are processed elementwise and returned as complex arrays; ``ConjVar``
inputs come back as ``ConjVar``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class ConjVar:
    """A single conjugate coordinate xi = w + i z."""

    w: float
    z: float

    def __post_init__(self):
        if not (np.isfinite(self.w) and np.isfinite(self.z)):
            raise DomainError(f"non-finite ConjVar ({self.w}, {self.z})")

    @property
    def xi(self) -> complex:
        return complex(self.w, self.z)

    @classmethod
    def from_complex(cls, xi: complex) -> "ConjVar":
        xi = complex(xi)
        return cls(xi.real, xi.imag)

    def __complex__(self) -> complex:
        return self.xi


ComplexLike = Union[ConjVar, complex, float, np.ndarray]


def as_xi(value: ComplexLike) -> np.ndarray | complex:
    """Convert to complex (scalar or array) and reject non-finite entries."""
    if isinstance(value, ConjVar):
        return value.xi
    arr = np.asarray(value, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite phase-space coordinate")
    return arr if arr.ndim else complex(arr)


def _check_params(*params: float) -> None:
    for p in params:
        if not np.isfinite(p):
            raise DomainError(f"non-finite parameter {p!r}")


def _wrap(template, value):
    if isinstance(template, ConjVar):
        return ConjVar.from_complex(value)
    return value


def bogoliubov_pair(xi_a: ComplexLike, xi_b: ComplexLike, r: float, phi: float = np.pi):
    """Two-mode squeezing map xi'_i = cosh(r) xi_i + e^{i phi} sinh(r) conj(xi_j).

    Applying the map with ``(r, phi)`` and then ``(-r, phi)`` is the identity.
    """
    _check_params(r, phi)
    a, b = as_xi(xi_a), as_xi(xi_b)
    ch, sh = np.cosh(r), np.sinh(r)
    ph = np.exp(1j * phi)
    a_new = ch * a + ph * sh * np.conj(b)
    b_new = ch * b + ph * sh * np.conj(a)
    return _wrap(xi_a, a_new), _wrap(xi_b, b_new)


def beam_split(xi_a: ComplexLike, xi_b: ComplexLike, theta: float):
    """Real rotation of a pair of coordinates by the beam-splitter angle."""
    _check_params(theta)
    a, b = as_xi(xi_a), as_xi(xi_b)
    c, s = np.cos(theta), np.sin(theta)
    return _wrap(xi_a, c * a - s * b), _wrap(xi_b, s * a + c * b)


def displacement_phase(xi: ComplexLike, alpha: ComplexLike):
    """Phase e^{2i(z x' - w p')} acquired by chi under a displacement alpha = x' + i p'."""
    x = as_xi(xi)
    al = as_xi(alpha)
    arg = 2.0 * (np.imag(x) * np.real(al) - np.real(x) * np.imag(al))
    return np.cos(arg) + 1j * np.sin(arg)


def real_matrix(linear_map) -> np.ndarray:
    """2x2 real matrix of a real-linear map C -> C acting on (w, z)."""
    e1 = complex(linear_map(1.0 + 0j))
    e2 = complex(linear_map(1j))
    return np.array([[e1.real, e2.real], [e1.imag, e2.imag]])


def bogoliubov_matrix(r: float, phi: float = np.pi) -> np.ndarray:
    """4x4 real matrix of :func:`bogoliubov_pair` on (w_A, z_A, w_B, z_B)."""
    cols = []
    for k in range(4):
        v = np.zeros(4)
        v[k] = 1.0
        a, b = bogoliubov_pair(complex(v[0], v[1]), complex(v[2], v[3]), r, phi)
        cols.append([a.real, a.imag, b.real, b.imag])
    return np.array(cols).T
