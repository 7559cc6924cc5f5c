"""Output characteristic functions for the teleportation channel variants.

The canonical map sends an input chi_in and a resource chi_AB to

    chi_out(xi) = chi_in(g_p w + i g_x z) * chi_AB(g_p w - i g_x z, xi)

with variants that rescale the arguments or multiply in Gaussian smearing
factors.  ``output_chi_from`` accepts arbitrary callables, which is how the
test-suite plugs in the formal (non-normalisable) EPR resource.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Tuple, Union

import numpy as np

from .errors import SpecError
from .phase_space import as_xi
from .states import (
    AnyResource,
    CharFn,
    InputStateSpec,
    chi_input,
    chi_resource,
    input_envelope,
    resource_envelope,
)


@dataclass(frozen=True)
class Ideal:
    pass


@dataclass(frozen=True)
class AsymmetricBS:
    """Input beam splitter at angle ``theta`` (pi/4 is the balanced case)."""

    theta: float = np.pi / 4

    def __post_init__(self):
        if not (0 < self.theta < np.pi / 2):
            raise SpecError("beam-splitter angle must lie in (0, pi/2)")


@dataclass(frozen=True)
class ImpreciseMeasurement:
    """Gaussian measurement blur with widths e^{-r_m} (x) and e^{-s_m} (p)."""

    r_m: float
    s_m: float

    def __post_init__(self):
        if not (np.isfinite(self.r_m) and np.isfinite(self.s_m)):
            raise SpecError("imprecise-measurement widths must be finite; use Ideal instead")


@dataclass(frozen=True)
class LossyHomodyne:
    """Homodyne detection mixed with external modes.

    ``angle_x`` is the beam splitter feeding the x-measurement (scales z),
    ``angle_p`` the one feeding the p-measurement (scales w).  Each external
    mode is ``(n_bar, s)`` for the squeezed thermal factor
    exp(-n_bar^2 (e^{-2s} z^2 + e^{2s} w^2)).
    """

    angle_x: float = 0.0
    angle_p: float = 0.0
    ext_u: Tuple[float, float] = (0.0, 0.0)
    ext_v: Tuple[float, float] = (0.0, 0.0)


Variant = Union[Ideal, AsymmetricBS, ImpreciseMeasurement, LossyHomodyne]


@dataclass(frozen=True)
class ChannelSpec:
    variant: Variant = field(default_factory=Ideal)
    g_x: float = 1.0
    g_p: float = 1.0

    def __post_init__(self):
        for g in (self.g_x, self.g_p):
            if not (0 < g <= 1):
                raise SpecError(f"gain {g} outside (0, 1]")
        if isinstance(self.variant, LossyHomodyne) and (self.g_x != 1 or self.g_p != 1):
            raise SpecError("lossy homodyne models its own losses; gains must be 1")
        if not isinstance(self.variant, (Ideal, AsymmetricBS, ImpreciseMeasurement, LossyHomodyne)):
            raise SpecError(f"unknown channel variant {self.variant!r}")


def external_mode_chi(n_bar: float, s: float, xi):
    """Squeezed thermal factor for an external mode entering the detectors."""
    x = as_xi(xi)
    w, z = np.real(x), np.imag(x)
    return np.exp(-(n_bar**2) * (np.exp(-2 * s) * z**2 + np.exp(2 * s) * w**2))


def _arguments(channel: ChannelSpec, xi):
    """(input argument, resource mode-A argument, resource mode-B argument, extra factor)."""
    w, z = np.real(xi), np.imag(xi)
    v = channel.variant
    gx, gp = channel.g_x, channel.g_p
    if isinstance(v, Ideal):
        return gp * w + 1j * gx * z, gp * w - 1j * gx * z, xi, 1.0
    if isinstance(v, ImpreciseMeasurement):
        blur = np.exp(-2 * np.exp(-2 * v.r_m) * gx**2 * z**2 - 2 * np.exp(-2 * v.s_m) * gp**2 * w**2)
        return gp * w + 1j * gx * z, gp * w - 1j * gx * z, xi, blur
    if isinstance(v, AsymmetricBS):
        tn, ct = np.tan(v.theta), 1.0 / np.tan(v.theta)
        return gp * tn * w + 1j * gx * ct * z, gp * w - 1j * gx * z, tn * w + 1j * ct * z, 1.0
    if isinstance(v, LossyHomodyne):
        cx, cp = np.cos(v.angle_x), np.cos(v.angle_p)
        ext = external_mode_chi(*v.ext_u, 1j * np.sqrt(2) * np.sin(v.angle_x) * z)
        ext = ext * external_mode_chi(*v.ext_v, np.sqrt(2) * np.sin(v.angle_p) * w)
        return cp * w + 1j * cx * z, cp * w - 1j * cx * z, xi, ext
    raise SpecError(f"unknown channel variant {v!r}")


def output_chi_from(channel: ChannelSpec, chi_in: Callable, chi_ab: Callable, xi_b):
    """Output chi for arbitrary input/resource callables."""
    x = as_xi(xi_b)
    a_in, a_a, a_b, extra = _arguments(channel, x)
    return chi_in(a_in) * chi_ab(a_a, a_b) * extra


def output_chi(channel: ChannelSpec, inp: InputStateSpec, resource: AnyResource, xi_b):
    """Characteristic function of Bob's output state."""
    return output_chi_from(
        channel,
        lambda x: chi_input(inp, x),
        lambda a, b: chi_resource(resource, a, b),
        xi_b,
    )


def _linear_parts(channel: ChannelSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Real matrices (2x2 input map, 4x2 resource map, 2x2 extra Gaussian)."""
    cols_in, cols_ab = [], []
    for e in (1.0 + 0j, 1j):
        a_in, a_a, a_b, _ = _arguments(channel, e)
        a_in, a_a, a_b = complex(a_in), complex(a_a), complex(a_b)
        cols_in.append([a_in.real, a_in.imag])
        cols_ab.append([a_a.real, a_a.imag, a_b.real, a_b.imag])
    extra = np.zeros((2, 2))
    v = channel.variant
    if isinstance(v, ImpreciseMeasurement):
        extra = np.diag([2 * np.exp(-2 * v.s_m) * channel.g_p**2, 2 * np.exp(-2 * v.r_m) * channel.g_x**2])
    elif isinstance(v, LossyHomodyne):
        (nu, su), (nv, sv) = v.ext_u, v.ext_v
        extra = np.diag(
            [
                2 * nv**2 * np.exp(2 * sv) * np.sin(v.angle_p) ** 2,
                2 * nu**2 * np.exp(-2 * su) * np.sin(v.angle_x) ** 2,
            ]
        )
    return np.array(cols_in).T, np.array(cols_ab).T, extra


def output_charfn(channel: ChannelSpec, inp: InputStateSpec, resource: AnyResource) -> CharFn:
    """Output state as a :class:`CharFn`, carrying its Gaussian envelope."""
    m_in, m_ab, extra = _linear_parts(channel)
    env = m_in.T @ input_envelope(inp) @ m_in + m_ab.T @ resource_envelope(resource) @ m_ab + extra
    return CharFn(lambda x: output_chi(channel, inp, resource, x), 1, env)


# Formal EPR resource: chi_AB identically 1.  Not square integrable, so it is
# only exposed for tests that check perfect teleportation pointwise.
def _epr_chi(xi_a, xi_b):
    return np.ones(np.broadcast(np.asarray(xi_a), np.asarray(xi_b)).shape, dtype=complex)


EPR_TEST_HOOK = _epr_chi
