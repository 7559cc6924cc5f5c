"""Analytic fidelities and optimal superposition angles for coherent-state inputs.

Conventions: squeezing phase pi, superposition phase 0, and for the cat
family arg(gamma) = 0 unless stated.  These serve as oracles for the
quadrature engine and the optimizers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpecError


@dataclass(frozen=True)
class ThermalContext:
    n_th_A: float = 0.0
    n_th_B: float = 0.0

    def __post_init__(self):
        if self.n_th_A < 0 or self.n_th_B < 0:
            raise SpecError("thermal parameters must be nonnegative")

    @property
    def f_th(self) -> float:
        return 1.0 + self.n_th_A + self.n_th_B

    @classmethod
    def symmetric(cls, n_th: float) -> "ThermalContext":
        return cls(n_th, n_th)


PURE = ThermalContext()


def fidelity_tmsv(r: float, ctx: ThermalContext = PURE) -> float:
    """Twin-beam fidelity 1 / (e^{-2r} + f_th)."""
    return 1.0 / (np.exp(-2 * r) + ctx.f_th)


def fidelity_bell_thermal(r: float, ctx: ThermalContext, delta: float) -> float:
    """Squeezed Bell-like resource with thermal embedding."""
    f = ctx.f_th
    e = np.exp(2 * r) * f
    num = 1 + e + e * e + e * np.cos(2 * delta) + (1 + e) * np.sin(2 * delta)
    return num / (np.exp(-2 * r) * (1 + e) ** 3)


def fidelity_cat(r: float, delta: float, gamma: complex) -> float:
    """Pure squeezed cat-like resource, general delta and complex gamma."""
    g = complex(gamma)
    k = 1 + np.exp(2 * r)
    cd, sd = np.cos(delta), np.sin(delta)
    num = (
        cd**2
        + np.exp((g - np.conj(g)) ** 2 / k) * sd**2
        + np.exp(-abs(g) ** 2) * (np.exp(g**2 / k) + np.exp(np.conj(g) ** 2 / k)) * sd * cd
    )
    den = (1 + np.exp(-2 * r)) * (1 + np.exp(-abs(g) ** 2) * np.sin(2 * delta))
    return float(np.real(num) / den)


def fidelity_cat_simplified(r: float, gamma_abs: float) -> float:
    """Cat fidelity at delta = pi/4 and real gamma."""
    g2 = gamma_abs**2
    return (1 + np.exp(-g2 / (1 + np.exp(-2 * r)))) / ((1 + np.exp(-2 * r)) * (1 + np.exp(-g2)))


def fidelity_cat_thermal(r: float, ctx: ThermalContext, gamma_abs: float) -> float:
    """Cat fidelity at delta = pi/4, real gamma, with thermal embedding."""
    g2 = gamma_abs**2
    e = np.exp(2 * r) * ctx.f_th
    return (1 + np.exp(-g2) * np.exp(g2 / (1 + e))) / (np.exp(-2 * r) * (1 + e) * (1 + np.exp(-g2)))


def delta_opt_coherent(r: float) -> float:
    return 0.5 * np.arctan(1 + np.exp(-2 * r))


def delta_opt_coherent_thermal(r: float, ctx: ThermalContext) -> float:
    return 0.5 * np.arctan(1 + np.exp(-2 * r) / ctx.f_th)


def delta_opt_fock(r: float) -> float:
    """Optimal angle for a single-photon input; pi/4 in the r -> 0 limit.

    arctan2 with a nonnegative second argument picks the branch that is
    continuous in r and lands in (0, pi/4].
    """
    e2 = np.exp(2 * r)
    num = (1 - e2 + e2**2 + 3 * e2**3) / e2
    den = 3 * np.expm1(2 * r) ** 2
    return 0.5 * np.arctan2(num, den)


def cat_optimum_r0() -> tuple[float, float]:
    """(F_opt, |gamma|) of the pure cat resource at r = 0."""
    return 1.0 / (4 * (np.sqrt(2) - 1)), float(np.sqrt(-2 * np.log(np.sqrt(2) - 1)))
