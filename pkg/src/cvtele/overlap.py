"""Phase-space trace integrals by tensor Gauss-Hermite quadrature.

Each integrand is written as exp(-v^T Q v) g(v) with Q assembled from the
analytic envelopes of the characteristic functions involved.  The nodes are
mapped through the Cholesky factor of Q, so Gaussian-times-polynomial
integrands are integrated exactly once the order exceeds the polynomial
degree.  Every result is confirmed by comparing orders n and 2n.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import QuadratureError
from .protocol import ChannelSpec, output_charfn
from .states import AnyResource, CharFn, InputStateSpec, input_charfn

NEG_CLAMP = 1e-9
_BLOCK = 1 << 16


def _default_order() -> int:
    env = os.environ.get("CFT_QUAD_ORDER")
    return int(env) if env else 48


@dataclass(frozen=True)
class QuadratureConfig:
    """Quadrature settings.

    ``envelope_scale`` overrides the analytic envelope with exp(-a |v|^2);
    leave it ``None`` to use the envelope carried by each :class:`CharFn`.
    """

    order: int = field(default_factory=_default_order)
    order_4d: int = 24
    envelope_scale: float | None = None
    convergence: float = 1e-9
    max_doublings: int = 2

    def __post_init__(self):
        if self.order < 8 or self.order_4d < 8:
            raise ValueError("quadrature order must be at least 8")
        if self.envelope_scale is not None and not self.envelope_scale > 0:
            raise ValueError("envelope scale must be positive")


@lru_cache(maxsize=32)
def _scaled_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights w_i e^{x_i^2} for integrals against Lebesgue measure."""
    x, w = np.polynomial.hermite.hermgauss(order)
    return x, w * np.exp(x * x)


def _as_charfn(chi, n_modes: int) -> CharFn:
    if isinstance(chi, CharFn):
        return chi
    return CharFn(chi, n_modes, None)


def _split(v: np.ndarray, n_modes: int):
    return [v[..., 2 * j] + 1j * v[..., 2 * j + 1] for j in range(n_modes)]


def _integrate_once(f: Callable, q: np.ndarray, order: int) -> complex:
    dim = q.shape[0]
    x, w = _scaled_rule(order)
    chol = np.linalg.cholesky(q)
    inv_t = np.linalg.inv(chol.T)
    jac = 1.0 / np.prod(np.diag(chol))
    grid = np.meshgrid(*([x] * (dim - 1)), indexing="ij")
    wgrid = np.meshgrid(*([w] * (dim - 1)), indexing="ij")
    rest = np.stack(grid, axis=-1).reshape(-1, dim - 1)
    wrest = np.prod(np.stack(wgrid), axis=0).reshape(-1)
    # rows of the leading axis per block, bounding memory for the 4-D rules;
    # block boundaries depend only on the order, so the sum is deterministic
    rows = max(1, _BLOCK // rest.shape[0])
    partial_re, partial_im = [], []
    for start in range(0, order, rows):
        lead = x[start:start + rows]
        u = np.empty((lead.size, rest.shape[0], dim))
        u[..., 0] = lead[:, None]
        u[..., 1:] = rest[None, :, :]
        u = u.reshape(-1, dim)
        wts = (w[start:start + rows, None] * wrest[None, :]).reshape(-1)
        vals = f(u @ inv_t.T) * wts
        partial_re.append(np.sum(vals.real))
        partial_im.append(np.sum(vals.imag))
    total = complex(math.fsum(partial_re), math.fsum(partial_im))
    return jac * total


def integrate(f: Callable, q: np.ndarray, order: int, cfg: QuadratureConfig) -> complex:
    """Integral of ``f`` over R^d with convergence check by order doubling.

    ``f`` maps an array of real coordinates of shape (N, d) to N complex values.
    """
    q = np.asarray(q, dtype=float)
    q = 0.5 * (q + q.T)
    if np.linalg.eigvalsh(q)[0] <= 0:
        raise QuadratureError("integrand envelope is not positive definite")
    prev = _integrate_once(f, q, order)
    history = [(order, prev)]
    for _ in range(cfg.max_doublings):
        order *= 2
        cur = _integrate_once(f, q, order)
        history.append((order, cur))
        if abs(cur - prev) <= cfg.convergence * max(1.0, abs(cur)):
            return cur
        prev = cur
    diag = ", ".join(f"n={n}: {v.real:.15g}" for n, v in history)
    raise QuadratureError(f"quadrature did not converge ({diag})")


def _envelope(chis: list[CharFn], n_modes: int, cfg: QuadratureConfig) -> np.ndarray:
    if cfg.envelope_scale is not None or any(c.envelope is None for c in chis):
        a = cfg.envelope_scale if cfg.envelope_scale is not None else 0.5
        return len(chis) * a * np.eye(2 * n_modes)
    return sum(np.asarray(c.envelope) for c in chis)


def _finish(value: complex, what: str, upper: float | None = 1.0) -> float:
    val = value.real
    if val < -NEG_CLAMP:
        raise QuadratureError(f"{what} came out negative ({val:.3e})")
    if upper is not None and val > upper + NEG_CLAMP:
        raise QuadratureError(f"{what} exceeds {upper} ({val:.15g})")
    return float(min(max(val, 0.0), upper if upper is not None else val))


def _order_for(n_modes: int, cfg: QuadratureConfig) -> int:
    return cfg.order if n_modes == 1 else cfg.order_4d


def trace_product(chi1, chi2, n_modes: int, cfg: QuadratureConfig | None = None) -> complex:
    """pi^{-n} * integral of chi1(v) chi2(-v), without range checks."""
    cfg = cfg or QuadratureConfig()
    c1, c2 = _as_charfn(chi1, n_modes), _as_charfn(chi2, n_modes)
    q = _envelope([c1, c2], n_modes, cfg)

    def f(v):
        xs = _split(v, n_modes)
        return c1(*xs) * c2(*[-x for x in xs])

    return integrate(f, q, _order_for(n_modes, cfg), cfg) / np.pi**n_modes


def state_overlap(chi1, chi2, n_modes: int, cfg: QuadratureConfig | None = None) -> float:
    """Tr(rho_1 rho_2) for states given by their characteristic functions."""
    return _finish(trace_product(chi1, chi2, n_modes, cfg), "overlap")


def purity(chi, n_modes: int, cfg: QuadratureConfig | None = None) -> float:
    """Tr(rho^2) = pi^{-n} * integral of |chi|^2."""
    cfg = cfg or QuadratureConfig()
    c = _as_charfn(chi, n_modes)
    q = _envelope([c, c], n_modes, cfg)

    def f(v):
        vals = c(*_split(v, n_modes))
        return (vals * np.conj(vals)).astype(complex)

    val = integrate(f, q, _order_for(n_modes, cfg), cfg) / np.pi**n_modes
    return _finish(val, "purity")


def fidelity(
    channel: ChannelSpec,
    inp: InputStateSpec,
    resource: AnyResource,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Teleportation fidelity Tr(rho_in rho_out)."""
    return _finish(
        trace_product(input_charfn(inp), output_charfn(channel, inp, resource), 1, cfg),
        "fidelity",
    )
