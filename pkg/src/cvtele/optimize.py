"""Fidelity maximization over resource parameters and noise-threshold search.

One-dimensional searches scan a 256-point grid to bracket the best point and
then refine it by golden-section search.  The two-parameter SSSF search seeds
Nelder-Mead from a 32 x 32 grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize as sopt

from .closed_forms import PURE, ThermalContext, fidelity_bell_thermal, fidelity_cat_thermal
from .errors import OptimizationError, SpecError
from .overlap import fidelity
from .protocol import ChannelSpec
from .states import SSSF, Coherent, InputStateSpec, ResourceSpec, SqueezedBell, TMSV

GRID_1D = 256
GRID_2D = 32
GAMMA_MAX = 8.0
# F - 1/2 this small at the bracket start counts as a root (roundoff in F)
ROOT_ATOL = 1e-12


@dataclass(frozen=True)
class ScalarMax:
    x: float
    fx: float
    evaluations: int
    converged: bool
    at_boundary: bool


@dataclass(frozen=True)
class OptResult:
    F_opt: float
    argmax: dict = field(default_factory=dict)
    evaluations: int = 0
    converged: bool = True
    at_boundary: bool = False


def maximize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    periodic: bool = False,
    n_grid: int = GRID_1D,
    xtol: float = 1e-9,
) -> ScalarMax:
    """Grid bracket followed by golden-section refinement.

    With ``periodic=True`` the interval is treated as one period and the
    returned argument is reduced into [lo, hi).
    """
    xs = np.linspace(lo, hi, n_grid, endpoint=not periodic)
    step = xs[1] - xs[0]
    fs = np.array([f(x) for x in xs])
    evals = n_grid
    i = int(np.argmax(fs))
    if not periodic and i in (0, n_grid - 1):
        return ScalarMax(float(xs[i]), float(fs[i]), evals, True, True)
    a, b, c = xs[i] - step, xs[i], xs[i] + step
    count = [0]

    def neg(x):
        count[0] += 1
        return -f(x)

    try:
        res = sopt.minimize_scalar(neg, bracket=(a, b, c), method="golden", options={"xtol": xtol})
        x, fx, ok = float(res.x), float(-res.fun), bool(res.success)
    except ValueError:
        # flat neighbourhood: bounded Brent on the same cell pair
        res = sopt.minimize_scalar(neg, bounds=(a, c), method="bounded", options={"xatol": xtol})
        x, fx, ok = float(res.x), float(-res.fun), bool(res.success)
    if fx < fs[i]:
        x, fx = float(b), float(fs[i])
    if periodic:
        x = lo + (x - lo) % (hi - lo)
    return ScalarMax(x, fx, evals + count[0], ok, False)


def _fidelity_fn(channel: ChannelSpec | None, cfg):
    channel = channel or ChannelSpec()
    return lambda inp, res: fidelity(channel, inp, res, cfg)


def _bell(delta: float, r: float, ctx: ThermalContext, theta: float = 0.0) -> ResourceSpec:
    return ResourceSpec(SqueezedBell(delta, theta), r, np.pi, ctx.n_th_A, ctx.n_th_B)


def optimize_bell(
    r: float,
    inp: InputStateSpec,
    ctx: ThermalContext = PURE,
    cfg=None,
    channel: ChannelSpec | None = None,
    free_theta: bool = False,
) -> OptResult:
    """Maximize over the Bell superposition angle delta in [0, pi) at theta = 0.

    ``free_theta`` polishes the result over (delta, theta) jointly, which is
    only useful to confirm that a nonzero phase brings no improvement.
    """
    fid = _fidelity_fn(channel, cfg)
    res = maximize_scalar(lambda d: fid(inp, _bell(d, r, ctx)), 0.0, np.pi, periodic=True)
    if not free_theta:
        return OptResult(res.fx, {"delta": res.x}, res.evaluations, res.converged)
    out = sopt.minimize(
        lambda p: -fid(inp, _bell(p[0], r, ctx, p[1])),
        np.array([res.x, 0.0]),
        method="Nelder-Mead",
        options={"xatol": 1e-7, "fatol": 1e-13, "initial_simplex": [[res.x, 0.0], [res.x + 0.05, 0.0], [res.x, 0.3]]},
    )
    if -out.fun <= res.fx:
        return OptResult(res.fx, {"delta": res.x, "theta": 0.0}, res.evaluations + out.nfev, res.converged)
    delta, theta = float(out.x[0]) % np.pi, float(out.x[1])
    return OptResult(float(-out.fun), {"delta": delta, "theta": theta}, res.evaluations + out.nfev, bool(out.success))


def sssf_from_angles(delta1: float, delta2: float) -> np.ndarray:
    c = np.array(
        [np.cos(delta1), np.sin(delta1) * np.cos(delta2), np.sin(delta1) * np.sin(delta2)]
    )
    return c if c[0] >= 0 else -c


def optimize_sssf(
    r: float,
    inp: InputStateSpec,
    ctx: ThermalContext = PURE,
    cfg=None,
    channel: ChannelSpec | None = None,
    xatol: float = 1e-7,
) -> OptResult:
    """Maximize over the hyperspherical angles (delta1, delta2) at theta1 = theta2 = 0."""
    fid = _fidelity_fn(channel, cfg)

    def f(p):
        res = ResourceSpec(SSSF.from_angles(p[0], p[1]), r, np.pi, ctx.n_th_A, ctx.n_th_B)
        return fid(inp, res)

    axis = np.linspace(0.0, np.pi, GRID_2D, endpoint=False)
    best, best_p = -np.inf, None
    for d1 in axis:
        for d2 in axis:
            val = f((d1, d2))
            if val > best:
                best, best_p = val, (d1, d2)
    step = axis[1] - axis[0]
    simplex = np.array([best_p, (best_p[0] + step / 2, best_p[1]), (best_p[0], best_p[1] + step / 2)])
    out = sopt.minimize(
        lambda p: -f(p),
        np.array(best_p),
        method="Nelder-Mead",
        options={"xatol": xatol, "fatol": 1e-13, "initial_simplex": simplex, "maxiter": 4000},
    )
    d1, d2 = (float(v) for v in out.x)
    f_opt = float(-out.fun)
    if f_opt < best:
        d1, d2, f_opt = best_p[0], best_p[1], best
    c = sssf_from_angles(d1, d2)
    argmax = {"delta1": d1, "delta2": d2, "c0": c[0], "c1": c[1], "c2": c[2]}
    return OptResult(f_opt, argmax, GRID_2D**2 + int(out.nfev), bool(out.success))


def optimize_sssf_truncation(
    r: float, inp: InputStateSpec, cfg=None, channel: ChannelSpec | None = None, s_max: float = 4.0
) -> OptResult:
    """One-parameter search over second-order truncations (1, tanh s, tanh^2 s)."""
    fid = _fidelity_fn(channel, cfg)

    def f(s):
        t = np.tanh(s)
        return fid(inp, ResourceSpec(SSSF(1.0, t, t * t), r, np.pi))

    res = maximize_scalar(f, -s_max, s_max)
    t = np.tanh(res.x)
    c = np.array([1.0, t, t * t]) / np.sqrt(1 + t * t + t**4)
    return OptResult(res.fx, {"s": res.x, "c0": c[0], "c1": c[1], "c2": c[2]}, res.evaluations, res.converged, res.at_boundary)


def optimize_cat(r: float, ctx: ThermalContext = PURE) -> OptResult:
    """Maximize the delta = pi/4, arg(gamma) = 0 cat fidelity over |gamma| in (0, 8]."""
    res = maximize_scalar(lambda g: fidelity_cat_thermal(r, ctx, g), GAMMA_MAX / GRID_1D, GAMMA_MAX)
    return OptResult(res.fx, {"gamma": res.x}, res.evaluations, res.converged, res.at_boundary)


THRESHOLD_FAMILIES = ("tmsv", "bell", "cat")


def optimal_fidelity(family: str, r: float, ctx: ThermalContext, backend: str = "quadrature", cfg=None) -> float:
    """Best coherent-input fidelity of a family at fixed r and thermal noise."""
    if family == "tmsv":
        if backend == "closed":
            return fidelity_bell_thermal(r, ctx, 0.0)
        return _fidelity_fn(None, cfg)(Coherent(), ResourceSpec(TMSV(), r, np.pi, ctx.n_th_A, ctx.n_th_B))
    if family == "bell":
        if backend == "closed":
            return maximize_scalar(lambda d: fidelity_bell_thermal(r, ctx, d), 0.0, np.pi, periodic=True).fx
        return optimize_bell(r, Coherent(), ctx, cfg).F_opt
    if family == "cat":
        return optimize_cat(r, ctx).F_opt
    raise SpecError(f"threshold family must be one of {THRESHOLD_FAMILIES}")


def classical_threshold(
    family: str, r: float, backend: str = "quadrature", cfg=None, bracket=(0.0, 2.0), xtol: float = 1e-8
) -> float:
    """Symmetric thermal occupation at which the optimal fidelity drops to 1/2."""
    if backend not in ("quadrature", "closed"):
        raise SpecError("backend must be 'quadrature' or 'closed'")

    def g(n):
        return optimal_fidelity(family, r, ThermalContext.symmetric(n), backend, cfg) - 0.5

    lo, hi = bracket
    g_lo, g_hi = g(lo), g(hi)
    if abs(g_lo) <= ROOT_ATOL:
        return lo
    if np.sign(g_lo) == np.sign(g_hi):
        raise OptimizationError(
            f"threshold out of range: F_opt - 1/2 has no sign change on [{lo}, {hi}] (r={r})"
        )
    return float(sopt.bisect(g, lo, hi, xtol=xtol))
