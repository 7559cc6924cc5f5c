"""``simulate``: declarative sweeps over fidelities, optima, measures and thresholds.

A config is flat ``key = value`` text, one experiment per file::

    experiment = fidelity-sweep
    resource.family = tmsv, pss
    input.kind = coherent
    sweep.axis1 = resource.r 0 1.5 7
    output.name = tmsv_vs_pss

Values accept arithmetic on numbers and ``pi`` (``pi/4``, ``0.5*pi``,
``1+0.5j``).  ``resource.family``, ``input.kind`` and ``resource.n_th``
take comma-separated lists; every combination becomes its own column.
"""

from __future__ import annotations

import ast
import hashlib
import itertools
import math
import operator
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Callable

import click
import numpy as np

from .closed_forms import (
    ThermalContext,
    delta_opt_coherent_thermal,
    delta_opt_fock,
)
from .errors import ConfigError, CVTeleError, DomainError, SpecError
from .measures import inseparability_delta, non_gaussianity, relative_fidelity, vacuum_affinity, von_neumann_entropy
from .optimize import classical_threshold, optimize_bell, optimize_cat, optimize_sssf
from .overlap import QuadratureConfig, fidelity
from .protocol import AsymmetricBS, ChannelSpec, Ideal, ImpreciseMeasurement, LossyHomodyne
from .states import (
    SSSF,
    TMSV,
    Coherent,
    Fock1,
    PhotonAdded,
    PhotonAddedCoherent,
    PhotonSubtracted,
    ResourceSpec,
    SqueezedBell,
    SqueezedCat,
    SqueezedFock1,
    SqueezedFock11,
    SqueezedVacuum,
)

SCHEMA_VERSION = "cvtele-sweep/1"

EXIT_CONFIG = 2
EXIT_SPEC = 3
EXIT_NUMERIC = 4
EXIT_IO = 5

KINDS = ("fidelity-sweep", "optimize-sweep", "measures-sweep", "threshold-sweep")
FAMILIES = ("tmsv", "squeezed-fock", "pss", "pas", "bell", "sssf", "cat")
INPUTS = ("coherent", "squeezed-vacuum", "fock", "squeezed-fock", "photon-added-coherent")
VARIANTS = ("ideal", "asymmetric", "imprecise", "lossy")
MEASURES = ("entropy", "dng", "affinity", "delta")
OPTIMIZABLE = ("bell", "sssf", "cat")
DELTA_KEYWORDS = ("opt-coherent", "opt-fock")

NUMERIC_KEYS = {
    "resource.r": 0.0,
    "resource.phi": math.pi,
    "resource.n_th_A": None,
    "resource.n_th_B": None,
    "resource.delta": 0.0,
    "resource.theta": 0.0,
    "resource.c0": 1.0,
    "resource.c1": 0.0,
    "resource.c2": 0.0,
    "resource.theta1": 0.0,
    "resource.theta2": 0.0,
    "resource.gamma": 0j,
    "input.beta": 0j,
    "input.s": 0.8,
    "input.phi_s": 0.0,
    "channel.g_x": 1.0,
    "channel.g_p": 1.0,
    "channel.theta": math.pi / 4,
    "channel.r_m": 0.0,
    "channel.s_m": 0.0,
    "channel.angle_x": 0.0,
    "channel.angle_p": 0.0,
    "channel.ext_u_n": 0.0,
    "channel.ext_u_s": 0.0,
    "channel.ext_v_n": 0.0,
    "channel.ext_v_s": 0.0,
    "threshold.lo": 0.0,
    "threshold.hi": 2.0,
}
LIST_KEYS = ("resource.family", "input.kind", "resource.n_th", "measures.list")
TEXT_KEYS = (
    "experiment",
    "figure.id",
    "channel.variant",
    "optimize.reference",
    "threshold.backend",
    "output.name",
    "quad.order",
    "quad.order_4d",
    "quad.convergence",
)
# sweepable keys that are not plain numbers elsewhere
SWEEPABLE_EXTRA = ("resource.n_th",)


@dataclass(frozen=True)
class SweepAxis:
    key: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    axes: tuple[SweepAxis, ...]
    families: tuple[str, ...] = ("tmsv",)
    inputs: tuple[str, ...] = ("coherent",)
    n_th: tuple[float, ...] = (0.0,)
    params: dict = field(default_factory=dict)
    delta_mode: str | None = None
    variant: str = "ideal"
    measures: tuple[str, ...] = ("entropy",)
    reference: str | None = None
    threshold_backend: str = "quadrature"
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    name: str = "sweep"
    canonical: str = ""

    def value(self, key: str, point: dict):
        if key in point:
            return point[key]
        if key in self.params:
            return self.params[key]
        return NUMERIC_KEYS[key]


# ---------------------------------------------------------------- parsing

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def eval_number(text: str) -> complex | float:
    """Evaluate a numeric literal with +, -, *, /, ** and the name ``pi``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
            return node.value
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported expression {text!r}")

    try:
        val = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError, OverflowError) as exc:
        raise ValueError(f"cannot evaluate {text!r}: {exc}") from None
    if isinstance(val, complex):
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise ValueError(f"non-finite value {text!r}")
        return val if val.imag != 0 else val.real
    if not math.isfinite(val):
        raise ValueError(f"non-finite value {text!r}")
    return float(val)


def _split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def read_pairs(text: str, source: str = "<config>") -> dict[str, tuple[int, str]]:
    """Key/value pairs with their line numbers; ``#`` starts a comment."""
    pairs: dict[str, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"{source}:{lineno}: empty key or value")
        if key.count(".") > 1:
            raise ConfigError(f"{source}:{lineno}: key {key!r} nests deeper than two levels")
        if key in pairs:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r} (first on line {pairs[key][0]})")
        pairs[key] = (lineno, value)
    return pairs


def _sweepable(key: str) -> bool:
    return (key in NUMERIC_KEYS and not key.startswith("threshold.")) or key in SWEEPABLE_EXTRA


def _choice(where: str, value: str, allowed) -> str:
    if value not in allowed:
        raise ConfigError(f"{where}: {value!r} is not one of {', '.join(allowed)}")
    return value


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse and validate a config; errors name the offending line."""
    pairs = read_pairs(text, source)

    def where(key):
        return f"{source}:{pairs[key][0]} ({key})" if key in pairs else f"{source} ({key})"

    if "experiment" not in pairs:
        raise ConfigError(f"{source}: missing 'experiment'")
    kind = pairs["experiment"][1]
    if kind == "figure":
        if "figure.id" not in pairs:
            raise ConfigError(f"{where('experiment')}: figure experiments need 'figure.id'")
        extra = set(pairs) - {"experiment", "figure.id", "output.name"} - {k for k in pairs if k.startswith("quad.")}
        if extra:
            raise ConfigError(f"{source}: figure experiments only accept output.* and quad.* overrides, got {sorted(extra)}")
        base = figure_config(pairs["figure.id"][1])
        overrides = "\n".join(f"{k} = {v}" for k, (_, v) in pairs.items() if k.startswith(("quad.", "output.")))
        return parse_config(_replace_lines(base, overrides), f"figure {pairs['figure.id'][1]}")
    _choice(where("experiment"), kind, KINDS)

    axes, params = [], {}
    families, inputs, n_th, measures = ["tmsv"], ["coherent"], [0.0], ["entropy"]
    delta_mode = None
    for key, (lineno, value) in pairs.items():
        loc = f"{source}:{lineno} ({key})"
        if key.startswith("sweep."):
            parts = value.split()
            if len(parts) != 4:
                raise ConfigError(f"{loc}: expected '<parameter> <start> <stop> <steps>'")
            pkey = parts[0]
            if not _sweepable(pkey):
                raise ConfigError(f"{loc}: {pkey!r} is not a sweepable parameter")
            try:
                start, stop = (float(np.real(eval_number(p))) for p in parts[1:3])
                steps = int(parts[3])
            except ValueError as exc:
                raise ConfigError(f"{loc}: {exc}") from None
            if steps < 2:
                raise ConfigError(f"{loc}: sweep axis needs at least 2 steps, got {steps}")
            axes.append((key, SweepAxis(pkey, start, stop, steps)))
        elif key == "resource.family":
            families = [_choice(loc, f, FAMILIES) for f in _split_list(value)]
        elif key == "input.kind":
            inputs = [_choice(loc, f, INPUTS) for f in _split_list(value)]
        elif key == "measures.list":
            measures = [_choice(loc, f, MEASURES) for f in _split_list(value)]
        elif key == "resource.n_th":
            try:
                n_th = [float(np.real(eval_number(v))) for v in _split_list(value)]
            except ValueError as exc:
                raise ConfigError(f"{loc}: {exc}") from None
        elif key == "resource.delta" and value in DELTA_KEYWORDS:
            delta_mode = value
        elif key in NUMERIC_KEYS:
            try:
                params[key] = eval_number(value)
            except ValueError as exc:
                raise ConfigError(f"{loc}: {exc}") from None
        elif key not in TEXT_KEYS:
            raise ConfigError(f"{loc}: unknown key")
        if not families or not inputs or not n_th or not measures:
            raise ConfigError(f"{loc}: empty list")

    if not axes:
        raise ConfigError(f"{source}: no sweep axis given (add e.g. 'sweep.axis1 = resource.r 0 1.5 7')")
    axes.sort(key=lambda kv: kv[0])
    keys = [a.key for _, a in axes]
    if len(set(keys)) != len(keys):
        raise ConfigError(f"{source}: a parameter is swept twice")
    if "resource.n_th" in keys and len(n_th) > 1:
        raise ConfigError(f"{where('resource.n_th')}: cannot both list and sweep n_th")
    if "resource.delta" in keys and delta_mode:
        raise ConfigError(f"{where('resource.delta')}: cannot both sweep delta and set {delta_mode}")

    variant = _choice(where("channel.variant"), pairs.get("channel.variant", (0, "ideal"))[1], VARIANTS)
    reference = pairs.get("optimize.reference", (0, None))[1]
    if reference is not None:
        if kind != "optimize-sweep":
            raise ConfigError(f"{where('optimize.reference')}: only meaningful for optimize-sweep")
        _choice(where("optimize.reference"), reference, FAMILIES)
    backend = _choice(
        where("threshold.backend"), pairs.get("threshold.backend", (0, "quadrature"))[1], ("quadrature", "closed")
    )
    if kind == "threshold-sweep":
        for f in families:
            _choice(where("resource.family"), f, ("tmsv", "bell", "cat"))
        if keys != ["resource.r"]:
            raise ConfigError(f"{source}: threshold sweeps take exactly one axis over resource.r")
    if kind == "optimize-sweep" and "resource.delta" in keys:
        raise ConfigError(f"{source}: optimize-sweep chooses delta itself")

    quad = QuadratureConfig()
    try:
        quad_kw = {}
        for k, conv in (("quad.order", int), ("quad.order_4d", int), ("quad.convergence", float)):
            if k in pairs:
                quad_kw[k.split(".")[1]] = conv(pairs[k][1])
        quad = replace(quad, **quad_kw)
    except ValueError as exc:
        raise ConfigError(f"{source}: bad quadrature override: {exc}") from None

    name = pairs.get("output.name", (0, "sweep"))[1]
    if "/" in name or name.startswith("."):
        raise ConfigError(f"{where('output.name')}: output name must be a plain file stem")

    cfg = ExperimentConfig(
        kind=kind,
        axes=tuple(a for _, a in axes),
        families=tuple(families),
        inputs=tuple(inputs),
        n_th=tuple(n_th),
        params=params,
        delta_mode=delta_mode,
        variant=variant,
        measures=tuple(measures),
        reference=reference,
        threshold_backend=backend,
        quad=quad,
        name=name,
        canonical="\n".join(f"{k} = {pairs[k][1]}" for k in sorted(pairs)),
    )
    # fail fast on parameter combinations the specs reject
    _build_channel(cfg, {})
    return cfg


def _replace_lines(base: str, overrides: str) -> str:
    keys = {line.split("=", 1)[0].strip() for line in overrides.splitlines() if "=" in line}
    kept = [line for line in base.splitlines() if line.split("=", 1)[0].strip() not in keys]
    return "\n".join(kept + overrides.splitlines())


# ---------------------------------------------------------------- evaluation


def _thermal(cfg: ExperimentConfig, point: dict, n_th: float) -> ThermalContext:
    n = point.get("resource.n_th", n_th)
    a = cfg.value("resource.n_th_A", point)
    b = cfg.value("resource.n_th_B", point)
    return ThermalContext(n if a is None else float(a), n if b is None else float(b))


def _build_input(cfg: ExperimentConfig, kind: str, point: dict):
    beta = complex(cfg.value("input.beta", point))
    s, phi_s = float(cfg.value("input.s", point)), float(cfg.value("input.phi_s", point))
    return {
        "coherent": lambda: Coherent(beta),
        "squeezed-vacuum": lambda: SqueezedVacuum(s, phi_s),
        "fock": Fock1,
        "squeezed-fock": lambda: SqueezedFock1(s, phi_s),
        "photon-added-coherent": lambda: PhotonAddedCoherent(beta),
    }[kind]()


def _delta(cfg: ExperimentConfig, point: dict, r: float, ctx: ThermalContext) -> float:
    if cfg.delta_mode == "opt-coherent":
        return delta_opt_coherent_thermal(r, ctx)
    if cfg.delta_mode == "opt-fock":
        return delta_opt_fock(r)
    return float(cfg.value("resource.delta", point))


def _cat_delta(cfg: ExperimentConfig, point: dict, r: float, ctx: ThermalContext) -> float:
    # cats default to the balanced superposition unless delta is given or swept
    if cfg.delta_mode or "resource.delta" in point or "resource.delta" in cfg.params:
        return _delta(cfg, point, r, ctx)
    return math.pi / 4


def _build_resource(cfg: ExperimentConfig, family: str, point: dict, ctx: ThermalContext) -> ResourceSpec:
    r = float(cfg.value("resource.r", point))
    v = lambda k: cfg.value(k, point)  # noqa: E731
    fam = {
        "tmsv": TMSV,
        "squeezed-fock": SqueezedFock11,
        "pss": PhotonSubtracted,
        "pas": PhotonAdded,
        "bell": lambda: SqueezedBell(_delta(cfg, point, r, ctx), float(v("resource.theta"))),
        "sssf": lambda: SSSF(
            float(v("resource.c0")),
            float(v("resource.c1")),
            float(v("resource.c2")),
            float(v("resource.theta1")),
            float(v("resource.theta2")),
        ),
        "cat": lambda: SqueezedCat(_cat_delta(cfg, point, r, ctx), float(v("resource.theta")), complex(v("resource.gamma"))),
    }[family]()
    return ResourceSpec(fam, r, float(v("resource.phi")), ctx.n_th_A, ctx.n_th_B)


def _build_channel(cfg: ExperimentConfig, point: dict) -> ChannelSpec:
    v = lambda k: float(np.real(cfg.value(k, point)))  # noqa: E731
    variant = {
        "ideal": Ideal,
        "asymmetric": lambda: AsymmetricBS(v("channel.theta")),
        "imprecise": lambda: ImpreciseMeasurement(v("channel.r_m"), v("channel.s_m")),
        "lossy": lambda: LossyHomodyne(
            v("channel.angle_x"),
            v("channel.angle_p"),
            (v("channel.ext_u_n"), v("channel.ext_u_s")),
            (v("channel.ext_v_n"), v("channel.ext_v_s")),
        ),
    }[cfg.variant]
    try:
        return ChannelSpec(variant(), v("channel.g_x"), v("channel.g_p"))
    except SpecError as exc:
        raise ConfigError(f"channel: {exc}") from None


def _series(cfg: ExperimentConfig):
    """(family, input, n_th) combinations in column order."""
    return list(itertools.product(cfg.families, cfg.inputs, cfg.n_th))


def _suffix(cfg: ExperimentConfig, family: str, inp: str, n: float) -> str:
    parts = [family]
    if len(cfg.inputs) > 1:
        parts.append(inp)
    if len(cfg.n_th) > 1:
        parts.append(f"n{n!r}")
    return "_".join(parts)


_ARGMAX = {"bell": ("delta",), "sssf": ("delta1", "delta2", "c0", "c1", "c2"), "cat": ("gamma",)}


def columns(cfg: ExperimentConfig) -> list[str]:
    """Computed column names, after the swept parameters."""
    cols = []
    for fam, inp, n in _series(cfg):
        sfx = _suffix(cfg, fam, inp, n)
        if cfg.kind == "fidelity-sweep":
            cols.append(f"F_{sfx}")
        elif cfg.kind == "optimize-sweep":
            if fam in OPTIMIZABLE:
                cols.append(f"Fopt_{sfx}")
                cols += [f"{a}_{sfx}" for a in _ARGMAX[fam]]
                if cfg.reference:
                    cols.append(f"dF_{sfx}")
            else:
                cols.append(f"F_{sfx}")
        elif cfg.kind == "measures-sweep":
            cols += [f"{m}_{sfx}" for m in cfg.measures]
    if cfg.kind == "threshold-sweep":
        cols = [f"ncls_{f}" for f in cfg.families]
    return cols


def _optimize(fam: str, r: float, inp, ctx: ThermalContext, channel: ChannelSpec, quad: QuadratureConfig):
    if fam == "bell":
        res = optimize_bell(r, inp, ctx, quad, channel)
    elif fam == "sssf":
        res = optimize_sssf(r, inp, ctx, quad, channel)
    else:
        if not isinstance(inp, Coherent) or not isinstance(channel.variant, Ideal):
            raise SpecError("cat optimization is defined for coherent inputs on the ideal channel")
        res = optimize_cat(r, ctx)
    return res.F_opt, [float(res.argmax[a]) for a in _ARGMAX[fam]]


def evaluate_point(cfg: ExperimentConfig, point: dict) -> list[float]:
    """All computed columns at one grid point, in ``columns`` order."""
    channel = _build_channel(cfg, point)
    r = float(cfg.value("resource.r", point))
    if cfg.kind == "threshold-sweep":
        return [
            classical_threshold(
                f, r, cfg.threshold_backend, cfg.quad, (cfg.value("threshold.lo", point), cfg.value("threshold.hi", point))
            )
            for f in cfg.families
        ]
    row: list[float] = []
    for fam, kind, n in _series(cfg):
        ctx = _thermal(cfg, point, n)
        inp = _build_input(cfg, kind, point)
        if cfg.kind == "fidelity-sweep" or (cfg.kind == "optimize-sweep" and fam not in OPTIMIZABLE):
            row.append(fidelity(channel, inp, _build_resource(cfg, fam, point, ctx), cfg.quad))
        elif cfg.kind == "optimize-sweep":
            f_opt, arg = _optimize(fam, r, inp, ctx, channel, cfg.quad)
            row += [f_opt, *arg]
            if cfg.reference:
                ref = fidelity(channel, inp, _build_resource(cfg, cfg.reference, point, ctx), cfg.quad)
                row.append(relative_fidelity(f_opt, ref))
        else:
            res = _build_resource(cfg, fam, point, ctx)
            for m in cfg.measures:
                if m == "entropy":
                    row.append(von_neumann_entropy(res))
                elif m == "dng":
                    row.append(non_gaussianity(res, cfg.quad))
                elif m == "affinity":
                    row.append(vacuum_affinity(res).G)
                else:
                    row.append(inseparability_delta(res))
    return [float(x) for x in row]


class PointError(CVTeleError):
    """A numeric failure tagged with the grid point that caused it."""

    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code

    def __reduce__(self):
        return (PointError, (self.args[0], self.exit_code))


def _run_point(job) -> list[float]:
    cfg, point = job
    try:
        return evaluate_point(cfg, point)
    except (SpecError, DomainError) as exc:
        raise PointError(f"at {point}: {exc}", EXIT_SPEC) from None
    except CVTeleError as exc:
        raise PointError(f"at {point}: {type(exc).__name__}: {exc}", EXIT_NUMERIC) from None


def grid(cfg: ExperimentConfig) -> list[dict]:
    """Grid points in row-major order over the declared axes."""
    keys = [a.key for a in cfg.axes]
    return [dict(zip(keys, map(float, vals))) for vals in itertools.product(*(a.values() for a in cfg.axes))]


def run_sweep(cfg: ExperimentConfig, jobs: int = 1) -> tuple[list[str], list[list[float]]]:
    points = grid(cfg)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_point, [(cfg, p) for p in points]))
    else:
        results = [_run_point((cfg, p)) for p in points]
    header = [a.key for a in cfg.axes] + columns(cfg)
    rows = [[p[a.key] for a in cfg.axes] + vals for p, vals in zip(points, results)]
    return header, rows


# ---------------------------------------------------------------- output


def config_hash(cfg: ExperimentConfig) -> str:
    return hashlib.sha256(cfg.canonical.encode()).hexdigest()


def render_csv(cfg: ExperimentConfig, header: list[str], rows: list[list[float]], reproducible: bool) -> str:
    meta = [f"# schema: {SCHEMA_VERSION}", f"# experiment: {cfg.kind}"]
    if reproducible:
        meta.append(f"# config-sha256: {config_hash(cfg)}")
    else:
        meta.append(f"# created: {time.strftime('%Y-%m-%dT%H:%M:%S%z')}")
    lines = meta + [",".join(header)] + [",".join(repr(float(x)) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def render_gnuplot(csv_name: str, header: list[str]) -> str:
    plots = ", \\\n     ".join(
        f"'{csv_name}' using 1:{i + 1} with lines title '{name}'" for i, name in enumerate(header) if i >= 1
    )
    return (
        "set datafile separator ','\n"
        "set datafile commentschars '#'\n"
        "set key autotitle columnhead\n"
        f"set xlabel '{header[0]}'\n"
        f"plot {plots}\n"
    )


def schema_text() -> str:
    return resources.files("cvtele").joinpath("data/csv_schema_v1.json").read_text()


# ---------------------------------------------------------------- figures

_R_AXIS = "sweep.axis1 = resource.r 0 1.5 16"
_R_AXIS_COARSE = "sweep.axis1 = resource.r 0 1.5 11"

FIGURES: dict[str, str] = {
    "3.1-I": f"experiment = fidelity-sweep\nresource.family = tmsv, squeezed-fock, pss, pas\ninput.kind = coherent\n{_R_AXIS}",
    "3.1-II": f"experiment = fidelity-sweep\nresource.family = tmsv, squeezed-fock, pss, pas\ninput.kind = squeezed-vacuum\ninput.s = 0.8\n{_R_AXIS}",
    "3.2-I": f"experiment = fidelity-sweep\nresource.family = tmsv, squeezed-fock, pss, pas\ninput.kind = fock\n{_R_AXIS}",
    "3.2-II": f"experiment = fidelity-sweep\nresource.family = tmsv, squeezed-fock, pss, pas\ninput.kind = photon-added-coherent\ninput.beta = 0.3\n{_R_AXIS}",
    "3.3": f"experiment = fidelity-sweep\nresource.family = tmsv, squeezed-fock, pss, pas\ninput.kind = squeezed-fock\ninput.s = 0.8\n{_R_AXIS}",
    "3.5": f"experiment = optimize-sweep\nresource.family = bell\ninput.kind = coherent, squeezed-vacuum, fock, photon-added-coherent, squeezed-fock\ninput.s = 0.8\ninput.beta = 0.3\n{_R_AXIS_COARSE}",
    "3.6": f"experiment = optimize-sweep\nresource.family = bell\ninput.kind = coherent, squeezed-vacuum, fock\ninput.s = 0.8\noptimize.reference = pss\n{_R_AXIS_COARSE}",
    "3.7": f"experiment = measures-sweep\nresource.family = tmsv, squeezed-fock, pss, pas\nmeasures.list = entropy\n{_R_AXIS}",
    "3.10": "experiment = measures-sweep\nresource.family = bell\nmeasures.list = dng\nresource.r = 0.5\nsweep.axis1 = resource.delta 0 pi 9",
    "3.11": f"experiment = measures-sweep\nresource.family = tmsv, squeezed-fock, pss, pas\nmeasures.list = affinity\n{_R_AXIS}",
    "4.1-I": f"experiment = optimize-sweep\nresource.family = tmsv, bell, sssf\ninput.kind = coherent\n{_R_AXIS_COARSE}",
    "4.1-II": f"experiment = optimize-sweep\nresource.family = tmsv, bell, sssf\ninput.kind = fock\n{_R_AXIS_COARSE}",
    "4.4": f"experiment = optimize-sweep\nresource.family = tmsv, bell, cat\ninput.kind = coherent\n{_R_AXIS}",
    "5.1-I": f"experiment = optimize-sweep\nresource.family = tmsv, bell\nresource.n_th = 0, 0.05, 0.1, 0.15\n{_R_AXIS_COARSE}",
    "5.1-II": f"experiment = optimize-sweep\nresource.family = tmsv, cat\nresource.n_th = 0, 0.05, 0.1, 0.15\n{_R_AXIS}",
    "5.2": f"experiment = optimize-sweep\nresource.family = bell\nresource.n_th = 0, 0.05, 0.1, 0.15\noptimize.reference = tmsv\n{_R_AXIS_COARSE}",
    "5.3": f"experiment = measures-sweep\nresource.family = tmsv, bell\nresource.delta = opt-coherent\nresource.n_th = 0, 0.05, 0.1, 0.15\nmeasures.list = delta\n{_R_AXIS}",
    "5.4": "experiment = threshold-sweep\nresource.family = tmsv, bell, cat\nthreshold.backend = closed\nsweep.axis1 = resource.r 0.05 1.5 30",
}


def figure_config(fig_id: str) -> str:
    if fig_id not in FIGURES:
        raise ConfigError(f"unknown figure {fig_id!r}; available: {', '.join(FIGURES)}")
    return FIGURES[fig_id] + f"\noutput.name = fig_{fig_id.replace('.', '_').replace('-', '_')}\n"


# ---------------------------------------------------------------- commands


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _execute(cfg: ExperimentConfig, out: Path, jobs: int, reproducible: bool, plot: bool) -> Path:
    try:
        header, rows = run_sweep(cfg, jobs)
    except PointError as exc:
        _fail(str(exc), exc.exit_code)
    text = render_csv(cfg, header, rows, reproducible)
    try:
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{cfg.name}.csv"
        path.write_text(text)
        if plot:
            (out / f"{cfg.name}.gp").write_text(render_gnuplot(path.name, header))
    except OSError as exc:
        _fail(f"cannot write output: {exc}", EXIT_IO)
    click.echo(f"wrote {path} ({len(rows)} rows, {len(header)} columns)")
    return path


_out_option = click.option("--out", "out", type=click.Path(file_okay=False, path_type=Path), default=Path("results"), show_default=True)
_jobs_option = click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes.")
_repro_option = click.option("--reproducible", is_flag=True, help="Write a config hash instead of a timestamp.")
_plot_option = click.option("--emit-plot-script", "plot", is_flag=True, help="Also write a gnuplot script.")


@click.group()
def main():
    """Continuous-variable teleportation sweeps in the characteristic-function picture."""


@main.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_out_option
@_jobs_option
@_repro_option
@_plot_option
def run(config: Path, out: Path, jobs: int, reproducible: bool, plot: bool):
    """Run the experiment described by CONFIG and write a CSV."""
    try:
        cfg = parse_config(config.read_text(), str(config))
    except ConfigError as exc:
        _fail(str(exc), EXIT_CONFIG)
    _execute(cfg, out, jobs, reproducible, plot)


@main.command()
@click.argument("fig_id", metavar="ID")
@_out_option
@_jobs_option
@_repro_option
@_plot_option
def figure(fig_id: str, out: Path, jobs: int, reproducible: bool, plot: bool):
    """Run a built-in figure recipe (see ``simulate figure list``)."""
    if fig_id == "list":
        for key in FIGURES:
            click.echo(key)
        return
    try:
        cfg = parse_config(figure_config(fig_id), f"figure {fig_id}")
    except ConfigError as exc:
        _fail(str(exc), EXIT_CONFIG)
    _execute(cfg, out, jobs, reproducible, plot)


@main.command()
def schema():
    """Print the CSV schema description."""
    click.echo(schema_text(), nl=False)


def selftest_checks() -> list[tuple[str, Callable[[], bool]]]:
    """Fast cross-checks between independent computation routes."""
    from .closed_forms import fidelity_bell_thermal, fidelity_tmsv
    from .fock_rep import chi_from_fock, synthesize_resource_fock
    from .states import chi_resource

    rng = np.random.default_rng(7)
    xa = rng.normal(size=8) + 1j * rng.normal(size=8)
    xb = rng.normal(size=8) + 1j * rng.normal(size=8)

    def chi_vs_fock():
        fams = [TMSV(), SqueezedFock11(), PhotonSubtracted(), PhotonAdded(), SqueezedBell(0.4, 0.3),
                SSSF(0.7, 0.5, 0.2), SqueezedCat(0.6, 0.2, 0.8 + 0.3j)]
        for fam in fams:
            spec = ResourceSpec(fam, 0.6, 0.9)
            t = synthesize_resource_fock(spec)
            if np.max(np.abs(chi_resource(spec, xa, xb) - chi_from_fock(t, xa, xb))) > 1e-8:
                return False
        return True

    def tmsv_closed():
        return all(
            abs(fidelity(ChannelSpec(), Coherent(), ResourceSpec(TMSV(), r)) - fidelity_tmsv(r)) < 1e-6
            for r in (0.0, 0.5, 1.0)
        )

    def bell_thermal_closed():
        ctx = ThermalContext.symmetric(0.1)
        spec = ResourceSpec(SqueezedBell(0.3), 0.5, math.pi, 0.1, 0.1)
        return abs(fidelity(ChannelSpec(), Coherent(), spec) - fidelity_bell_thermal(0.5, ctx, 0.3)) < 1e-6

    def beta_invariance():
        vals = [fidelity(ChannelSpec(), Coherent(b), ResourceSpec(PhotonSubtracted(), 0.7)) for b in (0, 1, 2j, 1 + 1j)]
        return max(vals) - min(vals) < 1e-9

    return [
        ("resource chi matches Fock synthesis", chi_vs_fock),
        ("TMSV fidelity matches closed form", tmsv_closed),
        ("thermal Bell fidelity matches closed form", bell_thermal_closed),
        ("fidelity independent of coherent amplitude", beta_invariance),
    ]


@main.command()
def selftest():
    """Run quick oracle cross-checks; exit nonzero on any failure."""
    failed = 0
    for name, check in selftest_checks():
        try:
            ok = bool(check())
        except CVTeleError as exc:
            ok, name = False, f"{name} ({exc})"
        failed += not ok
        click.echo(f"{'PASS' if ok else 'FAIL'}  {name}")
    if failed:
        _fail(f"{failed} self-test check(s) failed", EXIT_NUMERIC)


if __name__ == "__main__":
    main()
