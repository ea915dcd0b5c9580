"""Dilated multiplier operators, maximal functions over dilation sets, and the
weighted square-function experiments.

The supremum over a dilation set is realized on a finite, nested sampling of
the set's dyadic blocks; the square functional and its distance-power weights
are built from the same sampling, so each experiment is an exact finite-set
instance of the inequality it probes, and refinement moves both sides
together.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .dilation_sets import (
    BlockSet,
    DilationSet,
    augmented,
    finite_distance_integral,
    geometric_schedule,
    kappa,
    rescaled_block,
)
from .fractional_calculus import marchaud_matrix
from .lp_frames import GridFunction, build_cutoffs
from .multipliers import (
    Multiplier,
    band_oscillation,
    evaluate,
    multiplier_from_json,
    multiplier_to_json,
)

EXCLUSION_FACTOR = 1e-12


# ---------------------------------------------------------------------------
# built-in test functions


@dataclass(frozen=True)
class FunctionSpec:
    """Descriptor for the built-in experiment inputs.

    `smoothness` declares the Sobolev profile (inf for the Schwartz-type
    built-ins); the half-wave experiment requires it.
    """

    kind: str  # gaussian_bump | modulated_bump | random_band
    width: float = 1.0
    freq: float = 4.0
    band: int = 3
    seed: int = 0
    smoothness: float = math.inf

    def build(self, n: int, extent: float, dim: int = 1) -> GridFunction:
        if dim != 1:
            raise ValueError("built-in experiment inputs are 1-d")
        x = -extent + (2.0 * extent / n) * np.arange(n)
        if self.kind == "gaussian_bump":
            vals = np.exp(-(x**2) / (2.0 * self.width**2)).astype(complex)
        elif self.kind == "modulated_bump":
            vals = np.exp(-(x**2) / (2.0 * self.width**2)) * np.exp(2j * np.pi * self.freq * x)
        elif self.kind == "random_band":
            rng = np.random.default_rng(self.seed)
            spec = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            stub = GridFunction(extent, np.zeros(n, dtype=complex))
            rho = np.abs(np.fft.fftfreq(n, d=stub.dx))
            mask = (rho >= 2.0 ** (self.band - 1)) & (rho <= 2.0 ** (self.band + 1))
            g = GridFunction(extent, spec * mask, side="frequency").to_space()
            vals = g.samples
        else:
            raise ValueError(f"unknown test function {self.kind!r}")
        return GridFunction(extent, vals)

    def to_json(self) -> dict:
        payload = {"kind": self.kind}
        if self.kind == "gaussian_bump":
            payload["width"] = self.width
        elif self.kind == "modulated_bump":
            payload.update(width=self.width, freq=self.freq)
        elif self.kind == "random_band":
            payload.update(band=self.band, seed=self.seed)
        return payload

    @staticmethod
    def from_json(payload: dict) -> "FunctionSpec":
        return FunctionSpec(**payload)


# ---------------------------------------------------------------------------
# dilated operators


def _batched_dilate(spec: GridFunction, m: Multiplier, ts: np.ndarray) -> np.ndarray:
    """Space-side values of T_{m(t .)} f for every t, stacked as (len(ts), n)."""
    if spec.side != "frequency":
        spec = spec.to_frequency()
    rho = spec.freq_radius()
    masks = evaluate(m, ts[:, None] * rho[None, :])
    phase = (-1.0) ** np.arange(spec.n)
    coeff = spec.dxi * spec.n
    return coeff * np.fft.ifft(phase[None, :] * (masks * spec.samples[None, :]), axis=1)


def apply_dilated_multiplier(f: GridFunction, m: Multiplier, t: float) -> GridFunction:
    """T with the symbol rescaled by t: multiply the spectrum by m(t xi)."""
    if t <= 0:
        raise ValueError("dilation parameter must be positive")
    if f.dim == 1:
        out = _batched_dilate(f.to_frequency(), m, np.array([t]))[0]
        return GridFunction(f.extent, out)
    spec = f.to_frequency()
    masked = spec.samples * evaluate(m, t * spec.freq_radius())
    return replace(spec, samples=masked, side="frequency").to_space()


def nested_sample(points: np.ndarray, depth: int) -> np.ndarray:
    """Finite sample of a block, nested across depths (doubling refines).

    Combines the block points nearest to the dyadic value grid 1 + k/2**depth
    (coverage of [1, 2]) with geometric index ladders from both ends
    (coverage of accumulation clusters).  Both ingredients are nested under
    depth doubling, so refinement only ever adds dilations.
    """
    n = points.size
    if n == 0:
        return points
    targets = 1.0 + np.arange((1 << depth) + 1) / float(1 << depth)
    pos = np.searchsorted(points, targets)
    snap = []
    for t, i in zip(targets, pos):
        best = None
        for k in (i - 1, i):
            if 0 <= k < n and (best is None or abs(points[k] - t) < abs(points[best] - t)):
                best = k
        snap.append(best)
    ladder = [0, n - 1]
    step = 1
    for _ in range(depth + 1):
        ladder += [min(step, n - 1), max(n - 1 - step, 0)]
        step *= 2
    idx = np.unique(np.array(snap + ladder, dtype=int))
    return points[idx]


def sampled_dilations(
    E: DilationSet, j_range: tuple[int, int], depth: int, augment: bool = False
) -> dict[int, np.ndarray]:
    """Per-j nested samples of the set's blocks.

    With augment=True the lacunary grid is adjoined first, so every block
    contains the endpoints 1 and 2 (the square-functional setting).
    """
    base = augmented(E) if augment else E
    out = {}
    for j in range(j_range[0], j_range[1] + 1):
        block = rescaled_block(base, j)
        if not block.empty:
            out[j] = nested_sample(block.points, depth)
    return out


def maximal_function(
    f: GridFunction,
    m: Multiplier,
    E: DilationSet,
    sampling_depth: int = 4,
    j_range: tuple[int, int] = (-3, 4),
    augment: bool = False,
) -> tuple[GridFunction, float]:
    """Pointwise sup of |T_{m(t .)} f| over the sampled dilation set.

    Returns the sup together with the relative L2 increment from the previous
    sampling depth, a convergence indicator for the discretized supremum.
    """
    blocks = sampled_dilations(E, j_range, sampling_depth, augment)
    if not blocks:
        raise ValueError("empty dilation sampling on the requested j window")
    spec = f.to_frequency()
    sup_now = np.zeros(spec.samples.shape)
    sup_prev = np.zeros(spec.samples.shape)
    seen: set[float] = set()
    coarse = sampled_dilations(E, j_range, max(sampling_depth - 1, 0), augment)
    for j, pts in blocks.items():
        ts = 2.0**j * pts
        keep = [i for i, t in enumerate(ts) if float(t) not in seen]
        seen.update(float(ts[i]) for i in keep)
        if f.dim == 1:
            vals = np.abs(_batched_dilate(spec, m, ts[keep]))
        else:
            vals = np.stack(
                [np.abs(apply_dilated_multiplier(f, m, float(t)).samples) for t in ts[keep]]
            )
        sup_now = np.maximum(sup_now, vals.max(axis=0))
        prev_pts = set(coarse.get(j, np.array([])).tolist())
        prev_rows = [i for i, p in enumerate(pts[keep]) if float(p) in prev_pts]
        if prev_rows:
            sup_prev = np.maximum(sup_prev, vals[prev_rows].max(axis=0))
    out = GridFunction(f.extent, sup_now.astype(complex), dim=f.dim)
    denom = float(np.linalg.norm(sup_now)) or 1.0
    increment = float(np.linalg.norm(sup_now - sup_prev)) / denom
    return out, increment


# ---------------------------------------------------------------------------
# distance-power quadrature weights


@dataclass(frozen=True, eq=False)
class HBlock:
    j: int
    nodes: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True, eq=False)
class HWeights:
    beta: float
    blocks: tuple[HBlock, ...]

    def block_sum(self, j: int) -> float:
        for b in self.blocks:
            if b.j == j:
                return float(np.sum(b.weights))
        raise KeyError(j)


def _halfgap_cells(anchor: float, width: float, beta2: float, cells: int, outward: float):
    """Nodes and weights for the density d**(beta2 - 1) on a half-gap.

    `outward` is +1 when the interval extends to the right of the anchor
    point.  Cell edges grade geometrically toward the anchor; weights are the
    exact cell integrals and nodes the density centroids.
    """
    if width <= 0:
        return np.array([]), np.array([])
    edges = width * 2.0 ** -np.arange(cells, -1, -1.0)
    edges[0] = 0.0
    lo, hi = edges[:-1], edges[1:]
    weights = (hi**beta2 - lo**beta2) / beta2
    centers = (beta2 / (beta2 + 1.0)) * (hi ** (beta2 + 1.0) - lo ** (beta2 + 1.0)) / (
        hi**beta2 - lo**beta2
    )
    return anchor + outward * centers, weights


def build_h_weights(
    blocks: dict[int, np.ndarray], beta: float, cells_per_halfgap: int = 5
) -> HWeights:
    """Quadrature of d(s, block)**(2 beta - 1) ds per block, gap by gap.

    Per-block weight sums reproduce the closed-form distance integral of the
    sampled point set exactly (the cells tile [1, 2]).
    """
    if not 0 < beta < 0.5:
        raise ValueError("weight exponent must lie in (0, 1/2)")
    beta2 = 2.0 * beta
    out = []
    for j, pts in sorted(blocks.items()):
        nodes, weights = [], []
        if pts[0] > 1.0:
            n_, w_ = _halfgap_cells(pts[0], pts[0] - 1.0, beta2, cells_per_halfgap, -1.0)
            nodes.append(n_), weights.append(w_)
        for left, right in zip(pts[:-1], pts[1:]):
            half = 0.5 * (right - left)
            n_, w_ = _halfgap_cells(left, half, beta2, cells_per_halfgap, 1.0)
            nodes.append(n_), weights.append(w_)
            n_, w_ = _halfgap_cells(right, half, beta2, cells_per_halfgap, -1.0)
            nodes.append(n_), weights.append(w_)
        if pts[-1] < 2.0:
            n_, w_ = _halfgap_cells(pts[-1], 2.0 - pts[-1], beta2, cells_per_halfgap, 1.0)
            nodes.append(n_), weights.append(w_)
        all_nodes = np.concatenate(nodes) if nodes else np.array([])
        all_weights = np.concatenate(weights) if weights else np.array([])
        order = np.argsort(all_nodes)
        out.append(HBlock(j, all_nodes[order], all_weights[order]))
    return HWeights(beta, tuple(out))


# ---------------------------------------------------------------------------
# the weighted square functional


@dataclass(frozen=True, eq=False)
class SquareFunctionalResult:
    values: GridFunction  # real, nonnegative per pixel
    flagged: np.ndarray  # pixels whose path failed the Hoelder precondition


def _path_hoelder_ok(paths: np.ndarray, alpha: float) -> np.ndarray:
    """Vectorized two-scale exponent estimate per path (paths: nodes x pixels)."""
    if paths.shape[0] < 3:
        return np.ones(paths.shape[1], dtype=bool)
    d1 = np.abs(paths[1:-1] - paths[:-2])
    d2 = np.abs(paths[2:] - paths[:-2])
    scale = np.max(np.abs(paths), axis=0, keepdims=True) + 1e-300
    ratios = np.where(d1 > 1e-13 * scale, d2 / np.maximum(d1, 1e-300), 2.0)
    est = np.median(np.log2(np.maximum(ratios, 1e-12)), axis=0)
    return np.minimum(est, 1.0) > alpha


def square_functional(
    f: GridFunction,
    m: Multiplier,
    E: DilationSet,
    alpha: float,
    beta: float,
    weights: HWeights | None = None,
    sampling_depth: int = 4,
    j_range: tuple[int, int] = (-3, 4),
    s_resolution: int = 128,
) -> SquareFunctionalResult:
    """Distance-weighted square sum of fractional path derivatives, per pixel.

    For each dyadic level the per-pixel path F_j(s) = T_{m(2**j s .)} f(x) is
    sampled on [0, 2] (uniform fill plus the weight nodes), differentiated by
    the Marchaud scheme along s, and contracted against the level's weights.
    """
    if not 0 < beta < alpha <= 0.5:
        raise ValueError("need 0 < beta < alpha <= 1/2")
    blocks = sampled_dilations(E, j_range, sampling_depth, augment=True)
    if weights is None:
        weights = build_h_weights(blocks, beta)
    spec = f.to_frequency()
    acc = np.zeros(f.n)
    flagged = np.zeros(f.n, dtype=bool)
    for block in weights.blocks:
        if block.nodes.size == 0:
            continue
        fill = np.linspace(0.0, 2.0, s_resolution + 1)
        s_grid = np.unique(np.concatenate([fill, block.nodes]))
        paths = _batched_dilate(spec, m, 2.0**block.j * s_grid)  # (n_s, n_pixels)
        flagged |= ~_path_hoelder_ok(paths, alpha)
        deriv = marchaud_matrix(s_grid, alpha, exponent=1.0) @ paths  # (n_s - 1, n_pixels)
        cols = np.searchsorted(s_grid[1:], block.nodes)
        acc += block.weights @ np.abs(deriv[cols]) ** 2
    return SquareFunctionalResult(GridFunction(f.extent, acc.astype(complex)), flagged)


# ---------------------------------------------------------------------------
# experiment configuration and reports


@dataclass(frozen=True)
class ExperimentConfig:
    E: DilationSet
    m: Multiplier
    f: FunctionSpec
    alpha: float = 0.45
    beta: float = 0.3
    p: float = 2.0
    n: int = 1024
    extent: float = 8.0
    dim: int = 1
    j_range: tuple[int, int] = (-3, 4)
    depth: int = 4
    s_resolution: int = 128
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.beta < self.alpha <= 0.5:
            raise ValueError("need 0 < beta < alpha <= 1/2")
        if not 1 < self.p < math.inf:
            raise ValueError("integrability index must lie in (1, inf)")

    def build_f(self) -> GridFunction:
        return self.f.build(self.n, self.extent, self.dim)

    def kappa_estimate(self) -> float:
        sched = geometric_schedule(0.07, 0.7e-5, 7)
        return kappa(self.E, sched, self.j_range).value


def _set_to_json(E: DilationSet) -> dict:
    from .dilation_sets import (
        CantorLike,
        ExplicitPoints,
        LacunaryGrid,
        PowerSequence,
        UnionSet,
    )

    def gen_json(g):
        if isinstance(g, PowerSequence):
            return {"kind": "power_sequence", "a": g.a}
        if isinstance(g, ExplicitPoints):
            return {"kind": "explicit", "points": list(g.points)}
        if isinstance(g, CantorLike):
            return {"kind": "cantor", "base": g.base, "digits": list(g.digits), "levels": g.levels}
        if isinstance(g, LacunaryGrid):
            return {"kind": "lacunary"}
        if isinstance(g, UnionSet):
            return {"kind": "union", "members": [gen_json(m) for m in g.members]}
        raise TypeError(type(g).__name__)

    return {"generator": gen_json(E.generator), "cap": E.materialization_cap}


def set_from_json(payload: dict) -> DilationSet:
    from .dilation_sets import (
        CantorLike,
        ExplicitPoints,
        LacunaryGrid,
        PowerSequence,
        UnionSet,
    )

    def gen_from(spec):
        kind = spec.get("kind")
        if kind == "power_sequence":
            return PowerSequence(float(spec["a"]))
        if kind == "explicit":
            return ExplicitPoints(tuple(float(p) for p in spec["points"]))
        if kind == "cantor":
            return CantorLike(int(spec["base"]), tuple(spec["digits"]), int(spec["levels"]))
        if kind == "lacunary":
            return LacunaryGrid()
        if kind == "union":
            return UnionSet(tuple(gen_from(s) for s in spec["members"]))
        raise ValueError(f"unknown set kind {kind!r}")

    return DilationSet(gen_from(payload["generator"]), int(payload.get("cap", 1_000_000)))


def config_to_json(config: ExperimentConfig) -> dict:
    return {
        "set": _set_to_json(config.E),
        "multiplier": multiplier_to_json(config.m),
        "f": config.f.to_json(),
        "alpha": config.alpha,
        "beta": config.beta,
        "p": config.p,
        "grid": {"n": config.n, "extent": config.extent, "dim": config.dim},
        "j_range": list(config.j_range),
        "depth": config.depth,
        "s_resolution": config.s_resolution,
        "seed": config.seed,
    }


def config_from_json(payload: dict) -> ExperimentConfig:
    grid = payload.get("grid", {})
    return ExperimentConfig(
        E=set_from_json(payload["set"]),
        m=multiplier_from_json(payload["multiplier"]),
        f=FunctionSpec.from_json(payload["f"]),
        alpha=float(payload.get("alpha", 0.45)),
        beta=float(payload.get("beta", 0.3)),
        p=float(payload.get("p", 2.0)),
        n=int(grid.get("n", 1024)),
        extent=float(grid.get("extent", 8.0)),
        dim=int(grid.get("dim", 1)),
        j_range=tuple(payload.get("j_range", (-3, 4))),
        depth=int(payload.get("depth", 4)),
        s_resolution=int(payload.get("s_resolution", 128)),
        seed=int(payload.get("seed", 0)),
    )


@dataclass(frozen=True)
class DominationReport:
    max_ratio: float
    refined_ratio: float
    relative_change: float
    excluded_pixels: int
    flagged_pixels: int
    maximal_increment: float
    ratios: np.ndarray = field(repr=False)

    @property
    def stable(self) -> bool:
        return self.relative_change < 0.10

    def histogram(self, bins: int = 32) -> str:
        finite = self.ratios[np.isfinite(self.ratios)]
        if finite.size == 0:
            return "lo,hi,count\n"
        counts, edges = np.histogram(finite, bins=bins)
        rows = ["lo,hi,count"]
        rows += [f"{repr(float(lo))},{repr(float(hi))},{c}" for lo, hi, c in zip(edges, edges[1:], counts)]
        return "\n".join(rows) + "\n"


def _pointwise_ratio(config: ExperimentConfig, depth: int, s_resolution: int):
    f = config.build_f()
    # both sides of the inequality run over the lacunary-augmented set
    sup, increment = maximal_function(f, config.m, config.E, depth, config.j_range, augment=True)
    sq = square_functional(
        f,
        config.m,
        config.E,
        config.alpha,
        config.beta,
        sampling_depth=depth,
        j_range=config.j_range,
        s_resolution=s_resolution,
    )
    top = np.abs(sup.samples.real) ** 2
    bot = sq.values.samples.real
    excluded = (top <= EXCLUSION_FACTOR * top.max()) & (bot <= EXCLUSION_FACTOR * bot.max())
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(excluded, np.nan, top / bot)
    return ratios, excluded, sq.flagged, increment


def domination_ratio(config: ExperimentConfig) -> DominationReport:
    """Max pointwise ratio of squared maximal function to square functional,
    with its stability under doubling both the set sampling and the s-grid."""
    base, excluded, flagged, increment = _pointwise_ratio(config, config.depth, config.s_resolution)
    fine, _, _, _ = _pointwise_ratio(config, config.depth + 1, 2 * config.s_resolution)
    all_excluded = bool(np.all(np.isnan(base)))
    max_base = 0.0 if all_excluded else float(np.nanmax(base))
    max_fine = 0.0 if np.all(np.isnan(fine)) else float(np.nanmax(fine))
    change = abs(max_fine - max_base) / max_base if max_base > 0 else 0.0
    return DominationReport(
        max_ratio=max_base,
        refined_ratio=max_fine,
        relative_change=change,
        excluded_pixels=int(np.sum(excluded)),
        flagged_pixels=int(np.sum(flagged)),
        maximal_increment=increment,
        ratios=base,
    )


# ---------------------------------------------------------------------------
# sup-over-frequency H-norm bound


@dataclass(frozen=True)
class HNormReport:
    sup_h_norm: float
    sigma_inf: float
    ratio: float
    constant: float

    @property
    def passed(self) -> bool:
        return self.ratio <= self.constant


def band_sup_norm(m: Multiplier, j: int) -> float:
    """Grid sup of the band-j restriction |m(2**j .) psi| on its annulus."""
    osc = band_oscillation(m, j)
    n = 1 << max(10, int(4 * max(osc, 1.0)).bit_length())
    rho = np.linspace(0.0, 4.0, min(n, 1 << 16), endpoint=False)
    cut = build_cutoffs()
    return float(np.max(np.abs(evaluate(m, 2.0**j * rho) * cut.psi(rho))))


def mm_linf_h_norm(
    m: Multiplier,
    E: DilationSet,
    beta: float,
    xi_samples: np.ndarray,
    weights: HWeights | None = None,
    j_range: tuple[int, int] = (-4, 4),
    depth: int = 8,
    constant: float = 16.0,
) -> HNormReport:
    """Sup over frequencies of the weighted square sum of dilated symbol values,
    against the square-summed band sup norms."""
    if weights is None:
        weights = build_h_weights(sampled_dilations(E, j_range, depth, augment=True), beta)
    sup_h2 = 0.0
    for xi in np.asarray(xi_samples, dtype=float):
        h2 = 0.0
        for block in weights.blocks:
            vals = evaluate(m, 2.0**block.j * block.nodes * abs(xi))
            h2 += float(block.weights @ np.abs(vals) ** 2)
        sup_h2 = max(sup_h2, h2)
    sigma_inf = math.sqrt(sum(band_sup_norm(m, block.j) ** 2 for block in weights.blocks))
    sup_h = math.sqrt(sup_h2)
    ratio = sup_h / sigma_inf if sigma_inf > 0 else (0.0 if sup_h == 0 else math.inf)
    return HNormReport(sup_h, sigma_inf, ratio, constant)


# ---------------------------------------------------------------------------
# operator-norm probing


@dataclass(frozen=True)
class ProbeReport:
    lower_bound: float
    per_trial: tuple[tuple[str, float], ...]
    regularity_sweep: tuple[tuple[float, float], ...]


def _lp_norm_grid(values: np.ndarray, dx: float, p: float) -> float:
    if math.isinf(p):
        return float(np.max(np.abs(values)))
    return float((np.sum(np.abs(values) ** p) * dx) ** (1.0 / p))


def operator_norm_probe(
    config: ExperimentConfig,
    trials: int = 3,
    regularity_grid: Sequence[float] = (),
) -> ProbeReport:
    """Empirical lower bound for the maximal operator norm on L^p.

    Runs the maximal function on normalized test inputs; optionally sweeps a
    family of multipliers of varying decay to record how the bound moves as
    the regularity crosses the critical index.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    specs = [
        FunctionSpec("gaussian_bump", width=0.5 + 0.5 * k)
        for k in range(max(1, trials - 2))
    ]
    if trials >= 2:
        specs.append(FunctionSpec("modulated_bump", width=1.0, freq=4.0))
    if trials >= 3:
        specs.append(FunctionSpec("random_band", band=3, seed=config.seed))
    specs = specs[:trials]
    per_trial = []
    bound = 0.0
    for spec in specs:
        f = spec.build(config.n, config.extent)
        norm = _lp_norm_grid(f.samples, f.dx, config.p)
        f = GridFunction(f.extent, f.samples / norm)
        sup, _ = maximal_function(f, config.m, config.E, config.depth, config.j_range)
        value = _lp_norm_grid(sup.samples.real, sup.dx, config.p)
        per_trial.append((spec.kind, value))
        bound = max(bound, value)
    sweep = []
    from .multipliers import LimitedDecay

    for a in regularity_grid:
        f = specs[0].build(config.n, config.extent)
        norm = _lp_norm_grid(f.samples, f.dx, config.p)
        f = GridFunction(f.extent, f.samples / norm)
        sup, _ = maximal_function(f, LimitedDecay(float(a)), config.E, config.depth, config.j_range)
        sweep.append((float(a), _lp_norm_grid(sup.samples.real, sup.dx, config.p)))
    return ProbeReport(bound, tuple(per_trial), tuple(sweep))


# ---------------------------------------------------------------------------
# fractional half-wave convergence


@dataclass(frozen=True)
class HalfwaveReport:
    beta_fit: float
    times: tuple[float, ...]
    sup_differences: tuple[float, ...]


def halfwave_times(E: DilationSet, t_min: float, t_max: float, cap: int = 64) -> np.ndarray:
    """Evaluation times accumulating at zero, extracted from the set.

    Power-law sets built around the accumulation point 1 contribute their
    offsets to the limit; explicit and lacunary sets contribute the points
    themselves inside the window.
    """
    from .dilation_sets import ExplicitPoints, LacunaryGrid, PowerSequence, UnionSet

    def times_from(gen):
        if isinstance(gen, PowerSequence):
            n_lo = max(1, math.floor(t_max ** (-1.0 / gen.a)))
            n_hi = math.ceil(t_min ** (-1.0 / gen.a)) + 1
            n = np.arange(n_lo, min(n_hi, n_lo + 100000) + 1, dtype=float)
            return gen.offsets(n)
        if isinstance(gen, LacunaryGrid):
            k_lo = math.ceil(math.log2(1.0 / t_max))
            k_hi = math.floor(math.log2(1.0 / t_min))
            return 2.0 ** -np.arange(k_lo, k_hi + 1, dtype=float)
        if isinstance(gen, ExplicitPoints):
            return np.asarray(gen.points, dtype=float)
        if isinstance(gen, UnionSet):
            return np.concatenate([times_from(m) for m in gen.members])
        raise TypeError(type(gen).__name__)

    ts = times_from(E.generator)
    ts = np.unique(ts[(ts >= t_min) & (ts <= t_max)])
    if ts.size > cap:
        idx = np.unique(np.round(np.linspace(0, ts.size - 1, cap)).astype(int))
        ts = ts[idx]
    return ts


def halfwave_convergence(
    f: GridFunction,
    alpha: float,
    beta: float,
    times: np.ndarray,
    smoothness: float = math.inf,
) -> HalfwaveReport:
    """Fitted small-time rate of sup |e^{-i t (-Lap)^{alpha/2}} f - f|.

    Evolves spectrally with the phase e^{-i t (2 pi |xi|)^alpha}; the fitted
    slope is invariant under the 2 pi convention, which only rescales t.
    """
    if not 0 < alpha < 1:
        raise ValueError("propagator order must lie in (0, 1)")
    if not beta < 1:
        raise ValueError("target rate must lie below 1")
    if smoothness < alpha * beta:
        raise ValueError("declared smoothness below the required Sobolev profile")
    times = np.asarray(sorted(set(float(t) for t in times)))
    if times.size < 3:
        raise ValueError("need at least three evaluation times for a rate fit")
    spec = f.to_frequency()
    omega = (2.0 * np.pi * spec.freq_radius()) ** alpha
    diffs = []
    for t in times:
        evolved = replace(spec, samples=spec.samples * np.exp(-1j * t * omega), side="frequency")
        diffs.append(float(np.max(np.abs(evolved.to_space().samples - f.to_space().samples))))
    diffs = np.array(diffs)
    good = diffs > 0
    slope = float(np.polyfit(np.log(times[good]), np.log(diffs[good]), 1)[0])
    return HalfwaveReport(slope, tuple(times), tuple(diffs))
