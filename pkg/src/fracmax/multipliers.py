"""Multiplier families, their decay diagnostics, and the fractional-difference transform.

All built-in families are radial-phase times radial-amplitude and vanish on
the ball of radius 1/2 (the amplitude carries the complementary low-pass
factor), so every dyadic band restriction is exactly zero for j <= -1.
Evaluation is radial: pass |xi| (or any real array; the absolute value is
taken) -- for 2-d grids evaluate on the frequency-radius array.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .lp_frames import BesovParams, GridFunction, SmoothCutoff, sigma2_norm

_CUT = SmoothCutoff("smooth_exp")

# finite-difference step for families without closed-form derivatives,
# relative to the evaluation radius
_FD_REL_STEP = 2.0**-14


@dataclass(frozen=True)
class LimitedDecay:
    """Oscillating limited-decay symbol: every derivative decays like |xi|^-a.

    e^{2*pi*i*|xi|} (1 - phi(|xi|)) |xi|^-a -- the unit-speed phase keeps all
    derivative orders at the same decay rate, the defining property of the
    limited-decay class.
    """

    a: float

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("decay rate must be positive")


@dataclass(frozen=True)
class SlowDecay:
    """(1 - phi)|xi|^-beta cos(|xi|^(1-delta)): derivative order k decays -beta - k*delta."""

    beta: float
    delta: float

    def __post_init__(self):
        if self.beta <= 0 or not 0 < self.delta < 1:
            raise ValueError("need beta > 0 and delta in (0, 1)")


@dataclass(frozen=True)
class Oscillatory:
    """e^{2*pi*i*|xi|^alpha} (1 - phi)|xi|^-beta: derivative order k decays -beta - k(1-alpha)."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not 0 < self.alpha < 1 or self.beta <= 0:
            raise ValueError("need alpha in (0, 1) and beta > 0")


@dataclass(frozen=True)
class BandBump:
    """The annular bump itself."""


@dataclass(frozen=True, eq=False)
class Custom:
    evaluator: Callable[[np.ndarray], np.ndarray]
    oscillation: float = 0.0  # local phase frequency hint, cycles per unit radius


@dataclass(frozen=True, eq=False)
class Scaled:
    """m(r .) as a derived multiplier."""

    base: "Multiplier"
    r: float

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("scale must be positive")


Multiplier = LimitedDecay | SlowDecay | Oscillatory | BandBump | Custom | Scaled


def scaled(m: Multiplier, r: float) -> Multiplier:
    if isinstance(m, Scaled):
        return Scaled(m.base, m.r * r)
    return Scaled(m, r)


def _amplitude(rho: np.ndarray, beta: float, order: int) -> np.ndarray:
    """Radial derivatives of (1 - phi(rho)) rho**-beta up to order 2."""
    one_minus = 1.0 - _CUT.phi(rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        p0 = np.where(rho > 0, rho ** (-beta), 0.0)
        p1 = np.where(rho > 0, -beta * rho ** (-beta - 1.0), 0.0)
        p2 = np.where(rho > 0, beta * (beta + 1.0) * rho ** (-beta - 2.0), 0.0)
    if order == 0:
        return one_minus * p0
    d1 = -_CUT.phi_d1(rho)
    if order == 1:
        return d1 * p0 + one_minus * p1
    d2 = -_CUT.phi_d2(rho)
    return d2 * p0 + 2.0 * d1 * p1 + one_minus * p2


def _phase_exp(rho: np.ndarray, alpha: float, beta: float, order: int) -> np.ndarray:
    """Radial derivatives of e^{2 pi i rho**alpha} * amplitude(beta)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        theta1 = np.where(rho > 0, 2.0 * np.pi * alpha * rho ** (alpha - 1.0), 0.0)
        theta2 = np.where(rho > 0, 2.0 * np.pi * alpha * (alpha - 1.0) * rho ** (alpha - 2.0), 0.0)
    phase = np.exp(2j * np.pi * np.where(rho > 0, rho, 0.0) ** alpha)
    a0 = _amplitude(rho, beta, 0)
    if order == 0:
        return phase * a0
    a1 = _amplitude(rho, beta, 1)
    if order == 1:
        return phase * (1j * theta1 * a0 + a1)
    a2 = _amplitude(rho, beta, 2)
    return phase * (-(theta1**2) * a0 + 2j * theta1 * a1 + 1j * theta2 * a0 + a2)


def radial_derivative(m: Multiplier, rho, order: int = 0) -> np.ndarray:
    """d^k/drho^k of the radial profile, closed form where the family has one."""
    rho = np.asarray(rho, dtype=float)
    if order < 0 or order > 2:
        raise ValueError("derivative orders 0..2 supported")
    if isinstance(m, LimitedDecay):
        return _phase_exp(rho, 1.0, m.a, order)
    if isinstance(m, Oscillatory):
        return _phase_exp(rho, m.alpha, m.beta, order)
    if isinstance(m, SlowDecay):
        w = 1.0 - m.delta
        with np.errstate(divide="ignore", invalid="ignore"):
            w1 = np.where(rho > 0, w * rho ** (w - 1.0), 0.0)
            w2 = np.where(rho > 0, w * (w - 1.0) * rho ** (w - 2.0), 0.0)
        arg = np.where(rho > 0, rho, 0.0) ** w
        a0 = _amplitude(rho, m.beta, 0)
        if order == 0:
            return a0 * np.cos(arg)
        a1 = _amplitude(rho, m.beta, 1)
        if order == 1:
            return a1 * np.cos(arg) - a0 * w1 * np.sin(arg)
        a2 = _amplitude(rho, m.beta, 2)
        return (
            a2 * np.cos(arg)
            - 2.0 * a1 * w1 * np.sin(arg)
            - a0 * (w2 * np.sin(arg) + w1**2 * np.cos(arg))
        )
    if isinstance(m, BandBump):
        if order == 0:
            return _CUT.psi(rho).astype(complex)
        if order == 1:
            return (_CUT.phi_d1(rho) - 2.0 * _CUT.phi_d1(2.0 * rho)).astype(complex)
        return (_CUT.phi_d2(rho) - 4.0 * _CUT.phi_d2(2.0 * rho)).astype(complex)
    if isinstance(m, Scaled):
        return m.r**order * radial_derivative(m.base, m.r * rho, order)
    if isinstance(m, Custom):
        if order == 0:
            return np.asarray(m.evaluator(rho), dtype=complex)
        h = np.maximum(_FD_REL_STEP * np.maximum(rho, 1e-3), 1e-9)
        if order == 1:
            return (evaluate(m, rho + h) - evaluate(m, rho - h)) / (2.0 * h)
        return (evaluate(m, rho + h) - 2.0 * evaluate(m, rho) + evaluate(m, rho - h)) / h**2
    raise TypeError(f"unknown multiplier {type(m).__name__}")


def evaluate(m: Multiplier, xi) -> np.ndarray:
    """Pointwise values; radial for the built-in families."""
    rho = np.abs(np.asarray(xi, dtype=float))
    return radial_derivative(m, rho, 0)


def phase_frequency(m: Multiplier, rho: np.ndarray) -> np.ndarray:
    """Local oscillation rate (cycles per unit radius) of the family's phase."""
    rho = np.asarray(rho, dtype=float)
    if isinstance(m, LimitedDecay):
        return np.ones_like(rho)
    if isinstance(m, Oscillatory):
        with np.errstate(divide="ignore"):
            return np.where(rho > 0, m.alpha * rho ** (m.alpha - 1.0), 0.0)
    if isinstance(m, SlowDecay):
        w = 1.0 - m.delta
        with np.errstate(divide="ignore"):
            return np.where(rho > 0, w * rho ** (w - 1.0) / (2.0 * np.pi), 0.0)
    if isinstance(m, Scaled):
        return m.r * phase_frequency(m.base, m.r * rho)
    if isinstance(m, Custom):
        return np.full_like(rho, m.oscillation)
    return np.zeros_like(rho)


def band_oscillation(m: Multiplier, j: int) -> float:
    """Max local frequency of m(2**j .) on the annulus 1/2 <= |xi| <= 2."""
    rho = 2.0**j * np.geomspace(0.5, 2.0, 9)
    return float(2.0**j * np.max(phase_frequency(m, rho)))


def phase_cycles(m: Multiplier, rho: float) -> float:
    """Total phase turns of the family's oscillation from radius 0 to rho."""
    if rho <= 0:
        return 0.0
    if isinstance(m, LimitedDecay):
        return rho
    if isinstance(m, Oscillatory):
        return rho**m.alpha
    if isinstance(m, SlowDecay):
        return rho ** (1.0 - m.delta) / (2.0 * np.pi)
    if isinstance(m, Scaled):
        return phase_cycles(m.base, m.r * rho)
    if isinstance(m, Custom):
        return m.oscillation * rho
    return 0.0


# ---------------------------------------------------------------------------
# decay diagnostics


@dataclass(frozen=True)
class DecayProfile:
    slopes: tuple[float, ...]  # fitted log2 slope per derivative order 0..order
    sup_tables: tuple[tuple[float, ...], ...]


def decay_profile(
    m: Multiplier,
    j_range: tuple[int, int],
    order: int,
    samples_per_band: int = 256,
) -> DecayProfile:
    """Fits the dyadic decay rate of sup |d^k m| over the band annuli."""
    js = np.arange(j_range[0], j_range[1] + 1)
    slopes, tables = [], []
    for k in range(order + 1):
        sups = []
        for j in js:
            rho = np.linspace(2.0 ** (j - 1.0), 2.0 ** (j + 1.0), samples_per_band)
            sups.append(float(np.max(np.abs(radial_derivative(m, rho, k)))))
        sups = np.array(sups)
        if np.any(sups <= 0):
            slopes.append(-math.inf)
        else:
            slopes.append(float(np.polyfit(js, np.log2(sups), 1)[0]))
        tables.append(tuple(sups))
    return DecayProfile(tuple(slopes), tuple(tables))


# ---------------------------------------------------------------------------
# the fractional-difference transform


from functools import lru_cache


_PANEL_SIZE = 512


@lru_cache(maxsize=32)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _gauss_nodes(n: int, lo: float, hi: float):
    """Composite Gauss-Legendre rule with ~n nodes total on [lo, hi].

    Splits into panels of at most _PANEL_SIZE so the node tables stay cheap
    to build and cache while the count scales with the integrand's
    oscillation.
    """
    if n <= _PANEL_SIZE:
        x, w = _leggauss(max(n, 4))
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        return mid + half * x, half * w
    panels = math.ceil(n / _PANEL_SIZE)
    edges = np.linspace(lo, hi, panels + 1)
    x, w = _leggauss(_PANEL_SIZE)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halfs = 0.5 * np.diff(edges)
    nodes = (mids[:, None] + halfs[:, None] * x[None, :]).ravel()
    weights = (halfs[:, None] * w[None, :]).ravel()
    return nodes, weights


def _adaptive_nodes(m: Multiplier, rho_max: float, n_min: int) -> int:
    """Node count resolving the family's oscillation over the ray (>= 5/cycle)."""
    cycles = phase_cycles(m, rho_max)
    return int(min(1 << 16, max(n_min, 1 << math.ceil(math.log2(max(5.0 * cycles, 1.0))))))


def _mtilde_quadrature(m: Multiplier, alpha: float, rho: np.ndarray, n_nodes: int):
    """Two-piece evaluation of the fractional difference at radii rho.

    [0, 1/2]: plain Gauss-Legendre.  [1/2, 1]: substitute u = 1 - r = v**2 and
    cancel the first-order ray derivative so the integrand is integrable with
    vanishing boundary term.
    """
    m_rho = radial_derivative(m, rho, 0)
    # piece 1: r in [0, 1/2]
    r1, w1 = _gauss_nodes(n_nodes, 0.0, 0.5)
    vals1 = radial_derivative(m, rho[:, None] * r1[None, :], 0)
    part1 = ((m_rho[:, None] - vals1) * ((1.0 - r1) ** (-1.0 - alpha) * w1)[None, :]).sum(axis=1)
    # piece 2: u in (0, 1/2], Taylor-cancelled
    ray_slope = rho * radial_derivative(m, rho, 1)  # d/du m((1-u) rho) at u=0 is -rho m'(rho)
    v_edge = math.sqrt(0.5)
    v, wv = _gauss_nodes(n_nodes, 0.0, v_edge)
    u = v**2
    vals2 = radial_derivative(m, rho[:, None] * (1.0 - u)[None, :], 0)
    remainder = (m_rho[:, None] - vals2) - u[None, :] * ray_slope[:, None]
    part2 = (remainder * (2.0 * v ** (-1.0 - 2.0 * alpha) * wv)[None, :]).sum(axis=1)
    part2 += ray_slope * 0.5 ** (1.0 - alpha) / (1.0 - alpha)
    return part1 + part2


def mtilde_values(
    m: Multiplier, alpha: float, xi, n_nodes: int = 64, flag_tol: float = 1e-6
):
    """Fractional-difference transform values with per-point convergence flags.

    The node count adapts to the family's total phase variation over the ray
    so oscillatory integrands stay resolved (capped at 8192 nodes).
    """
    if not 0 < alpha < 1:
        raise ValueError("order must lie in (0, 1)")
    rho = np.abs(np.asarray(xi, dtype=float)).ravel()
    n_eff = _adaptive_nodes(m, float(np.max(rho, initial=0.0)), n_nodes)
    fine = _mtilde_quadrature(m, alpha, rho, n_eff)
    coarse = _mtilde_quadrature(m, alpha, rho, n_eff // 2)
    scale = np.max(np.abs(fine)) + 1e-300
    flags = np.abs(fine - coarse) > flag_tol * np.maximum(np.abs(fine), 0.01 * scale)
    shape = np.asarray(xi).shape
    return fine.reshape(shape), flags.reshape(shape)


def mtilde(m: Multiplier, alpha: float, xi_grid: GridFunction) -> tuple[GridFunction, np.ndarray]:
    """Transform sampled on a grid's frequency axis, returned frequency-side."""
    spec = xi_grid.to_frequency()
    vals, flags = mtilde_values(m, alpha, spec.freq_radius())
    out = GridFunction(spec.extent, vals, side="frequency", dim=spec.dim)
    return out, flags


def mtilde_multiplier(m: Multiplier, alpha: float, n_nodes: int = 64) -> Custom:
    """The transform as a multiplier, for square-norm machinery.

    Skips the fine/coarse convergence comparison of mtilde_values; the
    adaptive node count alone keeps the quadrature resolved.
    """
    osc = float(np.max(phase_frequency(m, np.geomspace(0.25, 4096.0, 25))))

    def evaluator(xi, m=m, alpha=alpha, n_nodes=n_nodes):
        rho = np.abs(np.asarray(xi, dtype=float)).ravel()
        n_eff = _adaptive_nodes(m, float(np.max(rho, initial=0.0)), n_nodes)
        return _mtilde_quadrature(m, alpha, rho, n_eff).reshape(np.asarray(xi).shape)

    return Custom(evaluator, oscillation=osc)


def embedding_check(
    m: Multiplier,
    alpha: float,
    eps: float,
    p: float,
    s: float,
    j_range: tuple[int, int],
    cut: SmoothCutoff,
    constant: float = 32.0,
) -> tuple[float, bool]:
    """Ratio of the transform's square norm at smoothness s against the
    base multiplier's at smoothness s + alpha + eps."""
    num = sigma2_norm(mtilde_multiplier(m, alpha), BesovParams(p, s), j_range, cut).total
    den = sigma2_norm(m, BesovParams(p, s + alpha + eps), j_range, cut).total
    if num == 0.0 and den == 0.0:
        return 0.0, True
    ratio = num / den if den > 0 else math.inf
    return ratio, ratio <= constant


# ---------------------------------------------------------------------------
# JSON wire format


def multiplier_from_json(payload: str | dict) -> Multiplier:
    spec = json.loads(payload) if isinstance(payload, str) else dict(payload)
    family = spec.get("family")
    if family == "limited_decay":
        return LimitedDecay(float(spec["a"]))
    if family == "slow_decay":
        return SlowDecay(float(spec["beta"]), float(spec["delta"]))
    if family == "oscillatory":
        return Oscillatory(float(spec["alpha"]), float(spec["beta"]))
    if family == "band_bump":
        return BandBump()
    raise ValueError(f"unknown multiplier family {family!r}")


def multiplier_to_json(m: Multiplier) -> dict:
    if isinstance(m, LimitedDecay):
        return {"family": "limited_decay", "a": m.a}
    if isinstance(m, SlowDecay):
        return {"family": "slow_decay", "beta": m.beta, "delta": m.delta}
    if isinstance(m, Oscillatory):
        return {"family": "oscillatory", "alpha": m.alpha, "beta": m.beta}
    if isinstance(m, BandBump):
        return {"family": "band_bump"}
    raise ValueError(f"family {type(m).__name__} has no wire format")
