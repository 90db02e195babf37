"""Deterministic quadrature for the oscillatory kernel integrals.

All one-dimensional kernel integrals have the shape

    (1/pi) * integral_0^pi g(theta) * trig(nu * theta) d(theta)

with g analytic on [0, pi] (the |theta| kink of the decay symbol lives at the
origin of (-pi, pi] and disappears on the half interval).  The engine is
composite Gauss-Legendre with the panel density tied to the trig frequency,
plus one global panel-doubling pass as the error estimate.  No adaptivity:
identical inputs give bit-identical results.

The s-dimensional integrals over [0, pi]^s are *not* smooth in Cartesian
coordinates: the symbol has a conic |theta| kink at the corner theta = 0.
``integrate_tensor`` therefore splits the box into s congruent regions by
largest coordinate and parameterizes each as theta = r * d(w), theta_m = r,
theta_l = r w_l with w in [0, 1]^(s-1).  Along every ray the integrand is
analytic in r (the kink factors as r times an analytic function), so a
tensor-product Gauss-Legendre rule in (r, w) converges geometrically.

``oracle_integrate`` is a deliberately lower-tech second opinion (composite
Simpson with Richardson extrapolation) used to cross-validate the engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooLarge, NonConvergence

__all__ = [
    "QuadratureSpec",
    "DEFAULT_SPEC",
    "panel_count",
    "panel_count_pow2",
    "panel_rule",
    "integrate_oscillatory",
    "oracle_integrate",
    "integrate_tensor",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel layout and target accuracy of the quadrature engine.

    nodes_per_panel: Gauss-Legendre order per panel (>= 4).
    min_panels: panel count floor (>= 1).
    panels_per_oscillation: panels per unit of trig frequency nu (>= 2), so
        the panel width never exceeds pi / (panels_per_oscillation * max(1, nu)).
    abs_tol: absolute error target, judged by a global panel-doubling pass.
    """

    nodes_per_panel: int = 12
    min_panels: int = 4
    panels_per_oscillation: float = 4.0
    abs_tol: float = 1e-12

    def __post_init__(self):
        if self.nodes_per_panel < 4:
            raise ValueError("nodes_per_panel must be >= 4")
        if self.min_panels < 1:
            raise ValueError("min_panels must be >= 1")
        if self.panels_per_oscillation < 2:
            raise ValueError("panels_per_oscillation must be >= 2")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")


DEFAULT_SPEC = QuadratureSpec()

_RULE_CACHE: dict[tuple[int, int, float, float], tuple[np.ndarray, np.ndarray]] = {}


def panel_count(nu: float, spec: QuadratureSpec = DEFAULT_SPEC) -> int:
    """Smallest panel count with width <= pi / (panels_per_oscillation * max(1, nu))."""
    return max(spec.min_panels, int(math.ceil(spec.panels_per_oscillation * max(1.0, float(nu)))))


def panel_count_pow2(nu: float, spec: QuadratureSpec = DEFAULT_SPEC) -> int:
    """``panel_count`` rounded up to min_panels * 2^m, so that table builders
    hit a short ladder of shared node sets."""
    need = panel_count(nu, spec)
    p = spec.min_panels
    while p < need:
        p *= 2
    return p


def panel_rule(panels: int, order: int, a: float = 0.0, b: float = math.pi):
    """Composite Gauss-Legendre nodes and weights on [a, b] (cached, read-only)."""
    key = (panels, order, a, b)
    rule = _RULE_CACHE.get(key)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(order)
        edges = np.linspace(a, b, panels + 1)
        half = 0.5 * (edges[1] - edges[0])
        mids = 0.5 * (edges[:-1] + edges[1:])
        nodes = (mids[:, None] + half * x[None, :]).ravel()
        weights = np.tile(w * half, panels)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        rule = (nodes, weights)
        _RULE_CACHE[key] = rule
    return rule


def _trig(kind: str, nu: float, nodes: np.ndarray) -> np.ndarray:
    if kind == "cos":
        return np.cos(nu * nodes)
    if kind == "sin":
        return np.sin(nu * nodes)
    raise ValueError(f"unknown trig kind {kind!r}")


def _panel_value(g, kind: str, nu: float, panels: int, spec: QuadratureSpec) -> float:
    nodes, weights = panel_rule(panels, spec.nodes_per_panel)
    vals = np.asarray(g(nodes), dtype=float) * _trig(kind, nu, nodes)
    return float(np.dot(weights, vals)) / math.pi


def integrate_oscillatory(g, kind: str, nu: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """(1/pi) * integral_0^pi g(theta) trig(nu theta) d(theta).

    `g` must accept a numpy array of nodes in (0, pi).  The result of one
    panel doubling must agree with its predecessor within spec.abs_tol;
    two failed doublings raise NonConvergence.
    """
    if nu < 0:
        raise ValueError("nu must be >= 0")
    panels = panel_count(nu, spec)
    prev = _panel_value(g, kind, nu, panels, spec)
    for _ in range(2):
        panels *= 2
        cur = _panel_value(g, kind, nu, panels, spec)
        if abs(cur - prev) <= spec.abs_tol:
            return cur
        prev = cur
    raise NonConvergence(
        f"integral (kind={kind}, nu={nu}) did not stabilize within {spec.abs_tol:g}"
    )


def _simpson(g, kind: str, nu: float, intervals: int) -> float:
    theta = np.linspace(0.0, math.pi, intervals + 1)
    vals = np.asarray(g(theta), dtype=float) * _trig(kind, nu, theta)
    coeff = np.ones(intervals + 1)
    coeff[1:-1:2] = 4.0
    coeff[2:-1:2] = 2.0
    h = math.pi / intervals
    return float(np.dot(coeff, vals)) * h / 3.0 / math.pi


def oracle_integrate(g, kind: str, nu: float, levels: int = 6) -> tuple[float, float]:
    """Independent check on ``integrate_oscillatory``: composite Simpson over
    `levels` dyadic refinements with Richardson extrapolation.

    Returns (value, err_est); err_est is the distance between the last two
    extrapolation diagonals.  Used by tests, never by the engine.
    """
    if levels < 2:
        raise ValueError("levels must be >= 2")
    n0 = max(64, 4 * (int(math.ceil(nu)) + 1))
    if n0 % 2:
        n0 += 1
    rows: list[list[float]] = []
    for j in range(levels):
        row = [_simpson(g, kind, nu, n0 * 2**j)]
        for m in range(1, j + 1):
            factor = 4.0 ** (m + 1)
            row.append(row[m - 1] + (row[m - 1] - rows[j - 1][m - 1]) / (factor - 1.0))
        rows.append(row)
    value = rows[-1][-1]
    err_est = abs(rows[-1][-1] - rows[-2][-1]) + 1e-16
    return value, err_est


def _axis_weight(weights, axis: int):
    w = weights[axis]
    if w is None:
        return ("cos", 0.0)
    kind, nu = w
    if kind not in ("cos", "sin"):
        raise ValueError(f"unknown trig kind {kind!r}")
    if nu < 0:
        raise ValueError("per-axis frequencies must be >= 0 (reflect the index first)")
    return (kind, float(nu))


def _tensor_region_value(g, weights, s: int, m: int, mult: int, spec: QuadratureSpec) -> float:
    """One largest-coordinate region: theta_m = r, theta_l = r * w_l."""
    axis_w = [_axis_weight(weights, ax) for ax in range(s)]
    nu_total = sum(w[1] for w in axis_w)
    pr = panel_count_pow2(nu_total, spec) * mult
    r_nodes, r_wts = panel_rule(pr, spec.nodes_per_panel)

    others = [ax for ax in range(s) if ax != m]
    w_rules = []
    for ax in others:
        pw = panel_count_pow2(axis_w[ax][1], spec) * mult
        w_rules.append(panel_rule(pw, spec.nodes_per_panel, 0.0, 1.0))

    # broadcast grids: r varies along axis 0, w_l along axis 1 + position of l
    shape_len = 1 + len(others)
    comps: list[np.ndarray] = [None] * s  # type: ignore[list-item]
    r_b = r_nodes.reshape((-1,) + (1,) * (shape_len - 1))
    comps[m] = r_b
    wt = r_wts.reshape((-1,) + (1,) * (shape_len - 1)).copy()
    for pos, ax in enumerate(others):
        nodes, wts = w_rules[pos]
        sh = [1] * shape_len
        sh[1 + pos] = -1
        comps[ax] = r_b * nodes.reshape(sh)
        wt = wt * wts.reshape(sh)

    vals = np.asarray(g(*np.broadcast_arrays(*comps)), dtype=float)
    for ax in range(s):
        kind, nu = axis_w[ax]
        if not (kind == "cos" and nu == 0.0):
            vals = vals * _trig(kind, nu, comps[ax])
    if s > 1:
        vals = vals * r_b ** (s - 1)
    return float(np.sum(vals * wt))


def _tensor_value(g, weights, s: int, mult: int, spec: QuadratureSpec) -> float:
    total = 0.0
    for m in range(s):
        total += _tensor_region_value(g, weights, s, m, mult, spec)
    return total / math.pi**s


def integrate_tensor(g, weights, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """(1/pi^s) * integral over [0, pi]^s of g(theta) * prod_j trig_j(nu_j theta_j).

    This is the even-reflected form of the normalized torus integral
    (1/(2 pi)^s) * integral over (-pi, pi]^s.  `weights` is a sequence of s
    per-axis factors, each ("cos", nu), ("sin", nu) or None (= no factor);
    `g` receives the s broadcast component arrays.  s is len(weights), at
    most 3.  Refinement doubles the panel count in every direction; as in
    the 1-d engine, two failed doublings raise NonConvergence.
    """
    s = len(weights)
    if s < 1:
        raise ValueError("weights must describe at least one axis")
    if s > 3:
        raise DimensionTooLarge(f"s = {s} not supported (max 3)")
    prev = _tensor_value(g, weights, s, 1, spec)
    mult = 2
    for _ in range(2):
        cur = _tensor_value(g, weights, s, mult, spec)
        if abs(cur - prev) <= spec.abs_tol:
            return cur
        prev = cur
        mult *= 2
    raise NonConvergence(f"tensor integral (s={s}) did not stabilize within {spec.abs_tol:g}")
