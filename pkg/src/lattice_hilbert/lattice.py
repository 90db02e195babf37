"""Lattice fields and difference calculus on Z^s x N.

A LatticeField holds real values on a rectangular horizontal window times a
height range [k_min, k_max].  Conjugate fields live at half-integer horizontal
positions along one axis; they are stored on integer indices with
``staggered=True``, and all difference identities below are written in those
relabeled coordinates, index for index.

Fields are immutable; every operator allocates a fresh output and shrinks the
window by exactly the stencil reach.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParams, WindowMismatch, WindowTooSmall

__all__ = [
    "BoundarySequence",
    "LatticeField",
    "difference",
    "laplacian_residual",
    "cr_residuals",
    "cr_residuals_s",
]


@dataclass(frozen=True)
class BoundarySequence:
    """Finitely supported real boundary data on Z^s.

    `values` is an s-dimensional array whose [0, ..., 0] entry sits at lattice
    point `offset`.
    """

    offset: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != len(self.offset):
            raise InvalidParams("offset length must match the array dimension")
        if vals.size == 0:
            raise InvalidParams("boundary data must have nonempty support")
        if not np.all(np.isfinite(vals)):
            raise InvalidParams("boundary data must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "offset", tuple(int(o) for o in self.offset))

    @property
    def s(self) -> int:
        return self.values.ndim

    @property
    def support(self) -> tuple[tuple[int, int], ...]:
        """Per-axis (min, max) of the stored window."""
        return tuple((o, o + n - 1) for o, n in zip(self.offset, self.values.shape))

    @classmethod
    def delta(cls, s: int = 1) -> "BoundarySequence":
        return cls((0,) * s, np.ones((1,) * s))

    @classmethod
    def from_pairs(cls, pairs, s: int = 1) -> "BoundarySequence":
        """Build from (index..., value) tuples; duplicate indices are rejected."""
        pts = {}
        for *idx, val in pairs:
            key = tuple(int(i) for i in idx)
            if len(key) != s:
                raise InvalidParams(f"index {key} does not have {s} coordinates")
            if key in pts:
                raise InvalidParams(f"duplicate index {key}")
            pts[key] = float(val)
        if not pts:
            raise InvalidParams("no boundary points given")
        lo = tuple(min(p[ax] for p in pts) for ax in range(s))
        hi = tuple(max(p[ax] for p in pts) for ax in range(s))
        vals = np.zeros(tuple(h - l + 1 for l, h in zip(lo, hi)))
        for key, val in pts.items():
            vals[tuple(i - l for i, l in zip(key, lo))] = val
        return cls(lo, vals)

    def norm(self, p: float) -> float:
        if p == 1:
            return float(np.abs(self.values).sum())
        if p == 2:
            return float(np.sqrt((self.values**2).sum()))
        if p == np.inf:
            return float(np.abs(self.values).max())
        raise InvalidParams("p must be 1, 2 or inf")

    def value(self, x) -> float:
        idx = tuple(int(v) - o for v, o in zip(np.atleast_1d(x), self.offset))
        if any(i < 0 or i >= n for i, n in zip(idx, self.values.shape)):
            return 0.0
        return float(self.values[idx])


@dataclass(frozen=True)
class LatticeField:
    """Values on window x [k_min, k_max]; array shape is spatial + (heights,).

    `truncation_slack` records the certified bound on mass omitted by kernel
    truncation when the field was produced by an extension operator.
    """

    offset: tuple[int, ...]
    k_min: int
    values: np.ndarray
    staggered: bool = False
    truncation_slack: float = 0.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != len(self.offset) + 1:
            raise InvalidParams("values must have one height axis plus s spatial axes")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "offset", tuple(int(o) for o in self.offset))

    @property
    def s(self) -> int:
        return self.values.ndim - 1

    @property
    def k_max(self) -> int:
        return self.k_min + self.values.shape[-1] - 1

    @property
    def window(self) -> tuple[tuple[int, int], ...]:
        return tuple((o, o + n - 1) for o, n in zip(self.offset, self.values.shape[:-1]))

    def at(self, x, k: int) -> float:
        idx = tuple(int(v) - o for v, o in zip(np.atleast_1d(x), self.offset))
        if any(i < 0 or i >= n for i, n in zip(idx, self.values.shape[:-1])):
            raise InvalidParams(f"point {tuple(np.atleast_1d(x))} outside window {self.window}")
        if not self.k_min <= k <= self.k_max:
            raise InvalidParams(f"height {k} outside [{self.k_min}, {self.k_max}]")
        return float(self.values[idx + (k - self.k_min,)])

    def height_slice(self, k: int) -> np.ndarray:
        if not self.k_min <= k <= self.k_max:
            raise InvalidParams(f"height {k} outside [{self.k_min}, {self.k_max}]")
        return self.values[..., k - self.k_min]


def difference(fld: LatticeField, axis, direction: str) -> LatticeField:
    """Forward/backward difference along a horizontal axis (1-based int) or
    the vertical axis (axis="k").

    forward : F(. + e) - F(.)   (window loses its last entry along the axis)
    backward: F(.) - F(. - e)   (window loses its first entry)
    """
    if direction not in ("forward", "backward"):
        raise InvalidParams(f"direction must be forward or backward, got {direction!r}")
    vertical = axis in ("k", "vertical")
    if vertical:
        ax = fld.values.ndim - 1
    else:
        ax = int(axis) - 1
        if not 0 <= ax < fld.s:
            raise InvalidParams(f"axis {axis} outside 1..{fld.s}")
    if fld.values.shape[ax] < 2:
        raise WindowTooSmall(f"axis {axis} has extent {fld.values.shape[ax]} < 2")

    upper = np.take(fld.values, np.arange(1, fld.values.shape[ax]), axis=ax)
    lower = np.take(fld.values, np.arange(0, fld.values.shape[ax] - 1), axis=ax)
    vals = upper - lower

    offset = list(fld.offset)
    k_min = fld.k_min
    if vertical:
        if direction == "backward":
            k_min += 1
    elif direction == "backward":
        offset[ax] += 1
    return LatticeField(tuple(offset), k_min, vals, fld.staggered, fld.truncation_slack)


def _crop_to(fld: LatticeField, offset: tuple[int, ...], shape: tuple[int, ...],
             k_min: int, heights: int) -> np.ndarray:
    start = tuple(o - fo for o, fo in zip(offset, fld.offset)) + (k_min - fld.k_min,)
    sizes = shape + (heights,)
    if any(s0 < 0 or s0 + n > dim for s0, n, dim in zip(start, sizes, fld.values.shape)):
        raise WindowTooSmall("cannot crop to a window outside the field")
    sl = tuple(slice(s0, s0 + n) for s0, n in zip(start, sizes))
    return fld.values[sl]


def laplacian_residual(fld: LatticeField) -> LatticeField:
    """Residual of the (2s+3)-point Laplacian,

        sum_j (F(x+e_j,k) + F(x-e_j,k)) + F(x,k+1) + F(x,k-1) - 2(s+1) F(x,k),

    assembled as sum_j backward(forward(., j)) + backward(forward(., k)).
    Defined on the interior: window shrunk by one per horizontal axis, heights
    [k_min+1, k_max-1]; zero exactly when the field is discrete harmonic there.
    """
    if fld.values.shape[-1] < 3:
        raise WindowTooSmall("need at least three height rows")
    if any(n < 3 for n in fld.values.shape[:-1]):
        raise WindowTooSmall("need at least three points per horizontal axis")

    offset = tuple(o + 1 for o in fld.offset)
    shape = tuple(n - 2 for n in fld.values.shape[:-1])
    k_min = fld.k_min + 1
    heights = fld.values.shape[-1] - 2

    vert = difference(difference(fld, "k", "forward"), "k", "backward")
    total = _crop_to(vert, offset, shape, k_min, heights).copy()
    for j in range(1, fld.s + 1):
        horiz = difference(difference(fld, j, "forward"), j, "backward")
        total += _crop_to(horiz, offset, shape, k_min, heights)
    return LatticeField(offset, k_min, total, fld.staggered)


def _common_heights(*flds: LatticeField) -> tuple[int, int]:
    lo = max(f.k_min for f in flds)
    hi = min(f.k_max for f in flds)
    if hi < lo:
        raise WindowTooSmall("no common heights")
    return lo, hi


def _require_same_window(u: LatticeField, v: LatticeField) -> None:
    if u.offset != v.offset or u.values.shape[:-1] != v.values.shape[:-1]:
        raise WindowMismatch(f"windows differ: {u.window} vs {v.window}")


def cr_residuals(u: LatticeField, v: LatticeField) -> tuple[LatticeField, LatticeField]:
    """Residuals of the lattice Cauchy-Riemann system for heights k >= 1:

        R1 = forward_n u - backward_k v      (zero when du/dn = dv/dk)
        R2 = forward_k u + backward_n v

    `v` is the staggered conjugate field in relabeled coordinates.  Both
    residuals are returned on the common interior with k starting at
    max(1, k_min + 1).
    """
    _require_same_window(u, v)
    if u.k_min != v.k_min or u.k_max != v.k_max:
        raise WindowMismatch("height ranges differ")

    d_n_u = difference(u, 1, "forward")
    d_km_v = difference(v, "k", "backward")
    d_k_u = difference(u, "k", "forward")
    d_nm_v = difference(v, 1, "backward")

    k_lo = max(1, u.k_min + 1)
    k_hi_1 = u.k_max
    k_hi_2 = u.k_max - 1
    if k_hi_2 < k_lo:
        raise WindowTooSmall("need k_max >= k_min + 2 for both residual families")

    off1 = d_n_u.offset
    shape1 = d_n_u.values.shape[:-1]
    r1 = (_crop_to(d_n_u, off1, shape1, k_lo, k_hi_1 - k_lo + 1)
          - _crop_to(d_km_v, off1, shape1, k_lo, k_hi_1 - k_lo + 1))

    off2 = d_nm_v.offset
    shape2 = d_nm_v.values.shape[:-1]
    r2 = (_crop_to(d_k_u, off2, shape2, k_lo, k_hi_2 - k_lo + 1)
          + _crop_to(d_nm_v, off2, shape2, k_lo, k_hi_2 - k_lo + 1))

    return (LatticeField(off1, k_lo, r1), LatticeField(off2, k_lo, r2))


def cr_residuals_s(u: LatticeField, vs: list[LatticeField]):
    """Residuals of the s-dimensional Cauchy-Riemann system for k >= 1:

        R_div        = forward_k u + sum_j backward_{x_j} v_j
        R_grad[j]    = forward_{x_j} u - backward_k v_j
        R_curl[(j,l)]= forward_{x_j} v_l - forward_{x_l} v_j     (j < l)

    Returns (R_div, list of R_grad, dict of R_curl); the curl family is empty
    for s = 1, where the first two reduce to ``cr_residuals``.
    """
    s = u.s
    if len(vs) != s:
        raise InvalidParams(f"expected {s} conjugate components, got {len(vs)}")
    for v in vs:
        _require_same_window(u, v)
        if v.k_min != u.k_min or v.k_max != u.k_max:
            raise WindowMismatch("height ranges differ")

    k_lo = max(1, u.k_min + 1)
    k_hi_div = u.k_max - 1
    k_hi_grad = u.k_max
    if k_hi_div < k_lo:
        raise WindowTooSmall("need k_max >= k_min + 2")

    # common horizontal interior: drop one point per axis on both sides
    off = tuple(o + 1 for o in u.offset)
    shape = tuple(n - 2 for n in u.values.shape[:-1])
    if any(n < 1 for n in shape):
        raise WindowTooSmall("horizontal window too small for the interior")

    div = _crop_to(difference(u, "k", "forward"), off, shape, k_lo, k_hi_div - k_lo + 1).copy()
    for j in range(1, s + 1):
        div += _crop_to(difference(vs[j - 1], j, "backward"), off, shape,
                        k_lo, k_hi_div - k_lo + 1)
    r_div = LatticeField(off, k_lo, div)

    r_grads = []
    for j in range(1, s + 1):
        g = (_crop_to(difference(u, j, "forward"), off, shape, k_lo, k_hi_grad - k_lo + 1)
             - _crop_to(difference(vs[j - 1], "k", "backward"), off, shape,
                        k_lo, k_hi_grad - k_lo + 1))
        r_grads.append(LatticeField(off, k_lo, g))

    r_curls = {}
    for j in range(1, s + 1):
        for l in range(j + 1, s + 1):
            c = (_crop_to(difference(vs[l - 1], j, "forward"), off, shape,
                          k_lo, k_hi_grad - k_lo + 1)
                 - _crop_to(difference(vs[j - 1], l, "forward"), off, shape,
                            k_lo, k_hi_grad - k_lo + 1))
            r_curls[(j, l)] = LatticeField(off, k_lo, c)

    return r_div, r_grads, r_curls
