"""Extension and boundary-transform operators.

Two independent computational paths are first class:

* space domain -- truncated convolution against a KernelTable.  For finitely
  supported data the radius is normally chosen to cover every contributing
  shift, making the convolution exact up to quadrature; otherwise the omitted
  mass is certified by the kernel's sup-tail bound times ||a||_1.

* frequency domain -- an exact circular model: sample the multiplier at the
  2 pi m / N grid mapped into (-pi, pi], transform with an internal radix-2
  FFT, multiply, transform back.  This equals circular convolution with the
  periodized kernel; ``periodization_bound`` certifies its distance from the
  infinite-lattice convolution.

The two paths cross-validate each other throughout the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooLarge, InvalidParams, RadiusInsufficient
from .kernels import (
    DEFAULT_SPEC,
    KernelTable,
    QuadratureSpec,
    build_table,
    conjugate_decay_constant,
    difference_decay_constant,
    poisson_decay_constant,
    truncation_sup_bound,
)
from .lattice import BoundarySequence, LatticeField
from .spectral import (
    direction_weight,
    rho_s,
    rho_sqrt_s,
)

__all__ = [
    "PeriodicSequence",
    "TransformResult",
    "extend_poisson",
    "extend_conjugate",
    "extend_poisson_s",
    "extend_conjugate_s",
    "hilbert_transform",
    "riesz_titchmarsh_transform",
    "difference_transform",
    "tj_transform",
    "multiplier_apply_periodic",
    "periodic_from_boundary",
    "window_from_periodic",
    "periodization_bound",
    "MULTIPLIERS",
]

RADIUS_SCHEDULE_START = 64
DEFAULT_TRUNCATION_TOL = 1e-8


# ---------------------------------------------------------------------------
# periodic path

@dataclass(frozen=True)
class PeriodicSequence:
    """Real data on the cyclic group (Z/NZ)^s; values has shape (N,)*s."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim < 1:
            raise InvalidParams("periodic data must have at least one axis")
        n = vals.shape[0]
        if n < 2 or any(dim != n for dim in vals.shape):
            raise InvalidParams("all axes must share one period N >= 2")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def s(self) -> int:
        return self.values.ndim

    def norm2(self) -> float:
        return float(np.sqrt((self.values**2).sum()))


_BITREV_CACHE: dict[int, np.ndarray] = {}


def _bit_reversal(n: int) -> np.ndarray:
    rev = _BITREV_CACHE.get(n)
    if rev is None:
        bits = n.bit_length() - 1
        rev = np.zeros(n, dtype=np.intp)
        for i in range(1, n):
            rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (bits - 1))
        rev.setflags(write=False)
        _BITREV_CACHE[n] = rev
    return rev


def _fft_last_axis(x: np.ndarray, inverse: bool) -> np.ndarray:
    """Iterative radix-2 transform along the last axis (length a power of two)."""
    n = x.shape[-1]
    if n < 2 or n & (n - 1):
        raise InvalidParams(f"period {n} is not a power of two")
    y = np.ascontiguousarray(x, dtype=np.complex128)[..., _bit_reversal(n)]
    sign = 1.0 if inverse else -1.0
    m = 2
    while m <= n:
        half = m // 2
        tw = np.exp(sign * 2j * math.pi * np.arange(half) / m)
        y = y.reshape(y.shape[:-1] + (n // m, m))
        a = y[..., :half]
        b = y[..., half:] * tw
        y = np.concatenate([a + b, a - b], axis=-1)
        y = y.reshape(y.shape[:-2] + (n,))
        m *= 2
    return y


def _fft(x: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Radix-2 DFT over every axis: forward sums a_n e^{-i n theta_m}."""
    y = np.asarray(x, dtype=np.complex128)
    for ax in range(y.ndim):
        y = np.moveaxis(_fft_last_axis(np.moveaxis(y, ax, -1), inverse), -1, ax)
    if inverse:
        y = y / float(np.prod(x.shape))
    return y


def dft_frequencies(n: int) -> np.ndarray:
    """theta_m = 2 pi m / n mapped into (-pi, pi]; bin n/2 lands on +pi."""
    m = np.arange(n)
    theta = 2.0 * math.pi * m / n
    return np.where(m <= n // 2, theta, theta - 2.0 * math.pi)


def _gap_s(theta_stack: np.ndarray) -> np.ndarray:
    return rho_sqrt_s(theta_stack) - 1.0


def _mult_poisson(th, k, j):
    return rho_s(th) ** k + 0.0j


def _mult_conjugate(th, k, j):
    tj = th[..., j - 1]
    base = direction_weight(th, j) * rho_sqrt_s(th) * (rho_s(th) ** k if k else 1.0)
    return (-1j * np.sign(tj)) * base * np.exp(0.5j * tj)


def _mult_hd(th, k, j):
    return _mult_conjugate(th, 0, j)


def _mult_rj(th, k, j):
    tj = th[..., j - 1]
    return (-1j * np.sign(tj)) * direction_weight(th, j) * np.exp(0.5j * tj)


def _mult_diff(th, k, j):
    tj = th[..., j - 1]
    return (-1j * np.sign(tj)) * direction_weight(th, j) * _gap_s(th) * np.exp(0.5j * tj)


MULTIPLIERS = {
    "poisson": _mult_poisson,
    "conjugate": _mult_conjugate,
    "hd": _mult_hd,
    "tj": _mult_hd,
    "hplus": _mult_rj,
    "rj": _mult_rj,
    "diff": _mult_diff,
}


def multiplier_apply_periodic(seq: PeriodicSequence, multiplier: str,
                              k: int = 0, j: int = 1) -> PeriodicSequence:
    """Apply a named Fourier multiplier exactly on the cyclic group.

    The output is real for every multiplier here (they all satisfy
    m(-theta) = conj(m(theta)) and are real at the theta = pi bins); the
    imaginary residue is discarded after a sanity bound.
    """
    if multiplier not in MULTIPLIERS:
        raise InvalidParams(f"unknown multiplier {multiplier!r}")
    s = seq.s
    if not 1 <= j <= s:
        raise InvalidParams(f"axis j = {j} outside 1..{s}")
    if s > 3:
        raise DimensionTooLarge(f"s = {s} not supported (max 3)")
    theta_axes = np.meshgrid(*([dft_frequencies(seq.n)] * s), indexing="ij")
    th = np.stack(theta_axes, axis=-1)
    m_vals = MULTIPLIERS[multiplier](th, k, j)
    out = _fft(_fft(seq.values) * m_vals, inverse=True)
    scale = float(np.max(np.abs(out))) or 1.0
    if float(np.max(np.abs(out.imag))) > 1e-9 * scale:
        raise InvalidParams(f"multiplier {multiplier!r} produced a non-real output")
    return PeriodicSequence(out.real)


def periodic_from_boundary(a: BoundarySequence, n: int) -> PeriodicSequence:
    """Embed finitely supported data into period n (indices reduced mod n)."""
    vals = np.zeros((n,) * a.s)
    for idx in np.ndindex(a.values.shape):
        point = tuple((o + i) % n for o, i in zip(a.offset, idx))
        vals[point] += a.values[idx]
    return PeriodicSequence(vals)


def window_from_periodic(seq: PeriodicSequence, offset: tuple[int, ...],
                         shape: tuple[int, ...]) -> np.ndarray:
    """Read a lattice window out of periodic data (indices mod n)."""
    out = np.empty(shape)
    for idx in np.ndindex(shape):
        point = tuple((o + i) % seq.n for o, i in zip(offset, idx))
        out[idx] = seq.values[point]
    return out


def periodization_bound(kind: str, n_period: int, max_shift: int, a_l1: float,
                        k: int = 0, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Certified sup-norm distance between the full-lattice convolution and the
    period-N multiplier path, valid while every used shift |x - m| stays
    <= max_shift <= N/2 - 1.

    Both families of bounds come from the kernels' decay majorants: the
    1/(pi(n+1/2)) parts telescope in (l, -l) pairs to 4 X / (pi N^2) with
    X = max_shift + 1/2, and the C/(n+1/2)^2 majorants sum to C pi^2 / N^2.
    """
    N = n_period
    X = max_shift + 0.5
    if not X <= N / 2:
        raise InvalidParams("periodization bound requires max_shift + 1/2 <= N/2")
    pair = 4.0 * X / (math.pi * N * N)
    if kind in ("hplus", "riesz"):
        return pair * a_l1
    if kind in ("hd", "hilbert"):
        return (pair + difference_decay_constant(spec) * math.pi**2 / N**2) * a_l1
    if kind in ("conjugate", "tj"):
        return (pair + conjugate_decay_constant(k, spec) * math.pi**2 / N**2) * a_l1
    if kind in ("diff", "difference"):
        return difference_decay_constant(spec) * math.pi**2 / N**2 * a_l1
    if kind in ("poisson", "poisson_s"):
        return poisson_decay_constant(k, spec) * math.pi**2 / N**2 * a_l1
    raise InvalidParams(f"no periodization bound for kind {kind!r}")


# ---------------------------------------------------------------------------
# space-domain path

def _convolve_windowed(a: BoundarySequence, table: KernelTable,
                       lo: tuple[int, ...], hi: tuple[int, ...]) -> np.ndarray:
    """out[x] = sum_m K(x - m) a_m on the window [lo, hi]; kernel entries
    beyond the table radius contribute zero (that is the truncation)."""
    shape = tuple(h - l + 1 for l, h in zip(lo, hi))
    out = np.zeros(shape)
    r = table.radius
    for idx in np.ndindex(a.values.shape):
        am = a.values[idx]
        if am == 0.0:
            continue
        out_sl = []
        tbl_sl = []
        empty = False
        for ax in range(a.s):
            m = a.offset[ax] + idx[ax]
            shift_lo = max(lo[ax] - m, -r)
            shift_hi = min(hi[ax] - m, r)
            if shift_lo > shift_hi:
                empty = True
                break
            out_sl.append(slice(shift_lo + m - lo[ax], shift_hi + m - lo[ax] + 1))
            tbl_sl.append(slice(shift_lo + r, shift_hi + r + 1))
        if not empty:
            out[tuple(out_sl)] += am * table.values[tuple(tbl_sl)]
    return out


def _span_radius(a: BoundarySequence, lo: tuple[int, ...], hi: tuple[int, ...]) -> int:
    """Largest |x - m| over window points x and support points m."""
    span = 0
    for ax in range(a.s):
        s_lo, s_hi = a.support[ax]
        span = max(span, hi[ax] - s_lo, s_hi - lo[ax])
    return span


def _expanded_window(a: BoundarySequence, margin: int):
    lo = tuple(l - margin for l, _ in a.support)
    hi = tuple(h + margin for _, h in a.support)
    return lo, hi


def extend_poisson(a: BoundarySequence, k_max: int, margin: int = 0,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> LatticeField:
    """Bounded harmonic extension U with U(., 0) = a (exactly: the height-0
    kernel is the exact delta).

    The kernel radius covers every contributing shift, so nothing is
    truncated; truncation_slack is 0 and the only error is quadrature.
    """
    if k_max < 1:
        raise InvalidParams("k_max must be >= 1")
    lo, hi = _expanded_window(a, margin)
    radius = _span_radius(a, lo, hi)
    kind = "poisson" if a.s == 1 else "poisson_s"
    shape = tuple(h - l + 1 for l, h in zip(lo, hi))
    vals = np.empty(shape + (k_max + 1,))
    for k in range(k_max + 1):
        table = build_table(kind, s=a.s, k=k, radius=radius, spec=spec)
        vals[..., k] = _convolve_windowed(a, table, lo, hi)
    return LatticeField(lo, 0, vals, staggered=False, truncation_slack=0.0)


def extend_conjugate(a: BoundarySequence, k_max: int, margin: int = 0,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> LatticeField:
    """Conjugate harmonic extension V (staggered half a step along the axis);
    its height-0 row is the lattice Hilbert transform of a."""
    if a.s != 1:
        raise InvalidParams("extend_conjugate is one-dimensional; use extend_conjugate_s")
    if k_max < 1:
        raise InvalidParams("k_max must be >= 1")
    lo, hi = _expanded_window(a, margin)
    radius = _span_radius(a, lo, hi)
    shape = tuple(h - l + 1 for l, h in zip(lo, hi))
    vals = np.empty(shape + (k_max + 1,))
    for k in range(k_max + 1):
        table = build_table("conjugate", k=k, radius=radius, spec=spec)
        vals[..., k] = _convolve_windowed(a, table, lo, hi)
    return LatticeField(lo, 0, vals, staggered=True, truncation_slack=0.0)


def extend_poisson_s(a: BoundarySequence, k_max: int, margin: int = 0,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> LatticeField:
    """s-dimensional harmonic extension; same operator as ``extend_poisson``,
    which already dispatches on a.s."""
    return extend_poisson(a, k_max, margin, spec)


def extend_conjugate_s(a: BoundarySequence, k_max: int, margin: int = 0,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> list[LatticeField]:
    """The s conjugate components V_j; each is staggered along its own axis and
    its height-0 row realizes the boundary transform T_j a."""
    if k_max < 1:
        raise InvalidParams("k_max must be >= 1")
    s = a.s
    lo, hi = _expanded_window(a, margin)
    radius = _span_radius(a, lo, hi)
    shape = tuple(h - l + 1 for l, h in zip(lo, hi))
    fields = []
    for j in range(1, s + 1):
        vals = np.empty(shape + (k_max + 1,))
        for k in range(k_max + 1):
            kind = "conjugate" if s == 1 else "tj"
            table = build_table(kind, s=s, k=k, j=j, radius=radius, spec=spec)
            vals[..., k] = _convolve_windowed(a, table, lo, hi)
        fields.append(LatticeField(lo, 0, vals, staggered=True, truncation_slack=0.0))
    return fields


@dataclass(frozen=True)
class TransformResult:
    """Windowed output of a boundary transform with its truncation record."""

    output: BoundarySequence
    radius: int
    tail_bound: float
    omitted_bound: float


def _pick_radius(kind: str, k: int, span: int, a_l1: float, tol: float,
                 max_radius: int, spec: QuadratureSpec) -> int:
    r = RADIUS_SCHEDULE_START
    while r <= max_radius:
        if r >= span or truncation_sup_bound(kind, k, r, spec) * a_l1 <= tol:
            return r
        r *= 2
    raise RadiusInsufficient(
        f"no radius <= {max_radius} reaches tolerance {tol:g} for kind {kind!r}"
    )


def _transform_1d(kind: str, a: BoundarySequence, spec: QuadratureSpec, margin: int,
                  tol: float, radius: int | None, max_radius: int, k: int = 0) -> TransformResult:
    if a.s != 1:
        raise InvalidParams(f"{kind} transform is one-dimensional")
    lo, hi = _expanded_window(a, margin)
    span = _span_radius(a, lo, hi)
    if radius is None:
        radius = _pick_radius(kind, k, span, a.norm(1), tol, max_radius, spec)
    table = build_table(kind, k=k, radius=radius, spec=spec)
    vals = _convolve_windowed(a, table, lo, hi)
    omitted = 0.0 if radius >= span else truncation_sup_bound(kind, k, radius, spec) * a.norm(1)
    return TransformResult(BoundarySequence(lo, vals), radius, table.tail_bound, omitted)


def hilbert_transform(a: BoundarySequence, spec: QuadratureSpec = DEFAULT_SPEC,
                      margin: int = 32, tol: float = DEFAULT_TRUNCATION_TOL,
                      radius: int | None = None, max_radius: int = 65536) -> TransformResult:
    """Lattice Hilbert transform by truncated kernel convolution.

    The radius comes from the geometric schedule 64, 128, ...: the first value
    that either covers every contributing shift (making the sum exact) or
    whose certified sup-tail times ||a||_1 meets `tol`.  RadiusInsufficient is
    raised when the schedule is exhausted below both targets.
    """
    return _transform_1d("hilbert", a, spec, margin, tol, radius, max_radius)


def riesz_titchmarsh_transform(a: BoundarySequence, margin: int = 32,
                               tol: float = DEFAULT_TRUNCATION_TOL,
                               radius: int | None = None,
                               max_radius: int = 65536) -> TransformResult:
    """Riesz-Titchmarsh transform (exact closed-form kernel)."""
    return _transform_1d("riesz", a, DEFAULT_SPEC, margin, tol, radius, max_radius)


def difference_transform(a: BoundarySequence, spec: QuadratureSpec = DEFAULT_SPEC,
                         margin: int = 32, tol: float = DEFAULT_TRUNCATION_TOL,
                         radius: int | None = None, max_radius: int = 65536) -> TransformResult:
    """Convolution with the l1 difference kernel (hilbert minus riesz)."""
    return _transform_1d("difference", a, spec, margin, tol, radius, max_radius)


def tj_transform(s: int, j: int, a: BoundarySequence, spec: QuadratureSpec = DEFAULT_SPEC,
                 margin: int = 8, tol: float = DEFAULT_TRUNCATION_TOL,
                 radius: int | None = None, max_radius: int = 65536) -> TransformResult:
    """Boundary transform along axis j; reduces to ``hilbert_transform`` at s=1.

    For s >= 2 no tail majorant is available, so the table always covers every
    contributing shift exactly (the omitted mass is zero by construction).
    """
    if a.s != s:
        raise InvalidParams(f"boundary data has s = {a.s}, expected {s}")
    if s > 3:
        raise DimensionTooLarge(f"s = {s} not supported (max 3)")
    if not 1 <= j <= s:
        raise InvalidParams(f"axis j = {j} outside 1..{s}")
    if s == 1:
        return _transform_1d("conjugate", a, spec, margin, tol, radius, max_radius)
    lo, hi = _expanded_window(a, margin)
    span = _span_radius(a, lo, hi)
    radius = span if radius is None else radius
    if radius < span:
        raise RadiusInsufficient(
            f"s = {s} transforms need radius >= {span} (no certified tail exists)"
        )
    table = build_table("tj", s=s, k=0, j=j, radius=radius, spec=spec)
    vals = _convolve_windowed(a, table, lo, hi)
    return TransformResult(BoundarySequence(lo, vals), radius, table.tail_bound, 0.0)
