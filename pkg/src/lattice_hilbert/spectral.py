"""Spectral symbols of the lattice Dirichlet problem and its boundary transforms.

Separated solutions of the five-point Laplace equation on Z x N decay by a
factor rho(theta) per unit height, where rho is the root in (0, 1] of

    rho + 1/rho = 4 - 2 cos(theta).

In s horizontal dimensions the same recurrence holds with
2 alpha = 2 (s+1) - 2 sum_j cos(theta_j).  Writing q = sum_j sin^2(theta_j/2)
gives alpha = 1 + 2 q, and the stable closed forms used throughout:

    rho^(1/2) = sqrt(1 + q) - sqrt(q),       rho = (sqrt(1 + q) - sqrt(q))^2.

These avoid the subtractive cancellation of alpha - sqrt(alpha^2 - 1) as
alpha -> 1 and make rho_sqrt(theta)^2 == rho(theta) hold to the last ulp.

Every function is a pure function of the frequency point: a float (or any
numpy array of floats) in (-pi, pi] for the one-dimensional symbols, or an
array whose *last* axis holds the s components for the s-dimensional ones.
Axis indices j are 1-based.  sign(0) = 0 everywhere, so all multipliers
vanish at theta = 0; the boundary transforms do not see that single point.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "rho",
    "rho_sqrt",
    "amplitude_gap",
    "hilbert_multiplier",
    "riesz_titchmarsh_multiplier",
    "rho_s",
    "rho_sqrt_s",
    "direction_weight",
    "tj_multiplier",
    "riesz_multiplier_s",
]


def _q1(theta):
    """sin^2(theta/2), evaluated through |theta| so evenness is exact."""
    s = np.sin(np.abs(np.asarray(theta, dtype=float)) / 2.0)
    return s * s


def _qs(thetas):
    """sum_j sin^2(theta_j/2) over the last axis."""
    t = np.asarray(thetas, dtype=float)
    if t.ndim == 0:
        raise ValueError("s-dimensional symbols need the last axis to hold the components")
    s = np.sin(np.abs(t) / 2.0)
    return np.sum(s * s, axis=-1)


def _rho_sqrt_from_q(q):
    return np.sqrt(1.0 + q) - np.sqrt(q)


def rho(theta):
    """Vertical decay symbol: the root in (0, 1] of rho + 1/rho = 4 - 2 cos(theta).

    Even in theta (exactly, by construction), with rho(0) = 1 and
    rho(pi) = 3 - 2 sqrt(2).
    """
    r = _rho_sqrt_from_q(_q1(theta))
    return r * r


def rho_sqrt(theta):
    """sqrt(rho(theta)) via the closed form sqrt(1 + sin^2(theta/2)) - sin(theta/2).

    Defined on [0, pi] and extended evenly; rho_sqrt(theta)**2 equals
    rho(theta) to machine precision.
    """
    return _rho_sqrt_from_q(_q1(theta))


def amplitude_gap(theta):
    """rho_sqrt(theta) - 1: the amplitude by which the lattice Hilbert
    multiplier falls short of a pure phase.

    Vanishes at 0 with slope -1/2 and curvature 1/4; equals sqrt(2) - 2 at pi.
    Computed as q/(1 + sqrt(1 + q)) - sqrt(q) to avoid cancellation near 0.
    """
    q = _q1(theta)
    return q / (1.0 + np.sqrt(1.0 + q)) - np.sqrt(q)


def hilbert_multiplier(theta):
    """Multiplier of the lattice Hilbert transform:
    (-i sign(theta)) rho(theta)^(1/2) exp(i theta / 2).

    Modulus rho_sqrt(|theta|) <= 1 for theta != 0; zero at theta = 0 by the
    sign(0) = 0 convention (the one-sided limits there are -i and +i).
    """
    t = np.asarray(theta, dtype=float)
    return (-1j * np.sign(t)) * rho_sqrt(t) * np.exp(0.5j * t)


def riesz_titchmarsh_multiplier(theta):
    """Multiplier of the Riesz-Titchmarsh transform:
    (-i sign(theta)) exp(i theta / 2); unimodular away from theta = 0.
    """
    t = np.asarray(theta, dtype=float)
    return (-1j * np.sign(t)) * np.exp(0.5j * t)


def rho_s(thetas):
    """s-dimensional decay symbol; `thetas` holds the components on its last axis.

    Root in (0, 1] of rho + 1/rho = 2 alpha with
    alpha = (s+1) - sum_j cos(theta_j).  Reduces to ``rho`` for s = 1.
    """
    r = _rho_sqrt_from_q(_qs(thetas))
    return r * r


def rho_sqrt_s(thetas):
    """sqrt(rho_s(thetas)), in the same stable closed form as ``rho_sqrt``."""
    return _rho_sqrt_from_q(_qs(thetas))


def direction_weight(thetas, j):
    """Angular weight of axis j (1-based):

        omega_j = sign(theta_j) sin(theta_j/2) / sqrt(sum_l sin^2(theta_l/2)),

    with omega_j(0) = 0.  Since sign(theta_j) sin(theta_j/2) = |sin(theta_j/2)|
    on (-pi, pi], omega_j >= 0 everywhere, and sum_j omega_j^2 = 1 away from 0.
    For s = 1 it is identically 1 off the origin.
    """
    t = np.asarray(thetas, dtype=float)
    q = _qs(t)
    num = np.abs(np.sin(t[..., j - 1] / 2.0))
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(q > 0.0, num / np.sqrt(q), 0.0)
    return w


def tj_multiplier(thetas, j):
    """Multiplier of the boundary transform along axis j:

        (-i sign(theta_j)) omega_j(theta) rho(theta)^(1/2) exp(i theta_j / 2).

    Modulus omega_j rho^(1/2) <= 1; coincides with ``hilbert_multiplier``
    pointwise for s = 1 (theta != 0).
    """
    t = np.asarray(thetas, dtype=float)
    tj = t[..., j - 1]
    return (-1j * np.sign(tj)) * direction_weight(t, j) * rho_sqrt_s(t) * np.exp(0.5j * tj)


def riesz_multiplier_s(thetas, j):
    """Multiplier of the lattice Riesz transform along axis j:

        (-i sign(theta_j)) omega_j(theta) exp(i theta_j / 2),

    i.e. ``tj_multiplier`` without the rho^(1/2) factor.  Near the origin it
    behaves like -i theta_j / |theta|.  Reduces to the Riesz-Titchmarsh
    multiplier for s = 1.
    """
    t = np.asarray(thetas, dtype=float)
    tj = t[..., j - 1]
    return (-1j * np.sign(tj)) * direction_weight(t, j) * np.exp(0.5j * tj)
